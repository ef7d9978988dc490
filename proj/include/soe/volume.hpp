#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace soe {

/// Dense (x, y, t) scalar grid. Storage is row-major with x fastest,
/// then y, then t: index = x + nx*(y + ny*t).
struct Volume {
  int nx = 0;
  int ny = 0;
  int nt = 0;
  std::vector<double> data;

  Volume() = default;
  Volume(int nx_, int ny_, int nt_, double fill = 0.0)
      : nx(nx_), ny(ny_), nt(nt_) {
    if (nx <= 0 || ny <= 0 || nt <= 0)
      throw std::invalid_argument("Volume: dimensions must be positive");
    data.assign(static_cast<std::size_t>(nx) * ny * nt, fill);
  }

  std::size_t size() const { return data.size(); }
  int min_dim() const { return std::min(nx, std::min(ny, nt)); }

  std::size_t index(int x, int y, int t) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(nx) *
               (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * t);
  }
  double& at(int x, int y, int t) { return data[index(x, y, t)]; }
  double at(int x, int y, int t) const { return data[index(x, y, t)]; }

  bool same_dims(const Volume& o) const {
    return nx == o.nx && ny == o.ny && nt == o.nt;
  }
  bool all_finite() const;
};

/// Isotropic 3D Gaussian blur (L1-normalized taps, reflect-101 borders)
/// followed by factor-2 decimation on every axis (indices 0, 2, 4, ...).
/// Level 0 of the result is the input itself.
std::vector<Volume> build_pyramid(const Volume& v, int levels,
                                  double blur_std = 1.0, int threads = 1);

/// Number of pyramid scales usable for a given volume: the largest n >= 1
/// such that min(dims) / 2^(n-1) >= kernel_len * tau, clamped to 1.
int num_scales(std::array<int, 3> dims, int kernel_len, int tau);

}  // namespace soe
