#include "soe/volume.hpp"

#include <cmath>

#include "soe/filterbank.hpp"

namespace soe {

bool Volume::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace {

Volume decimate2(const Volume& v) {
  Volume out((v.nx + 1) / 2, (v.ny + 1) / 2, (v.nt + 1) / 2);
  for (int t = 0; t < out.nt; ++t)
    for (int y = 0; y < out.ny; ++y)
      for (int x = 0; x < out.nx; ++x)
        out.at(x, y, t) = v.at(2 * x, 2 * y, 2 * t);
  return out;
}

}  // namespace

std::vector<Volume> build_pyramid(const Volume& v, int levels, double blur_std,
                                  int threads) {
  if (levels < 1) throw std::invalid_argument("build_pyramid: levels must be >= 1");
  std::vector<Volume> out;
  out.reserve(levels);
  out.push_back(v);
  std::vector<double> taps = gaussian_taps(blur_std);
  for (int l = 1; l < levels; ++l) {
    const Volume& prev = out.back();
    if (prev.nx < 2 || prev.ny < 2 || prev.nt < 2)
      throw std::invalid_argument("build_pyramid: level would collapse below 1 sample");
    Volume blurred = prev;
    for (int axis = 0; axis < 3; ++axis)
      blurred = conv_axis(blurred, taps, axis, PaddingMode::kReflect101, threads);
    out.push_back(decimate2(blurred));
  }
  return out;
}

int num_scales(std::array<int, 3> dims, int kernel_len, int tau) {
  if (kernel_len < 3 || kernel_len % 2 == 0)
    throw std::invalid_argument("num_scales: kernel_len must be odd and >= 3");
  if (tau < 1) throw std::invalid_argument("num_scales: tau must be >= 1");
  double md = static_cast<double>(std::min(dims[0], std::min(dims[1], dims[2])));
  double need = static_cast<double>(kernel_len) * tau;
  int n = 1;
  while (md / std::pow(2.0, n) >= need) ++n;
  return n;
}

}  // namespace soe
