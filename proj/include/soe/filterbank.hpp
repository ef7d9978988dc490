#pragma once

#include <array>
#include <string>
#include <vector>

#include "soe/volume.hpp"

namespace soe {

enum class PaddingMode {
  kReflect101,  // mirror without repeating the edge sample (default)
  kReflect,     // mirror repeating the edge sample
  kZero,
  kReplicate,
};

PaddingMode padding_from_string(const std::string& s);
std::string to_string(PaddingMode m);

/// Separable 3D kernel: one 1D tap array per axis, each tagged with the
/// derivative order it samples.
struct SeparableKernel3D {
  std::vector<double> kx, ky, kt;
  int order_x = 0, order_y = 0, order_t = 0;
};

/// The 10 Gaussian 3rd-derivative basis kernels, one per monomial exponent
/// triple (p, q, r) with p + q + r = 3.
struct SteerableBasis {
  std::array<SeparableKernel3D, 10> basis;
  std::array<std::array<int, 3>, 10> exponents;
  double sigma = 1.0;
  int taps = 13;
};

/// 10 unit direction vectors (x, y, t), icosahedron face normals with
/// antipodes identified. Fixed deterministic order.
struct DirectionSet {
  std::array<std::array<double, 3>, 10> dirs;
};

DirectionSet icosa_directions();

SteerableBasis g3_basis(double sigma, int taps);

/// Multinomial steering weights for the 3rd directional derivative along a
/// unit vector v: weight for basis (p,q,r) is 3!/(p!q!r!) * a^p b^q c^t.
std::array<double, 10> steering_coeffs(const std::array<double, 3>& v);

/// Three sequential 1D convolutions (x, then y, then t). Output dims equal
/// input dims.
Volume conv_separable(const Volume& v, const SeparableKernel3D& k,
                      PaddingMode padding = PaddingMode::kReflect101,
                      int threads = 1);

/// Responses of all 10 basis kernels; reusable across steering directions.
std::array<Volume, 10> basis_responses(const Volume& v, const SteerableBasis& b,
                                       PaddingMode padding = PaddingMode::kReflect101,
                                       int threads = 1);

/// Pointwise linear combination of precomputed basis responses.
Volume steer(const std::array<Volume, 10>& responses,
             const std::array<double, 3>& dir, int threads = 1);

/// C(x; dir) = steered 3rd directional-derivative response of v.
Volume conv_oriented(const Volume& v, const std::array<double, 3>& dir,
                     const SteerableBasis& b,
                     PaddingMode padding = PaddingMode::kReflect101,
                     int threads = 1);

/// Single 1D pass along one axis (0 = x, 1 = y, 2 = t); used by the
/// pyramid and pooling blurs as well.
Volume conv_axis(const Volume& v, const std::vector<double>& taps, int axis,
                 PaddingMode padding, int threads = 1);

/// L1-normalized sampled Gaussian, length 2*ceil(3*std)+1 unless an odd
/// length is given explicitly.
std::vector<double> gaussian_taps(double std_dev, int length = 0);

/// Plain-text dump of the tap arrays, one line per array.
std::string dump_kernels(const SteerableBasis& b);

}  // namespace soe
