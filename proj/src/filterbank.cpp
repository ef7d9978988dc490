#include "soe/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "soe/parallel.hpp"

namespace soe {
namespace {

constexpr double kPi = std::numbers::pi;

// Index fold for out-of-range samples; returns -1 when the sample is zero
// (kZero mode only).
inline int fold_index(int i, int n, PaddingMode mode) {
  if (i >= 0 && i < n) return i;
  switch (mode) {
    case PaddingMode::kZero:
      return -1;
    case PaddingMode::kReplicate:
      return i < 0 ? 0 : n - 1;
    case PaddingMode::kReflect: {
      if (n == 1) return 0;
      int period = 2 * n;
      int m = ((i % period) + period) % period;
      return m < n ? m : period - 1 - m;
    }
    case PaddingMode::kReflect101: {
      if (n == 1) return 0;
      int period = 2 * n - 2;
      int m = ((i % period) + period) % period;
      return m < n ? m : period - m;
    }
  }
  return -1;
}

// 1D Gaussian and its derivatives sampled at u.
double gauss_deriv(double u, double sigma, int order) {
  double s2 = sigma * sigma;
  double g = std::exp(-u * u / (2.0 * s2)) / (sigma * std::sqrt(2.0 * kPi));
  switch (order) {
    case 0:
      return g;
    case 1:
      return -(u / s2) * g;
    case 2:
      return (u * u / (s2 * s2) - 1.0 / s2) * g;
    case 3:
      return (3.0 * u / (s2 * s2) - u * u * u / (s2 * s2 * s2)) * g;
  }
  throw std::invalid_argument("gauss_deriv: order out of range");
}

std::vector<double> deriv_taps(double sigma, int taps, int order) {
  int radius = (taps - 1) / 2;
  std::vector<double> k(taps);
  for (int u = -radius; u <= radius; ++u)
    k[u + radius] = gauss_deriv(static_cast<double>(u), sigma, order);
  if (order == 0) {
    double sum = 0.0;
    for (double v : k) sum += v;
    for (double& v : k) v /= sum;
  } else if (order == 2) {
    double mean = 0.0;
    for (double v : k) mean += v;
    mean /= taps;
    for (double& v : k) v -= mean;
  } else {
    // odd orders: enforce exact antisymmetry (implies zero sum)
    for (int u = 1; u <= radius; ++u) {
      double a = 0.5 * (k[radius + u] - k[radius - u]);
      k[radius + u] = a;
      k[radius - u] = -a;
    }
    k[radius] = 0.0;
  }
  return k;
}

}  // namespace

PaddingMode padding_from_string(const std::string& s) {
  if (s == "reflect101") return PaddingMode::kReflect101;
  if (s == "reflect") return PaddingMode::kReflect;
  if (s == "zero") return PaddingMode::kZero;
  if (s == "replicate") return PaddingMode::kReplicate;
  throw std::invalid_argument("unknown padding mode: " + s);
}

std::string to_string(PaddingMode m) {
  switch (m) {
    case PaddingMode::kReflect101: return "reflect101";
    case PaddingMode::kReflect: return "reflect";
    case PaddingMode::kZero: return "zero";
    case PaddingMode::kReplicate: return "replicate";
  }
  return "?";
}

DirectionSet icosa_directions() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  // 12 vertices: cyclic permutations of (0, +-1, +-phi)
  std::vector<std::array<double, 3>> verts;
  for (double a : {-1.0, 1.0})
    for (double b : {-phi, phi}) {
      verts.push_back({0.0, a, b});
      verts.push_back({a, b, 0.0});
      verts.push_back({b, 0.0, a});
    }
  auto dist2 = [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d += (u[i] - v[i]) * (u[i] - v[i]);
    return d;
  };
  // edge length 2: faces are triples of mutually adjacent vertices
  const double edge2 = 4.0;
  std::vector<std::array<double, 3>> normals;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j) {
      if (std::abs(dist2(verts[i], verts[j]) - edge2) > 1e-9) continue;
      for (std::size_t k = j + 1; k < verts.size(); ++k) {
        if (std::abs(dist2(verts[i], verts[k]) - edge2) > 1e-9) continue;
        if (std::abs(dist2(verts[j], verts[k]) - edge2) > 1e-9) continue;
        std::array<double, 3> c;
        for (int d = 0; d < 3; ++d)
          c[d] = (verts[i][d] + verts[j][d] + verts[k][d]) / 3.0;
        double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
        for (double& v : c) v /= norm;
        // canonical sign: first nonzero component positive
        for (int d = 0; d < 3; ++d) {
          if (std::abs(c[d]) < 1e-12) continue;
          if (c[d] < 0)
            for (double& v : c) v = -v;
          break;
        }
        for (double& v : c)
          if (std::abs(v) < 1e-12) v = 0.0;
        bool dup = false;
        for (const auto& n : normals)
          if (dist2(n, c) < 1e-9) dup = true;
        if (!dup) normals.push_back(c);
      }
    }
  if (normals.size() != 10)
    throw std::logic_error("icosa_directions: expected 10 unique normals");
  std::sort(normals.begin(), normals.end());
  DirectionSet out;
  for (int i = 0; i < 10; ++i) out.dirs[i] = normals[i];
  return out;
}

SteerableBasis g3_basis(double sigma, int taps) {
  if (taps % 2 == 0 || taps < 7)
    throw std::invalid_argument("g3_basis: taps must be odd and >= 7");
  if (sigma <= 0.0) throw std::invalid_argument("g3_basis: sigma must be > 0");
  SteerableBasis b;
  b.sigma = sigma;
  b.taps = taps;
  std::array<std::vector<double>, 4> taps_by_order;
  for (int o = 0; o <= 3; ++o) taps_by_order[o] = deriv_taps(sigma, taps, o);
  int idx = 0;
  for (int p = 3; p >= 0; --p)
    for (int q = 3 - p; q >= 0; --q) {
      int r = 3 - p - q;
      b.exponents[idx] = {p, q, r};
      b.basis[idx].kx = taps_by_order[p];
      b.basis[idx].ky = taps_by_order[q];
      b.basis[idx].kt = taps_by_order[r];
      b.basis[idx].order_x = p;
      b.basis[idx].order_y = q;
      b.basis[idx].order_t = r;
      ++idx;
    }
  return b;
}

std::array<double, 10> steering_coeffs(const std::array<double, 3>& v) {
  double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("steering_coeffs: direction must be unit length");
  static const double factorial[4] = {1.0, 1.0, 2.0, 6.0};
  std::array<double, 10> coeffs{};
  int idx = 0;
  for (int p = 3; p >= 0; --p)
    for (int q = 3 - p; q >= 0; --q) {
      int r = 3 - p - q;
      double c = 6.0 / (factorial[p] * factorial[q] * factorial[r]);
      coeffs[idx++] = c * std::pow(v[0], p) * std::pow(v[1], q) * std::pow(v[2], r);
    }
  return coeffs;
}

Volume conv_axis(const Volume& v, const std::vector<double>& taps, int axis,
                 PaddingMode padding, int threads) {
  const int radius = (static_cast<int>(taps.size()) - 1) / 2;
  const int n[3] = {v.nx, v.ny, v.nt};
  const int len = n[axis];
  Volume out(v.nx, v.ny, v.nt);
  // stride along the convolved axis; lines enumerated over the other two axes
  const std::size_t stride[3] = {1, static_cast<std::size_t>(v.nx),
                                 static_cast<std::size_t>(v.nx) * v.ny};
  const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
  const std::size_t nlines = static_cast<std::size_t>(n[a1]) * n[a2];
  parallel_for(nlines, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t line = lo; line < hi; ++line) {
      int i1 = static_cast<int>(line % n[a1]);
      int i2 = static_cast<int>(line / n[a1]);
      std::size_t base = stride[a1] * i1 + stride[a2] * i2;
      for (int i = 0; i < len; ++i) {
        // accumulate symmetric tap pairs together so antisymmetric kernels
        // cancel exactly on constant data
        double acc = taps[radius] * v.data[base + stride[axis] * i];
        for (int u = 1; u <= radius; ++u) {
          double pair = 0.0;
          int lo_src = fold_index(i - u, len, padding);
          if (lo_src >= 0) pair += taps[u + radius] * v.data[base + stride[axis] * lo_src];
          int hi_src = fold_index(i + u, len, padding);
          if (hi_src >= 0) pair += taps[radius - u] * v.data[base + stride[axis] * hi_src];
          acc += pair;
        }
        out.data[base + stride[axis] * i] = acc;
      }
    }
  });
  return out;
}

Volume conv_separable(const Volume& v, const SeparableKernel3D& k,
                      PaddingMode padding, int threads) {
  Volume a = conv_axis(v, k.kx, 0, padding, threads);
  Volume b = conv_axis(a, k.ky, 1, padding, threads);
  return conv_axis(b, k.kt, 2, padding, threads);
}

std::array<Volume, 10> basis_responses(const Volume& v, const SteerableBasis& b,
                                       PaddingMode padding, int threads) {
  std::array<Volume, 10> out;
  for (int i = 0; i < 10; ++i)
    out[i] = conv_separable(v, b.basis[i], padding, threads);
  return out;
}

Volume steer(const std::array<Volume, 10>& responses,
             const std::array<double, 3>& dir, int threads) {
  auto coeffs = steering_coeffs(dir);
  Volume out(responses[0].nx, responses[0].ny, responses[0].nt);
  parallel_for(out.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      double acc = 0.0;
      for (int b = 0; b < 10; ++b) acc += coeffs[b] * responses[b].data[i];
      out.data[i] = acc;
    }
  });
  return out;
}

Volume conv_oriented(const Volume& v, const std::array<double, 3>& dir,
                     const SteerableBasis& b, PaddingMode padding, int threads) {
  return steer(basis_responses(v, b, padding, threads), dir, threads);
}

std::vector<double> gaussian_taps(double std_dev, int length) {
  if (std_dev <= 0.0) throw std::invalid_argument("gaussian_taps: std must be > 0");
  int len = length > 0 ? length : 2 * static_cast<int>(std::ceil(3.0 * std_dev)) + 1;
  if (len % 2 == 0) throw std::invalid_argument("gaussian_taps: length must be odd");
  int radius = (len - 1) / 2;
  std::vector<double> k(len);
  double sum = 0.0;
  for (int u = -radius; u <= radius; ++u) {
    k[u + radius] = std::exp(-u * u / (2.0 * std_dev * std_dev));
    sum += k[u + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

std::string dump_kernels(const SteerableBasis& b) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < 10; ++i) {
    const auto& e = b.exponents[i];
    for (int axis = 0; axis < 3; ++axis) {
      const auto& taps = axis == 0 ? b.basis[i].kx
                        : axis == 1 ? b.basis[i].ky
                                    : b.basis[i].kt;
      os << "g3[" << e[0] << e[1] << e[2] << "]." << "xyt"[axis] << ":";
      for (double t : taps) os << " " << t;
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace soe
