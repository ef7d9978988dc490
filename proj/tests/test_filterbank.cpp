#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "oracles.hpp"
#include "soe/filterbank.hpp"

using namespace soe;

TEST_CASE("icosa_directions yields 10 canonical unit vectors") {
  DirectionSet d = icosa_directions();
  for (const auto& v : d.dirs) {
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
    // first nonzero component positive
    for (double c : v) {
      if (c == 0.0) continue;
      CHECK(c > 0.0);
      break;
    }
  }
  // contains (1,1,1)/sqrt(3)
  bool found = false;
  double s3 = 1.0 / std::sqrt(3.0);
  for (const auto& v : d.dirs)
    if (std::abs(v[0] - s3) < 1e-9 && std::abs(v[1] - s3) < 1e-9 &&
        std::abs(v[2] - s3) < 1e-9)
      found = true;
  CHECK(found);
  // no two equal or antipodal
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += d.dirs[i][k] * d.dirs[j][k];
      CHECK(std::abs(dot) < 1.0 - 1e-9);
    }
}

TEST_CASE("g3_basis tap invariants") {
  SteerableBasis b = g3_basis(1.0, 13);
  CHECK(b.basis.size() == 10);
  for (int i = 0; i < 10; ++i) {
    auto [p, q, r] = std::tuple{b.exponents[i][0], b.exponents[i][1], b.exponents[i][2]};
    CHECK(p + q + r == 3);
    for (const auto* taps : {&b.basis[i].kx, &b.basis[i].ky, &b.basis[i].kt}) {
      int order = taps == &b.basis[i].kx ? p : taps == &b.basis[i].ky ? q : r;
      double sum = 0.0;
      for (double v : *taps) sum += v;
      if (order == 0)
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      else
        CHECK(std::abs(sum) < 1e-12);
      if (order % 2 == 1) {
        int n = static_cast<int>(taps->size());
        CHECK((*taps)[(n - 1) / 2] == 0.0);
        for (int u = 0; u < n; ++u)
          CHECK((*taps)[u] == doctest::Approx(-(*taps)[n - 1 - u]).epsilon(1e-15));
      }
    }
  }
  CHECK_THROWS(g3_basis(1.0, 12));
  CHECK_THROWS(g3_basis(-1.0, 13));
}

TEST_CASE("steering coefficients: axis cases and the diagonal") {
  auto find = [](const SteerableBasis& b, int p, int q, int r) {
    for (int i = 0; i < 10; ++i)
      if (b.exponents[i][0] == p && b.exponents[i][1] == q && b.exponents[i][2] == r)
        return i;
    return -1;
  };
  SteerableBasis b = g3_basis(1.0, 13);

  auto cx = steering_coeffs({1, 0, 0});
  for (int i = 0; i < 10; ++i)
    CHECK(cx[i] == doctest::Approx(i == find(b, 3, 0, 0) ? 1.0 : 0.0));
  auto ct = steering_coeffs({0, 0, 1});
  for (int i = 0; i < 10; ++i)
    CHECK(ct[i] == doctest::Approx(i == find(b, 0, 0, 3) ? 1.0 : 0.0));

  double s = 1.0 / std::sqrt(3.0);
  auto cd = steering_coeffs({s, s, s});
  CHECK(cd[find(b, 1, 1, 1)] == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));

  CHECK_THROWS(steering_coeffs({1, 1, 0}));
}

TEST_CASE("polynomial steering identity") {
  // sum of coeff_{pqr} x^p y^q t^r equals (ax+by+ct)^3 at random points
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pt(-2.0, 2.0);
  SteerableBasis b = g3_basis(1.0, 13);
  for (int trial = 0; trial < 20; ++trial) {
    auto v = oracle::random_unit_vector(rng);
    auto coeffs = steering_coeffs(v);
    double x = pt(rng), y = pt(rng), t = pt(rng);
    double lhs = 0.0;
    for (int i = 0; i < 10; ++i)
      lhs += coeffs[i] * std::pow(x, b.exponents[i][0]) *
             std::pow(y, b.exponents[i][1]) * std::pow(t, b.exponents[i][2]);
    double rhs = std::pow(v[0] * x + v[1] * y + v[2] * t, 3);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("conv_separable: zero-DC, impulse response, linearity") {
  SteerableBasis b = g3_basis(1.0, 9);
  const SeparableKernel3D& k = b.basis[0];  // (3,0,0)

  Volume c(15, 15, 15, 0.7);
  Volume out = conv_separable(c, k);
  for (double v : out.data) CHECK(std::abs(v) < 1e-12);

  Volume impulse(11, 11, 11);
  impulse.at(5, 5, 5) = 1.0;
  Volume resp = conv_separable(impulse, k, PaddingMode::kZero);
  int r = 4;
  for (int dt = -r; dt <= r; ++dt)
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) {
        double want = k.kx[dx + r] * k.ky[dy + r] * k.kt[dt + r];
        CHECK(resp.at(5 + dx, 5 + dy, 5 + dt) == doctest::Approx(want).epsilon(1e-12));
      }

  Volume u = oracle::random_volume(10, 9, 8, 1);
  Volume w = oracle::random_volume(10, 9, 8, 2);
  Volume mix(10, 9, 8);
  for (std::size_t i = 0; i < mix.size(); ++i)
    mix.data[i] = 2.5 * u.data[i] - 1.25 * w.data[i];
  Volume conv_mix = conv_separable(mix, k);
  Volume cu = conv_separable(u, k);
  Volume cw = conv_separable(w, k);
  for (std::size_t i = 0; i < mix.size(); ++i)
    CHECK(conv_mix.data[i] ==
          doctest::Approx(2.5 * cu.data[i] - 1.25 * cw.data[i]).epsilon(1e-10));
}

TEST_CASE("steering identity against brute-force directional convolution") {
  Volume v = oracle::random_volume(24, 24, 24, 99);
  SteerableBasis b = g3_basis(1.0, 13);
  auto responses = basis_responses(v, b);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto dir = oracle::random_unit_vector(rng);
    Volume steered = steer(responses, dir);
    auto kernel = oracle::directional_g3_kernel(dir, 1.0, 13);
    Volume brute = oracle::conv3d_interior(v, kernel);
    CHECK(oracle::interior_rel_error(steered, brute, 6) < 1e-6);
  }
}

TEST_CASE("oriented response of an x-ramp along y is zero") {
  Volume ramp(17, 17, 17);
  for (int t = 0; t < 17; ++t)
    for (int y = 0; y < 17; ++y)
      for (int x = 0; x < 17; ++x) ramp.at(x, y, t) = 0.1 * x;
  SteerableBasis b = g3_basis(1.0, 13);
  Volume out = conv_oriented(ramp, {0, 1, 0}, b);
  for (double v : out.data) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("oriented response ignores brightness offset and commutes with scaling") {
  Volume v = oracle::random_volume(20, 20, 20, 13);
  SteerableBasis b = g3_basis(1.0, 13);
  DirectionSet dirs = icosa_directions();
  Volume base = conv_oriented(v, dirs.dirs[3], b);

  Volume shifted = v;
  for (double& x : shifted.data) x += 4.2;
  Volume out_shift = conv_oriented(shifted, dirs.dirs[3], b);
  for (std::size_t i = 0; i < v.size(); ++i)
    CHECK(out_shift.data[i] == doctest::Approx(base.data[i]).epsilon(1e-9));

  Volume scaled = v;
  for (double& x : scaled.data) x *= 3.0;
  Volume out_scale = conv_oriented(scaled, dirs.dirs[3], b);
  for (std::size_t i = 0; i < v.size(); ++i)
    CHECK(out_scale.data[i] == doctest::Approx(3.0 * base.data[i]).epsilon(1e-12));
}

TEST_CASE("convolution is thread-count invariant bit for bit") {
  Volume v = oracle::random_volume(21, 19, 17, 77);
  SteerableBasis b = g3_basis(1.0, 13);
  Volume one = conv_separable(v, b.basis[4], PaddingMode::kReflect101, 1);
  Volume four = conv_separable(v, b.basis[4], PaddingMode::kReflect101, 4);
  CHECK(one.data == four.data);
}

TEST_CASE("kernel dump lists 30 tap arrays") {
  SteerableBasis b = g3_basis(1.0, 13);
  std::string dump = dump_kernels(b);
  CHECK(std::count(dump.begin(), dump.end(), '\n') == 30);
}
