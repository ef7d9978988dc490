// Python bindings for the oriented-energy pipeline. Volumes cross the
// boundary as C-contiguous float64 arrays of shape (nt, ny, nx), which maps
// directly onto the library's x-fastest storage.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "soe/network.hpp"
#include "soe/recognition.hpp"
#include "soe/synthgen.hpp"

namespace py = pybind11;
using namespace soe;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Volume volume_from_array(const Array& a) {
  if (a.ndim() != 3) throw std::invalid_argument("expected a (nt, ny, nx) array");
  Volume v(static_cast<int>(a.shape(2)), static_cast<int>(a.shape(1)),
           static_cast<int>(a.shape(0)));
  const double* src = a.data();
  std::copy(src, src + v.size(), v.data.begin());
  return v;
}

Array array_from_volume(const Volume& v) {
  Array a({static_cast<py::ssize_t>(v.nt), static_cast<py::ssize_t>(v.ny),
           static_cast<py::ssize_t>(v.nx)});
  std::copy(v.data.begin(), v.data.end(), a.mutable_data());
  return a;
}

PatternSpec spec_from_args(const std::string& kind, double wavelength, double speed,
                           int period, double fence_duty, std::array<int, 3> dims,
                           double phase, double noise_std, std::uint64_t seed) {
  PatternSpec s;
  if (kind == "moving_sinusoid")
    s.kind = PatternKind::kMovingSinusoid;
  else if (kind == "move_stop")
    s.kind = PatternKind::kMoveStop;
  else if (kind == "picket_fence")
    s.kind = PatternKind::kPicketFence;
  else
    throw std::invalid_argument("unknown pattern kind: " + kind);
  s.wavelength = wavelength;
  s.speed = speed;
  s.period = period;
  s.fence_duty = fence_duty;
  s.dims = dims;
  s.phase = phase;
  s.noise_std = noise_std;
  s.seed = seed;
  return s;
}

NetworkConfig config_from_kwargs(double sigma, int taps, int threads,
                                 bool cc_pooling) {
  NetworkConfig cfg;
  cfg.sigma = sigma;
  cfg.taps = taps;
  cfg.threads = threads;
  cfg.cc_pooling = cc_pooling;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_soenet, m) {
  m.doc() = "hierarchical spatiotemporal oriented-energy features";

  m.def(
      "generate",
      [](const std::string& kind, double wavelength, double speed, int period,
         double fence_duty, std::array<int, 3> dims, double phase, double noise_std,
         std::uint64_t seed) {
        return array_from_volume(generate(spec_from_args(
            kind, wavelength, speed, period, fence_duty, dims, phase, noise_std, seed)));
      },
      py::arg("kind") = "moving_sinusoid", py::arg("wavelength") = 8.0,
      py::arg("speed") = 1.0, py::arg("period") = 16, py::arg("fence_duty") = 0.375,
      py::arg("dims") = std::array<int, 3>{64, 64, 64}, py::arg("phase") = 0.0,
      py::arg("noise_std") = 0.0, py::arg("seed") = 0,
      "Render a synthetic dynamic texture as a (nt, ny, nx) array.");

  m.def(
      "plan",
      [](std::array<int, 3> dims, double sigma, int taps, int threads) {
        NetworkConfig cfg = config_from_kwargs(sigma, taps, threads, true);
        Plan p = plan({dims[0], dims[1], dims[2]}, cfg);
        return py::make_tuple(p.scale_count, p.layers_per_scale);
      },
      py::arg("dims"), py::arg("sigma") = 1.0, py::arg("taps") = 13,
      py::arg("threads") = 1,
      "Scale count and per-scale layer budget for an (nx, ny, nt) volume.");

  m.def(
      "extract",
      [](const Array& volume, double sigma, int taps, int threads, bool cc_pooling) {
        NetworkConfig cfg = config_from_kwargs(sigma, taps, threads, cc_pooling);
        Descriptor d = extract_descriptor(forward(volume_from_array(volume), cfg));
        py::array_t<double> out(std::vector<py::ssize_t>{
            static_cast<py::ssize_t>(d.size())});
        std::copy(d.values.begin(), d.values.end(), out.mutable_data());
        return out;
      },
      py::arg("volume"), py::arg("sigma") = 1.0, py::arg("taps") = 13,
      py::arg("threads") = 1, py::arg("cc_pooling") = true,
      "L2-normalized hierarchical oriented-energy descriptor of a volume.");

  m.def(
      "bhattacharyya",
      [](const std::vector<double>& f, const std::vector<double>& g) {
        return bhattacharyya(f, g);
      },
      py::arg("f"), py::arg("g"),
      "Bhattacharyya coefficient of two non-negative vectors.");
}
