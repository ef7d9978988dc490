#include "soe/synthgen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace soe {
namespace {

void validate(const PatternSpec& spec) {
  if (spec.wavelength < 2.0)
    throw std::invalid_argument("pattern: wavelength must be >= 2 pixels");
  if (spec.dims[0] <= 0 || spec.dims[1] <= 0 || spec.dims[2] <= 0)
    throw std::invalid_argument("pattern: dims must be positive");
  if (spec.fence_duty < 0.0 || spec.fence_duty >= 1.0)
    throw std::invalid_argument("pattern: fence_duty must be in [0, 1)");
  if (spec.noise_std < 0.0)
    throw std::invalid_argument("pattern: noise_std must be >= 0");
  double n = std::hypot(spec.direction[0], spec.direction[1]);
  if (std::abs(n - 1.0) > 1e-9)
    throw std::invalid_argument("pattern: direction must be a unit vector");
}

double sine_value(const PatternSpec& spec, double u, double displacement) {
  return 0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * (u - displacement) /
                                  spec.wavelength +
                              spec.phase);
}

// accumulated displacement at frame t; moving frames advance by speed
std::vector<double> displacement_schedule(const PatternSpec& spec, bool move_stop) {
  std::vector<double> disp(spec.dims[2], 0.0);
  double acc = 0.0;
  for (int t = 0; t < spec.dims[2]; ++t) {
    disp[t] = acc;
    bool moving = true;
    if (move_stop) moving = (t % spec.period) < spec.period / 2.0;
    if (moving) acc += spec.speed;
  }
  return disp;
}

Volume render(const PatternSpec& spec, bool move_stop, bool fence) {
  validate(spec);
  if (move_stop && spec.period < 2)
    throw std::invalid_argument("pattern: period must be >= 2");
  if (fence && spec.fence_duty <= 0.0)
    throw std::invalid_argument("pattern: fence_duty must be > 0");
  Volume v(spec.dims[0], spec.dims[1], spec.dims[2]);
  std::vector<double> disp = displacement_schedule(spec, move_stop);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.noise_std);
  for (int t = 0; t < v.nt; ++t)
    for (int y = 0; y < v.ny; ++y)
      for (int x = 0; x < v.nx; ++x) {
        double u = spec.direction[0] * x + spec.direction[1] * y;
        double value;
        if (fence) {
          double frac = u / spec.wavelength - std::floor(u / spec.wavelength);
          value = frac < spec.fence_duty ? sine_value(spec, u, 0.0)
                                         : sine_value(spec, u, disp[t]);
        } else {
          value = sine_value(spec, u, disp[t]);
        }
        if (spec.noise_std > 0.0) value += noise(rng);
        v.at(x, y, t) = std::clamp(value, 0.0, 1.0);
      }
  return v;
}

}  // namespace

Volume moving_sinusoid(const PatternSpec& spec) { return render(spec, false, false); }

Volume move_stop(const PatternSpec& spec) { return render(spec, true, false); }

Volume picket_fence(const PatternSpec& spec) {
  // moving component keeps constant motion; the fence itself is static
  return render(spec, false, true);
}

Volume generate(const PatternSpec& spec) {
  switch (spec.kind) {
    case PatternKind::kMovingSinusoid: return moving_sinusoid(spec);
    case PatternKind::kMoveStop: return move_stop(spec);
    case PatternKind::kPicketFence: return picket_fence(spec);
  }
  throw std::invalid_argument("pattern: unknown kind");
}

std::vector<LabeledVolume> make_dataset(const std::vector<ClassSpec>& classes,
                                        std::uint64_t seed) {
  std::vector<LabeledVolume> out;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const ClassSpec& cls = classes[c];
    if (cls.count < 2)
      throw std::invalid_argument("make_dataset: count must be >= 2 per class");
    if (cls.jitter.phase < 0.0 || cls.jitter.speed < 0.0 || cls.jitter.wavelength < 0.0)
      throw std::invalid_argument("make_dataset: jitter ranges must be >= 0");
    for (int s = 0; s < cls.count; ++s) {
      std::uint64_t sample_seed =
          seed * 0x9e3779b97f4a7c15ULL + c * 0x100000001b3ULL + s + 1;
      std::mt19937_64 rng(sample_seed);
      auto jitter = [&rng](double range) {
        if (range <= 0.0) return 0.0;
        return std::uniform_real_distribution<double>(-range, range)(rng);
      };
      PatternSpec spec = cls.base;
      spec.phase += jitter(cls.jitter.phase);
      spec.speed += jitter(cls.jitter.speed);
      spec.wavelength = std::max(2.0, spec.wavelength + jitter(cls.jitter.wavelength));
      spec.seed = rng();
      LabeledVolume lv;
      lv.label = cls.label;
      lv.sample_id = cls.label + "_" + std::to_string(s);
      lv.volume = generate(spec);
      out.push_back(std::move(lv));
    }
  }
  return out;
}

}  // namespace soe
