#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "soe/volume.hpp"

namespace soe {

enum class PatternKind { kMovingSinusoid, kMoveStop, kPicketFence };

struct PatternSpec {
  PatternKind kind = PatternKind::kMovingSinusoid;
  double wavelength = 8.0;                  // pixels, >= 2
  std::array<double, 2> direction = {1, 0}; // unit 2-vector in (x, y)
  double speed = 1.0;                       // pixels/frame
  int period = 16;                          // move-stop cycle length, frames
  double fence_duty = 0.375;                // fraction of spatial period occluded
  std::array<int, 3> dims = {64, 64, 64};
  double phase = 0.0;                       // radians
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

Volume moving_sinusoid(const PatternSpec& spec);
Volume move_stop(const PatternSpec& spec);
Volume picket_fence(const PatternSpec& spec);
Volume generate(const PatternSpec& spec);

/// Uniform jitter ranges applied per sample on top of a class template.
struct JitterSpec {
  double phase = 0.0;       // +- radians
  double speed = 0.0;       // +- pixels/frame
  double wavelength = 0.0;  // +- pixels
};

struct ClassSpec {
  std::string label;
  PatternSpec base;
  int count = 2;
  JitterSpec jitter;
};

struct LabeledVolume {
  std::string label;
  std::string sample_id;
  Volume volume;
};

/// Deterministic synthetic dataset: per-sample seeds and jitter are derived
/// from the base seed alone.
std::vector<LabeledVolume> make_dataset(const std::vector<ClassSpec>& classes,
                                        std::uint64_t seed);

}  // namespace soe
