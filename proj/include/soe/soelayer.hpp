#pragma once

#include <optional>
#include <string>
#include <vector>

#include "soe/filterbank.hpp"
#include "soe/volume.hpp"

namespace soe {

/// Identity of a feature channel: which scale it lives at, which
/// orientation produced it, and the +/- rectification lineage it traversed.
/// parent_orientation is present between convolution and cross-channel
/// pooling; orient_path accumulates ancestor orientations when cross-channel
/// pooling is disabled (empty otherwise).
struct ChannelTag {
  int scale_index = 0;
  int orientation_index = -1;  // -1 for the raw input channel
  std::string sign_path;       // one of {+,-,f,r} per layer traversed
  std::optional<int> parent_orientation;
  std::vector<int> orient_path;

  bool operator==(const ChannelTag&) const = default;
};

// Descriptor / processing order: scale, then sign_path lexicographic, then
// lineage, then parent orientation, then orientation.
bool tag_less(const ChannelTag& a, const ChannelTag& b);

struct Channel {
  ChannelTag tag;
  Volume volume;
};

/// A set of channels with uniform dims (single scale stream).
using FeatureMaps = std::vector<Channel>;

struct PoolingParams {
  double gamma = 1.0;  // Gaussian std of the pooling blur
  double tau = 2.0;    // raw derived sampling period
  int tau_int = 2;     // integer downsampling factor actually applied
};

enum class Rectification { kTwoPath, kFullWave, kRelu };
enum class NormGroupMode { kPerPolarity, kJointPolarity };
enum class EpsilonMode { kPerVoxel, kPerVolume };
enum class PoolKernel { kGaussian, kBoxcar, kMax };

struct LayerConfig {
  Rectification rectification = Rectification::kTwoPath;
  bool normalization = true;
  NormGroupMode norm_group = NormGroupMode::kPerPolarity;
  EpsilonMode epsilon_mode = EpsilonMode::kPerVoxel;
  bool cc_pooling = true;
  PoolKernel pool_kernel = PoolKernel::kGaussian;
  PaddingMode padding = PaddingMode::kReflect101;
  int threads = 1;
};

/// Splits a signed response into squared positive / squared negative paths.
std::pair<Volume, Volume> rectify_two_path(const Volume& c);

/// Divisive normalization of a 10-orientation energy group:
/// out_i = e_i / (sum_m e_m + eps), eps = std dev of the group values
/// (population form). Zero-denominator voxels yield 0.
std::vector<Volume> normalize_group(const std::vector<Volume>& group,
                                    EpsilonMode eps_mode = EpsilonMode::kPerVoxel,
                                    int threads = 1);

/// Pooling parameters from the filter scale: cutoff 3*sqrt(3)/sigma, doubled
/// by rectification, low-passed at a fraction alpha and sampled at a
/// fraction beta of the aliasing limit.
PoolingParams derive_pooling_params(double sigma, double alpha, double beta);

/// Gaussian blur (std gamma) then decimation by tau_int on all axes.
Volume st_pool(const Volume& e, const PoolingParams& params,
               PaddingMode padding = PaddingMode::kReflect101, int threads = 1,
               PoolKernel kernel = PoolKernel::kGaussian);

/// Average over the 10 parent-orientation variants of each
/// (orientation, lineage) group; drops parent_orientation from the tags.
/// Channels without a parent orientation pass through unchanged.
FeatureMaps cc_pool(const FeatureMaps& maps);

struct LayerOutput {
  FeatureMaps features_after_norm;  // snapshot taken before pooling
  FeatureMaps fed_back;             // pooled maps fed to the next layer
};

/// One full layer: oriented convolution, rectification, normalization,
/// spatiotemporal pooling, cross-channel pooling.
LayerOutput run_layer(const FeatureMaps& input, const SteerableBasis& basis,
                      const DirectionSet& dirs, const PoolingParams& pool,
                      const LayerConfig& cfg);

}  // namespace soe
