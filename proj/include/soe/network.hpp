#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "soe/soelayer.hpp"
#include "soe/volume.hpp"

namespace soe {

/// Every tunable of the pipeline, with defaults matching the shipped
/// configuration: 10 orientations, 13-tap sigma-1 filters, two-path
/// rectification, per-polarity normalization, Gaussian pooling with a
/// (gamma = 1, tau = 2) override, cross-channel pooling on.
struct NetworkConfig {
  double sigma = 1.0;
  int taps = 13;
  double alpha = 0.5;
  double beta = 0.5;
  // When set, replaces the analytic derivation from (alpha, beta).
  std::optional<PoolingParams> pooling_override = PoolingParams{1.0, 2.0, 2};
  PaddingMode padding = PaddingMode::kReflect101;
  std::optional<int> max_layers;
  std::optional<int> max_scales;
  Rectification rectification = Rectification::kTwoPath;
  bool cc_pooling = true;
  bool normalization = true;
  NormGroupMode norm_group = NormGroupMode::kPerPolarity;
  EpsilonMode epsilon_mode = EpsilonMode::kPerVoxel;
  PoolKernel pool_kernel = PoolKernel::kGaussian;
  double pyramid_blur_std = 1.0;
  int threads = 1;

  PoolingParams pooling() const;
  LayerConfig layer_config() const;
};

NetworkConfig parse_config(const std::string& text);
NetworkConfig load_config(const std::filesystem::path& path);
std::string format_config(const NetworkConfig& cfg);

struct Plan {
  int scale_count = 0;
  std::vector<int> layers_per_scale;
  std::vector<std::array<int, 3>> level_dims;
};

/// Scale count from the filter-fit rule and per-scale layer budgets from
/// simulating the pooling shrinkage until the fed-back volume would not
/// exceed the filter size.
Plan plan(std::array<int, 3> dims, const NetworkConfig& cfg);

struct FeatureHierarchy {
  Plan plan;
  // per scale, per layer: the features-after-normalization snapshot
  std::vector<std::vector<FeatureMaps>> layers;
};

FeatureHierarchy forward(const Volume& v, const NetworkConfig& cfg);

struct Descriptor {
  std::vector<double> values;  // l2-normalized, non-negative
  std::vector<ChannelTag> tags;
  std::vector<int> layers_per_scale;
  bool degenerate = false;  // all-zero input, stored unnormalized (zeros)

  std::size_t size() const { return values.size(); }
};

/// Per-channel sums over the whole volume of each scale's final layer,
/// concatenated scale-major in tag order, then l2-normalized.
Descriptor extract_descriptor(const FeatureHierarchy& h);

}  // namespace soe
