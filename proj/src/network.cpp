#include "soe/network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace soe {

PoolingParams NetworkConfig::pooling() const {
  if (pooling_override) return *pooling_override;
  return derive_pooling_params(sigma, alpha, beta);
}

LayerConfig NetworkConfig::layer_config() const {
  LayerConfig lc;
  lc.rectification = rectification;
  lc.normalization = normalization;
  lc.norm_group = norm_group;
  lc.epsilon_mode = epsilon_mode;
  lc.cc_pooling = cc_pooling;
  lc.pool_kernel = pool_kernel;
  lc.padding = padding;
  lc.threads = threads;
  return lc;
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": " + v);
}

}  // namespace

NetworkConfig parse_config(const std::string& text) {
  NetworkConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::optional<double> ov_gamma;
  std::optional<int> ov_tau;
  bool pooling_auto = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t");
      s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
    };
    trim(key);
    trim(val);
    if (key == "sigma") cfg.sigma = std::stod(val);
    else if (key == "taps") cfg.taps = std::stoi(val);
    else if (key == "alpha") cfg.alpha = std::stod(val);
    else if (key == "beta") cfg.beta = std::stod(val);
    else if (key == "pooling") {
      if (val == "auto") pooling_auto = true;
      else if (val == "override") pooling_auto = false;
      else throw std::invalid_argument("config: pooling must be auto or override");
    }
    else if (key == "pooling_gamma") ov_gamma = std::stod(val);
    else if (key == "pooling_tau") ov_tau = std::stoi(val);
    else if (key == "padding") cfg.padding = padding_from_string(val);
    else if (key == "max_layers") cfg.max_layers = std::stoi(val);
    else if (key == "max_scales") cfg.max_scales = std::stoi(val);
    else if (key == "rectification") {
      if (val == "two_path") cfg.rectification = Rectification::kTwoPath;
      else if (val == "full_wave") cfg.rectification = Rectification::kFullWave;
      else if (val == "relu") cfg.rectification = Rectification::kRelu;
      else throw std::invalid_argument("config: bad rectification: " + val);
    }
    else if (key == "cc_pooling") cfg.cc_pooling = parse_bool(val, key);
    else if (key == "normalization") cfg.normalization = parse_bool(val, key);
    else if (key == "norm_group") {
      if (val == "per_polarity") cfg.norm_group = NormGroupMode::kPerPolarity;
      else if (val == "joint") cfg.norm_group = NormGroupMode::kJointPolarity;
      else throw std::invalid_argument("config: bad norm_group: " + val);
    }
    else if (key == "epsilon_mode") {
      if (val == "voxel") cfg.epsilon_mode = EpsilonMode::kPerVoxel;
      else if (val == "volume") cfg.epsilon_mode = EpsilonMode::kPerVolume;
      else throw std::invalid_argument("config: bad epsilon_mode: " + val);
    }
    else if (key == "pool_kernel") {
      if (val == "gaussian") cfg.pool_kernel = PoolKernel::kGaussian;
      else if (val == "boxcar") cfg.pool_kernel = PoolKernel::kBoxcar;
      else if (val == "max") cfg.pool_kernel = PoolKernel::kMax;
      else throw std::invalid_argument("config: bad pool_kernel: " + val);
    }
    else if (key == "pyramid_blur_std") cfg.pyramid_blur_std = std::stod(val);
    else throw std::invalid_argument("config: unknown key: " + key);
  }
  if (cfg.taps % 2 == 0 || cfg.taps < 7)
    throw std::invalid_argument("config: taps must be odd and >= 7");
  if (pooling_auto) {
    cfg.pooling_override.reset();
  } else if (ov_gamma || ov_tau) {
    PoolingParams p = cfg.pooling_override.value_or(PoolingParams{1.0, 2.0, 2});
    if (ov_gamma) p.gamma = *ov_gamma;
    if (ov_tau) {
      p.tau = static_cast<double>(*ov_tau);
      p.tau_int = *ov_tau;
    }
    if (p.gamma <= 0.0 || p.tau_int < 1)
      throw std::invalid_argument("config: bad pooling override");
    cfg.pooling_override = p;
  }
  return cfg;
}

NetworkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const NetworkConfig& cfg) {
  std::ostringstream os;
  os << "sigma=" << cfg.sigma << "\n";
  os << "taps=" << cfg.taps << "\n";
  os << "alpha=" << cfg.alpha << "\n";
  os << "beta=" << cfg.beta << "\n";
  if (cfg.pooling_override) {
    os << "pooling=override\n";
    os << "pooling_gamma=" << cfg.pooling_override->gamma << "\n";
    os << "pooling_tau=" << cfg.pooling_override->tau_int << "\n";
  } else {
    os << "pooling=auto\n";
  }
  os << "padding=" << to_string(cfg.padding) << "\n";
  if (cfg.max_layers) os << "max_layers=" << *cfg.max_layers << "\n";
  if (cfg.max_scales) os << "max_scales=" << *cfg.max_scales << "\n";
  os << "rectification="
     << (cfg.rectification == Rectification::kTwoPath    ? "two_path"
         : cfg.rectification == Rectification::kFullWave ? "full_wave"
                                                         : "relu")
     << "\n";
  os << "cc_pooling=" << (cfg.cc_pooling ? "on" : "off") << "\n";
  os << "normalization=" << (cfg.normalization ? "on" : "off") << "\n";
  os << "norm_group="
     << (cfg.norm_group == NormGroupMode::kPerPolarity ? "per_polarity" : "joint")
     << "\n";
  os << "epsilon_mode="
     << (cfg.epsilon_mode == EpsilonMode::kPerVoxel ? "voxel" : "volume") << "\n";
  os << "pool_kernel="
     << (cfg.pool_kernel == PoolKernel::kGaussian ? "gaussian"
         : cfg.pool_kernel == PoolKernel::kBoxcar ? "boxcar"
                                                  : "max")
     << "\n";
  os << "pyramid_blur_std=" << cfg.pyramid_blur_std << "\n";
  return os.str();
}

Plan plan(std::array<int, 3> dims, const NetworkConfig& cfg) {
  if (std::min({dims[0], dims[1], dims[2]}) < cfg.taps)
    throw std::invalid_argument("plan: input smaller than the filter on some axis");
  PoolingParams pool = cfg.pooling();
  Plan p;
  p.scale_count = num_scales(dims, cfg.taps, pool.tau_int);
  if (cfg.max_scales) p.scale_count = std::min(p.scale_count, *cfg.max_scales);
  std::array<int, 3> level = dims;
  for (int s = 0; s < p.scale_count; ++s) {
    if (s > 0)
      for (int& d : level) d = (d + 1) / 2;
    p.level_dims.push_back(level);
    std::array<int, 3> cur = level;
    int layers = 0;
    for (;;) {
      ++layers;
      std::array<int, 3> next;
      for (int i = 0; i < 3; ++i)
        next[i] = (cur[i] + pool.tau_int - 1) / pool.tau_int;
      if (std::min({next[0], next[1], next[2]}) <= cfg.taps) break;
      if (cfg.max_layers && layers >= *cfg.max_layers) break;
      cur = next;
    }
    if (cfg.max_layers) layers = std::min(layers, *cfg.max_layers);
    p.layers_per_scale.push_back(layers);
  }
  return p;
}

FeatureHierarchy forward(const Volume& v, const NetworkConfig& cfg) {
  FeatureHierarchy h;
  h.plan = plan({v.nx, v.ny, v.nt}, cfg);
  auto pyramid = build_pyramid(v, h.plan.scale_count, cfg.pyramid_blur_std,
                               cfg.threads);
  SteerableBasis basis = g3_basis(cfg.sigma, cfg.taps);
  DirectionSet dirs = icosa_directions();
  PoolingParams pool = cfg.pooling();
  LayerConfig lc = cfg.layer_config();
  h.layers.resize(h.plan.scale_count);
  for (int s = 0; s < h.plan.scale_count; ++s) {
    ChannelTag root;
    root.scale_index = s;
    FeatureMaps stream{{root, pyramid[s]}};
    for (int k = 0; k < h.plan.layers_per_scale[s]; ++k) {
      LayerOutput out = run_layer(stream, basis, dirs, pool, lc);
      h.layers[s].push_back(std::move(out.features_after_norm));
      stream = std::move(out.fed_back);
    }
  }
  return h;
}

Descriptor extract_descriptor(const FeatureHierarchy& h) {
  if (h.layers.empty()) throw std::invalid_argument("extract_descriptor: empty hierarchy");
  Descriptor d;
  d.layers_per_scale = h.plan.layers_per_scale;
  for (const auto& scale_layers : h.layers) {
    const FeatureMaps& final_layer = scale_layers.back();
    for (const auto& ch : final_layer) {
      double sum = 0.0;
      for (double v : ch.volume.data) sum += v;
      d.values.push_back(sum);
      d.tags.push_back(ch.tag);
    }
  }
  double norm = 0.0;
  for (double v : d.values) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& v : d.values) v /= norm;
  } else {
    d.degenerate = true;
  }
  return d;
}

}  // namespace soe
