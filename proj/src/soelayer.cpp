#include "soe/soelayer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "soe/parallel.hpp"

namespace soe {
namespace {

auto tag_key(const ChannelTag& t) {
  return std::make_tuple(t.scale_index, t.sign_path, t.orient_path,
                         t.parent_orientation.value_or(-1), t.orientation_index);
}

std::vector<Volume> normalize_impl(const std::vector<Volume>& group,
                                   EpsilonMode eps_mode, int threads) {
  const std::size_t m = group.size();
  for (const auto& g : group)
    if (!g.same_dims(group[0]))
      throw std::invalid_argument("normalize_group: dims differ within group");
  std::vector<Volume> out(m, Volume(group[0].nx, group[0].ny, group[0].nt));

  double global_eps = 0.0;
  if (eps_mode == EpsilonMode::kPerVolume) {
    // single eps: population std over every value of every map in the group
    double sum = 0.0, sumsq = 0.0;
    const double n = static_cast<double>(m * group[0].size());
    for (const auto& g : group)
      for (double v : g.data) {
        sum += v;
        sumsq += v * v;
      }
    double mean = sum / n;
    global_eps = std::sqrt(std::max(0.0, sumsq / n - mean * mean));
  }

  parallel_for(group[0].size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      double sum = 0.0;
      for (const auto& g : group) sum += g.data[i];
      double eps;
      if (eps_mode == EpsilonMode::kPerVoxel) {
        double mean = sum / static_cast<double>(m);
        double var = 0.0;
        for (const auto& g : group) {
          double d = g.data[i] - mean;
          var += d * d;
        }
        eps = std::sqrt(var / static_cast<double>(m));
      } else {
        eps = global_eps;
      }
      double denom = sum + eps;
      for (std::size_t c = 0; c < m; ++c)
        out[c].data[i] = denom > 0.0 ? group[c].data[i] / denom : 0.0;
    }
  });
  return out;
}

std::vector<double> boxcar_taps(int length) {
  return std::vector<double>(length, 1.0 / length);
}

Volume decimate(const Volume& v, int tau) {
  Volume out((v.nx + tau - 1) / tau, (v.ny + tau - 1) / tau,
             (v.nt + tau - 1) / tau);
  for (int t = 0; t < out.nt; ++t)
    for (int y = 0; y < out.ny; ++y)
      for (int x = 0; x < out.nx; ++x)
        out.at(x, y, t) = v.at(tau * x, tau * y, tau * t);
  return out;
}

Volume max_pool(const Volume& v, int tau) {
  Volume out((v.nx + tau - 1) / tau, (v.ny + tau - 1) / tau,
             (v.nt + tau - 1) / tau);
  for (int t = 0; t < out.nt; ++t)
    for (int y = 0; y < out.ny; ++y)
      for (int x = 0; x < out.nx; ++x) {
        double best = -std::numeric_limits<double>::infinity();
        for (int dt = tau * t; dt < std::min(v.nt, tau * t + tau); ++dt)
          for (int dy = tau * y; dy < std::min(v.ny, tau * y + tau); ++dy)
            for (int dx = tau * x; dx < std::min(v.nx, tau * x + tau); ++dx)
              best = std::max(best, v.at(dx, dy, dt));
        out.at(x, y, t) = best;
      }
  return out;
}

}  // namespace

bool tag_less(const ChannelTag& a, const ChannelTag& b) {
  return tag_key(a) < tag_key(b);
}

std::pair<Volume, Volume> rectify_two_path(const Volume& c) {
  Volume pos(c.nx, c.ny, c.nt), neg(c.nx, c.ny, c.nt);
  for (std::size_t i = 0; i < c.size(); ++i) {
    double v = c.data[i];
    if (v > 0.0)
      pos.data[i] = v * v;
    else
      neg.data[i] = v * v;
  }
  return {std::move(pos), std::move(neg)};
}

std::vector<Volume> normalize_group(const std::vector<Volume>& group,
                                    EpsilonMode eps_mode, int threads) {
  if (group.size() != 10)
    throw std::invalid_argument("normalize_group: expected 10 orientation maps");
  return normalize_impl(group, eps_mode, threads);
}

PoolingParams derive_pooling_params(double sigma, double alpha, double beta) {
  if (sigma <= 0.0) throw std::invalid_argument("derive_pooling_params: sigma must be > 0");
  if (alpha <= 0.0 || alpha >= 1.0 || beta <= 0.0 || beta >= 1.0)
    throw std::invalid_argument("derive_pooling_params: alpha and beta must be in (0, 1)");
  double omega_c = 3.0 * std::sqrt(3.0) / sigma;
  double eta = 2.0 * omega_c;
  PoolingParams p;
  p.gamma = 3.0 / (alpha * eta);
  p.tau = beta * 2.0 * std::numbers::pi / (2.0 * alpha * eta);
  p.tau_int = std::max(1, static_cast<int>(std::lround(p.tau)));
  return p;
}

Volume st_pool(const Volume& e, const PoolingParams& params, PaddingMode padding,
               int threads, PoolKernel kernel) {
  if (params.tau_int < 1) throw std::invalid_argument("st_pool: tau_int must be >= 1");
  if (kernel == PoolKernel::kMax) return max_pool(e, params.tau_int);
  int length = 2 * static_cast<int>(std::ceil(3.0 * params.gamma)) + 1;
  std::vector<double> taps = kernel == PoolKernel::kGaussian
                                 ? gaussian_taps(params.gamma, length)
                                 : boxcar_taps(length);
  Volume blurred = e;
  for (int axis = 0; axis < 3; ++axis)
    blurred = conv_axis(blurred, taps, axis, padding, threads);
  return decimate(blurred, params.tau_int);
}

FeatureMaps cc_pool(const FeatureMaps& maps) {
  // group key: everything but the parent orientation
  std::map<std::tuple<int, std::string, std::vector<int>, int>, std::vector<const Channel*>>
      groups;
  FeatureMaps out;
  for (const auto& ch : maps) {
    if (!ch.tag.parent_orientation) {
      out.push_back(ch);  // vacuous at the first layer
      continue;
    }
    groups[std::make_tuple(ch.tag.scale_index, ch.tag.sign_path,
                           ch.tag.orient_path, ch.tag.orientation_index)]
        .push_back(&ch);
  }
  for (auto& [key, members] : groups) {
    if (members.size() != 10)
      throw std::invalid_argument("cc_pool: incomplete parent group (" +
                                  std::to_string(members.size()) + " of 10 channels)");
    // fixed reduction order: sort by parent index
    std::sort(members.begin(), members.end(), [](const Channel* a, const Channel* b) {
      return *a->tag.parent_orientation < *b->tag.parent_orientation;
    });
    Channel avg;
    avg.tag = members[0]->tag;
    avg.tag.parent_orientation.reset();
    avg.volume = Volume(members[0]->volume.nx, members[0]->volume.ny,
                        members[0]->volume.nt);
    for (const Channel* m : members)
      for (std::size_t i = 0; i < avg.volume.size(); ++i)
        avg.volume.data[i] += m->volume.data[i];
    for (double& v : avg.volume.data) v /= 10.0;
    out.push_back(std::move(avg));
  }
  std::sort(out.begin(), out.end(),
            [](const Channel& a, const Channel& b) { return tag_less(a.tag, b.tag); });
  return out;
}

LayerOutput run_layer(const FeatureMaps& input, const SteerableBasis& basis,
                      const DirectionSet& dirs, const PoolingParams& pool,
                      const LayerConfig& cfg) {
  if (input.empty()) throw std::invalid_argument("run_layer: empty input");

  FeatureMaps rectified;
  for (const auto& in : input) {
    auto responses = basis_responses(in.volume, basis, cfg.padding, cfg.threads);
    ChannelTag base = in.tag;
    base.parent_orientation =
        in.tag.orientation_index >= 0 ? std::optional<int>(in.tag.orientation_index)
                                      : std::nullopt;
    if (in.tag.parent_orientation)  // lineage survives only with cc-pooling off
      base.orient_path.push_back(*in.tag.parent_orientation);
    for (int i = 0; i < 10; ++i) {
      Volume c = steer(responses, dirs.dirs[i], cfg.threads);
      ChannelTag tag = base;
      tag.orientation_index = i;
      switch (cfg.rectification) {
        case Rectification::kTwoPath: {
          auto [pos, neg] = rectify_two_path(c);
          ChannelTag tp = tag, tn = tag;
          tp.sign_path += '+';
          tn.sign_path += '-';
          rectified.push_back({std::move(tp), std::move(pos)});
          rectified.push_back({std::move(tn), std::move(neg)});
          break;
        }
        case Rectification::kFullWave: {
          for (double& v : c.data) v *= v;
          tag.sign_path += 'f';
          rectified.push_back({std::move(tag), std::move(c)});
          break;
        }
        case Rectification::kRelu: {
          for (double& v : c.data) v = v > 0.0 ? v * v : 0.0;
          tag.sign_path += 'r';
          rectified.push_back({std::move(tag), std::move(c)});
          break;
        }
      }
    }
  }

  FeatureMaps normalized;
  if (cfg.normalization) {
    // group channels sharing parent and lineage; per-polarity keeps the last
    // sign character in the key, joint mode strips it
    std::map<std::tuple<int, std::string, std::vector<int>, int>, std::vector<std::size_t>>
        groups;
    for (std::size_t idx = 0; idx < rectified.size(); ++idx) {
      const auto& t = rectified[idx].tag;
      std::string path = t.sign_path;
      if (cfg.norm_group == NormGroupMode::kJointPolarity) path.pop_back();
      groups[std::make_tuple(t.scale_index, path, t.orient_path,
                             t.parent_orientation.value_or(-1))]
          .push_back(idx);
    }
    for (const auto& [key, idxs] : groups) {
      std::vector<Volume> vols;
      vols.reserve(idxs.size());
      for (std::size_t i : idxs) vols.push_back(rectified[i].volume);
      auto normed = normalize_impl(vols, cfg.epsilon_mode, cfg.threads);
      for (std::size_t j = 0; j < idxs.size(); ++j)
        normalized.push_back({rectified[idxs[j]].tag, std::move(normed[j])});
    }
  } else {
    normalized = std::move(rectified);
  }
  std::sort(normalized.begin(), normalized.end(),
            [](const Channel& a, const Channel& b) { return tag_less(a.tag, b.tag); });

  FeatureMaps pooled;
  pooled.reserve(normalized.size());
  for (const auto& ch : normalized)
    pooled.push_back({ch.tag, st_pool(ch.volume, pool, cfg.padding, cfg.threads,
                                      cfg.pool_kernel)});

  LayerOutput out;
  out.features_after_norm = std::move(normalized);
  if (cfg.cc_pooling) {
    out.fed_back = cc_pool(pooled);
  } else {
    std::sort(pooled.begin(), pooled.end(),
              [](const Channel& a, const Channel& b) { return tag_less(a.tag, b.tag); });
    out.fed_back = std::move(pooled);
  }
  return out;
}

}  // namespace soe
