// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Pass --cli <path-to-soenet> to enable the CLI
// determinism checks.
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "soe/filterbank.hpp"
#include "soe/network.hpp"
#include "soe/recognition.hpp"
#include "soe/soelayer.hpp"
#include "soe/synthgen.hpp"

namespace fs = std::filesystem;
using namespace soe;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " [" << criterion << "] " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

int worker_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(8u, hw == 0 ? 1u : hw));
}

// --- criterion 1: steerability ---------------------------------------------

void criterion_steerability() {
  Volume v = oracle::random_volume(32, 32, 32, 2024);
  SteerableBasis basis = g3_basis(1.0, 13);
  auto responses = basis_responses(v, basis, PaddingMode::kReflect101, worker_threads());
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto dir = oracle::random_unit_vector(rng);
    Volume steered = steer(responses, dir, worker_threads());
    Volume brute = oracle::conv3d_interior(v, oracle::directional_g3_kernel(dir, 1.0, 13));
    worst = std::max(worst, oracle::interior_rel_error(steered, brute, 6));
  }
  report(1, "steering matches brute-force directional convolution", worst <= 1e-6,
         "max rel err " + std::to_string(worst));

  std::uniform_real_distribution<double> pt(-2.0, 2.0);
  double worst_poly = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    auto dir = oracle::random_unit_vector(rng);
    auto coeffs = steering_coeffs(dir);
    double x = pt(rng), y = pt(rng), t = pt(rng);
    double lhs = 0.0;
    for (int i = 0; i < 10; ++i)
      lhs += coeffs[i] * std::pow(x, basis.exponents[i][0]) *
             std::pow(y, basis.exponents[i][1]) * std::pow(t, basis.exponents[i][2]);
    double rhs = std::pow(dir[0] * x + dir[1] * y + dir[2] * t, 3);
    worst_poly = std::max(worst_poly, std::abs(lhs - rhs));
  }
  report(1, "polynomial steering identity", worst_poly <= 1e-12,
         "max abs err " + std::to_string(worst_poly));
}

// --- criterion 2: channel ledger -------------------------------------------

void criterion_channel_ledger() {
  // counts only depend on the channel bookkeeping, so a small volume with a
  // non-shrinking pooling override exercises all five layers cheaply
  SteerableBasis basis = g3_basis(1.0, 7);
  DirectionSet dirs = icosa_directions();
  PoolingParams pool{1.0, 1.0, 1};
  LayerConfig cfg;
  cfg.threads = worker_threads();

  Volume v = oracle::random_volume(16, 16, 16, 5);
  ChannelTag root;
  FeatureMaps stream{{root, v}};
  std::vector<std::size_t> counts_on;
  for (int k = 0; k < 5; ++k) {
    LayerOutput out = run_layer(stream, basis, dirs, pool, cfg);
    counts_on.push_back(out.features_after_norm.size());
    stream = std::move(out.fed_back);
  }
  bool ok_on = counts_on == std::vector<std::size_t>{20, 400, 800, 1600, 3200};
  std::ostringstream got;
  for (auto c : counts_on) got << c << " ";
  report(2, "channel ledger with cc-pooling (layers 1-5)", ok_on, "got " + got.str());

  cfg.cc_pooling = false;
  stream = {{root, v}};
  std::vector<std::size_t> counts_off;
  for (int k = 0; k < 3; ++k) {
    LayerOutput out = run_layer(stream, basis, dirs, pool, cfg);
    counts_off.push_back(out.features_after_norm.size());
    stream = std::move(out.fed_back);
  }
  bool ok_off = counts_off == std::vector<std::size_t>{20, 400, 8000};
  std::ostringstream got_off;
  for (auto c : counts_off) got_off << c << " ";
  report(2, "channel ledger without cc-pooling (layers 1-3)", ok_off,
         "got " + got_off.str());
}

// --- criterion 3: rectification identity ------------------------------------

void criterion_rectification() {
  bool ok = true;
  for (int trial = 0; trial < 5; ++trial) {
    Volume c = oracle::random_volume(12, 11, 10, 40 + trial);
    for (double& x : c.data) x -= 0.5;
    auto [pos, neg] = rectify_two_path(c);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (pos.data[i] + neg.data[i] != c.data[i] * c.data[i]) ok = false;
  }
  report(3, "e+ + e- equals c^2 exactly", ok);
}

// --- criterion 4: normalization bounds --------------------------------------

void criterion_normalization_bounds() {
  bool ok = true;
  double worst_sum = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Volume> group;
    for (int c = 0; c < 10; ++c) {
      Volume e = oracle::random_volume(8, 8, 8, 60 + 10 * trial + c);
      for (double& x : e.data) x *= x;
      group.push_back(std::move(e));
    }
    auto out = normalize_group(group);
    for (std::size_t i = 0; i < out[0].size(); ++i) {
      double sum = 0.0;
      for (const auto& o : out) {
        if (o.data[i] < 0.0 || o.data[i] > 1.0) ok = false;
        sum += o.data[i];
      }
      worst_sum = std::max(worst_sum, sum);
      if (sum > 1.0 + 1e-12) ok = false;
    }
  }

  // same bounds on real pipeline output, grouped per parent and polarity
  PatternSpec spec;
  spec.dims = {32, 32, 32};
  spec.noise_std = 0.05;
  spec.seed = 12;
  NetworkConfig cfg;
  cfg.taps = 7;
  cfg.threads = worker_threads();
  FeatureHierarchy h = forward(moving_sinusoid(spec), cfg);
  for (const auto& scale : h.layers)
    for (const auto& layer : scale)
      for (const auto& ch : layer)
        for (double x : ch.volume.data)
          if (x < 0.0 || x > 1.0) ok = false;
  report(4, "normalized outputs in [0,1], group sums <= 1", ok,
         "max group sum " + std::to_string(worst_sum));
}

// --- criterion 5: contrast/brightness invariance -----------------------------

void criterion_invariance() {
  PatternSpec spec;
  spec.dims = {64, 64, 64};
  spec.noise_std = 0.03;
  spec.seed = 21;
  Volume v = moving_sinusoid(spec);
  NetworkConfig cfg;
  cfg.threads = worker_threads();
  Descriptor base = extract_descriptor(forward(v, cfg));
  double worst = 0.0;
  for (double c : {0.5, 2.0, 10.0}) {
    Volume scaled = v;
    for (double& x : scaled.data) x *= c;
    Descriptor d = extract_descriptor(forward(scaled, cfg));
    for (std::size_t i = 0; i < d.size(); ++i)
      worst = std::max(worst, std::abs(d.values[i] - base.values[i]));
  }
  for (double b : {-0.2, 0.3}) {
    Volume shifted = v;
    for (double& x : shifted.data) x += b;
    Descriptor d = extract_descriptor(forward(shifted, cfg));
    for (std::size_t i = 0; i < d.size(); ++i)
      worst = std::max(worst, std::abs(d.values[i] - base.values[i]));
  }
  report(5, "descriptor invariant to contrast and brightness", worst <= 1e-9,
         "max abs diff " + std::to_string(worst));
}

// --- criterion 6: energy decay ----------------------------------------------

void criterion_energy_decay() {
  SteerableBasis basis = g3_basis(1.0, 13);
  DirectionSet dirs = icosa_directions();
  PoolingParams pool{1.0, 2.0, 2};
  LayerConfig cfg;
  cfg.threads = worker_threads();

  std::vector<Volume> inputs;
  for (int i = 0; i < 5; ++i) inputs.push_back(oracle::random_volume(40, 40, 40, 500 + i));
  for (int i = 0; i < 5; ++i) {
    PatternSpec spec;
    spec.dims = {40, 40, 40};
    spec.noise_std = 0.05;
    spec.seed = 600 + i;
    spec.wavelength = 6.0 + i;
    spec.kind = static_cast<PatternKind>(i % 3);
    if (spec.kind == PatternKind::kPicketFence) spec.fence_duty = 0.5;
    inputs.push_back(generate(spec));
  }

  bool ok = true;
  double worst_ratio = 0.0;
  for (const auto& v : inputs) {
    ChannelTag root;
    FeatureMaps stream{{root, v}};
    LayerOutput l1 = run_layer(stream, basis, dirs, pool, cfg);
    LayerOutput l2 = run_layer(l1.fed_back, basis, dirs, pool, cfg);
    auto total = [](const FeatureMaps& maps) {
      double s = 0.0;
      for (const auto& ch : maps)
        for (double x : ch.volume.data) s += x;
      return s;
    };
    double e1 = total(l1.fed_back);
    double e2 = total(l2.fed_back);
    if (!(e2 < e1)) ok = false;
    if (e1 > 0.0) worst_ratio = std::max(worst_ratio, e2 / e1);
  }
  report(6, "fed-back energy strictly decays from layer 1 to layer 2", ok,
         "worst ratio " + std::to_string(worst_ratio));
}

// --- criterion 7: two-pattern discrimination ---------------------------------

// Channels are labeled by the spacetime pattern axis they are tuned to:
// a pattern translating rightward at one pixel per frame traces the x-t
// diagonal, a static pattern is constant along the time axis, and a
// flickering pattern is constant along every spatial direction (axes in the
// x-y plane).
struct PatternChannels {
  int motion = -1;               // axis nearest (1,0,1)/sqrt(2)
  int static_nearest = -1;       // axis nearest the t axis, motion excluded
  std::vector<int> flicker;      // axes nearest the spatial plane
};

PatternChannels pattern_channels() {
  DirectionSet dirs = icosa_directions();
  PatternChannels ch;
  double best_m = -1.0;
  for (int i = 0; i < 10; ++i) {
    const auto& d = dirs.dirs[i];
    double m = std::abs(d[0] + d[2]) / std::sqrt(2.0);
    if (m > best_m) {
      best_m = m;
      ch.motion = i;
    }
  }
  double best_s = -1.0;
  for (int i = 0; i < 10; ++i) {
    if (i == ch.motion) continue;
    double s = std::abs(dirs.dirs[i][2]);
    if (s > best_s) {
      best_s = s;
      ch.static_nearest = i;
    }
  }
  for (int i = 0; i < 10; ++i)
    if (std::abs(dirs.dirs[i][2]) < 0.5) ch.flicker.push_back(i);
  return ch;
}

struct LayerAggregates {
  double layer1_motion = 0.0;  // rightward-motion group at layer 1
  double layer2_flicker = 0.0;
  double layer2_static = 0.0;
};

LayerAggregates pattern_aggregates(const Volume& v, const PatternChannels& ch) {
  NetworkConfig cfg;
  cfg.threads = worker_threads();
  FeatureHierarchy h = forward(v, cfg);
  const FeatureMaps& l1 = h.layers[0][0];
  const FeatureMaps& l2 = h.layers[0][1];
  auto channel_sums = [](const FeatureMaps& maps) {
    std::vector<double> sums;
    for (const auto& c : maps) {
      double s = 0.0;
      for (double x : c.volume.data) s += x;
      sums.push_back(s);
    }
    double norm = 0.0;
    for (double s : sums) norm += s * s;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& s : sums) s /= norm;
    return sums;
  };
  LayerAggregates agg;
  auto l1_sums = channel_sums(l1);
  for (std::size_t i = 0; i < l1.size(); ++i)
    if (l1[i].tag.orientation_index == ch.motion) agg.layer1_motion += l1_sums[i];
  auto l2_sums = channel_sums(l2);
  for (std::size_t i = 0; i < l2.size(); ++i) {
    const ChannelTag& t = l2[i].tag;
    if (t.parent_orientation != ch.motion) continue;  // lineage through R
    if (t.orientation_index == ch.static_nearest) agg.layer2_static += l2_sums[i];
    for (int f : ch.flicker)
      if (t.orientation_index == f) agg.layer2_flicker += l2_sums[i];
  }
  return agg;
}

void criterion_pattern_discrimination() {
  PatternChannels ch = pattern_channels();

  PatternSpec spec;
  spec.dims = {64, 64, 64};
  spec.wavelength = 8.0;
  spec.speed = 1.0;
  spec.period = 16;

  spec.kind = PatternKind::kMoveStop;
  LayerAggregates ms = pattern_aggregates(move_stop(spec), ch);
  spec.kind = PatternKind::kPicketFence;
  LayerAggregates pf = pattern_aggregates(picket_fence(spec), ch);

  double rel = std::abs(ms.layer1_motion - pf.layer1_motion) /
               std::max(ms.layer1_motion, pf.layer1_motion);
  report(7, "layer-1 rightward aggregates agree within 10%", rel <= 0.10,
         "rel diff " + std::to_string(rel));
  report(7, "layer-2 move-stop: flicker exceeds static",
         ms.layer2_flicker > ms.layer2_static,
         "F " + std::to_string(ms.layer2_flicker) + " vs S " +
             std::to_string(ms.layer2_static));
  report(7, "layer-2 picket-fence: static exceeds flicker",
         pf.layer2_static > pf.layer2_flicker,
         "S " + std::to_string(pf.layer2_static) + " vs F " +
             std::to_string(pf.layer2_flicker));
}

// --- criterion 8: end-to-end classification ----------------------------------

std::vector<ClassSpec> four_class_spec() {
  PatternSpec base;
  base.dims = {48, 48, 48};
  base.wavelength = 8.0;
  base.speed = 1.0;
  base.period = 16;
  base.noise_std = 0.02;
  JitterSpec jitter{3.14, 0.1, 1.0};

  std::vector<ClassSpec> classes;
  ClassSpec right{"rightward", base, 6, jitter};
  classes.push_back(right);
  ClassSpec left = right;
  left.label = "leftward";
  left.base.speed = -1.0;
  classes.push_back(left);
  ClassSpec stop = right;
  stop.label = "move_stop";
  stop.base.kind = PatternKind::kMoveStop;
  classes.push_back(stop);
  ClassSpec fence = right;
  fence.label = "picket_fence";
  fence.base.kind = PatternKind::kPicketFence;
  classes.push_back(fence);
  return classes;
}

void criterion_classification() {
  auto dataset = make_dataset(four_class_spec(), 1234);
  NetworkConfig cfg;
  cfg.threads = worker_threads();
  std::vector<LabeledDescriptor> features;
  for (const auto& sample : dataset) {
    LabeledDescriptor ld;
    ld.descriptor = extract_descriptor(forward(sample.volume, cfg));
    ld.label = sample.label;
    ld.sample_id = sample.sample_id;
    features.push_back(std::move(ld));
  }
  EvalReport r = loo_eval(features, Classifier::kNearestNeighbor);
  report(8, "4-class synthetic leave-one-out NN accuracy = 100%", r.accuracy == 1.0,
         "accuracy " + std::to_string(r.accuracy));
}

// --- criterion 9: CLI determinism --------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism(const std::string& cli) {
  if (cli.empty()) {
    report(9, "descriptor files identical across --threads 1/4/8", false,
           "no --cli path given");
    return;
  }
  fs::path dir = fs::temp_directory_path() / "soe_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream spec(dir / "spec.json");
    spec << R"({"seed": 99, "classes": [
      {"label": "a", "kind": "moving_sinusoid", "count": 2,
       "dims": [24, 24, 24], "noise_std": 0.05, "jitter": {"phase": 1.0}}]})";
  }
  auto run = [&](const std::string& args) {
    std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  bool ok = run("synth --spec " + (dir / "spec.json").string() + " --out " +
                (dir / "data").string()) == 0;
  for (int threads : {1, 4, 8})
    ok = ok && run("extract --input " + (dir / "data").string() + " --out " +
                   (dir / ("t" + std::to_string(threads))).string() +
                   " --threads " + std::to_string(threads)) == 0;
  // second run at one thread count checks rerun stability too
  ok = ok && run("extract --input " + (dir / "data").string() + " --out " +
                 (dir / "t4b").string() + " --threads 4") == 0;
  if (ok)
    for (const char* name : {"a_0.soed", "a_1.soed"}) {
      std::string ref = slurp(dir / "t1" / name);
      ok = ok && !ref.empty();
      for (const char* variant : {"t4", "t8", "t4b"})
        ok = ok && slurp(dir / variant / name) == ref;
    }
  report(9, "descriptor files identical across --threads 1/4/8 and reruns", ok);
}

// --- criterion 10: Dyntex-shaped auto-selection ------------------------------

void criterion_dyntex_plan() {
  PatternSpec spec;
  spec.dims = {50, 50, 50};
  spec.noise_std = 0.05;
  spec.seed = 77;
  NetworkConfig cfg;
  cfg.threads = worker_threads();
  FeatureHierarchy h = forward(moving_sinusoid(spec), cfg);
  Descriptor d = extract_descriptor(h);
  bool ok = h.plan.scale_count == 1 && h.plan.layers_per_scale == std::vector<int>{2} &&
            d.size() == 400;
  report(10, "50^3 input auto-selects |sigma|=1, K=2, D=400", ok,
         "scales " + std::to_string(h.plan.scale_count) + " K " +
             (h.plan.layers_per_scale.empty()
                  ? std::string("-")
                  : std::to_string(h.plan.layers_per_scale[0])) +
             " D " + std::to_string(d.size()));
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  criterion_steerability();
  criterion_channel_ledger();
  criterion_rectification();
  criterion_normalization_bounds();
  criterion_invariance();
  criterion_energy_decay();
  criterion_pattern_discrimination();
  criterion_classification();
  criterion_determinism(cli);
  criterion_dyntex_plan();

  std::cout << (g_failures == 0 ? "all criteria passed"
                                : std::to_string(g_failures) + " criterion check(s) failed")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
