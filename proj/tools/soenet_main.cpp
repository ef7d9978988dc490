#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "soe/descriptor_io.hpp"
#include "soe/image_io.hpp"
#include "soe/network.hpp"
#include "soe/recognition.hpp"
#include "soe/synthgen.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

soe::PatternKind kind_from_string(const std::string& s) {
  if (s == "moving_sinusoid") return soe::PatternKind::kMovingSinusoid;
  if (s == "move_stop") return soe::PatternKind::kMoveStop;
  if (s == "picket_fence") return soe::PatternKind::kPicketFence;
  throw std::runtime_error("unknown pattern kind: " + s);
}

std::vector<soe::ClassSpec> parse_synth_spec(const fs::path& path,
                                             std::uint64_t& seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
  std::vector<soe::ClassSpec> classes;
  for (const auto& c : j.at("classes")) {
    soe::ClassSpec cls;
    cls.label = c.at("label").get<std::string>();
    cls.count = c.value("count", 2);
    soe::PatternSpec& p = cls.base;
    p.kind = kind_from_string(c.at("kind").get<std::string>());
    p.wavelength = c.value("wavelength", p.wavelength);
    if (c.contains("direction")) {
      p.direction[0] = c["direction"][0].get<double>();
      p.direction[1] = c["direction"][1].get<double>();
    }
    p.speed = c.value("speed", p.speed);
    p.period = c.value("period", p.period);
    p.fence_duty = c.value("fence_duty", p.fence_duty);
    if (c.contains("dims")) {
      p.dims[0] = c["dims"][0].get<int>();
      p.dims[1] = c["dims"][1].get<int>();
      p.dims[2] = c["dims"][2].get<int>();
    }
    p.phase = c.value("phase", p.phase);
    p.noise_std = c.value("noise_std", p.noise_std);
    if (c.contains("jitter")) {
      const auto& jj = c["jitter"];
      cls.jitter.phase = jj.value("phase", 0.0);
      cls.jitter.speed = jj.value("speed", 0.0);
      cls.jitter.wavelength = jj.value("wavelength", 0.0);
    }
    classes.push_back(std::move(cls));
  }
  return classes;
}

void write_sequence_frames(const fs::path& dir, const soe::Volume& v) {
  fs::create_directories(dir);
  for (int t = 0; t < v.nt; ++t) {
    soe::Frame f;
    f.width = v.nx;
    f.height = v.ny;
    f.pixels.resize(static_cast<std::size_t>(v.nx) * v.ny);
    for (int y = 0; y < v.ny; ++y)
      for (int x = 0; x < v.nx; ++x)
        f.pixels[static_cast<std::size_t>(y) * v.nx + x] = v.at(x, y, t);
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05d.pgm", t);
    soe::write_pgm(dir / name, f);
  }
}

int cmd_synth(const fs::path& spec_path, const fs::path& out_dir,
              std::uint64_t seed_flag, bool seed_given) {
  std::uint64_t seed = 0;
  auto classes = parse_synth_spec(spec_path, seed);
  if (seed_given) seed = seed_flag;
  auto dataset = soe::make_dataset(classes, seed);
  fs::create_directories(out_dir);
  std::ofstream manifest(out_dir / "manifest.csv");
  manifest << "path,label\n";
  for (const auto& sample : dataset) {
    write_sequence_frames(out_dir / sample.sample_id, sample.volume);
    manifest << sample.sample_id << "," << sample.label << "\n";
    std::cout << "synth " << sample.sample_id << " dims " << sample.volume.nx
              << "x" << sample.volume.ny << "x" << sample.volume.nt << "\n";
  }
  return kExitOk;
}

// A sequence is a subdirectory of frames, a .soev file, or (when the input
// directory itself holds frames) the directory itself.
std::vector<fs::path> discover_sequences(const fs::path& input) {
  std::vector<fs::path> seqs;
  if (fs::is_regular_file(input)) {
    seqs.push_back(input);
    return seqs;
  }
  if (!fs::is_directory(input))
    throw std::runtime_error("input does not exist: " + input.string());
  bool has_frames = false;
  for (const auto& e : fs::directory_iterator(input)) {
    if (e.is_directory()) {
      seqs.push_back(e.path());
    } else if (e.is_regular_file()) {
      auto ext = e.path().extension().string();
      if (ext == ".soev") seqs.push_back(e.path());
      if (ext == ".pgm" || ext == ".png") has_frames = true;
    }
  }
  if (seqs.empty() && has_frames) seqs.push_back(input);
  std::sort(seqs.begin(), seqs.end());
  return seqs;
}

int cmd_extract(const fs::path& input, const fs::path& config_path,
                const fs::path& out_dir, int threads) {
  soe::NetworkConfig cfg;
  if (!config_path.empty()) cfg = soe::load_config(config_path);
  cfg.threads = threads;
  auto sequences = discover_sequences(input);
  if (sequences.empty()) {
    std::cerr << "error: no sequences found in " << input << "\n";
    return kExitData;
  }
  fs::create_directories(out_dir);
  int written = 0;
  for (const auto& seq : sequences) {
    std::string name = fs::is_directory(seq) ? seq.filename().string()
                                             : seq.stem().string();
    try {
      soe::Volume v = soe::load_volume(soe::open_source(seq));
      auto hierarchy = soe::forward(v, cfg);
      auto d = soe::extract_descriptor(hierarchy);
      soe::write_descriptor(out_dir / (name + ".soed"), d);
      std::cout << name << ": dims " << v.nx << "x" << v.ny << "x" << v.nt
                << " scales=" << hierarchy.plan.scale_count << " K=[";
      for (std::size_t i = 0; i < hierarchy.plan.layers_per_scale.size(); ++i)
        std::cout << (i ? "," : "") << hierarchy.plan.layers_per_scale[i];
      std::cout << "] D=" << d.size() << "\n";
      ++written;
    } catch (const std::invalid_argument& e) {
      std::cerr << "warning: skipping " << name << ": " << e.what() << "\n";
    }
  }
  if (written == 0) {
    std::cerr << "error: no sequence could be processed\n";
    return kExitData;
  }
  return kExitOk;
}

std::vector<soe::LabeledDescriptor> load_features(const fs::path& features) {
  std::vector<soe::LabeledDescriptor> out;
  auto load_one = [&](const fs::path& p, const std::string& label) {
    soe::LabeledDescriptor ld;
    ld.descriptor = soe::read_descriptor(p);
    ld.label = label;
    ld.sample_id = p.stem().string();
    out.push_back(std::move(ld));
  };
  fs::path manifest;
  if (fs::is_regular_file(features) && features.extension() == ".csv")
    manifest = features;
  else if (fs::is_directory(features) && fs::exists(features / "manifest.csv"))
    manifest = features / "manifest.csv";
  if (!manifest.empty()) {
    std::ifstream in(manifest);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest.string());
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto comma = line.rfind(',');
      if (comma == std::string::npos)
        throw std::runtime_error("bad manifest line: " + line);
      fs::path p = manifest.parent_path() / line.substr(0, comma);
      std::string label = line.substr(comma + 1);
      if (!label.empty() && label.back() == '\r') label.pop_back();
      if (fs::is_directory(p)) p = fs::path(p.string() + ".soed");
      if (p.extension() != ".soed") p += ".soed";
      load_one(p, label);
    }
  } else if (fs::is_directory(features)) {
    // labels inferred from subdirectory names
    for (const auto& sub : fs::directory_iterator(features)) {
      if (!sub.is_directory()) continue;
      for (const auto& f : fs::recursive_directory_iterator(sub.path()))
        if (f.is_regular_file() && f.path().extension() == ".soed")
          load_one(f.path(), sub.path().filename().string());
    }
  } else {
    throw std::runtime_error("features path not found: " + features.string());
  }
  std::sort(out.begin(), out.end(),
            [](const soe::LabeledDescriptor& a, const soe::LabeledDescriptor& b) {
              return a.sample_id < b.sample_id;
            });
  for (const auto& ld : out)
    if (ld.descriptor.size() != out[0].descriptor.size())
      throw std::runtime_error("descriptor length mismatch: " + out[0].sample_id +
                               " has " + std::to_string(out[0].descriptor.size()) +
                               ", " + ld.sample_id + " has " +
                               std::to_string(ld.descriptor.size()));
  return out;
}

int cmd_eval(const fs::path& features, const std::string& classifier,
             const fs::path& report_path) {
  auto dataset = load_features(features);
  soe::Classifier c = classifier == "ncc" ? soe::Classifier::kNearestClassCenter
                                          : soe::Classifier::kNearestNeighbor;
  auto report = soe::loo_eval(dataset, c);
  std::ofstream out(report_path);
  if (!out) throw std::runtime_error("cannot write report: " + report_path.string());
  out << soe::report_to_json(report) << "\n";
  std::cout << "samples=" << dataset.size() << " classes=" << report.classes.size()
            << " accuracy=" << report.accuracy << "\n";
  return kExitOk;
}

int cmd_inspect(const fs::path& descriptor_path) {
  auto d = soe::read_descriptor(descriptor_path);
  std::cout << soe::describe_descriptor(d);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical spatiotemporal oriented-energy features for video volumes"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dynamic-texture dataset");
  std::string synth_spec, synth_out;
  std::uint64_t synth_seed = 0;
  synth->add_option("--spec", synth_spec, "JSON dataset spec")->required();
  synth->add_option("--out", synth_out, "output directory")->required();
  auto* seed_opt = synth->add_option("--seed", synth_seed, "override the spec seed");

  auto* extract = app.add_subcommand("extract", "Extract descriptors from video sequences");
  std::string ex_input, ex_config, ex_out;
  int ex_threads = 1;
  extract->add_option("--input", ex_input, "sequence directory or .soev file")->required();
  extract->add_option("--config", ex_config, "pipeline config file (key=value)");
  extract->add_option("--out", ex_out, "output directory")->required();
  extract->add_option("--threads", ex_threads, "worker threads")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "Leave-one-out evaluation of a descriptor set");
  std::string ev_features, ev_classifier = "nn", ev_report;
  eval->add_option("--features", ev_features, "descriptor directory or manifest.csv")->required();
  eval->add_option("--classifier", ev_classifier, "nn or ncc")
      ->check(CLI::IsMember({"nn", "ncc"}));
  eval->add_option("--report", ev_report, "JSON report output path")->required();

  auto* inspect = app.add_subcommand("inspect", "Print the channel table of a descriptor file");
  std::string in_descriptor;
  inspect->add_option("--descriptor", in_descriptor, "descriptor file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed())
      return cmd_synth(synth_spec, synth_out, synth_seed, seed_opt->count() > 0);
    if (extract->parsed()) return cmd_extract(ex_input, ex_config, ex_out, ex_threads);
    if (eval->parsed()) return cmd_eval(ev_features, ev_classifier, ev_report);
    if (inspect->parsed()) return cmd_inspect(in_descriptor);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
