#include "soe/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace soe {
namespace {

std::vector<double> l1_normalized(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0) throw std::invalid_argument("bhattacharyya: negative entry");
    sum += x;
  }
  std::vector<double> out(v.size(), 0.0);
  if (sum > 0.0)
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / sum;
  return out;
}

}  // namespace

double bhattacharyya(const std::vector<double>& f, const std::vector<double>& g) {
  if (f.size() != g.size())
    throw std::invalid_argument("bhattacharyya: length mismatch (" +
                                std::to_string(f.size()) + " vs " +
                                std::to_string(g.size()) + ")");
  std::vector<double> p = l1_normalized(f);
  std::vector<double> q = l1_normalized(g);
  double bc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) bc += std::sqrt(p[i] * q[i]);
  return bc;
}

std::string nn_classify(const Descriptor& query,
                        const std::vector<LabeledDescriptor>& gallery) {
  if (gallery.empty()) throw std::invalid_argument("nn_classify: empty gallery");
  std::size_t best = 0;
  double best_sim = -1.0;
  for (std::size_t i = 0; i < gallery.size(); ++i) {
    double sim = bhattacharyya(query.values, gallery[i].descriptor.values);
    if (sim > best_sim) {
      best_sim = sim;
      best = i;
    }
  }
  return gallery[best].label;
}

std::vector<ClassCenter> class_centers(const std::vector<LabeledDescriptor>& gallery) {
  std::map<std::string, std::pair<std::vector<double>, int>> acc;
  for (const auto& g : gallery) {
    auto p = l1_normalized(g.descriptor.values);
    auto& [sum, count] = acc[g.label];
    if (sum.empty()) sum.assign(p.size(), 0.0);
    if (sum.size() != p.size())
      throw std::invalid_argument("class_centers: descriptor length mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) sum[i] += p[i];
    ++count;
  }
  std::vector<ClassCenter> centers;
  for (auto& [label, sc] : acc) {
    for (double& v : sc.first) v /= sc.second;
    centers.push_back({label, l1_normalized(sc.first)});
  }
  return centers;
}

std::string ncc_classify(const Descriptor& query,
                         const std::vector<ClassCenter>& centers) {
  if (centers.empty()) throw std::invalid_argument("ncc_classify: no class centers");
  std::size_t best = 0;
  double best_sim = -1.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    double sim = bhattacharyya(query.values, centers[i].center);
    if (sim > best_sim) {
      best_sim = sim;
      best = i;
    }
  }
  return centers[best].label;
}

EvalReport loo_eval(const std::vector<LabeledDescriptor>& dataset,
                    Classifier classifier) {
  if (dataset.size() < 2)
    throw std::invalid_argument("loo_eval: need at least 2 samples");
  EvalReport report;
  for (const auto& d : dataset) {
    if (d.label.empty()) throw std::invalid_argument("loo_eval: empty label");
    if (std::find(report.classes.begin(), report.classes.end(), d.label) ==
        report.classes.end())
      report.classes.push_back(d.label);
  }
  std::sort(report.classes.begin(), report.classes.end());
  auto class_index = [&](const std::string& label) {
    return static_cast<std::size_t>(
        std::find(report.classes.begin(), report.classes.end(), label) -
        report.classes.begin());
  };
  report.confusion.assign(report.classes.size(),
                          std::vector<int>(report.classes.size(), 0));
  int correct = 0;
  for (std::size_t held = 0; held < dataset.size(); ++held) {
    std::vector<LabeledDescriptor> rest;
    rest.reserve(dataset.size() - 1);
    for (std::size_t i = 0; i < dataset.size(); ++i)
      if (i != held) rest.push_back(dataset[i]);
    SampleDecision dec;
    dec.sample_id = dataset[held].sample_id;
    dec.true_label = dataset[held].label;
    if (classifier == Classifier::kNearestNeighbor) {
      std::size_t best = 0;
      double best_sim = -1.0;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        double sim = bhattacharyya(dataset[held].descriptor.values,
                                   rest[i].descriptor.values);
        if (sim > best_sim) {
          best_sim = sim;
          best = i;
        }
      }
      dec.predicted_label = rest[best].label;
      dec.nearest_id = rest[best].sample_id;
      dec.similarity = best_sim;
    } else {
      auto centers = class_centers(rest);
      std::size_t best = 0;
      double best_sim = -1.0;
      for (std::size_t i = 0; i < centers.size(); ++i) {
        double sim = bhattacharyya(dataset[held].descriptor.values,
                                   centers[i].center);
        if (sim > best_sim) {
          best_sim = sim;
          best = i;
        }
      }
      dec.predicted_label = centers[best].label;
      dec.similarity = best_sim;
    }
    report.confusion[class_index(dec.true_label)][class_index(dec.predicted_label)]++;
    if (dec.predicted_label == dec.true_label) ++correct;
    report.decisions.push_back(std::move(dec));
  }
  report.accuracy = static_cast<double>(correct) / dataset.size();
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["accuracy"] = report.accuracy;
  j["classes"] = report.classes;
  j["confusion"] = report.confusion;
  auto& samples = j["samples"] = nlohmann::json::array();
  for (const auto& d : report.decisions) {
    nlohmann::json s;
    s["id"] = d.sample_id;
    s["label"] = d.true_label;
    s["predicted"] = d.predicted_label;
    if (!d.nearest_id.empty()) s["nearest"] = d.nearest_id;
    s["similarity"] = d.similarity;
    samples.push_back(std::move(s));
  }
  return j.dump(2);
}

}  // namespace soe
