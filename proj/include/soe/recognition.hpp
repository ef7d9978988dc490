#pragma once

#include <string>
#include <vector>

#include "soe/network.hpp"

namespace soe {

struct LabeledDescriptor {
  Descriptor descriptor;
  std::string label;
  std::string sample_id;
};

enum class Classifier { kNearestNeighbor, kNearestClassCenter };

struct SampleDecision {
  std::string sample_id;
  std::string true_label;
  std::string predicted_label;
  std::string nearest_id;  // NN only
  double similarity = 0.0;
};

struct EvalReport {
  double accuracy = 0.0;
  std::vector<std::string> classes;
  std::vector<std::vector<int>> confusion;  // [true][predicted]
  std::vector<SampleDecision> decisions;
};

/// Bhattacharyya coefficient of two non-negative vectors, each l1-
/// renormalized internally. 1 for identical distributions, 0 for disjoint
/// support or when either vector is all-zero.
double bhattacharyya(const std::vector<double>& f, const std::vector<double>& g);

/// Label of the gallery entry with maximal Bhattacharyya similarity; ties
/// go to the lowest gallery index.
std::string nn_classify(const Descriptor& query,
                        const std::vector<LabeledDescriptor>& gallery);

struct ClassCenter {
  std::string label;
  std::vector<double> center;  // l1-normalized mean of l1-normalized members
};

std::vector<ClassCenter> class_centers(const std::vector<LabeledDescriptor>& gallery);

std::string ncc_classify(const Descriptor& query,
                         const std::vector<ClassCenter>& centers);

/// Leave-one-out evaluation; for NCC the centers are recomputed with the
/// held-out sample excluded.
EvalReport loo_eval(const std::vector<LabeledDescriptor>& dataset,
                    Classifier classifier);

std::string report_to_json(const EvalReport& report);

}  // namespace soe
