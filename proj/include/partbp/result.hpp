#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "partbp/geometry.hpp"

namespace partbp {

// Per-iteration, per-part bookkeeping emitted by the estimators.
struct IterationDiag {
  int iteration = 0;
  int part = 0;
  double ess = 0.0;
  double best_log_weight = 0.0;
  double frac_unary = 0.0;
  double frac_rand = 0.0;
  double frac_pair = 0.0;
  int pool_size = 0;
};

struct EstimationResult {
  std::string method;
  uint64_t seed = 0;
  int particles = 0;
  int iterations = 0;
  double alpha = 0.0;  // 0 when augmentation is off
  double runtime_s = 0.0;
  std::vector<std::string> part_names;
  std::vector<Pose> poses;
  std::vector<double> log_weights;
  std::vector<IterationDiag> diagnostics;
};

}  // namespace partbp
