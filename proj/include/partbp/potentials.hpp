#pragma once

#include <memory>

#include "partbp/kinematics.hpp"
#include "partbp/observation.hpp"
#include "partbp/render.hpp"

namespace partbp {

// Factors below -700 in log space are floored so exp() stays nonzero.
constexpr double kLogFloor = -700.0;

enum class UnaryMode { kRgb, kRgbd };

struct PotentialConfig {
  double depth_max_error = 0.5;    // meters, charged when depth images do not overlap
  double pairwise_scale = 10.0;    // 1 / units of articulation violation
  double heatmap_threshold = 0.5;  // heat level that counts as detection
};

// Soft Jaccard overlap between the rendered mask of `hypothesis` and the
// heatmap: sum of heat under the mask over (|mask| + |heat| - overlap).
double unary_rgb(const TriangleMesh& mesh, const Pose& hypothesis, const Heatmap& heatmap,
                 const PinholeCamera& cam);

// exp(-mean |rendered - observed|) over pixels where both depths are
// nonzero; exp(-depth_max_error) when they never overlap.
double unary_depth(const TriangleMesh& mesh, const Pose& hypothesis, const DepthImage& masked,
                   const PinholeCamera& cam, const PotentialConfig& cfg);

// Joint-limit compatibility of a child hypothesis with a parent hypothesis.
// 1 exactly on the joint's feasible manifold, exponential falloff outside.
double pairwise(const Pose& parent_hyp, const Pose& child_hyp, const Joint& joint,
                const PotentialConfig& cfg);
double log_pairwise(const Pose& parent_hyp, const Pose& child_hyp, const Joint& joint,
                    const PotentialConfig& cfg);

// off-manifold residual plus the distance of q_hat outside the limits.
double articulation_violation(const Pose& parent_hyp, const Pose& child_hyp,
                              const Joint& joint);

// Per-part scorer that keeps the rendered hypothesis around so the RGB and
// depth terms share one rasterization. Heatmap mass and the masked depth
// are precomputed once per observation.
class PartScorer {
 public:
  PartScorer(const Part& part, const Heatmap& heatmap, const DepthImage& depth,
             const PinholeCamera& cam, const PotentialConfig& cfg, UnaryMode mode);

  double log_unary(const Pose& hypothesis);
  double log_rgb(const Pose& hypothesis);
  double log_depth(const Pose& hypothesis);

  const DepthImage& masked() const { return masked_; }
  UnaryMode mode() const { return mode_; }

 private:
  struct Terms {
    double log_rgb;
    double log_depth;
  };
  Terms score(const Pose& hypothesis);

  const Part& part_;
  const Heatmap& heatmap_;
  PotentialConfig cfg_;
  UnaryMode mode_;
  DepthImage masked_;
  double heat_total_;
  HypothesisRenderer renderer_;
};

}  // namespace partbp
