#include "partbp/potentials.hpp"

#include <algorithm>
#include <cmath>

namespace partbp {

namespace {

double clamp_log(double v) { return std::max(v, kLogFloor); }

struct OverlapSums {
  double heat_under_mask = 0.0;
  size_t mask_count = 0;
  double abs_depth_err = 0.0;
  size_t depth_overlap = 0;
};

OverlapSums accumulate(const HypothesisRenderer& renderer, const RenderPatch& patch,
                       const Heatmap& heatmap, const DepthImage& masked) {
  OverlapSums s;
  for (int y = patch.y0; y < patch.y1; ++y) {
    for (int x = patch.x0; x < patch.x1; ++x) {
      float z = renderer.depth_at(x, y);
      if (z <= 0.0f) continue;
      ++s.mask_count;
      s.heat_under_mask += heatmap.at(x, y);
      float obs = masked.at(x, y);
      if (obs > 0.0f) {
        s.abs_depth_err += std::abs(static_cast<double>(z) - obs);
        ++s.depth_overlap;
      }
    }
  }
  return s;
}

double jaccard(const OverlapSums& s, double heat_total) {
  double denom = static_cast<double>(s.mask_count) + heat_total - s.heat_under_mask;
  if (denom <= 0.0) return 0.0;  // empty mask against empty heatmap
  return s.heat_under_mask / denom;
}

double depth_score_log(const OverlapSums& s, const PotentialConfig& cfg) {
  if (s.depth_overlap == 0) return -cfg.depth_max_error;
  return -s.abs_depth_err / static_cast<double>(s.depth_overlap);
}

}  // namespace

double unary_rgb(const TriangleMesh& mesh, const Pose& hypothesis, const Heatmap& heatmap,
                 const PinholeCamera& cam) {
  HypothesisRenderer renderer(cam);
  RenderPatch patch = renderer.draw(mesh, hypothesis);
  DepthImage no_depth(cam.width, cam.height);
  OverlapSums s = accumulate(renderer, patch, heatmap, no_depth);
  return jaccard(s, heatmap.total());
}

double unary_depth(const TriangleMesh& mesh, const Pose& hypothesis, const DepthImage& masked,
                   const PinholeCamera& cam, const PotentialConfig& cfg) {
  HypothesisRenderer renderer(cam);
  RenderPatch patch = renderer.draw(mesh, hypothesis);
  Heatmap no_heat(cam.width, cam.height);
  OverlapSums s = accumulate(renderer, patch, no_heat, masked);
  return std::exp(depth_score_log(s, cfg));
}

double articulation_violation(const Pose& parent_hyp, const Pose& child_hyp,
                              const Joint& joint) {
  JointResidual r = joint_residual(parent_hyp, joint, child_hyp);
  double overshoot = 0.0;
  if (joint.has_limits()) {
    if (r.q_hat < joint.lower) {
      overshoot = joint.lower - r.q_hat;
    } else if (r.q_hat > joint.upper) {
      overshoot = r.q_hat - joint.upper;
    }
  }
  return r.off_axis + overshoot;
}

double log_pairwise(const Pose& parent_hyp, const Pose& child_hyp, const Joint& joint,
                    const PotentialConfig& cfg) {
  return clamp_log(-cfg.pairwise_scale * articulation_violation(parent_hyp, child_hyp, joint));
}

double pairwise(const Pose& parent_hyp, const Pose& child_hyp, const Joint& joint,
                const PotentialConfig& cfg) {
  return std::exp(log_pairwise(parent_hyp, child_hyp, joint, cfg));
}

PartScorer::PartScorer(const Part& part, const Heatmap& heatmap, const DepthImage& depth,
                       const PinholeCamera& cam, const PotentialConfig& cfg, UnaryMode mode)
    : part_(part),
      heatmap_(heatmap),
      cfg_(cfg),
      mode_(mode),
      masked_(masked_depth(heatmap, depth, cfg.heatmap_threshold)),
      heat_total_(heatmap.total()),
      renderer_(cam) {}

PartScorer::Terms PartScorer::score(const Pose& hypothesis) {
  RenderPatch patch = renderer_.draw(part_.mesh, hypothesis);
  OverlapSums s = accumulate(renderer_, patch, heatmap_, masked_);
  double rgb = jaccard(s, heat_total_);
  return {clamp_log(std::log(rgb)), clamp_log(depth_score_log(s, cfg_))};
}

double PartScorer::log_unary(const Pose& hypothesis) {
  Terms t = score(hypothesis);
  return mode_ == UnaryMode::kRgb ? t.log_rgb : t.log_rgb + t.log_depth;
}

double PartScorer::log_rgb(const Pose& hypothesis) { return score(hypothesis).log_rgb; }

double PartScorer::log_depth(const Pose& hypothesis) { return score(hypothesis).log_depth; }

}  // namespace partbp
