#pragma once

#include <memory>
#include <span>
#include <vector>

#include "partbp/potentials.hpp"
#include "partbp/random.hpp"
#include "partbp/result.hpp"

namespace partbp {

struct ParticleSet {
  std::vector<Pose> particles;
  std::vector<double> log_weights;

  size_t size() const { return particles.size(); }
};

struct BeliefState {
  std::vector<ParticleSet> parts;
  int iteration = 0;
};

struct AugmentConfig {
  bool enabled = false;
  double alpha = 1.5;        // pool grows to ceil(alpha * N) before resampling
  double unary_frac = 0.05;  // fixed share of the added particles
  double pair_step = 0.10;   // pairwise share grows by this ...
  int pair_every = 5;        // ... every this many iterations ...
  double pair_max = 0.90;    // ... up to this cap; random absorbs the rest
  double rand_trans_sigma = 0.05;
  double rand_rot_sigma = 0.5;
};

struct InferenceConfig {
  int n_particles = 300;
  int n_iterations = 100;
  double jitter_trans_sigma = 0.005;  // meters, applied to survivors each iteration
  double jitter_rot_sigma = 0.05;     // radians
  UnaryMode mode = UnaryMode::kRgbd;
  bool use_messages = true;  // false degenerates to independent per-part filters
  AugmentConfig augment;
  uint64_t seed = 0;
};

struct ProposalMix {
  double unary = 0.0;
  double rand = 0.0;
  double pair = 0.0;
};

// Proposal shares for the added particles at a given iteration.
ProposalMix augment_schedule(const AugmentConfig& cfg, int iteration);

// Sum-product message from a sender particle set to one receiver
// hypothesis: log sum_j psi(receiver, sender_j) * phi(sender_j).
// `receiver_is_parent` fixes which end of the joint the receiver occupies.
double log_message(const Pose& receiver, bool receiver_is_parent, const ParticleSet& sender,
                   std::span<const double> sender_log_unary, const Joint& joint,
                   const PotentialConfig& cfg);

// Systematic (low-variance) resampling of n_out particles. Output weights
// are uniform. All-zero weights fall back to a uniform draw and set
// *degenerate when provided.
ParticleSet systematic_resample(const ParticleSet& set, size_t n_out, RandomStream& rng,
                                bool* degenerate = nullptr);

class BeliefPropagation {
 public:
  BeliefPropagation(const ArticulatedModel& model, const Observation& obs,
                    const InferenceConfig& icfg, const PotentialConfig& pcfg);

  BeliefState initialize();
  void jitter(BeliefState& state, int iteration);
  void augment(BeliefState& state, int iteration);
  // Unaries, messages, and weight normalization; records diagnostics and
  // the per-part argmax particle.
  void reweight(BeliefState& state);
  void resample(BeliefState& state, int iteration);

  EstimationResult run();

  bool part_observed(int part) const { return observed_[part]; }
  const std::vector<std::vector<double>>& last_log_unaries() const { return log_unaries_; }
  const std::vector<IterationDiag>& diagnostics() const { return diagnostics_; }

 private:
  struct BestParticle {
    Pose pose;
    double log_weight = 0.0;
  };

  void compute_unaries(const BeliefState& state);
  Pose sample_heat_pose(int part, RandomStream& rng) const;
  Pose sample_compatible_pose(int part, int edge, const ParticleSet& neighbor,
                              RandomStream& rng) const;
  void finalize_occluded(std::vector<Pose>& mle) const;

  const ArticulatedModel& model_;
  const Observation& obs_;
  InferenceConfig icfg_;
  PotentialConfig pcfg_;

  std::vector<std::unique_ptr<PartScorer>> scorers_;
  std::vector<bool> observed_;
  // Heat-weighted pixel CDF per part plus a depth fallback for no-return pixels.
  std::vector<std::vector<std::pair<double, int>>> heat_cdf_;
  std::vector<double> fallback_depth_;

  std::vector<std::vector<double>> log_unaries_;
  std::vector<BestParticle> best_;
  std::vector<IterationDiag> diagnostics_;
  ProposalMix current_mix_;
};

// Full pipeline: initialize, iterate (jitter / augment / reweight /
// resample), then per-part MLE from the final reweight. Parts without any
// observation support are rebuilt on the joint manifold of their nearest
// observed neighbour's estimate.
EstimationResult run_inference(const ArticulatedModel& model, const Observation& obs,
                               const InferenceConfig& icfg, const PotentialConfig& pcfg);

}  // namespace partbp
