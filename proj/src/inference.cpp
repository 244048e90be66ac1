#include "partbp/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "partbp/errors.hpp"
#include "partbp/render.hpp"

namespace partbp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> terms) {
  double m = kNegInf;
  for (double t : terms) m = std::max(m, t);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

double median(std::vector<float>& values) {
  if (values.empty()) return 0.0;
  size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  return values[mid];
}

}  // namespace

ProposalMix augment_schedule(const AugmentConfig& cfg, int iteration) {
  ProposalMix mix;
  mix.unary = cfg.unary_frac;
  mix.pair = std::min(cfg.pair_max, cfg.pair_step * (iteration / cfg.pair_every));
  mix.rand = 1.0 - mix.unary - mix.pair;
  return mix;
}

double log_message(const Pose& receiver, bool receiver_is_parent, const ParticleSet& sender,
                   std::span<const double> sender_log_unary, const Joint& joint,
                   const PotentialConfig& cfg) {
  static thread_local std::vector<double> terms;
  terms.resize(sender.size());
  for (size_t j = 0; j < sender.size(); ++j) {
    double psi = receiver_is_parent
                     ? log_pairwise(receiver, sender.particles[j], joint, cfg)
                     : log_pairwise(sender.particles[j], receiver, joint, cfg);
    terms[j] = psi + sender_log_unary[j];
  }
  return std::max(log_sum_exp(terms), kLogFloor);
}

ParticleSet systematic_resample(const ParticleSet& set, size_t n_out, RandomStream& rng,
                                bool* degenerate) {
  const size_t n = set.size();
  if (n == 0 || n_out == 0) throw std::invalid_argument("resample: empty particle set");

  std::vector<double> weights(n);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    weights[i] = std::exp(set.log_weights[i]);
    total += weights[i];
  }
  if (degenerate) *degenerate = false;
  if (total <= 0.0 || !std::isfinite(total)) {
    std::fprintf(stderr, "partbp: degenerate particle weights, resampling uniformly\n");
    if (degenerate) *degenerate = true;
    std::fill(weights.begin(), weights.end(), 1.0);
    total = static_cast<double>(n);
  }

  ParticleSet out;
  out.particles.reserve(n_out);
  double u = rng.uniform(0.0, 1.0);
  double cum = weights[0];
  size_t i = 0;
  for (size_t k = 0; k < n_out; ++k) {
    double target = (static_cast<double>(k) + u) / static_cast<double>(n_out) * total;
    while (target > cum && i + 1 < n) cum += weights[++i];
    out.particles.push_back(set.particles[i]);
  }
  out.log_weights.assign(n_out, -std::log(static_cast<double>(n_out)));
  return out;
}

BeliefPropagation::BeliefPropagation(const ArticulatedModel& model, const Observation& obs,
                                     const InferenceConfig& icfg, const PotentialConfig& pcfg)
    : model_(model), obs_(obs), icfg_(icfg), pcfg_(pcfg) {
  const size_t n_parts = model.parts.size();
  if (obs.heatmaps.size() != n_parts) {
    throw std::invalid_argument("observation has wrong heatmap count");
  }

  scorers_.reserve(n_parts);
  observed_.resize(n_parts);
  heat_cdf_.resize(n_parts);
  fallback_depth_.resize(n_parts);
  log_unaries_.resize(n_parts);
  best_.resize(n_parts);

  std::vector<float> all_depth;
  for (float v : obs.depth.values) {
    if (v > 0.0f) all_depth.push_back(v);
  }
  double scene_depth = all_depth.empty() ? 1.0 : median(all_depth);

  for (size_t p = 0; p < n_parts; ++p) {
    scorers_.push_back(std::make_unique<PartScorer>(model.parts[p], obs.heatmaps[p], obs.depth,
                                                    obs.camera, pcfg, icfg.mode));
    const Heatmap& h = obs.heatmaps[p];
    double cum = 0.0;
    std::vector<float> part_depth;
    for (size_t i = 0; i < h.values.size(); ++i) {
      if (h.values[i] >= pcfg.heatmap_threshold) {
        cum += h.values[i];
        heat_cdf_[p].emplace_back(cum, static_cast<int>(i));
        if (obs.depth.values[i] > 0.0f) part_depth.push_back(obs.depth.values[i]);
      }
    }
    observed_[p] = !heat_cdf_[p].empty();
    fallback_depth_[p] = part_depth.empty() ? scene_depth : median(part_depth);
  }
}

Pose BeliefPropagation::sample_heat_pose(int part, RandomStream& rng) const {
  const auto& cdf = heat_cdf_[part];
  double r = rng.uniform(0.0, cdf.back().first);
  auto it = std::lower_bound(cdf.begin(), cdf.end(), r,
                             [](const std::pair<double, int>& a, double v) { return a.first < v; });
  if (it == cdf.end()) --it;
  int pixel = it->second;
  int px = pixel % obs_.camera.width;
  int py = pixel / obs_.camera.width;
  float z = obs_.depth.values[pixel];
  Vec3 t = backproject(obs_.camera, px, py, z > 0.0f ? z : fallback_depth_[part]);
  return Pose(t, rng.uniform_rotation());
}

Pose BeliefPropagation::sample_compatible_pose(int part, int edge, const ParticleSet& neighbor,
                                               RandomStream& rng) const {
  const auto& e = model_.edges[edge];
  const Pose& nb = neighbor.particles[rng.index(neighbor.size())];
  double q = 0.0;
  if (e.joint.has_limits()) q = rng.uniform(e.joint.lower, e.joint.upper);
  return e.child == part ? child_pose(nb, e.joint, q) : parent_pose_from_child(nb, e.joint, q);
}

BeliefState BeliefPropagation::initialize() {
  const size_t n_parts = model_.parts.size();
  const size_t n = static_cast<size_t>(icfg_.n_particles);
  if (std::none_of(observed_.begin(), observed_.end(), [](bool b) { return b; })) {
    throw InitializationError("object not detected: all heatmaps empty above threshold");
  }

  BeliefState state;
  state.parts.resize(n_parts);
  std::vector<bool> filled(n_parts, false);

  for (size_t p = 0; p < n_parts; ++p) {
    if (!observed_[p]) continue;
    RandomStream rng(derive_seed(icfg_.seed, p, 0, rng_tag::kInit));
    auto& set = state.parts[p];
    set.particles.reserve(n);
    for (size_t i = 0; i < n; ++i) set.particles.push_back(sample_heat_pose(static_cast<int>(p), rng));
    set.log_weights.assign(n, -std::log(static_cast<double>(n)));
    filled[p] = true;
  }

  // Unobserved parts take joint-compatible poses from initialized
  // neighbours, sweeping outward until the tree is covered.
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t p = 0; p < n_parts; ++p) {
      if (filled[p]) continue;
      std::vector<int> ready;
      for (int e : model_.incident_edges(static_cast<int>(p))) {
        if (filled[model_.other_end(e, static_cast<int>(p))]) ready.push_back(e);
      }
      if (ready.empty()) continue;
      RandomStream rng(derive_seed(icfg_.seed, p, 0, rng_tag::kInit));
      auto& set = state.parts[p];
      set.particles.reserve(n);
      for (size_t i = 0; i < n; ++i) {
        int e = ready[rng.index(ready.size())];
        int nb = model_.other_end(e, static_cast<int>(p));
        set.particles.push_back(
            sample_compatible_pose(static_cast<int>(p), e, state.parts[nb], rng));
      }
      set.log_weights.assign(n, -std::log(static_cast<double>(n)));
      filled[p] = true;
      progress = true;
    }
  }
  return state;
}

void BeliefPropagation::jitter(BeliefState& state, int iteration) {
  for (size_t p = 0; p < state.parts.size(); ++p) {
    RandomStream rng(derive_seed(icfg_.seed, p, iteration, rng_tag::kJitter));
    for (Pose& pose : state.parts[p].particles) {
      Vec3 t = pose.translation() + rng.gaussian_vec(icfg_.jitter_trans_sigma);
      Quat q = rng.gaussian_rotation(icfg_.jitter_rot_sigma) * pose.rotation();
      pose = Pose(t, q);
    }
  }
}

void BeliefPropagation::augment(BeliefState& state, int iteration) {
  const AugmentConfig& aug = icfg_.augment;
  current_mix_ = augment_schedule(aug, iteration);
  const size_t pool = static_cast<size_t>(
      std::ceil(aug.alpha * static_cast<double>(icfg_.n_particles)));

  // All proposals draw from pre-augmentation snapshots.
  std::vector<size_t> orig_size(state.parts.size());
  for (size_t p = 0; p < state.parts.size(); ++p) orig_size[p] = state.parts[p].size();

  for (size_t p = 0; p < state.parts.size(); ++p) {
    auto& set = state.parts[p];
    if (pool <= set.size()) continue;
    const size_t add = pool - set.size();
    size_t n_unary = static_cast<size_t>(std::floor(current_mix_.unary * add));
    size_t n_pair = static_cast<size_t>(std::floor(current_mix_.pair * add));
    if (!observed_[p]) n_unary = 0;  // no heat pixels to draw from
    std::vector<int> edges = model_.incident_edges(static_cast<int>(p));
    if (edges.empty()) n_pair = 0;

    RandomStream rng(derive_seed(icfg_.seed, p, iteration, rng_tag::kAugment));
    set.particles.reserve(pool);
    for (size_t k = 0; k < add; ++k) {
      if (k < n_unary) {
        set.particles.push_back(sample_heat_pose(static_cast<int>(p), rng));
      } else if (k < n_unary + n_pair) {
        int e = edges[rng.index(edges.size())];
        int nb = model_.other_end(e, static_cast<int>(p));
        ParticleSet snapshot;
        snapshot.particles.assign(state.parts[nb].particles.begin(),
                                  state.parts[nb].particles.begin() + orig_size[nb]);
        set.particles.push_back(
            sample_compatible_pose(static_cast<int>(p), e, snapshot, rng));
      } else {
        const Pose& base = set.particles[rng.index(orig_size[p])];
        Vec3 t = base.translation() + rng.gaussian_vec(aug.rand_trans_sigma);
        Quat q = rng.gaussian_rotation(aug.rand_rot_sigma) * base.rotation();
        set.particles.emplace_back(t, q);
      }
    }
    set.log_weights.assign(pool, -std::log(static_cast<double>(pool)));
  }
}

void BeliefPropagation::compute_unaries(const BeliefState& state) {
  for (size_t p = 0; p < state.parts.size(); ++p) {
    const auto& set = state.parts[p];
    log_unaries_[p].resize(set.size());
    for (size_t i = 0; i < set.size(); ++i) {
      log_unaries_[p][i] = scorers_[p]->log_unary(set.particles[i]);
    }
  }
}

void BeliefPropagation::reweight(BeliefState& state) {
  compute_unaries(state);
  const size_t n_parts = state.parts.size();

  std::vector<std::vector<double>> acc(n_parts);
  for (size_t p = 0; p < n_parts; ++p) acc[p].assign(state.parts[p].size(), 0.0);

  if (icfg_.use_messages) {
    // One pairwise matrix per edge feeds the messages in both directions.
    std::vector<double> psi;
    for (const auto& edge : model_.edges) {
      const ParticleSet& pa = state.parts[edge.parent];
      const ParticleSet& ch = state.parts[edge.child];
      const size_t np = pa.size(), nc = ch.size();
      psi.resize(np * nc);
      for (size_t i = 0; i < np; ++i) {
        for (size_t j = 0; j < nc; ++j) {
          psi[i * nc + j] =
              log_pairwise(pa.particles[i], ch.particles[j], edge.joint, pcfg_);
        }
      }
      // Message child -> parent, evaluated at each parent particle.
      std::vector<double> terms(nc);
      for (size_t i = 0; i < np; ++i) {
        for (size_t j = 0; j < nc; ++j) terms[j] = psi[i * nc + j] + log_unaries_[edge.child][j];
        acc[edge.parent][i] += std::max(log_sum_exp(terms), kLogFloor);
      }
      // Message parent -> child.
      terms.resize(np);
      for (size_t j = 0; j < nc; ++j) {
        for (size_t i = 0; i < np; ++i) terms[i] = psi[i * nc + j] + log_unaries_[edge.parent][i];
        acc[edge.child][j] += std::max(log_sum_exp(terms), kLogFloor);
      }
    }
  }

  for (size_t p = 0; p < n_parts; ++p) {
    auto& set = state.parts[p];
    const size_t n = set.size();
    for (size_t i = 0; i < n; ++i) set.log_weights[i] = log_unaries_[p][i] + acc[p][i];
    double lse = log_sum_exp(set.log_weights);
    for (double& w : set.log_weights) w -= lse;

    double ess_den = 0.0;
    size_t best_idx = 0;
    for (size_t i = 0; i < n; ++i) {
      double w = std::exp(set.log_weights[i]);
      ess_den += w * w;
      if (set.log_weights[i] > set.log_weights[best_idx]) best_idx = i;
    }
    best_[p] = {set.particles[best_idx], set.log_weights[best_idx]};

    IterationDiag diag;
    diag.iteration = state.iteration;
    diag.part = static_cast<int>(p);
    diag.ess = ess_den > 0.0 ? 1.0 / ess_den : 0.0;
    diag.best_log_weight = set.log_weights[best_idx];
    diag.frac_unary = current_mix_.unary;
    diag.frac_rand = current_mix_.rand;
    diag.frac_pair = current_mix_.pair;
    diag.pool_size = static_cast<int>(n);
    diagnostics_.push_back(diag);
  }
}

void BeliefPropagation::resample(BeliefState& state, int iteration) {
  for (size_t p = 0; p < state.parts.size(); ++p) {
    RandomStream rng(derive_seed(icfg_.seed, p, iteration, rng_tag::kResample));
    state.parts[p] =
        systematic_resample(state.parts[p], static_cast<size_t>(icfg_.n_particles), rng);
  }
}

void BeliefPropagation::finalize_occluded(std::vector<Pose>& mle) const {
  std::vector<bool> anchored(observed_.begin(), observed_.end());
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t p = 0; p < mle.size(); ++p) {
      if (anchored[p]) continue;
      for (int e : model_.incident_edges(static_cast<int>(p))) {
        int nb = model_.other_end(e, static_cast<int>(p));
        if (!anchored[nb]) continue;
        // Project the belief argmax onto the joint manifold of the
        // neighbour's estimate; the joint value is kept, the residual
        // off-manifold drift is discarded.
        const auto& joint = model_.edges[e].joint;
        bool p_is_child = model_.edges[e].child == static_cast<int>(p);
        JointResidual r = p_is_child ? joint_residual(mle[nb], joint, mle[p])
                                     : joint_residual(mle[p], joint, mle[nb]);
        double q = std::clamp(r.q_hat, joint.lower, joint.upper);
        mle[p] = p_is_child ? child_pose(mle[nb], joint, q)
                            : parent_pose_from_child(mle[nb], joint, q);
        anchored[p] = true;
        progress = true;
        break;
      }
    }
  }
}

EstimationResult BeliefPropagation::run() {
  auto t0 = std::chrono::steady_clock::now();
  diagnostics_.clear();
  current_mix_ = ProposalMix{};

  BeliefState state = initialize();
  std::vector<Pose> mle(model_.parts.size());
  std::vector<double> mle_logw(model_.parts.size(), 0.0);

  if (icfg_.n_iterations == 0) {
    // Degenerate loop: best initialization particle by unary alone.
    compute_unaries(state);
    for (size_t p = 0; p < state.parts.size(); ++p) {
      const auto& u = log_unaries_[p];
      size_t best = std::max_element(u.begin(), u.end()) - u.begin();
      mle[p] = state.parts[p].particles[best];
      mle_logw[p] = u[best];
    }
  } else {
    for (int n = 0; n < icfg_.n_iterations; ++n) {
      state.iteration = n;
      if (n > 0) jitter(state, n);
      if (icfg_.augment.enabled) augment(state, n);
      reweight(state);
      resample(state, n);
    }
    for (size_t p = 0; p < state.parts.size(); ++p) {
      mle[p] = best_[p].pose;
      mle_logw[p] = best_[p].log_weight;
    }
  }

  finalize_occluded(mle);

  EstimationResult result;
  result.seed = icfg_.seed;
  result.particles = icfg_.n_particles;
  result.iterations = icfg_.n_iterations;
  result.alpha = icfg_.augment.enabled ? icfg_.augment.alpha : 0.0;
  for (const Part& part : model_.parts) result.part_names.push_back(part.name);
  result.poses = std::move(mle);
  result.log_weights = std::move(mle_logw);
  result.diagnostics = diagnostics_;
  result.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

EstimationResult run_inference(const ArticulatedModel& model, const Observation& obs,
                               const InferenceConfig& icfg, const PotentialConfig& pcfg) {
  BeliefPropagation engine(model, obs, icfg, pcfg);
  return engine.run();
}

}  // namespace partbp
