#include "partbp/observation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "partbp/random.hpp"
#include "partbp/render.hpp"

namespace partbp {

Heatmap box_blur(const Heatmap& h, int radius) {
  if (radius <= 0) return h;
  Heatmap out(h.width, h.height);
  // Two separable passes, window truncated at the borders.
  Heatmap tmp(h.width, h.height);
  for (int y = 0; y < h.height; ++y) {
    for (int x = 0; x < h.width; ++x) {
      double s = 0.0;
      int n = 0;
      for (int dx = -radius; dx <= radius; ++dx) {
        int xx = x + dx;
        if (xx < 0 || xx >= h.width) continue;
        s += h.at(xx, y);
        ++n;
      }
      tmp.at(x, y) = static_cast<float>(s / n);
    }
  }
  for (int y = 0; y < h.height; ++y) {
    for (int x = 0; x < h.width; ++x) {
      double s = 0.0;
      int n = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        int yy = y + dy;
        if (yy < 0 || yy >= h.height) continue;
        s += tmp.at(x, yy);
        ++n;
      }
      out.at(x, y) = static_cast<float>(s / n);
    }
  }
  return out;
}

Observation synthesize(const ArticulatedModel& model, const std::vector<Pose>& gt_poses,
                       const PinholeCamera& cam, const CorruptionSpec& spec, uint64_t seed) {
  if (gt_poses.size() != model.parts.size()) {
    throw std::invalid_argument("synthesize: one ground-truth pose per part required");
  }
  if (spec.blur_radius < 0 || spec.noise_sigma < 0.0 || spec.depth_noise_sigma < 0.0) {
    throw std::invalid_argument("synthesize: corruption magnitudes must be non-negative");
  }

  const size_t n_px = static_cast<size_t>(cam.width) * cam.height;
  constexpr int kNoHit = -1;
  constexpr int kOccluder = -2;

  // Global z-buffer with the winning part per pixel.
  DepthImage zbuf(cam.width, cam.height);
  std::vector<int> winner(n_px, kNoHit);
  for (size_t p = 0; p < model.parts.size(); ++p) {
    auto [mask, depth] = render(model.parts[p].mesh, gt_poses[p], cam);
    for (size_t i = 0; i < n_px; ++i) {
      if (mask.values[i] && (winner[i] == kNoHit || depth.values[i] < zbuf.values[i])) {
        zbuf.values[i] = depth.values[i];
        winner[i] = static_cast<int>(p);
      }
    }
  }
  for (const OcclusionRect& r : spec.occlusion_rects) {
    for (int y = std::max(0, r.y); y < std::min(cam.height, r.y + r.h); ++y) {
      for (int x = std::max(0, r.x); x < std::min(cam.width, r.x + r.w); ++x) {
        size_t i = static_cast<size_t>(y) * cam.width + x;
        if (winner[i] == kNoHit || r.depth < zbuf.values[i]) {
          zbuf.values[i] = static_cast<float>(r.depth);
          winner[i] = kOccluder;
        }
      }
    }
  }

  Observation obs;
  obs.camera = cam;
  obs.heatmaps.resize(model.parts.size());
  for (size_t p = 0; p < model.parts.size(); ++p) {
    Heatmap h(cam.width, cam.height);
    for (size_t i = 0; i < n_px; ++i) {
      if (winner[i] == static_cast<int>(p)) h.values[i] = 1.0f;
    }
    h = box_blur(h, spec.blur_radius);
    if (spec.noise_sigma > 0.0) {
      RandomStream rng(derive_seed(seed, p, 0, rng_tag::kScene));
      for (float& v : h.values) v += static_cast<float>(rng.gaussian(spec.noise_sigma));
    }
    for (float& v : h.values) v = std::clamp(v, 0.0f, 1.0f);
    for (const OcclusionRect& r : spec.occlusion_rects) {
      for (int y = std::max(0, r.y); y < std::min(cam.height, r.y + r.h); ++y) {
        for (int x = std::max(0, r.x); x < std::min(cam.width, r.x + r.w); ++x) {
          h.at(x, y) = 0.0f;
        }
      }
    }
    obs.heatmaps[p] = std::move(h);
  }
  for (int p : spec.dropout_parts) {
    if (p < 0 || p >= static_cast<int>(model.parts.size())) {
      throw std::invalid_argument("synthesize: dropout part index out of range");
    }
    std::fill(obs.heatmaps[p].values.begin(), obs.heatmaps[p].values.end(), 0.0f);
  }

  obs.depth = std::move(zbuf);
  if (spec.depth_noise_sigma > 0.0) {
    RandomStream rng(derive_seed(seed, 0xdeffULL, 0, rng_tag::kScene));
    for (float& v : obs.depth.values) {
      if (v > 0.0f) {
        v = std::max(1e-4f, v + static_cast<float>(rng.gaussian(spec.depth_noise_sigma)));
      }
    }
  }
  return obs;
}

DepthImage masked_depth(const Heatmap& heatmap, const DepthImage& depth, double threshold) {
  if (heatmap.width != depth.width || heatmap.height != depth.height) {
    throw std::invalid_argument("masked_depth: dimension mismatch");
  }
  DepthImage out(depth.width, depth.height);
  for (size_t i = 0; i < depth.values.size(); ++i) {
    if (heatmap.values[i] >= threshold) out.values[i] = depth.values[i];
  }
  return out;
}

}  // namespace partbp
