#pragma once

#include <cstdint>
#include <vector>

#include "partbp/image.hpp"
#include "partbp/kinematics.hpp"

namespace partbp {

// Per-part heatmaps plus the shared depth image.
struct Observation {
  std::vector<Heatmap> heatmaps;
  DepthImage depth;
  PinholeCamera camera;
};

struct OcclusionRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  double depth = 0.5;  // occluder depth written into the z-buffer, meters
};

struct CorruptionSpec {
  std::vector<OcclusionRect> occlusion_rects;
  int blur_radius = 0;
  double noise_sigma = 0.0;        // heatmap-score units
  double depth_noise_sigma = 0.0;  // meters
  std::vector<int> dropout_parts;
};

// Oracle observation: per-part heatmap is the part's visible-surface mask
// under the global z-buffer (other parts and occluder rectangles included),
// then blur, noise, clamp, rectangle zeroing, dropout. Depth is the global
// z-buffer with Gaussian noise on returns.
Observation synthesize(const ArticulatedModel& model, const std::vector<Pose>& gt_poses,
                       const PinholeCamera& cam, const CorruptionSpec& spec, uint64_t seed);

// Depth where heatmap >= threshold, 0 elsewhere.
DepthImage masked_depth(const Heatmap& heatmap, const DepthImage& depth, double threshold);

Heatmap box_blur(const Heatmap& h, int radius);

}  // namespace partbp
