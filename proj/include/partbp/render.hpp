#pragma once

#include <utility>

#include "partbp/geometry.hpp"
#include "partbp/image.hpp"

namespace partbp {

// Pixel bounding box of the most recent draw, half-open.
struct RenderPatch {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  bool empty() const { return x1 <= x0 || y1 <= y0; }
  int area() const { return empty() ? 0 : (x1 - x0) * (y1 - y0); }
};

// Z-buffer rasterizer with a reusable buffer. Pixel validity is tracked by
// an epoch stamp so successive draws need no per-pixel clear. Pixel-center
// sample rule with top-left ties; near plane at 1 cm.
class HypothesisRenderer {
 public:
  explicit HypothesisRenderer(const PinholeCamera& cam);

  const PinholeCamera& camera() const { return cam_; }

  // Rasterizes the mesh at the given pose; replaces the previous draw.
  RenderPatch draw(const TriangleMesh& mesh, const Pose& pose);

  bool covered(int x, int y) const {
    return stamp_[static_cast<size_t>(y) * cam_.width + x] == epoch_;
  }
  // Depth in meters; 0 when the pixel was not covered by the last draw.
  float depth_at(int x, int y) const {
    size_t i = static_cast<size_t>(y) * cam_.width + x;
    return stamp_[i] == epoch_ ? depth_[i] : 0.0f;
  }

  static constexpr double kNearPlane = 0.01;

 private:
  void raster_triangle(const Vec3& a, const Vec3& b, const Vec3& c, RenderPatch& patch);

  PinholeCamera cam_;
  std::vector<float> depth_;
  std::vector<uint64_t> stamp_;
  uint64_t epoch_ = 0;
};

// One-shot render into full-image rasters. Depth is positive exactly on
// mask pixels. An off-screen mesh yields an empty mask.
std::pair<BinaryMask, DepthImage> render(const TriangleMesh& mesh, const Pose& pose,
                                         const PinholeCamera& cam);

// Camera ray through the center of pixel (px, py), scaled to depth z.
Vec3 backproject(const PinholeCamera& cam, int px, int py, double z);

}  // namespace partbp
