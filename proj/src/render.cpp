#include "partbp/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace partbp {

namespace {

struct ScreenVertex {
  double x;
  double y;
  double inv_z;
};

// Tie rule for pixels exactly on an edge: of the two triangles sharing the
// edge, exactly one claims it. Evaluated on the directed edge a -> b.
inline bool edge_accepts_ties(double dx, double dy) {
  return dy > 0.0 || (dy == 0.0 && dx < 0.0);
}

}  // namespace

size_t BinaryMask::count() const {
  size_t n = 0;
  for (uint8_t v : values) n += v != 0;
  return n;
}

double Heatmap::total() const {
  double s = 0.0;
  for (float v : values) s += v;
  return s;
}

bool Heatmap::empty_above(double threshold) const {
  for (float v : values) {
    if (v >= threshold) return false;
  }
  return true;
}

HypothesisRenderer::HypothesisRenderer(const PinholeCamera& cam)
    : cam_(cam),
      depth_(static_cast<size_t>(cam.width) * cam.height, 0.0f),
      stamp_(static_cast<size_t>(cam.width) * cam.height,
             std::numeric_limits<uint64_t>::max()) {}

RenderPatch HypothesisRenderer::draw(const TriangleMesh& mesh, const Pose& pose) {
  ++epoch_;
  RenderPatch patch{cam_.width, cam_.height, 0, 0};

  std::vector<Vec3> cam_pts(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) cam_pts[i] = pose.apply(mesh.vertices[i]);

  for (const auto& face : mesh.faces) {
    const Vec3& a = cam_pts[face[0]];
    const Vec3& b = cam_pts[face[1]];
    const Vec3& c = cam_pts[face[2]];
    if (a.z() >= kNearPlane && b.z() >= kNearPlane && c.z() >= kNearPlane) {
      raster_triangle(a, b, c, patch);
      continue;
    }
    // Clip against the near plane; yields a triangle or a quad.
    Vec3 poly[4];
    int n = 0;
    const Vec3* tri[3] = {&a, &b, &c};
    for (int i = 0; i < 3; ++i) {
      const Vec3& p = *tri[i];
      const Vec3& q = *tri[(i + 1) % 3];
      bool p_in = p.z() >= kNearPlane;
      bool q_in = q.z() >= kNearPlane;
      if (p_in) poly[n++] = p;
      if (p_in != q_in) {
        double t = (kNearPlane - p.z()) / (q.z() - p.z());
        poly[n++] = p + t * (q - p);
      }
    }
    if (n >= 3) raster_triangle(poly[0], poly[1], poly[2], patch);
    if (n == 4) raster_triangle(poly[0], poly[2], poly[3], patch);
  }

  if (patch.x1 <= patch.x0 || patch.y1 <= patch.y0) return RenderPatch{};
  return patch;
}

void HypothesisRenderer::raster_triangle(const Vec3& a, const Vec3& b, const Vec3& c,
                                         RenderPatch& patch) {
  ScreenVertex sv[3];
  const Vec3* pts[3] = {&a, &b, &c};
  for (int i = 0; i < 3; ++i) {
    const Vec3& p = *pts[i];
    sv[i] = {cam_.fx * p.x() / p.z() + cam_.cx, cam_.fy * p.y() / p.z() + cam_.cy,
             1.0 / p.z()};
  }

  double area2 = (sv[1].x - sv[0].x) * (sv[2].y - sv[0].y) -
                 (sv[1].y - sv[0].y) * (sv[2].x - sv[0].x);
  if (area2 == 0.0) return;
  if (area2 < 0.0) {
    std::swap(sv[1], sv[2]);
    area2 = -area2;
  }

  int x0 = std::max(0, static_cast<int>(std::floor(std::min({sv[0].x, sv[1].x, sv[2].x}) - 0.5)));
  int x1 = std::min(cam_.width - 1,
                    static_cast<int>(std::ceil(std::max({sv[0].x, sv[1].x, sv[2].x}) - 0.5)));
  int y0 = std::max(0, static_cast<int>(std::floor(std::min({sv[0].y, sv[1].y, sv[2].y}) - 0.5)));
  int y1 = std::min(cam_.height - 1,
                    static_cast<int>(std::ceil(std::max({sv[0].y, sv[1].y, sv[2].y}) - 0.5)));
  if (x0 > x1 || y0 > y1) return;

  // Per-edge deltas; edge i runs from vertex i to vertex i+1.
  double ex[3], ey[3];
  bool accept_tie[3];
  for (int i = 0; i < 3; ++i) {
    const ScreenVertex& p = sv[i];
    const ScreenVertex& q = sv[(i + 1) % 3];
    ex[i] = q.x - p.x;
    ey[i] = q.y - p.y;
    accept_tie[i] = edge_accepts_ties(ex[i], ey[i]);
  }

  for (int py = y0; py <= y1; ++py) {
    double sy = py + 0.5;
    for (int px = x0; px <= x1; ++px) {
      double sx = px + 0.5;
      double e[3];
      bool inside = true;
      for (int i = 0; i < 3; ++i) {
        e[i] = ex[i] * (sy - sv[i].y) - ey[i] * (sx - sv[i].x);
        if (e[i] < 0.0 || (e[i] == 0.0 && !accept_tie[i])) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;

      // e[1] is opposite vertex 0, e[2] opposite vertex 1, e[0] opposite 2.
      double w0 = e[1] / area2, w1 = e[2] / area2, w2 = e[0] / area2;
      double inv_z = w0 * sv[0].inv_z + w1 * sv[1].inv_z + w2 * sv[2].inv_z;
      if (inv_z <= 0.0) continue;
      float z = static_cast<float>(1.0 / inv_z);

      size_t idx = static_cast<size_t>(py) * cam_.width + px;
      if (stamp_[idx] != epoch_ || z < depth_[idx]) {
        stamp_[idx] = epoch_;
        depth_[idx] = z;
        patch.x0 = std::min(patch.x0, px);
        patch.y0 = std::min(patch.y0, py);
        patch.x1 = std::max(patch.x1, px + 1);
        patch.y1 = std::max(patch.y1, py + 1);
      }
    }
  }
}

Vec3 backproject(const PinholeCamera& cam, int px, int py, double z) {
  return Vec3((px + 0.5 - cam.cx) * z / cam.fx, (py + 0.5 - cam.cy) * z / cam.fy, z);
}

std::pair<BinaryMask, DepthImage> render(const TriangleMesh& mesh, const Pose& pose,
                                         const PinholeCamera& cam) {
  HypothesisRenderer renderer(cam);
  RenderPatch patch = renderer.draw(mesh, pose);
  BinaryMask mask(cam.width, cam.height);
  DepthImage depth(cam.width, cam.height);
  for (int y = patch.y0; y < patch.y1; ++y) {
    for (int x = patch.x0; x < patch.x1; ++x) {
      if (renderer.covered(x, y)) {
        mask.at(x, y) = 1;
        depth.at(x, y) = renderer.depth_at(x, y);
      }
    }
  }
  return {std::move(mask), std::move(depth)};
}

}  // namespace partbp
