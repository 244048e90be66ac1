#include "partbp/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace partbp {

KdTree3::KdTree3(const PointCloud& cloud) : points_(cloud.points) {
  if (points_.empty()) return;
  std::vector<int> idx(points_.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  nodes_.reserve(2 * points_.size());
  root_ = build(idx, 0, static_cast<int>(idx.size()));
}

int KdTree3::build(std::vector<int>& idx, int lo, int hi) {
  if (lo >= hi) return -1;
  int node_id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  if (hi - lo == 1) {
    nodes_[node_id].point = idx[lo];
    return node_id;
  }

  // Split on the widest axis at the median.
  Vec3 min_c = points_[idx[lo]], max_c = points_[idx[lo]];
  for (int i = lo + 1; i < hi; ++i) {
    min_c = min_c.cwiseMin(points_[idx[i]]);
    max_c = max_c.cwiseMax(points_[idx[i]]);
  }
  int axis;
  (max_c - min_c).maxCoeff(&axis);
  int mid = (lo + hi) / 2;
  std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                   [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });

  nodes_[node_id].axis = axis;
  nodes_[node_id].split = points_[idx[mid]][axis];
  int left = build(idx, lo, mid);
  int right = build(idx, mid, hi);
  nodes_[node_id].left = left;
  nodes_[node_id].right = right;
  return node_id;
}

void KdTree3::search(int node, const Vec3& q, int& best, double& best_sq) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  if (n.point >= 0) {
    double d = (points_[n.point] - q).squaredNorm();
    if (d < best_sq || (d == best_sq && (best < 0 || n.point < best))) {
      best_sq = d;
      best = n.point;
    }
    return;
  }
  double delta = q[n.axis] - n.split;
  int near = delta < 0.0 ? n.left : n.right;
  int far = delta < 0.0 ? n.right : n.left;
  search(near, q, best, best_sq);
  if (delta * delta <= best_sq) search(far, q, best, best_sq);
}

int KdTree3::nearest(const Vec3& query, double max_dist, double* dist_out) const {
  if (root_ < 0) return -1;
  int best = -1;
  double best_sq = max_dist * max_dist;
  // Allow equality at the radius boundary.
  best_sq = std::nextafter(best_sq, std::numeric_limits<double>::infinity());
  search(root_, query, best, best_sq);
  if (best >= 0 && dist_out) *dist_out = (points_[best] - query).norm();
  return best;
}

}  // namespace partbp
