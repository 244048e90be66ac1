#pragma once

#include <vector>

#include "partbp/geometry.hpp"

namespace partbp {

// Static 3D k-d tree over a point set; nearest-neighbour queries only.
class KdTree3 {
 public:
  KdTree3() = default;
  explicit KdTree3(const PointCloud& cloud);

  size_t size() const { return points_.size(); }

  // Index of the nearest point within max_dist, or -1 if none.
  // Distance (not squared) returned through dist_out when provided.
  int nearest(const Vec3& query, double max_dist, double* dist_out = nullptr) const;

 private:
  struct Node {
    int left = -1;
    int right = -1;
    int point = -1;  // leaf payload when >= 0
    int axis = 0;
    double split = 0.0;
  };

  int build(std::vector<int>& idx, int lo, int hi);
  void search(int node, const Vec3& q, int& best, double& best_sq) const;

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace partbp
