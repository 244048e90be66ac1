#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <array>
#include <string>
#include <vector>

namespace partbp {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

// Rigid transform in SE(3). Quaternion is kept unit-norm and canonicalized
// to w >= 0 so that equal rotations compare equal componentwise.
class Pose {
 public:
  Pose() : t_(Vec3::Zero()), q_(Quat::Identity()) {}
  Pose(const Vec3& translation, const Quat& rotation) : t_(translation), q_(rotation) {
    normalize();
  }

  static Pose identity() { return {}; }
  static Pose from_translation(double x, double y, double z) {
    return Pose(Vec3(x, y, z), Quat::Identity());
  }
  static Pose from_translation(const Vec3& t) { return Pose(t, Quat::Identity()); }
  static Pose from_axis_angle(const Vec3& axis, double angle) {
    return Pose(Vec3::Zero(), Quat(Eigen::AngleAxisd(angle, axis.normalized())));
  }
  // Roll-pitch-yaw, fixed-axis convention: Rz(yaw) * Ry(pitch) * Rx(roll).
  static Pose from_rpy(const Vec3& t, double roll, double pitch, double yaw) {
    Quat q = Eigen::AngleAxisd(yaw, Vec3::UnitZ()) * Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
             Eigen::AngleAxisd(roll, Vec3::UnitX());
    return Pose(t, q);
  }

  const Vec3& translation() const { return t_; }
  const Quat& rotation() const { return q_; }
  Vec3& translation() { return t_; }

  void set_rotation(const Quat& q) {
    q_ = q;
    normalize();
  }

  Pose operator*(const Pose& other) const {
    return Pose(t_ + q_ * other.t_, q_ * other.q_);
  }

  Pose inverse() const {
    Quat qi = q_.conjugate();
    return Pose(qi * (-t_), qi);
  }

  Vec3 apply(const Vec3& p) const { return q_ * p + t_; }
  Vec3 rotate(const Vec3& v) const { return q_ * v; }

  bool approx_equal(const Pose& other, double tol = 1e-9) const;

 private:
  void normalize();

  Vec3 t_;
  Quat q_;
};

struct PointCloud {
  std::vector<Vec3> points;

  size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  bool empty() const { return faces.empty(); }
};

Pose compose(const Pose& a, const Pose& b);

PointCloud transform_cloud(const Pose& p, const PointCloud& c);

// Euclidean translation gap and geodesic rotation angle in [0, pi].
struct PoseDistance {
  double translation;
  double rotation;
};
PoseDistance pose_distance(const Pose& a, const Pose& b);

// Rotation angle of a unit quaternion in [0, pi].
double rotation_angle(const Quat& q);

// Wavefront OBJ subset: `v x y z` and triangular `f i j k` (1-based).
// Other directives are ignored.
TriangleMesh load_obj(const std::string& path);
TriangleMesh parse_obj(const std::string& text, const std::string& origin = "<string>");
void save_obj(const TriangleMesh& mesh, const std::string& path);

// Mesh vertices, evenly strided down to at most max_points.
PointCloud vertex_cloud(const TriangleMesh& mesh, size_t max_points);

// Deterministic area-weighted samples on the mesh surface.
PointCloud surface_sample(const TriangleMesh& mesh, size_t n_points, uint64_t seed);

}  // namespace partbp
