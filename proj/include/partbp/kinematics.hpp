#pragma once

#include <span>
#include <string>
#include <vector>

#include "partbp/geometry.hpp"

namespace partbp {

enum class JointKind { kFixed, kRevolute, kPrismatic };

const char* to_string(JointKind kind);

struct Joint {
  JointKind kind = JointKind::kFixed;
  Pose origin;                    // parent-frame offset
  Vec3 axis = Vec3::UnitX();      // unit axis, ignored for fixed joints
  double lower = 0.0;             // radians (revolute) or meters (prismatic)
  double upper = 0.0;

  bool has_limits() const { return kind != JointKind::kFixed; }
};

struct Part {
  std::string name;
  TriangleMesh mesh;
  PointCloud cloud;  // metric cloud: mesh vertices, at most 1024 points
};

// Tree-structured part graph; edges are oriented parent -> child but the
// underlying MRF edge is undirected.
struct ArticulatedModel {
  struct Edge {
    int parent = -1;
    int child = -1;
    Joint joint;
  };

  std::vector<Part> parts;
  std::vector<Edge> edges;
  int root = 0;

  int part_index(const std::string& name) const;  // -1 when absent

  // Edge indices incident to the given part.
  std::vector<int> incident_edges(int part) const;
  // Part on the other end of edge e.
  int other_end(int edge, int part) const;

  // Checks the connected-acyclic-unique-names contract; throws StructureError.
  void validate() const;
};

// parent * origin * motion(axis, q).
Pose child_pose(const Pose& parent, const Joint& joint, double q);

// Inverse of child_pose: the parent pose implied by a child at `child`.
Pose parent_pose_from_child(const Pose& child, const Joint& joint, double q);

// Best-fit joint value q_hat plus the residual distance off the joint's
// one-DoF manifold (meters + 0.1 * radians).
struct JointResidual {
  double q_hat;
  double off_axis;
};
JointResidual joint_residual(const Pose& parent, const Joint& joint, const Pose& child);

// Root-relative forward kinematics; q holds one value per edge (ignored for
// fixed joints).
std::vector<Pose> forward_kinematics(const ArticulatedModel& model, const Pose& root_pose,
                                     std::span<const double> q);

}  // namespace partbp
