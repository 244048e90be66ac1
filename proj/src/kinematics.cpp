#include "partbp/kinematics.hpp"

#include <cmath>
#include <set>

#include "partbp/errors.hpp"

namespace partbp {

namespace {

// Orientation error is folded into the scalar residual at 0.1 m per radian.
constexpr double kRotationWeight = 0.1;

Pose joint_motion(const Joint& joint, double q) {
  switch (joint.kind) {
    case JointKind::kFixed:
      return Pose::identity();
    case JointKind::kRevolute:
      return Pose(Vec3::Zero(), Quat(Eigen::AngleAxisd(q, joint.axis)));
    case JointKind::kPrismatic:
      return Pose::from_translation(q * joint.axis);
  }
  return Pose::identity();
}

}  // namespace

const char* to_string(JointKind kind) {
  switch (kind) {
    case JointKind::kFixed:
      return "fixed";
    case JointKind::kRevolute:
      return "revolute";
    case JointKind::kPrismatic:
      return "prismatic";
  }
  return "?";
}

int ArticulatedModel::part_index(const std::string& name) const {
  for (size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<int> ArticulatedModel::incident_edges(int part) const {
  std::vector<int> out;
  for (size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].parent == part || edges[e].child == part) out.push_back(static_cast<int>(e));
  }
  return out;
}

int ArticulatedModel::other_end(int edge, int part) const {
  const Edge& e = edges[edge];
  return e.parent == part ? e.child : e.parent;
}

void ArticulatedModel::validate() const {
  if (parts.empty()) throw StructureError("model has no parts");
  std::set<std::string> names;
  for (const Part& p : parts) {
    if (!names.insert(p.name).second) {
      throw StructureError("duplicate part name: " + p.name);
    }
  }
  if (edges.size() + 1 != parts.size()) {
    throw StructureError("part graph is not a tree: " + std::to_string(parts.size()) +
                         " parts, " + std::to_string(edges.size()) + " edges");
  }
  // Union-find over edges: any merge of an already-joined pair is a cycle.
  std::vector<int> group(parts.size());
  for (size_t i = 0; i < group.size(); ++i) group[i] = static_cast<int>(i);
  auto find = [&](int a) {
    while (group[a] != a) a = group[a] = group[group[a]];
    return a;
  };
  for (const Edge& e : edges) {
    if (e.parent < 0 || e.child < 0 || e.parent >= static_cast<int>(parts.size()) ||
        e.child >= static_cast<int>(parts.size())) {
      throw StructureError("edge references unknown part");
    }
    int a = find(e.parent), b = find(e.child);
    if (a == b) throw StructureError("cycle in link graph");
    group[a] = b;
    if (e.joint.kind != JointKind::kFixed) {
      if (std::abs(e.joint.axis.norm() - 1.0) > 1e-9) {
        throw StructureError("joint axis is not unit length");
      }
      if (e.joint.lower > e.joint.upper) {
        throw StructureError("joint limits inverted");
      }
    }
  }
  int r = find(0);
  for (size_t i = 1; i < parts.size(); ++i) {
    if (find(static_cast<int>(i)) != r) throw StructureError("part graph is disconnected");
  }
}

Pose child_pose(const Pose& parent, const Joint& joint, double q) {
  return parent * joint.origin * joint_motion(joint, q);
}

Pose parent_pose_from_child(const Pose& child, const Joint& joint, double q) {
  return child * (joint.origin * joint_motion(joint, q)).inverse();
}

JointResidual joint_residual(const Pose& parent, const Joint& joint, const Pose& child) {
  // Relative pose in the joint frame; identity when child sits at q = 0.
  Pose rel = (parent * joint.origin).inverse() * child;
  const Vec3& t = rel.translation();
  const Quat& q = rel.rotation();

  switch (joint.kind) {
    case JointKind::kFixed:
      return {0.0, t.norm() + kRotationWeight * rotation_angle(q)};
    case JointKind::kPrismatic: {
      double q_hat = t.dot(joint.axis);
      double off = (t - q_hat * joint.axis).norm() + kRotationWeight * rotation_angle(q);
      return {q_hat, off};
    }
    case JointKind::kRevolute: {
      // Swing-twist split about the joint axis; q_hat is the twist angle.
      double p = q.vec().dot(joint.axis);
      double w = q.w();
      double q_hat;
      Quat twist;
      if (p * p + w * w < 1e-24) {
        // 180-degree swing orthogonal to the axis; no twist component.
        q_hat = 0.0;
        twist = Quat::Identity();
      } else {
        q_hat = 2.0 * std::atan2(p, w);
        twist = Quat(w, p * joint.axis.x(), p * joint.axis.y(), p * joint.axis.z());
        twist.normalize();
      }
      double swing = rotation_angle(twist.conjugate() * q);
      return {q_hat, t.norm() + kRotationWeight * swing};
    }
  }
  return {0.0, 0.0};
}

std::vector<Pose> forward_kinematics(const ArticulatedModel& model, const Pose& root_pose,
                                     std::span<const double> q) {
  if (q.size() != model.edges.size()) {
    throw std::invalid_argument("forward_kinematics: one joint value per edge required");
  }
  std::vector<Pose> poses(model.parts.size());
  std::vector<bool> done(model.parts.size(), false);
  poses[model.root] = root_pose;
  done[model.root] = true;

  // Edges of a valid model form a tree, so repeated sweeps terminate.
  bool progress = true;
  size_t remaining = model.parts.size() - 1;
  while (remaining > 0 && progress) {
    progress = false;
    for (size_t e = 0; e < model.edges.size(); ++e) {
      const auto& edge = model.edges[e];
      if (done[edge.parent] && !done[edge.child]) {
        poses[edge.child] = child_pose(poses[edge.parent], edge.joint, q[e]);
        done[edge.child] = true;
        --remaining;
        progress = true;
      } else if (done[edge.child] && !done[edge.parent]) {
        poses[edge.parent] = parent_pose_from_child(poses[edge.child], edge.joint, q[e]);
        done[edge.parent] = true;
        --remaining;
        progress = true;
      }
    }
  }
  if (remaining > 0) throw StructureError("forward_kinematics: disconnected model");
  return poses;
}

}  // namespace partbp
