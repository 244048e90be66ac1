#include "partbp/urdf.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "partbp/errors.hpp"

namespace partbp {

namespace {

namespace pt = boost::property_tree;

Vec3 parse_triplet(const std::string& text, const char* what) {
  std::istringstream in(text);
  Vec3 v;
  if (!(in >> v.x() >> v.y() >> v.z())) {
    throw ParseError(std::string("urdf: cannot parse ") + what + ": '" + text + "'");
  }
  return v;
}

Pose parse_origin(const pt::ptree& node) {
  Vec3 xyz = Vec3::Zero(), rpy = Vec3::Zero();
  if (auto o = node.get_child_optional("origin")) {
    if (auto s = o->get_optional<std::string>("<xmlattr>.xyz")) xyz = parse_triplet(*s, "origin xyz");
    if (auto s = o->get_optional<std::string>("<xmlattr>.rpy")) rpy = parse_triplet(*s, "origin rpy");
  }
  return Pose::from_rpy(xyz, rpy.x(), rpy.y(), rpy.z());
}

constexpr size_t kMetricCloudPoints = 1024;

}  // namespace

ArticulatedModel parse_urdf(const std::string& text, const std::string& mesh_dir) {
  pt::ptree doc;
  try {
    std::istringstream in(text);
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(std::string("urdf: malformed XML: ") + e.message(),
                     static_cast<int>(e.line()));
  }

  auto robot = doc.get_child_optional("robot");
  if (!robot) throw StructureError("urdf: missing <robot> root element");

  ArticulatedModel model;
  for (const auto& [tag, node] : *robot) {
    if (tag != "link") continue;
    Part part;
    part.name = node.get<std::string>("<xmlattr>.name", "");
    if (part.name.empty()) throw StructureError("urdf: link without a name");
    auto mesh_file = node.get_optional<std::string>("visual.geometry.mesh.<xmlattr>.filename");
    if (!mesh_file) {
      throw StructureError("urdf: link '" + part.name + "' has no <visual><geometry><mesh>");
    }
    std::filesystem::path mesh_path(*mesh_file);
    if (mesh_path.is_relative()) mesh_path = std::filesystem::path(mesh_dir) / mesh_path;
    part.mesh = load_obj(mesh_path.string());
    if (part.mesh.faces.empty()) {
      throw StructureError("urdf: mesh for link '" + part.name + "' has no faces");
    }
    part.cloud = vertex_cloud(part.mesh, kMetricCloudPoints);
    model.parts.push_back(std::move(part));
  }

  for (const auto& [tag, node] : *robot) {
    if (tag != "joint") continue;
    std::string name = node.get<std::string>("<xmlattr>.name", "?");
    std::string type = node.get<std::string>("<xmlattr>.type", "");
    ArticulatedModel::Edge edge;
    if (type == "fixed") {
      edge.joint.kind = JointKind::kFixed;
    } else if (type == "revolute") {
      edge.joint.kind = JointKind::kRevolute;
    } else if (type == "prismatic") {
      edge.joint.kind = JointKind::kPrismatic;
    } else {
      throw UnsupportedJointError("urdf: joint '" + name + "' has unsupported type '" + type +
                                  "'");
    }

    std::string parent = node.get<std::string>("parent.<xmlattr>.link", "");
    std::string child = node.get<std::string>("child.<xmlattr>.link", "");
    edge.parent = model.part_index(parent);
    edge.child = model.part_index(child);
    if (edge.parent < 0 || edge.child < 0) {
      throw StructureError("urdf: joint '" + name + "' references unknown link");
    }

    edge.joint.origin = parse_origin(node);
    if (edge.joint.kind != JointKind::kFixed) {
      if (auto s = node.get_optional<std::string>("axis.<xmlattr>.xyz")) {
        edge.joint.axis = parse_triplet(*s, "axis xyz");
        double n = edge.joint.axis.norm();
        if (n < 1e-12) throw StructureError("urdf: joint '" + name + "' has zero axis");
        edge.joint.axis /= n;
      }
      auto limit = node.get_child_optional("limit");
      if (!limit) {
        throw StructureError("urdf: joint '" + name + "' needs <limit lower upper>");
      }
      edge.joint.lower = limit->get<double>("<xmlattr>.lower");
      edge.joint.upper = limit->get<double>("<xmlattr>.upper");
      if (edge.joint.lower > edge.joint.upper) {
        throw StructureError("urdf: joint '" + name + "' has inverted limits");
      }
    }
    model.edges.push_back(std::move(edge));
  }

  model.validate();

  // Root is the unique link that never appears as a child.
  std::vector<bool> is_child(model.parts.size(), false);
  for (const auto& e : model.edges) is_child[e.child] = true;
  for (size_t i = 0; i < model.parts.size(); ++i) {
    if (!is_child[i]) {
      model.root = static_cast<int>(i);
      break;
    }
  }
  return model;
}

ArticulatedModel load_urdf(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open urdf file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_urdf(buf.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace partbp
