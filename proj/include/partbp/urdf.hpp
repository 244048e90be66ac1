#pragma once

#include <string>

#include "partbp/kinematics.hpp"

namespace partbp {

// URDF subset: <link> with one <visual><geometry><mesh filename=...>, and
// <joint type=fixed|revolute|prismatic> with <origin xyz rpy>, <axis xyz>,
// <limit lower upper>. Mesh paths resolve relative to mesh_dir. Anything
// else in the document is ignored.
//
// Throws ParseError (malformed XML, with line number), UnsupportedJointError,
// or StructureError (cycles, duplicates, dangling links).
ArticulatedModel parse_urdf(const std::string& text, const std::string& mesh_dir);

// Reads the file and resolves meshes relative to its directory.
ArticulatedModel load_urdf(const std::string& path);

}  // namespace partbp
