#include "partbp/geometry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "partbp/errors.hpp"
#include "partbp/random.hpp"

namespace partbp {

void Pose::normalize() {
  double n = q_.norm();
  if (n <= 0.0 || !std::isfinite(n)) {
    throw std::invalid_argument("Pose: quaternion norm is zero or non-finite");
  }
  q_.coeffs() /= n;
  // Canonical sign: first nonzero of (w, x, y, z) is positive.
  const double w = q_.w(), x = q_.x(), y = q_.y(), z = q_.z();
  bool flip = w < 0.0 ||
              (w == 0.0 && (x < 0.0 || (x == 0.0 && (y < 0.0 || (y == 0.0 && z < 0.0)))));
  if (flip) q_.coeffs() = -q_.coeffs();
}

bool Pose::approx_equal(const Pose& other, double tol) const {
  PoseDistance d = pose_distance(*this, other);
  return d.translation <= tol && d.rotation <= tol;
}

Pose compose(const Pose& a, const Pose& b) { return a * b; }

PointCloud transform_cloud(const Pose& p, const PointCloud& c) {
  PointCloud out;
  out.points.reserve(c.points.size());
  for (const Vec3& pt : c.points) out.points.push_back(p.apply(pt));
  return out;
}

double rotation_angle(const Quat& q) {
  // atan2 form is stable near identity, unlike acos of w.
  double v = q.vec().norm();
  double w = std::abs(q.w());
  return 2.0 * std::atan2(v, w);
}

PoseDistance pose_distance(const Pose& a, const Pose& b) {
  Quat rel = a.rotation().conjugate() * b.rotation();
  return {(a.translation() - b.translation()).norm(), rotation_angle(rel)};
}

TriangleMesh parse_obj(const std::string& text, const std::string& origin) {
  TriangleMesh mesh;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) {
        throw ParseError(origin + ": bad vertex line", line_no);
      }
      if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
        throw ParseError(origin + ": non-finite vertex", line_no);
      }
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::array<int, 3> idx{};
      std::string tok;
      for (int k = 0; k < 3; ++k) {
        if (!(ls >> tok)) {
          throw ParseError(origin + ": face needs three vertex indices", line_no);
        }
        // Accept "i", "i/..", "i//.." forms; only the vertex index is used.
        idx[k] = std::stoi(tok.substr(0, tok.find('/')));
        if (idx[k] < 1 || idx[k] > static_cast<int>(mesh.vertices.size())) {
          throw ParseError(origin + ": face index out of range", line_no);
        }
        --idx[k];
      }
      std::string extra;
      if (ls >> extra) {
        throw ParseError(origin + ": only triangular faces are supported", line_no);
      }
      mesh.faces.push_back(idx);
    }
    // Anything else (vn, vt, o, g, usemtl, comments) is ignored.
  }
  return mesh;
}

TriangleMesh load_obj(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open mesh file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_obj(buf.str(), path);
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write mesh file: " + path);
  char line[128];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(line, sizeof(line), "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    f << line;
  }
  for (const auto& face : mesh.faces) {
    f << "f " << face[0] + 1 << " " << face[1] + 1 << " " << face[2] + 1 << "\n";
  }
}

PointCloud vertex_cloud(const TriangleMesh& mesh, size_t max_points) {
  PointCloud cloud;
  size_t n = mesh.vertices.size();
  if (n == 0) return cloud;
  if (n <= max_points) {
    cloud.points = mesh.vertices;
    return cloud;
  }
  cloud.points.reserve(max_points);
  for (size_t i = 0; i < max_points; ++i) {
    cloud.points.push_back(mesh.vertices[i * n / max_points]);
  }
  return cloud;
}

PointCloud surface_sample(const TriangleMesh& mesh, size_t n_points, uint64_t seed) {
  PointCloud cloud;
  if (mesh.faces.empty() || n_points == 0) return cloud;

  std::vector<double> cum_area(mesh.faces.size());
  double total = 0.0;
  for (size_t i = 0; i < mesh.faces.size(); ++i) {
    const auto& f = mesh.faces[i];
    Vec3 e1 = mesh.vertices[f[1]] - mesh.vertices[f[0]];
    Vec3 e2 = mesh.vertices[f[2]] - mesh.vertices[f[0]];
    total += 0.5 * e1.cross(e2).norm();
    cum_area[i] = total;
  }
  RandomStream rng(seed);
  cloud.points.reserve(n_points);
  for (size_t i = 0; i < n_points; ++i) {
    double r = rng.uniform(0.0, total);
    size_t fi = std::lower_bound(cum_area.begin(), cum_area.end(), r) - cum_area.begin();
    if (fi >= mesh.faces.size()) fi = mesh.faces.size() - 1;
    const auto& f = mesh.faces[fi];
    double u = rng.uniform(0.0, 1.0);
    double v = rng.uniform(0.0, 1.0);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    cloud.points.push_back(mesh.vertices[f[0]] +
                           u * (mesh.vertices[f[1]] - mesh.vertices[f[0]]) +
                           v * (mesh.vertices[f[2]] - mesh.vertices[f[0]]));
  }
  return cloud;
}

}  // namespace partbp
