#include "orthowalk/hull.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <utility>

namespace orthowalk {
namespace {

struct Face {
  int a, b, c;
  bool alive = true;
};

double signed_volume(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                     const Eigen::Vector3d& p) {
  return (b - a).cross(c - a).dot(p - a);
}

[[noreturn]] void degenerate(const char* why) {
  throw Error(ErrorCode::DegenerateHull, std::string("no 3D hull: ") + why);
}

}  // namespace

HullMesh convex_hull_3d(std::span<const Eigen::Vector3d> points, double eps) {
  const auto n = static_cast<int>(points.size());
  if (n < 4) degenerate("fewer than 4 points");
  auto pt = [&](int i) -> const Eigen::Vector3d& { return points[static_cast<std::size_t>(i)]; };

  int i0 = 0;
  for (int i = 1; i < n; ++i) {
    if (pt(i).x() < pt(i0).x()) i0 = i;
  }
  int i1 = i0;
  for (int i = 0; i < n; ++i) {
    if ((pt(i) - pt(i0)).squaredNorm() > (pt(i1) - pt(i0)).squaredNorm()) i1 = i;
  }
  if ((pt(i1) - pt(i0)).norm() <= eps) degenerate("all points coincide");
  int i2 = -1;
  double best = eps;
  for (int i = 0; i < n; ++i) {
    const double d = (pt(i) - pt(i0)).cross(pt(i1) - pt(i0)).norm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (i2 < 0) degenerate("points are collinear");
  int i3 = -1;
  best = eps;
  for (int i = 0; i < n; ++i) {
    const double v = std::abs(signed_volume(pt(i0), pt(i1), pt(i2), pt(i)));
    if (v > best) {
      best = v;
      i3 = i;
    }
  }
  if (i3 < 0) degenerate("points are coplanar");

  std::vector<Face> faces;
  if (signed_volume(pt(i0), pt(i1), pt(i2), pt(i3)) > 0.0) std::swap(i1, i2);
  faces.push_back({i0, i1, i2});
  faces.push_back({i0, i3, i1});
  faces.push_back({i1, i3, i2});
  faces.push_back({i2, i3, i0});

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<std::size_t> visible;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const Face& face = faces[f];
      if (face.alive && signed_volume(pt(face.a), pt(face.b), pt(face.c), pt(p)) > eps) visible.push_back(f);
    }
    if (visible.empty()) continue;

    std::set<std::pair<int, int>> edges;
    for (std::size_t f : visible) {
      const Face& face = faces[f];
      edges.insert({face.a, face.b});
      edges.insert({face.b, face.c});
      edges.insert({face.c, face.a});
    }
    for (std::size_t f : visible) faces[f].alive = false;
    for (const auto& [a, b] : edges) {
      if (!edges.contains({b, a})) faces.push_back({a, b, p});
    }
  }

  HullMesh mesh;
  std::vector<int> remap(static_cast<std::size_t>(n), -1);
  for (const Face& face : faces) {
    if (!face.alive) continue;
    std::array<int, 3> tri{face.a, face.b, face.c};
    for (int& v : tri) {
      auto& slot = remap[static_cast<std::size_t>(v)];
      if (slot < 0) {
        slot = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(pt(v));
      }
      v = slot;
    }
    mesh.faces.push_back(tri);
  }
  return mesh;
}

std::vector<Eigen::Vector3d> positions_at_step(const std::vector<Walk3D>& walks, std::size_t step) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(walks.size());
  for (const auto& w : walks) {
    Point3 p;
    const std::size_t upto = std::min(step, w.length());
    for (std::size_t k = 0; k < upto; ++k) p = p + w.steps[k];
    out.emplace_back(static_cast<double>(p.x), static_cast<double>(p.y), static_cast<double>(p.z));
  }
  return out;
}

void write_hull_obj(std::ostream& out, const HullMesh& mesh) {
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

}  // namespace orthowalk
