#include <doctest.h>

#include <Eigen/Geometry>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "orthowalk/hull.hpp"
#include "support.hpp"

using namespace orthowalk;
using namespace orthowalk::test;
using Eigen::Vector3d;

namespace {

double signed_volume(const HullMesh& mesh, const std::array<int, 3>& f, const Vector3d& p) {
  const Vector3d& a = mesh.vertices[f[0]];
  const Vector3d& b = mesh.vertices[f[1]];
  const Vector3d& c = mesh.vertices[f[2]];
  return (b - a).cross(c - a).dot(p - a);
}

bool contains(const HullMesh& mesh, const Vector3d& p, double eps = 1e-9) {
  for (const auto& f : mesh.faces) {
    if (signed_volume(mesh, f, p) > eps) return false;
  }
  return true;
}

// Closed 2-manifold: every directed edge appears once with its reverse.
bool closed_and_oriented(const HullMesh& mesh) {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) ++edges[{f[k], f[(k + 1) % 3]}];
  }
  for (const auto& [e, n] : edges) {
    if (n != 1 || !edges.count({e.second, e.first})) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("hull") {
  TEST_CASE("tetrahedron") {
    const std::vector<Vector3d> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const auto h = convex_hull_3d(pts);
    CHECK(h.vertices.size() == 4);
    CHECK(h.faces.size() == 4);
    CHECK(closed_and_oriented(h));
    // Outward: the centroid is strictly inside every face.
    for (const auto& f : h.faces) CHECK(signed_volume(h, f, Vector3d(0.25, 0.25, 0.25)) < 0);
  }

  TEST_CASE("cube") {
    std::vector<Vector3d> pts;
    for (int i = 0; i < 8; ++i) pts.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 30; ++i) pts.emplace_back(u(gen), u(gen), u(gen));
    const auto h = convex_hull_3d(pts);
    CHECK(h.vertices.size() == 8);
    CHECK(h.faces.size() == 12);
    CHECK(closed_and_oriented(h));
    for (const auto& p : pts) CHECK(contains(h, p));
  }

  TEST_CASE("degenerate inputs") {
    const std::vector<Vector3d> line{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}};
    const std::vector<Vector3d> plane{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.2, 0}};
    const std::vector<Vector3d> few{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    for (const auto* pts : {&line, &plane, &few}) {
      try {
        convex_hull_3d(*pts);
        FAIL("expected DegenerateHull");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateHull);
      }
    }
  }

  TEST_CASE("random point sets") {
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<int> count(4, 50);
    std::uniform_int_distribution<int> lattice(-5, 5);
    std::normal_distribution<double> normal(0.0, 3.0);
    int degenerate = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<Vector3d> pts;
      const int n = count(gen);
      for (int i = 0; i < n; ++i) {
        // Half the sets sit on the integer lattice, as walk positions do.
        if (trial % 2 == 0) {
          pts.emplace_back(lattice(gen), lattice(gen), lattice(gen));
        } else {
          pts.emplace_back(normal(gen), normal(gen), normal(gen));
        }
      }
      HullMesh h;
      try {
        h = convex_hull_3d(pts);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateHull);
        ++degenerate;
        continue;
      }
      CHECK(closed_and_oriented(h));
      CHECK(h.faces.size() == 2 * h.vertices.size() - 4);
      for (const auto& p : pts) CHECK(contains(h, p));
      for (const auto& v : h.vertices) {
        CHECK(std::any_of(pts.begin(), pts.end(), [&](const Vector3d& p) { return p == v; }));
      }
    }
    CHECK(degenerate < 50);
  }

  TEST_CASE("positions at a step") {
    const std::vector<Walk3D> walks{Walk3D{{e1, e2, e3}}, Walk3D{{e2}}};
    const auto at2 = positions_at_step(walks, 2);
    REQUIRE(at2.size() == 2);
    CHECK(at2[0] == Vector3d(1, 1, 0));
    CHECK(at2[1] == Vector3d(0, 1, 0));
  }

  TEST_CASE("obj output") {
    const std::vector<Vector3d> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::ostringstream out;
    write_hull_obj(out, convex_hull_3d(pts));
    const std::string s = out.str();
    CHECK(std::count(s.begin(), s.end(), 'v') == 4);
    CHECK(std::count(s.begin(), s.end(), 'f') == 4);
  }
}
