#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "orthowalk/pipeline.hpp"

namespace orthowalk {

struct HullMesh {
  std::vector<Eigen::Vector3d> vertices;
  /// Triangles, counter-clockwise seen from outside.
  std::vector<std::array<int, 3>> faces;
};

/// Incremental 3D hull. A point is outside a face when its signed volume
/// exceeds eps. Throws DegenerateHull for fewer than 4 points or when all
/// points are coplanar.
HullMesh convex_hull_3d(std::span<const Eigen::Vector3d> points, double eps = 1e-9);

/// Position of every walk after `step` steps; walks shorter than that
/// contribute their final position.
std::vector<Eigen::Vector3d> positions_at_step(const std::vector<Walk3D>& walks, std::size_t step);

void write_hull_obj(std::ostream& out, const HullMesh& mesh);

}  // namespace orthowalk
