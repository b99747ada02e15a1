#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "orthowalk/stepset.hpp"

namespace orthowalk {

/// Interior minimizer of the inventory over the open positive octant.
struct Minimizer {
  std::array<double, 3> point{1.0, 1.0, 1.0};
  double s_min = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
};

/// Newton's method in log-coordinates with step halving, started at (1,1,1).
/// Converged when |grad S| <= tol * S. Throws NoConvergence after
/// max_iterations.
Minimizer minimize_inventory(const WeightedStepSet3& stepset, double tol = 1e-12,
                             int max_iterations = 200);

enum class ProjectionBranch { Generic, UnitZ, Trivial };

const char* to_string(ProjectionBranch branch);

// Normal of the half-space {p : v.p >= 0}. Scaled so its largest component
// is 1; this is a positive multiple of (a, b, 1) or (a, b, 0).
struct ProjectionVector {
  std::array<double, 3> v{1.0, 1.0, 1.0};
  ProjectionBranch branch = ProjectionBranch::Trivial;
  int reference_axis = 2;
};

ProjectionVector projection_vector(const Minimizer& minimizer, double eps = 1e-8);

struct IntegerProjection {
  std::array<int, 3> coeffs{1, 1, 1};
  int denominator = 1;
  double max_abs_error = 0.0;

  long apply(const Step3& s) const {
    return static_cast<long>(coeffs[0]) * s.dx + static_cast<long>(coeffs[1]) * s.dy +
           static_cast<long>(coeffs[2]) * s.dz;
  }
};

/// Approximates v (componentwise >= 0, not all zero) by integers. The vector
/// is first scaled so its smallest nonzero component is 1, then every
/// component is rounded over a shared denominator d <= max_den; the d with
/// the smallest maximum absolute error wins, ties going to the smaller d.
IntegerProjection rationalize(const std::array<double, 3>& v, int max_den = 8);
IntegerProjection rationalize(const ProjectionVector& v, int max_den = 8);

/// One projected step. Atoms with equal values stay distinct so that a word
/// over atoms lifts to a unique 3D walk.
struct Atom1D {
  int id = 0;
  long value = 0;
  std::uint64_t weight = 1;
  Step3 source;
};

class StepSet1D {
 public:
  StepSet1D() = default;
  /// Ids are reassigned to positions.
  explicit StepSet1D(std::vector<Atom1D> atoms);

  const std::vector<Atom1D>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const Atom1D& atom(int id) const { return atoms_.at(static_cast<std::size_t>(id)); }

  /// Largest downward amplitude (0 when there is no negative atom).
  long max_down() const { return max_down_; }
  /// Largest upward amplitude (0 when there is no positive atom).
  long max_up() const { return max_up_; }
  bool has_both_signs() const { return max_down_ > 0 && max_up_ > 0; }
  std::uint64_t total_weight() const;

  /// A(u) = sum of weight * u^value.
  double inventory(double u) const;

 private:
  std::vector<Atom1D> atoms_;
  long max_down_ = 0;
  long max_up_ = 0;
};

/// Convenience for pure 1D work: atoms from (value, weight) pairs, with the
/// source step set to (value, 0, 0).
StepSet1D stepset_1d_from_values(std::span<const std::pair<long, std::uint64_t>> values);

/// Throws Degenerate when the projection has no positive or no negative atom.
StepSet1D project_stepset(const WeightedStepSet3& stepset, const IntegerProjection& projection);

struct Analysis1D {
  double tau = 1.0;
  double a_tau = 0.0;
  double rho = 0.0;
};

/// tau is the positive critical point of A, rho = 1 / A(max(tau, 1)).
Analysis1D analyze_1d(const StepSet1D& steps, int max_iterations = 200);

}  // namespace orthowalk
