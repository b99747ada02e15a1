#include "orthowalk/halfspace.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace orthowalk {
namespace {

struct LogObjective {
  double value = 0.0;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  Eigen::Matrix3d hess = Eigen::Matrix3d::Zero();
};

// f(theta) = S(exp(theta)): a positive combination of exponentials of linear
// forms, hence convex, and strictly so once the steps span R^3.
LogObjective log_objective(const WeightedStepSet3& stepset, const Eigen::Vector3d& theta) {
  LogObjective out;
  for (const auto& e : stepset.entries()) {
    const Eigen::Vector3d s(e.step.dx, e.step.dy, e.step.dz);
    const double term = static_cast<double>(e.weight) * std::exp(s.dot(theta));
    out.value += term;
    out.grad += term * s;
    out.hess += term * s * s.transpose();
  }
  return out;
}

double log_value(const WeightedStepSet3& stepset, const Eigen::Vector3d& theta) {
  double value = 0.0;
  for (const auto& e : stepset.entries()) {
    value += static_cast<double>(e.weight) *
             std::exp(e.step.dx * theta[0] + e.step.dy * theta[1] + e.step.dz * theta[2]);
  }
  return value;
}

double cartesian_grad_norm(const LogObjective& f, const Eigen::Vector3d& theta) {
  // dS/dx_k = (df/dtheta_k) / x_k
  Eigen::Vector3d g;
  for (int k = 0; k < 3; ++k) g[k] = f.grad[k] / std::exp(theta[k]);
  return g.norm();
}

}  // namespace

Minimizer minimize_inventory(const WeightedStepSet3& stepset, double tol, int max_iterations) {
  Eigen::Vector3d theta = Eigen::Vector3d::Zero();
  LogObjective f = log_objective(stepset, theta);
  for (int iter = 0; iter <= max_iterations; ++iter) {
    const double gnorm = cartesian_grad_norm(f, theta);
    if (gnorm <= tol * f.value) {
      Minimizer m;
      m.point = {std::exp(theta[0]), std::exp(theta[1]), std::exp(theta[2])};
      m.s_min = f.value;
      m.grad_norm = gnorm;
      m.iterations = iter;
      return m;
    }
    if (iter == max_iterations) break;

    const Eigen::Vector3d step = f.hess.ldlt().solve(-f.grad);
    double scale = 1.0;
    Eigen::Vector3d candidate = theta + step;
    // Step halving; the slack absorbs rounding once f is flat to machine precision.
    for (int halving = 0; halving < 60; ++halving) {
      const double value = log_value(stepset, candidate);
      if (std::isfinite(value) && value <= f.value * (1.0 + 1e-15)) break;
      scale *= 0.5;
      candidate = theta + scale * step;
    }
    theta = candidate;
    f = log_objective(stepset, theta);
  }
  std::ostringstream msg;
  msg << "inventory minimization did not converge after " << max_iterations
      << " iterations; last iterate (" << std::exp(theta[0]) << ", " << std::exp(theta[1]) << ", "
      << std::exp(theta[2]) << "), gradient norm " << cartesian_grad_norm(f, theta);
  throw Error(ErrorCode::NoConvergence, msg.str());
}

const char* to_string(ProjectionBranch branch) {
  switch (branch) {
    case ProjectionBranch::Generic: return "generic";
    case ProjectionBranch::UnitZ: return "unit-z";
    case ProjectionBranch::Trivial: return "trivial";
  }
  return "generic";
}

ProjectionVector projection_vector(const Minimizer& minimizer, double eps) {
  std::array<double, 3> logs{};
  for (int k = 0; k < 3; ++k) logs[k] = std::log(minimizer.point[k]);

  ProjectionVector out;
  const bool all_unit =
      std::all_of(logs.begin(), logs.end(), [&](double l) { return std::abs(l) <= eps; });
  if (all_unit) {
    out.v = {1.0, 1.0, 1.0};
    out.branch = ProjectionBranch::Trivial;
    out.reference_axis = 2;
    return out;
  }

  // The axis with the largest |log| acts as the reference coordinate, so the
  // division never involves a near-zero logarithm.
  int ref = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(logs[k]) > std::abs(logs[ref])) ref = k;
  }
  for (int k = 0; k < 3; ++k) {
    out.v[k] = std::abs(logs[k]) <= eps ? 0.0 : logs[k] / logs[ref];
  }
  out.reference_axis = ref;
  out.branch = std::abs(logs[2]) <= eps ? ProjectionBranch::UnitZ : ProjectionBranch::Generic;

  if (std::any_of(out.v.begin(), out.v.end(), [](double c) { return c < 0.0; })) {
    std::ostringstream msg;
    msg << "projection vector (" << out.v[0] << ", " << out.v[1] << ", " << out.v[2]
        << ") has a negative component; its half-space does not contain the first orthant";
    throw Error(ErrorCode::OrthantNotContained, msg.str());
  }
  return out;
}

IntegerProjection rationalize(const std::array<double, 3>& v, int max_den) {
  if (std::any_of(v.begin(), v.end(), [](double c) { return c < 0.0 || !std::isfinite(c); })) {
    throw Error(ErrorCode::OrthantNotContained, "cannot rationalize a vector with a negative component");
  }
  double smallest = 0.0;
  for (double c : v) {
    if (c > 0.0 && (smallest == 0.0 || c < smallest)) smallest = c;
  }
  if (smallest == 0.0) throw Error(ErrorCode::Degenerate, "cannot rationalize the zero vector");

  std::array<double, 3> scaled{};
  for (int k = 0; k < 3; ++k) scaled[k] = v[k] / smallest;

  IntegerProjection best;
  double best_error = std::numeric_limits<double>::infinity();
  for (int d = 1; d <= std::max(1, max_den); ++d) {
    std::array<long, 3> num{};
    double err = 0.0;
    for (int k = 0; k < 3; ++k) {
      num[k] = std::lround(scaled[k] * d);
      err = std::max(err, std::abs(static_cast<double>(num[k]) / d - scaled[k]));
    }
    if (err < best_error - 1e-15) {
      best_error = err;
      best.denominator = d;
      for (int k = 0; k < 3; ++k) best.coeffs[k] = static_cast<int>(num[k]);
    }
  }
  const int g = std::gcd(std::gcd(best.coeffs[0], best.coeffs[1]), best.coeffs[2]);
  for (auto& c : best.coeffs) c /= g;
  best.max_abs_error = best_error;
  return best;
}

IntegerProjection rationalize(const ProjectionVector& v, int max_den) {
  return rationalize(v.v, max_den);
}

StepSet1D::StepSet1D(std::vector<Atom1D> atoms) : atoms_(std::move(atoms)) {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    atoms_[i].id = static_cast<int>(i);
    max_down_ = std::max(max_down_, -atoms_[i].value);
    max_up_ = std::max(max_up_, atoms_[i].value);
  }
}

std::uint64_t StepSet1D::total_weight() const {
  std::uint64_t total = 0;
  for (const auto& a : atoms_) total += a.weight;
  return total;
}

double StepSet1D::inventory(double u) const {
  double value = 0.0;
  for (const auto& a : atoms_) value += static_cast<double>(a.weight) * std::pow(u, a.value);
  return value;
}

StepSet1D stepset_1d_from_values(std::span<const std::pair<long, std::uint64_t>> values) {
  std::vector<Atom1D> atoms;
  for (const auto& [value, weight] : values) {
    atoms.push_back(Atom1D{0, value, weight, Step3{static_cast<int>(value), 0, 0}});
  }
  return StepSet1D(std::move(atoms));
}

StepSet1D project_stepset(const WeightedStepSet3& stepset, const IntegerProjection& projection) {
  std::vector<Atom1D> atoms;
  atoms.reserve(stepset.size());
  for (const auto& e : stepset.entries()) {
    atoms.push_back(Atom1D{0, projection.apply(e.step), e.weight, e.step});
  }
  StepSet1D out(std::move(atoms));
  if (!out.has_both_signs()) {
    std::ostringstream msg;
    msg << "projection onto (" << projection.coeffs[0] << "," << projection.coeffs[1] << ","
        << projection.coeffs[2] << ") has no " << (out.max_up() == 0 ? "positive" : "negative")
        << " step";
    throw Error(ErrorCode::Degenerate, msg.str());
  }
  return out;
}

Analysis1D analyze_1d(const StepSet1D& steps, int max_iterations) {
  if (!steps.has_both_signs()) {
    throw Error(ErrorCode::DegenerateStepset, "1D stepset needs both positive and negative values");
  }
  // g(t) = A(e^t) is strictly convex; minimize it by safeguarded Newton.
  auto derivatives = [&](double t) {
    double g = 0.0, g1 = 0.0, g2 = 0.0;
    for (const auto& a : steps.atoms()) {
      const double term = static_cast<double>(a.weight) * std::exp(static_cast<double>(a.value) * t);
      g += term;
      g1 += term * a.value;
      g2 += term * a.value * a.value;
    }
    return std::array<double, 3>{g, g1, g2};
  };

  double t = 0.0;
  for (int iter = 0; iter <= max_iterations; ++iter) {
    const auto [g, g1, g2] = derivatives(t);
    if (std::abs(g1) <= 1e-14 * g) {
      Analysis1D out;
      out.tau = std::exp(t);
      out.a_tau = g;
      out.rho = 1.0 / steps.inventory(std::max(out.tau, 1.0));
      return out;
    }
    if (iter == max_iterations) break;
    const double step = -g1 / g2;
    double scale = 1.0;
    for (int halving = 0; halving < 60; ++halving) {
      const double candidate = derivatives(t + scale * step)[0];
      if (std::isfinite(candidate) && candidate <= g * (1.0 + 1e-15)) break;
      scale *= 0.5;
    }
    t += scale * step;
  }
  throw Error(ErrorCode::NoConvergence, "critical point of the 1D inventory not found");
}

}  // namespace orthowalk
