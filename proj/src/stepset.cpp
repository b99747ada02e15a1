#include "orthowalk/stepset.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace orthowalk {
namespace {

using Direction = std::array<long, 3>;

long dot(const Direction& u, const Step3& s) {
  return u[0] * s.dx + u[1] * s.dy + u[2] * s.dz;
}

Direction cross(const Direction& a, const Direction& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Direction as_direction(const Step3& s) { return {s.dx, s.dy, s.dz}; }

bool is_zero(const Direction& u) { return u[0] == 0 && u[1] == 0 && u[2] == 0; }

// Steps lie in the closed half-space {p : u·p <= 0}.
bool is_witness(const Direction& u, std::span<const WeightedStep> steps) {
  if (is_zero(u)) return false;
  return std::all_of(steps.begin(), steps.end(),
                     [&](const WeightedStep& e) { return dot(u, e.step) <= 0; });
}

// If the dual cone {u : u·s <= 0 for all s} is nontrivial then either the
// steps span a proper subspace (a normal of it is a witness) or the cone is
// pointed and has an extreme ray orthogonal to two independent steps. Both
// kinds of candidate are enumerated here.
std::optional<Direction> find_witness(std::span<const WeightedStep> steps) {
  std::vector<Direction> candidates;
  Direction sum{0, 0, 0};
  for (const auto& e : steps) {
    sum[0] += e.step.dx;
    sum[1] += e.step.dy;
    sum[2] += e.step.dz;
  }
  candidates.push_back({-sum[0], -sum[1], -sum[2]});

  const std::array<Direction, 3> axes{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (const auto& a : axes) {
    candidates.push_back(a);
    candidates.push_back({-a[0], -a[1], -a[2]});
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Direction si = as_direction(steps[i].step);
    for (const auto& a : axes) {
      const Direction c = cross(si, a);
      candidates.push_back(c);
      candidates.push_back({-c[0], -c[1], -c[2]});
    }
    for (std::size_t j = i + 1; j < steps.size(); ++j) {
      const Direction c = cross(si, as_direction(steps[j].step));
      candidates.push_back(c);
      candidates.push_back({-c[0], -c[1], -c[2]});
    }
  }
  for (const auto& u : candidates) {
    if (is_witness(u, steps)) return u;
  }
  return std::nullopt;
}

void require_positive(const std::array<double, 3>& p) {
  if (!(p[0] > 0.0 && p[1] > 0.0 && p[2] > 0.0)) {
    throw Error(ErrorCode::NonPositivePoint, "inventory evaluated outside the open positive octant");
  }
}

double monomial(const Step3& s, const std::array<double, 3>& p) {
  return std::pow(p[0], s.dx) * std::pow(p[1], s.dy) * std::pow(p[2], s.dz);
}

}  // namespace

WeightedStepSet3 validate_stepset(std::span<const WeightedStep> raw) {
  std::vector<WeightedStep> merged;
  for (const auto& e : raw) {
    if (e.step.is_zero()) throw Error(ErrorCode::ZeroStep, "the zero step (0,0,0) is not allowed");
    if (e.weight == 0) throw Error(ErrorCode::ParseError, "step weights must be positive");
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const WeightedStep& m) { return m.step == e.step; });
    if (it == merged.end()) {
      merged.push_back(e);
    } else {
      it->weight += e.weight;
    }
  }
  if (auto witness = find_witness(merged)) {
    const auto& u = *witness;
    std::ostringstream msg;
    msg << "steps lie in the closed half-space u.p <= 0 with u = (" << u[0] << "," << u[1] << ","
        << u[2] << ")";
    throw SpanViolationError(u, msg.str());
  }
  return WeightedStepSet3(std::move(merged));
}

std::uint64_t WeightedStepSet3::total_weight() const {
  std::uint64_t total = 0;
  for (const auto& e : entries_) total += e.weight;
  return total;
}

const char* to_string(DriftClass cls) {
  switch (cls) {
    case DriftClass::Zero: return "zero";
    case DriftClass::Reluctant: return "reluctant";
    case DriftClass::NonPositiveMixed: return "non-positive-mixed";
    case DriftClass::Other: return "other";
  }
  return "other";
}

Drift3 drift(const WeightedStepSet3& stepset) {
  Drift3 d;
  for (const auto& e : stepset.entries()) {
    const auto w = static_cast<std::int64_t>(e.weight);
    d.dx += w * e.step.dx;
    d.dy += w * e.step.dy;
    d.dz += w * e.step.dz;
  }
  if (d.dx == 0 && d.dy == 0 && d.dz == 0) {
    d.cls = DriftClass::Zero;
  } else if (d.dx < 0 && d.dy < 0 && d.dz < 0) {
    d.cls = DriftClass::Reluctant;
  } else if (d.dx <= 0 && d.dy <= 0 && d.dz <= 0) {
    d.cls = DriftClass::NonPositiveMixed;
  } else {
    d.cls = DriftClass::Other;
  }
  return d;
}

double inventory_eval(const WeightedStepSet3& stepset, const std::array<double, 3>& point) {
  require_positive(point);
  double value = 0.0;
  for (const auto& e : stepset.entries()) {
    value += static_cast<double>(e.weight) * monomial(e.step, point);
  }
  return value;
}

std::array<double, 3> inventory_grad(const WeightedStepSet3& stepset,
                                     const std::array<double, 3>& point) {
  require_positive(point);
  std::array<double, 3> grad{0.0, 0.0, 0.0};
  for (const auto& e : stepset.entries()) {
    const double term = static_cast<double>(e.weight) * monomial(e.step, point);
    for (int axis = 0; axis < 3; ++axis) {
      grad[axis] += term * e.step[axis] / point[axis];
    }
  }
  return grad;
}

}  // namespace orthowalk
