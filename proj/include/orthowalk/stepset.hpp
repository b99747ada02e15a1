#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "orthowalk/error.hpp"

namespace orthowalk {

/// Lattice displacement of a single step.
struct Step3 {
  int dx = 0;
  int dy = 0;
  int dz = 0;

  int operator[](int axis) const { return axis == 0 ? dx : (axis == 1 ? dy : dz); }
  bool is_zero() const { return dx == 0 && dy == 0 && dz == 0; }

  friend auto operator<=>(const Step3&, const Step3&) = default;
};

struct WeightedStep {
  Step3 step;
  std::uint64_t weight = 1;
};

class WeightedStepSet3;

/// Merges duplicate steps (weights add), rejects the zero step and checks
/// that the steps are not contained in any closed half-space through the
/// origin.
WeightedStepSet3 validate_stepset(std::span<const WeightedStep> raw);

/// A validated 3D model: distinct nonzero steps with positive integer
/// weights whose convex hull contains the origin in its interior.
/// Only validate_stepset constructs one, so holders may rely on the
/// invariants.
class WeightedStepSet3 {
 public:
  const std::vector<WeightedStep>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t total_weight() const;

 private:
  explicit WeightedStepSet3(std::vector<WeightedStep> entries) : entries_(std::move(entries)) {}
  friend WeightedStepSet3 validate_stepset(std::span<const WeightedStep> raw);

  std::vector<WeightedStep> entries_;
};

// Raised when the steps fit in a closed half-space. The witness u satisfies
// u·s <= 0 for every step s.
class SpanViolationError : public Error {
 public:
  SpanViolationError(std::array<long, 3> witness, const std::string& message)
      : Error(ErrorCode::SpanViolation, message), witness_(witness) {}
  std::array<long, 3> witness() const { return witness_; }

 private:
  std::array<long, 3> witness_;
};

enum class DriftClass { Zero, Reluctant, NonPositiveMixed, Other };

const char* to_string(DriftClass cls);

struct Drift3 {
  std::int64_t dx = 0;
  std::int64_t dy = 0;
  std::int64_t dz = 0;
  DriftClass cls = DriftClass::Zero;
};

Drift3 drift(const WeightedStepSet3& stepset);

// The inventory S(x,y,z) = sum of w * x^i y^j z^k over the model.
// Both throw NonPositivePoint unless every coordinate is > 0.
double inventory_eval(const WeightedStepSet3& stepset, const std::array<double, 3>& point);
std::array<double, 3> inventory_grad(const WeightedStepSet3& stepset,
                                     const std::array<double, 3>& point);

}  // namespace orthowalk
