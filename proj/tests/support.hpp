#pragma once

#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "orthowalk/halfspace.hpp"
#include "orthowalk/stepset.hpp"

namespace orthowalk::test {

inline WeightedStepSet3 make_stepset(std::initializer_list<std::pair<Step3, std::uint64_t>> entries) {
  std::vector<WeightedStep> raw;
  for (const auto& [s, w] : entries) raw.push_back({s, w});
  return validate_stepset(raw);
}

inline constexpr Step3 e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
inline constexpr Step3 m1{-1, 0, 0}, m2{0, -1, 0}, m3{0, 0, -1};

// {e1,e2,e3} weight 1, their negatives weight 2.
inline WeightedStepSet3 flagship() { return make_stepset({{e1, 1}, {e2, 1}, {e3, 1}, {m1, 2}, {m2, 2}, {m3, 2}}); }

inline WeightedStepSet3 simple_walk() {
  return make_stepset({{e1, 1}, {e2, 1}, {e3, 1}, {m1, 1}, {m2, 1}, {m3, 1}});
}

// Minimizer at (1, sqrt 2, 1).
inline WeightedStepSet3 minus_e2_doubled() {
  return make_stepset({{e1, 1}, {e2, 1}, {e3, 1}, {m1, 1}, {m2, 2}, {m3, 1}});
}

inline StepSet1D steps_1d(std::initializer_list<std::pair<long, std::uint64_t>> values) {
  std::vector<std::pair<long, std::uint64_t>> v(values);
  return stepset_1d_from_values(v);
}

// The five 1D stepsets used for grammar checks.
inline std::vector<StepSet1D> reference_1d_stepsets() {
  return {
      steps_1d({{1, 3}, {-1, 6}}),
      steps_1d({{1, 1}, {-1, 1}}),
      steps_1d({{1, 1}, {-2, 1}}),
      steps_1d({{0, 4}, {1, 1}, {-1, 2}}),
      steps_1d({{11, 1}, {-11, 3}, {7, 2}, {-7, 4}}),
  };
}

// Pearson p-value of observed counts against probabilities, pooling cells
// whose expected count is below 5.
inline double chi_square_p(const std::vector<double>& observed, const std::vector<double>& probabilities) {
  double total = 0.0;
  for (double o : observed) total += o;
  double stat = 0.0, pooled_obs = 0.0, pooled_exp = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = probabilities[i] * total;
    if (e < 5.0) {
      pooled_obs += observed[i];
      pooled_exp += e;
      continue;
    }
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  if (cells < 2) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(cells - 1), stat));
}

}  // namespace orthowalk::test
