#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "orthowalk/grammar.hpp"
#include "orthowalk/random.hpp"

namespace orthowalk {

struct EvaluationOptions {
  double divergence_cap = 1e8;
  int warmup_iterations = 100;
  int max_iterations = 1'000'000;
  double tolerance = 1e-12;
};

/// Generating-function values of every nonterminal at x0.
struct GFEvaluation {
  double x0 = 0.0;
  std::vector<double> values;
  /// max |y - Phi(x0, y)| over the system
  double residual = 0.0;
  int iterations = 0;

  double value(int nonterminal) const { return values.at(static_cast<std::size_t>(nonterminal)); }
};

/// Least nonnegative solution of y = Phi(x, y), the polynomial system read
/// off the productions (union = sum, sequence = product, atom = weight * x,
/// epsilon = 1). Kleene iteration from 0 warms up, then Newton steps on
/// y - Phi(x, y) finish the job; at a square-root singularity Newton still
/// converges, linearly.
///
/// Throws Divergent when x is past the radius of convergence (iterates blow
/// past the cap, or a Newton correction turns decisively negative, which
/// cannot happen below the least fixed point), NoConvergence otherwise.
GFEvaluation evaluate_gf(const Grammar& grammar, double x, const EvaluationOptions& options = {});

struct EvaluationPointOptions {
  EvaluationOptions evaluation;
  /// Largest accepted start-symbol value. When the start series diverges at
  /// rho (zero or positive projected drift) the sampler backs off below it.
  double start_value_cap = 1e2;
  int bisection_steps = 60;
};

/// Evaluates at rho when that converges with a start value within the cap;
/// otherwise bisects on (0, rho) for the largest x that does.
GFEvaluation evaluate_near_singularity(const Grammar& grammar, double rho,
                                       const EvaluationPointOptions& options = {});

/// A word over atom ids.
struct SampledWord {
  std::vector<int> atoms;
  std::size_t length() const { return atoms.size(); }
};

class BoltzmannSampler {
 public:
  /// Scratch space reused across draws.
  struct Buffer {
    std::vector<int> atoms;
    std::vector<int> stack;
  };

  BoltzmannSampler(const Grammar& grammar, const GFEvaluation& evaluation);

  /// Free Boltzmann draw from the start symbol into buffer.atoms. Returns
  /// false (Oversize) as soon as more than n_max atoms have been emitted.
  bool sample_into(Rng& rng, std::size_t n_max, Buffer& buffer) const;

  /// nullopt means Oversize.
  std::optional<SampledWord> sample(Rng& rng, std::size_t n_max) const;

  /// Probability of choosing alternative k when expanding a nonterminal.
  double probability(int nonterminal, std::size_t k) const;

  /// Largest |1 - sum of raw alternative probabilities| seen before
  /// renormalization.
  double max_renormalization() const { return max_renormalization_; }

  double x0() const { return x0_; }

 private:
  struct Rule {
    std::vector<double> cumulative;
    // Per alternative, its symbols reversed: nonterminal ids as is, atoms as
    // ~id. Epsilon is dropped.
    std::vector<std::vector<int>> pushes;
  };

  std::vector<Rule> rules_;
  int start_ = 0;
  double x0_ = 0.0;
  double max_renormalization_ = 0.0;
};

struct WindowStats {
  std::uint64_t attempts = 0;
  std::uint64_t oversize_aborts = 0;
  std::uint64_t undersize_rejects = 0;
};

struct WindowSample {
  SampledWord word;
  WindowStats stats;
};

class WindowExhausted : public Error {
 public:
  WindowExhausted(WindowStats stats, const std::string& message)
      : Error(ErrorCode::AttemptsExhausted, message), stats_(stats) {}
  const WindowStats& stats() const { return stats_; }

 private:
  WindowStats stats_;
};

/// Repeats free draws until the length falls in [n_min, n_max]. Throws
/// WindowExhausted after max_attempts draws.
WindowSample sample_in_window(const BoltzmannSampler& sampler, std::size_t n_min, std::size_t n_max,
                              std::uint64_t max_attempts, Rng& rng);

}  // namespace orthowalk
