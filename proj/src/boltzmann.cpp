#include "orthowalk/boltzmann.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orthowalk {
namespace {

// One monomial c * prod y[refs] of Phi_i.
struct Term {
  double coefficient = 1.0;
  std::vector<int> refs;
};

struct PolynomialSystem {
  std::vector<std::vector<Term>> terms;

  PolynomialSystem(const Grammar& grammar, double x) {
    terms.resize(grammar.size());
    for (std::size_t i = 0; i < grammar.size(); ++i) {
      for (const auto& alt : grammar.nonterminal(static_cast<int>(i)).alternatives) {
        Term t;
        for (const auto& s : alt) {
          if (s.kind == Symbol::Kind::Atom) {
            t.coefficient *= static_cast<double>(grammar.atoms()[static_cast<std::size_t>(s.index)].weight) * x;
          } else if (s.kind == Symbol::Kind::Nonterminal) {
            t.refs.push_back(s.index);
          }
        }
        terms[i].push_back(std::move(t));
      }
    }
  }

  std::size_t size() const { return terms.size(); }

  Eigen::VectorXd apply(const Eigen::VectorXd& y) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) {
      double total = 0.0;
      for (const auto& t : terms[i]) {
        double prod = t.coefficient;
        for (int r : t.refs) prod *= y[r];
        total += prod;
      }
      out[static_cast<Eigen::Index>(i)] = total;
    }
    return out;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& y) const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < size(); ++i) {
      for (const auto& t : terms[i]) {
        for (std::size_t p = 0; p < t.refs.size(); ++p) {
          double prod = t.coefficient;
          for (std::size_t q = 0; q < t.refs.size(); ++q) {
            if (q != p) prod *= y[t.refs[q]];
          }
          jac(static_cast<Eigen::Index>(i), t.refs[p]) += prod;
        }
      }
    }
    return jac;
  }
};

bool within_cap(const Eigen::VectorXd& y, double cap) {
  return y.allFinite() && y.maxCoeff() <= cap;
}

[[noreturn]] void diverge(double x, const std::string& why) {
  std::ostringstream msg;
  msg << "generating functions diverge at x = " << x << " (" << why << ")";
  throw Error(ErrorCode::Divergent, msg.str());
}

}  // namespace

GFEvaluation evaluate_gf(const Grammar& grammar, double x, const EvaluationOptions& options) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::NonPositivePoint, "evaluation point must be a finite nonnegative real");
  }
  const PolynomialSystem system(grammar, x);
  const auto n = static_cast<Eigen::Index>(system.size());
  auto tolerance_for = [&](const Eigen::VectorXd& y) {
    return options.tolerance * (1.0 + y.cwiseAbs().maxCoeff());
  };
  auto finish = [&](const Eigen::VectorXd& y, int iterations) {
    GFEvaluation out;
    out.x0 = x;
    out.values.assign(y.data(), y.data() + n);
    out.residual = (system.apply(y) - y).cwiseAbs().maxCoeff();
    out.iterations = iterations;
    return out;
  };

  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  int iterations = 0;
  for (; iterations < options.warmup_iterations; ++iterations) {
    Eigen::VectorXd next = system.apply(y);
    if (!within_cap(next, options.divergence_cap)) diverge(x, "fixed-point iterates exceed the cap");
    const double step = (next - y).cwiseAbs().maxCoeff();
    y = std::move(next);
    if (step <= tolerance_for(y)) return finish(y, iterations + 1);
  }

  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd best = y;
  double best_residual = (system.apply(y) - y).cwiseAbs().maxCoeff();
  bool newton_failed = false;
  constexpr int kNewtonBudget = 500;
  for (int k = 0; k < kNewtonBudget && iterations < options.max_iterations; ++k, ++iterations) {
    const Eigen::VectorXd residual = system.apply(y) - y;
    const double res = residual.cwiseAbs().maxCoeff();
    if (res < best_residual) {
      best_residual = res;
      best = y;
    }
    // Near a square-root singularity the residual is quadratic in the
    // error, so a small residual alone says little; only an exact hit stops
    // here and otherwise the step size decides.
    if (res == 0.0) return finish(y, iterations);

    const Eigen::VectorXd delta = (identity - system.jacobian(y)).partialPivLu().solve(residual);
    if (!delta.allFinite()) {
      newton_failed = true;
      break;
    }
    // Below the least fixed point (I - J)^{-1} >= 0 and Phi(y) - y >= 0, so
    // a substantially negative correction means there is no fixed point.
    for (Eigen::Index i = 0; i < n; ++i) {
      if (delta[i] < -1e-6 * (1.0 + std::abs(y[i]))) diverge(x, "Newton correction turned negative");
    }
    Eigen::VectorXd next = y + delta;
    for (int halving = 0; halving < 60 && next.minCoeff() < 0.0; ++halving) {
      next = y + 0.5 * (next - y);
    }
    if (!within_cap(next, options.divergence_cap)) diverge(x, "Newton iterates exceed the cap");
    const double step = (next - y).cwiseAbs().maxCoeff();
    y = std::move(next);
    if (step <= tolerance_for(y)) {
      ++iterations;
      break;
    }
  }

  const double final_residual = (system.apply(y) - y).cwiseAbs().maxCoeff();
  if (!newton_failed && final_residual <= 1e-10 * (1.0 + y.cwiseAbs().maxCoeff())) return finish(y, iterations);
  if (final_residual < best_residual) {
    best_residual = final_residual;
    best = y;
  }
  if (best_residual <= 1e-10 * (1.0 + best.cwiseAbs().maxCoeff())) return finish(best, iterations);

  if (newton_failed) {
    // Singular Jacobian: fall back to plain monotone iteration.
    y = best;
    for (; iterations < options.max_iterations; ++iterations) {
      Eigen::VectorXd next = system.apply(y);
      if (!within_cap(next, options.divergence_cap)) diverge(x, "fixed-point iterates exceed the cap");
      const double step = (next - y).cwiseAbs().maxCoeff();
      y = std::move(next);
      if (step <= tolerance_for(y)) return finish(y, iterations + 1);
    }
  }
  std::ostringstream msg;
  msg << "generating-function system did not converge at x = " << x << " (residual "
      << best_residual << ")";
  throw Error(ErrorCode::NoConvergence, msg.str());
}

GFEvaluation evaluate_near_singularity(const Grammar& grammar, double rho,
                                       const EvaluationPointOptions& options) {
  auto attempt = [&](double x) -> std::optional<GFEvaluation> {
    try {
      GFEvaluation eval = evaluate_gf(grammar, x, options.evaluation);
      if (eval.value(grammar.start()) <= options.start_value_cap) return eval;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Divergent && e.code() != ErrorCode::NoConvergence) throw;
    }
    return std::nullopt;
  };

  if (auto at_rho = attempt(rho)) return *at_rho;

  double lo = 0.0;
  double hi = rho;
  std::optional<GFEvaluation> best;
  for (int step = 0; step < options.bisection_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (auto eval = attempt(mid)) {
      lo = mid;
      best = std::move(eval);
    } else {
      hi = mid;
    }
  }
  if (!best) {
    throw Error(ErrorCode::NoConvergence, "no evaluation point below the singularity converged");
  }
  return *best;
}

BoltzmannSampler::BoltzmannSampler(const Grammar& grammar, const GFEvaluation& evaluation)
    : start_(grammar.start()), x0_(evaluation.x0) {
  rules_.resize(grammar.size());
  for (std::size_t i = 0; i < grammar.size(); ++i) {
    const auto& alts = grammar.nonterminal(static_cast<int>(i)).alternatives;
    Rule& rule = rules_[i];
    std::vector<double> weights;
    for (const auto& alt : alts) {
      double value = 1.0;
      std::vector<int> push;
      for (auto it = alt.rbegin(); it != alt.rend(); ++it) {
        if (it->kind == Symbol::Kind::Atom) {
          value *= static_cast<double>(grammar.atoms()[static_cast<std::size_t>(it->index)].weight) *
                   evaluation.x0;
          push.push_back(~it->index);
        } else if (it->kind == Symbol::Kind::Nonterminal) {
          value *= evaluation.value(it->index);
          push.push_back(it->index);
        }
      }
      weights.push_back(value);
      rule.pushes.push_back(std::move(push));
    }
    const double own = evaluation.values[i];
    double raw_sum = 0.0;
    for (double w : weights) raw_sum += w;
    if (own > 0.0) max_renormalization_ = std::max(max_renormalization_, std::abs(1.0 - raw_sum / own));
    double running = 0.0;
    for (double w : weights) {
      running += raw_sum > 0.0 ? w / raw_sum : 0.0;
      rule.cumulative.push_back(running);
    }
    if (!rule.cumulative.empty()) rule.cumulative.back() = 1.0;
  }
}

double BoltzmannSampler::probability(int nonterminal, std::size_t k) const {
  const auto& cum = rules_.at(static_cast<std::size_t>(nonterminal)).cumulative;
  return k == 0 ? cum.at(0) : cum.at(k) - cum.at(k - 1);
}

bool BoltzmannSampler::sample_into(Rng& rng, std::size_t n_max, Buffer& buffer) const {
  auto& atoms = buffer.atoms;
  auto& stack = buffer.stack;
  atoms.clear();
  stack.clear();
  stack.push_back(start_);
  while (!stack.empty()) {
    const int top = stack.back();
    stack.pop_back();
    if (top < 0) {
      if (atoms.size() == n_max) return false;
      atoms.push_back(~top);
      continue;
    }
    const Rule& rule = rules_[static_cast<std::size_t>(top)];
    std::size_t k = 0;
    if (rule.cumulative.size() > 1) {
      const double u = rng.uniform();
      while (k + 1 < rule.cumulative.size() && u >= rule.cumulative[k]) ++k;
    }
    const auto& push = rule.pushes[k];
    stack.insert(stack.end(), push.begin(), push.end());
  }
  return true;
}

std::optional<SampledWord> BoltzmannSampler::sample(Rng& rng, std::size_t n_max) const {
  Buffer buffer;
  if (!sample_into(rng, n_max, buffer)) return std::nullopt;
  return SampledWord{std::move(buffer.atoms)};
}

WindowSample sample_in_window(const BoltzmannSampler& sampler, std::size_t n_min, std::size_t n_max,
                              std::uint64_t max_attempts, Rng& rng) {
  WindowStats stats;
  BoltzmannSampler::Buffer buffer;
  while (stats.attempts < max_attempts) {
    ++stats.attempts;
    if (!sampler.sample_into(rng, n_max, buffer)) {
      ++stats.oversize_aborts;
      continue;
    }
    if (buffer.atoms.size() < n_min) {
      ++stats.undersize_rejects;
      continue;
    }
    return WindowSample{SampledWord{buffer.atoms}, stats};
  }
  std::ostringstream msg;
  msg << "no word with length in [" << n_min << ", " << n_max << "] after " << max_attempts
      << " draws";
  throw WindowExhausted(stats, msg.str());
}

}  // namespace orthowalk
