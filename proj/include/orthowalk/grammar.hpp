#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orthowalk/bigint.hpp"
#include "orthowalk/halfspace.hpp"

namespace orthowalk {

struct Symbol {
  enum class Kind { Epsilon, Atom, Nonterminal };

  Kind kind = Kind::Epsilon;
  int index = -1;

  static Symbol epsilon() { return {Kind::Epsilon, -1}; }
  static Symbol atom(int id) { return {Kind::Atom, id}; }
  static Symbol nonterminal(int id) { return {Kind::Nonterminal, id}; }

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// A sequence of symbols; an alternative holding only Epsilon derives the
/// empty word.
using Alternative = std::vector<Symbol>;

struct Production {
  std::string name;
  std::vector<Alternative> alternatives;
};

/// Context-free specification over the atoms of a 1D stepset. Construction
/// drops unproductive nonterminals (and the alternatives that use them) and
/// anything unreachable from the roots, i.e. the start symbol plus the
/// optional excursion symbol.
class Grammar {
 public:
  Grammar(std::vector<Atom1D> atoms, std::vector<Production> productions, int start,
          std::optional<int> excursion = std::nullopt);

  const std::vector<Production>& nonterminals() const { return productions_; }
  const Production& nonterminal(int id) const { return productions_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return productions_.size(); }
  std::size_t alternative_count() const;

  int start() const { return start_; }
  std::optional<int> excursion() const { return excursion_; }
  std::optional<int> find(std::string_view name) const;

  const std::vector<Atom1D>& atoms() const { return atoms_; }

  /// Plain-text productions, one nonterminal per line.
  std::string dump() const;

 private:
  std::vector<Atom1D> atoms_;
  std::vector<Production> productions_;
  int start_ = 0;
  std::optional<int> excursion_;
};

/// First-dive grammar for meanders (prefix sums >= 0, free endpoint) over
/// the atoms of `steps`. Start symbol W; excursions are exposed through D.
///
///   W      = eps + sum_{s >= 0} a_s . M_s                 (M_0 = W)
///   M_h    = W + sum_{t <= min(h,m)} B_t . M_{h-t}
///   B_t    = [atom -t] + sum_{j >= 0} a_j . C_{j,t}        (C_{0,t} = B_t)
///   C_{j,t}= [B_{j+t} if j+t <= m] + sum_{r <= min(j,m)} B_r . C_{j-r,t}
///   D      = eps + sum_{s >= 0} a_s . T_s                 (T_0 = D)
///   T_j    = sum_{r <= min(j,m)} B_r . T_{j-r}
///
/// B_t derives the walks whose first visit below 0 lands exactly at -t.
/// Throws DegenerateStepset without both positive and negative atoms.
Grammar build_meander_grammar(const StepSet1D& steps);

/// coefficients[nonterminal][n] = weighted number of words of length n.
struct SeriesTable {
  std::vector<std::vector<BigInt>> coefficients;

  const std::vector<BigInt>& of(int nonterminal) const {
    return coefficients.at(static_cast<std::size_t>(nonterminal));
  }
};

SeriesTable grammar_counts(const Grammar& grammar, std::size_t n_max);

/// Recurrence oracle independent of any grammar: f(0,0) = 1 and
/// f(n,h) = sum over atoms of weight * f(n-1, h - value), heights >= 0.
/// Returns sum_h f(n,h) for n = 0..n_max, or f(n, endpoint) when an
/// endpoint is given (endpoint 0 gives excursions).
std::vector<BigInt> count_meanders_dp(const StepSet1D& steps, std::size_t n_max,
                                      std::optional<long> endpoint = std::nullopt);

}  // namespace orthowalk
