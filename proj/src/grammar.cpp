#include "orthowalk/grammar.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace orthowalk {
namespace {

bool is_ref(const Symbol& s) { return s.kind == Symbol::Kind::Nonterminal; }

// Kahn's algorithm over "depends on" edges; dependencies come first.
std::vector<int> topological_order(const std::vector<std::vector<int>>& deps) {
  const std::size_t n = deps.size();
  std::vector<int> pending(n, 0);
  std::vector<std::vector<int>> users(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (int d : deps[v]) {
      ++pending[v];
      users[static_cast<std::size_t>(d)].push_back(static_cast<int>(v));
    }
  }
  std::vector<int> order;
  order.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (pending[v] == 0) order.push_back(static_cast<int>(v));
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int u : users[static_cast<std::size_t>(order[i])]) {
      if (--pending[static_cast<std::size_t>(u)] == 0) order.push_back(u);
    }
  }
  if (order.size() != n) {
    throw Error(ErrorCode::Degenerate, "grammar has a cycle of nullable or unit productions");
  }
  return order;
}

}  // namespace

Grammar::Grammar(std::vector<Atom1D> atoms, std::vector<Production> productions, int start,
                 std::optional<int> excursion)
    : atoms_(std::move(atoms)) {
  const std::size_t n = productions.size();
  for (const auto& p : productions) {
    for (const auto& alt : p.alternatives) {
      for (const auto& s : alt) {
        const bool bad_atom = s.kind == Symbol::Kind::Atom &&
                              (s.index < 0 || static_cast<std::size_t>(s.index) >= atoms_.size());
        const bool bad_ref = is_ref(s) && (s.index < 0 || static_cast<std::size_t>(s.index) >= n);
        if (bad_atom || bad_ref) {
          throw Error(ErrorCode::UnknownAtom, "production " + p.name + " references an unknown symbol");
        }
      }
    }
  }

  // Productive: some alternative made of atoms, epsilon and productive refs.
  std::vector<bool> productive(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (productive[i]) continue;
      for (const auto& alt : productions[i].alternatives) {
        const bool ok = std::all_of(alt.begin(), alt.end(), [&](const Symbol& s) {
          return !is_ref(s) || productive[static_cast<std::size_t>(s.index)];
        });
        if (ok) {
          productive[i] = true;
          changed = true;
          break;
        }
      }
    }
  }
  for (auto& p : productions) {
    std::erase_if(p.alternatives, [&](const Alternative& alt) {
      return std::any_of(alt.begin(), alt.end(), [&](const Symbol& s) {
        return is_ref(s) && !productive[static_cast<std::size_t>(s.index)];
      });
    });
  }

  std::vector<bool> reachable(n, false);
  std::vector<int> frontier;
  auto visit = [&](int id) {
    if (productive[static_cast<std::size_t>(id)] && !reachable[static_cast<std::size_t>(id)]) {
      reachable[static_cast<std::size_t>(id)] = true;
      frontier.push_back(id);
    }
  };
  visit(start);
  if (excursion) visit(*excursion);
  while (!frontier.empty()) {
    const int id = frontier.back();
    frontier.pop_back();
    for (const auto& alt : productions[static_cast<std::size_t>(id)].alternatives) {
      for (const auto& s : alt) {
        if (is_ref(s)) visit(s.index);
      }
    }
  }
  if (!reachable[static_cast<std::size_t>(start)]) {
    throw Error(ErrorCode::DegenerateStepset, "start symbol derives no word");
  }

  std::vector<int> remap(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (reachable[i]) {
      remap[i] = static_cast<int>(productions_.size());
      productions_.push_back(std::move(productions[i]));
    }
  }
  for (auto& p : productions_) {
    for (auto& alt : p.alternatives) {
      for (auto& s : alt) {
        if (is_ref(s)) s.index = remap[static_cast<std::size_t>(s.index)];
      }
    }
  }
  start_ = remap[static_cast<std::size_t>(start)];
  if (excursion && remap[static_cast<std::size_t>(*excursion)] >= 0) {
    excursion_ = remap[static_cast<std::size_t>(*excursion)];
  }
}

std::size_t Grammar::alternative_count() const {
  std::size_t total = 0;
  for (const auto& p : productions_) total += p.alternatives.size();
  return total;
}

std::optional<int> Grammar::find(std::string_view name) const {
  for (std::size_t i = 0; i < productions_.size(); ++i) {
    if (productions_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::string Grammar::dump() const {
  std::ostringstream out;
  for (const auto& p : productions_) {
    out << p.name << " =";
    for (std::size_t k = 0; k < p.alternatives.size(); ++k) {
      out << (k == 0 ? " " : " + ");
      const auto& alt = p.alternatives[k];
      for (std::size_t i = 0; i < alt.size(); ++i) {
        if (i > 0) out << " x ";
        const Symbol& s = alt[i];
        switch (s.kind) {
          case Symbol::Kind::Epsilon:
            out << "eps";
            break;
          case Symbol::Kind::Atom: {
            const Atom1D& a = atoms_[static_cast<std::size_t>(s.index)];
            out << 'a' << a.id << '[' << (a.value >= 0 ? "+" : "") << a.value << ",w" << a.weight
                << ']';
            break;
          }
          case Symbol::Kind::Nonterminal:
            out << productions_[static_cast<std::size_t>(s.index)].name;
            break;
        }
      }
    }
    out << '\n';
  }
  return out.str();
}

Grammar build_meander_grammar(const StepSet1D& steps) {
  if (!steps.has_both_signs()) {
    throw Error(ErrorCode::DegenerateStepset, "meander grammar needs positive and negative atoms");
  }
  const long m = steps.max_down();
  const long big_m = steps.max_up();

  std::vector<Production> prods;
  auto add = [&](std::string name) {
    prods.push_back(Production{std::move(name), {}});
    return static_cast<int>(prods.size() - 1);
  };

  const int w = add("W");
  const int d = add("D");
  std::vector<int> b(static_cast<std::size_t>(m + 1), -1);
  for (long t = 1; t <= m; ++t) b[static_cast<std::size_t>(t)] = add("B" + std::to_string(t));
  std::vector<int> mh(static_cast<std::size_t>(big_m + 1), w);
  for (long h = 1; h <= big_m; ++h) mh[static_cast<std::size_t>(h)] = add("M" + std::to_string(h));
  std::vector<int> tj(static_cast<std::size_t>(big_m + 1), d);
  for (long j = 1; j <= big_m; ++j) tj[static_cast<std::size_t>(j)] = add("T" + std::to_string(j));
  // c[j][t], with C_{0,t} aliased to B_t
  std::vector<std::vector<int>> c(static_cast<std::size_t>(big_m + 1),
                                  std::vector<int>(static_cast<std::size_t>(m + 1), -1));
  for (long t = 1; t <= m; ++t) c[0][static_cast<std::size_t>(t)] = b[static_cast<std::size_t>(t)];
  for (long j = 1; j <= big_m; ++j) {
    for (long t = 1; t <= m; ++t) {
      c[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] =
          add("C" + std::to_string(j) + "_" + std::to_string(t));
    }
  }

  auto nt = [](int id) { return Symbol::nonterminal(id); };
  auto at = [](std::size_t idx) { return static_cast<std::size_t>(idx); };

  prods[at(w)].alternatives.push_back({Symbol::epsilon()});
  prods[at(d)].alternatives.push_back({Symbol::epsilon()});
  for (const auto& a : steps.atoms()) {
    if (a.value >= 0) {
      prods[at(w)].alternatives.push_back({Symbol::atom(a.id), nt(mh[at(a.value)])});
      prods[at(d)].alternatives.push_back({Symbol::atom(a.id), nt(tj[at(a.value)])});
    }
  }
  for (long h = 1; h <= big_m; ++h) {
    auto& alts = prods[at(mh[at(h)])].alternatives;
    alts.push_back({nt(w)});
    for (long t = 1; t <= std::min(h, m); ++t) alts.push_back({nt(b[at(t)]), nt(mh[at(h - t)])});
  }
  for (long t = 1; t <= m; ++t) {
    auto& alts = prods[at(b[at(t)])].alternatives;
    for (const auto& a : steps.atoms()) {
      if (a.value == -t) alts.push_back({Symbol::atom(a.id)});
    }
    for (const auto& a : steps.atoms()) {
      if (a.value >= 0) alts.push_back({Symbol::atom(a.id), nt(c[at(a.value)][at(t)])});
    }
  }
  for (long j = 1; j <= big_m; ++j) {
    for (long t = 1; t <= m; ++t) {
      auto& alts = prods[at(c[at(j)][at(t)])].alternatives;
      if (j + t <= m) alts.push_back({nt(b[at(j + t)])});
      for (long r = 1; r <= std::min(j, m); ++r) alts.push_back({nt(b[at(r)]), nt(c[at(j - r)][at(t)])});
    }
  }
  for (long j = 1; j <= big_m; ++j) {
    auto& alts = prods[at(tj[at(j)])].alternatives;
    for (long r = 1; r <= std::min(j, m); ++r) alts.push_back({nt(b[at(r)]), nt(tj[at(j - r)])});
  }

  return Grammar(steps.atoms(), std::move(prods), w, d);
}

SeriesTable grammar_counts(const Grammar& grammar, std::size_t n_max) {
  const std::size_t n_nt = grammar.size();
  const auto& atoms = grammar.atoms();
  SeriesTable table;
  table.coefficients.assign(n_nt, std::vector<BigInt>(n_max + 1));
  auto& coef = table.coefficients;

  auto has_atom = [](const Alternative& alt) {
    return std::any_of(alt.begin(), alt.end(),
                       [](const Symbol& s) { return s.kind == Symbol::Kind::Atom; });
  };

  // Constant terms. Only alternatives made entirely of nullable symbols
  // contribute, so find the nullable set first and order by those.
  {
    std::vector<bool> nullable(n_nt, false);
    auto all_nullable = [&](const Alternative& alt) {
      return std::all_of(alt.begin(), alt.end(), [&](const Symbol& s) {
        return s.kind == Symbol::Kind::Epsilon ||
               (is_ref(s) && nullable[static_cast<std::size_t>(s.index)]);
      });
    };
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < n_nt; ++i) {
        if (nullable[i]) continue;
        const auto& alts = grammar.nonterminal(static_cast<int>(i)).alternatives;
        if (std::any_of(alts.begin(), alts.end(), all_nullable)) {
          nullable[i] = true;
          changed = true;
        }
      }
    }
    std::vector<std::vector<int>> deps(n_nt);
    for (std::size_t i = 0; i < n_nt; ++i) {
      for (const auto& alt : grammar.nonterminal(static_cast<int>(i)).alternatives) {
        if (!all_nullable(alt)) continue;
        for (const auto& s : alt) {
          if (is_ref(s)) deps[i].push_back(s.index);
        }
      }
    }
    for (int id : topological_order(deps)) {
      BigInt total = 0;
      for (const auto& alt : grammar.nonterminal(id).alternatives) {
        if (!all_nullable(alt)) continue;
        BigInt prod = 1;
        for (const auto& s : alt) {
          if (is_ref(s)) prod *= coef[static_cast<std::size_t>(s.index)][0];
        }
        total += prod;
      }
      coef[static_cast<std::size_t>(id)][0] = total;
    }
  }
  if (n_max == 0) return table;

  auto constant_of = [&](const Symbol& s) -> bool {
    switch (s.kind) {
      case Symbol::Kind::Epsilon: return true;
      case Symbol::Kind::Atom: return false;
      case Symbol::Kind::Nonterminal: return coef[static_cast<std::size_t>(s.index)][0] != 0;
    }
    return false;
  };

  // Prefix products are stored per length, so the prefix ending at symbol k
  // needs X[n] as soon as every symbol before k has a nonzero constant term.
  std::vector<std::vector<int>> deps(n_nt);
  for (std::size_t i = 0; i < n_nt; ++i) {
    for (const auto& alt : grammar.nonterminal(static_cast<int>(i)).alternatives) {
      for (std::size_t k = 0; k < alt.size(); ++k) {
        if (is_ref(alt[k])) deps[i].push_back(alt[k].index);
        if (!constant_of(alt[k])) break;
      }
    }
  }
  const std::vector<int> order = topological_order(deps);

  // prefix[i][a][k] = coefficient at length k of the product of the first
  // a+1 symbols of alternative a of nonterminal i.
  std::vector<std::vector<std::vector<std::vector<BigInt>>>> prefix(n_nt);
  for (std::size_t i = 0; i < n_nt; ++i) {
    const auto& alts = grammar.nonterminal(static_cast<int>(i)).alternatives;
    prefix[i].resize(alts.size());
    for (std::size_t a = 0; a < alts.size(); ++a) {
      prefix[i][a].assign(alts[a].size(), std::vector<BigInt>(n_max + 1));
      // Fill length 0 of every prefix product.
      BigInt running = 1;
      for (std::size_t k = 0; k < alts[a].size(); ++k) {
        const Symbol& s = alts[a][k];
        if (s.kind == Symbol::Kind::Atom) running = 0;
        if (is_ref(s)) running *= coef[static_cast<std::size_t>(s.index)][0];
        prefix[i][a][k][0] = running;
      }
    }
  }

  auto series_at = [&](const Symbol& s, std::size_t n) -> BigInt {
    switch (s.kind) {
      case Symbol::Kind::Epsilon: return n == 0 ? 1 : 0;
      case Symbol::Kind::Atom: return n == 1 ? BigInt(atoms[static_cast<std::size_t>(s.index)].weight) : 0;
      case Symbol::Kind::Nonterminal: return coef[static_cast<std::size_t>(s.index)][n];
    }
    return 0;
  };

  for (std::size_t n = 1; n <= n_max; ++n) {
    for (int id : order) {
      const auto i = static_cast<std::size_t>(id);
      const auto& alts = grammar.nonterminal(id).alternatives;
      BigInt total = 0;
      for (std::size_t a = 0; a < alts.size(); ++a) {
        const auto& alt = alts[a];
        auto& pre = prefix[i][a];
        pre[0][n] = series_at(alt[0], n);
        for (std::size_t k = 1; k < alt.size(); ++k) {
          const Symbol& s = alt[k];
          BigInt value = 0;
          if (s.kind == Symbol::Kind::Epsilon) {
            value = pre[k - 1][n];
          } else if (s.kind == Symbol::Kind::Atom) {
            value = pre[k - 1][n - 1] * atoms[static_cast<std::size_t>(s.index)].weight;
          } else {
            const auto& sc = coef[static_cast<std::size_t>(s.index)];
            for (std::size_t left = 0; left <= n; ++left) {
              if (pre[k - 1][left] == 0 || sc[n - left] == 0) continue;
              value += pre[k - 1][left] * sc[n - left];
            }
          }
          pre[k][n] = std::move(value);
        }
        total += pre.back()[n];
      }
      coef[i][n] = std::move(total);
    }
  }
  return table;
}

std::vector<BigInt> count_meanders_dp(const StepSet1D& steps, std::size_t n_max,
                                      std::optional<long> endpoint) {
  const auto top = static_cast<std::size_t>(std::max(0L, steps.max_up())) * n_max;
  std::vector<BigInt> current(top + 1), next(top + 1);
  current[0] = 1;
  std::vector<BigInt> out;
  out.reserve(n_max + 1);

  auto record = [&]() {
    if (endpoint) {
      const long e = *endpoint;
      out.push_back(e >= 0 && static_cast<std::size_t>(e) <= top ? current[static_cast<std::size_t>(e)]
                                                                 : BigInt(0));
    } else {
      BigInt total = 0;
      for (const auto& v : current) total += v;
      out.push_back(std::move(total));
    }
  };

  record();
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (auto& v : next) v = 0;
    for (std::size_t h = 0; h <= top; ++h) {
      if (current[h] == 0) continue;
      for (const auto& a : steps.atoms()) {
        const long target = static_cast<long>(h) + a.value;
        if (target < 0 || static_cast<std::size_t>(target) > top) continue;
        next[static_cast<std::size_t>(target)] += current[h] * a.weight;
      }
    }
    std::swap(current, next);
    record();
  }
  return out;
}

}  // namespace orthowalk
