#include "orthowalk/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <sstream>
#include <thread>

namespace orthowalk {

std::vector<Point3> Walk3D::positions() const {
  std::vector<Point3> out;
  out.reserve(steps.size() + 1);
  Point3 p;
  out.push_back(p);
  for (const auto& s : steps) {
    p = p + s;
    out.push_back(p);
  }
  return out;
}

Point3 Walk3D::endpoint() const {
  Point3 p;
  for (const auto& s : steps) p = p + s;
  return p;
}

Walk3D lift(const SampledWord& word, const StepSet1D& steps) {
  Walk3D walk;
  walk.steps.reserve(word.atoms.size());
  for (int id : word.atoms) {
    if (id < 0 || static_cast<std::size_t>(id) >= steps.size()) {
      throw Error(ErrorCode::UnknownAtom, "atom id " + std::to_string(id) + " is not in the stepset");
    }
    walk.steps.push_back(steps.atom(id).source);
  }
  return walk;
}

bool in_orthant(const Walk3D& walk) {
  Point3 p;
  for (const auto& s : walk.steps) {
    p = p + s;
    if (!p.in_orthant()) return false;
  }
  return true;
}

Model build_model(const WeightedStepSet3& stepset, const ModelOptions& options) {
  const Drift3 d = drift(stepset);
  const Minimizer minimizer = minimize_inventory(stepset, options.minimizer_tolerance);
  const ProjectionVector vector = projection_vector(minimizer, options.unit_log_eps);
  const IntegerProjection projection = rationalize(vector, options.max_den);
  StepSet1D steps1d = project_stepset(stepset, projection);
  const Analysis1D analysis = analyze_1d(steps1d);
  Grammar grammar = build_meander_grammar(steps1d);
  GFEvaluation evaluation =
      options.x0_override ? evaluate_gf(grammar, *options.x0_override, options.evaluation.evaluation)
                          : evaluate_near_singularity(grammar, analysis.rho, options.evaluation);
  BoltzmannSampler sampler(grammar, evaluation);
  return Model{stepset,  d,       minimizer,           vector,
               projection, std::move(steps1d), analysis, std::move(grammar),
               std::move(evaluation), std::move(sampler)};
}

SampleCounters& SampleCounters::operator+=(const SampleCounters& other) {
  free_draws += other.free_draws;
  oversize += other.oversize;
  undersize += other.undersize;
  orthant_rejects += other.orthant_rejects;
  accepted += other.accepted;
  return *this;
}

namespace {

struct WorkerResult {
  std::vector<Walk3D> walks;
  SampleCounters counters;
  bool exhausted = false;
  std::exception_ptr error;
};

WorkerResult boltzmann_worker(const Model& model, const SampleRequest& request, std::size_t quota,
                              std::uint64_t budget, std::uint64_t seed) {
  WorkerResult out;
  Rng rng(seed);
  BoltzmannSampler::Buffer buffer;
  const auto& atoms = model.steps1d.atoms();
  std::vector<Step3> steps;
  while (out.walks.size() < quota) {
    if (out.counters.free_draws >= budget) {
      out.exhausted = true;
      break;
    }
    ++out.counters.free_draws;
    if (!model.sampler.sample_into(rng, request.n_max, buffer)) {
      ++out.counters.oversize;
      continue;
    }
    if (buffer.atoms.size() < request.n_min) {
      ++out.counters.undersize;
      continue;
    }
    steps.clear();
    Point3 p;
    bool inside = true;
    for (int id : buffer.atoms) {
      const Step3& s = atoms[static_cast<std::size_t>(id)].source;
      p = p + s;
      if (!p.in_orthant()) {
        inside = false;
        break;
      }
      steps.push_back(s);
    }
    if (!inside) {
      ++out.counters.orthant_rejects;
      continue;
    }
    ++out.counters.accepted;
    out.walks.push_back(Walk3D{steps});
  }
  return out;
}

}  // namespace

SampleReport sample_orthant_walks(const Model& model, const SampleRequest& request) {
  if (request.n_min > request.n_max) {
    throw Error(ErrorCode::ParseError, "length window has n_min > n_max");
  }
  const auto start = std::chrono::steady_clock::now();
  const unsigned workers = std::max(1U, request.workers);

  std::vector<WorkerResult> results(workers);
  auto run = [&](unsigned k) {
    const std::size_t quota = request.count / workers + (k < request.count % workers ? 1 : 0);
    const std::uint64_t budget = request.max_attempts / workers + (k < request.max_attempts % workers ? 1 : 0);
    const std::uint64_t seed = workers == 1 ? request.seed : derive_seed(request.seed, k);
    try {
      results[k] = boltzmann_worker(model, request, quota, budget, seed);
    } catch (...) {
      results[k].error = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned k = 0; k < workers; ++k) threads.emplace_back(run, k);
  }

  SampleReport report;
  report.seed = request.seed;
  bool exhausted = false;
  for (auto& r : results) {
    if (r.error) std::rethrow_exception(r.error);
    report.counters += r.counters;
    exhausted = exhausted || r.exhausted;
    std::move(r.walks.begin(), r.walks.end(), std::back_inserter(report.walks));
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (exhausted) {
    std::ostringstream msg;
    msg << "accepted " << report.walks.size() << " of " << request.count << " walks within "
        << request.max_attempts << " free draws";
    throw SamplingExhausted(std::move(report), msg.str());
  }
  return report;
}

SampleReport naive_sample(const WeightedStepSet3& stepset, std::size_t length, std::size_t count,
                          std::uint64_t max_attempts, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::uint64_t> cumulative;
  std::uint64_t total = 0;
  for (const auto& e : stepset.entries()) {
    total += e.weight;
    cumulative.push_back(total);
  }
  Rng rng(seed);
  SampleReport report;
  report.seed = seed;
  std::vector<Step3> steps;
  steps.reserve(length);
  auto exhausted = [&] {
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream msg;
    msg << "naive sampler accepted " << report.walks.size() << " of " << count << " walks of length "
        << length << " within " << max_attempts << " step draws";
    return SamplingExhausted(std::move(report), msg.str());
  };
  while (report.walks.size() < count) {
    if (length > 0 && report.counters.free_draws >= max_attempts) throw exhausted();
    steps.clear();
    Point3 p;
    bool inside = true;
    for (std::size_t i = 0; i < length; ++i) {
      if (report.counters.free_draws >= max_attempts) throw exhausted();
      ++report.counters.free_draws;
      const std::uint64_t r = rng.below(total);
      const auto idx = static_cast<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
      const Step3& s = stepset.entries()[idx].step;
      p = p + s;
      if (!p.in_orthant()) {
        inside = false;
        break;
      }
      steps.push_back(s);
    }
    if (!inside) {
      ++report.counters.orthant_rejects;
      continue;
    }
    ++report.counters.accepted;
    report.walks.push_back(Walk3D{steps});
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

BigInt CountTable::total(std::size_t n) const {
  BigInt sum = 0;
  for (const auto& [p, c] : layers.at(n)) sum += c;
  return sum;
}

CountTable count_orthant_walks(const WeightedStepSet3& stepset, std::size_t n_max,
                               std::size_t max_length) {
  if (n_max > max_length) {
    throw Error(ErrorCode::BudgetExceeded, "exact counting limited to length " + std::to_string(max_length));
  }
  CountTable table;
  table.layers.reserve(n_max + 1);
  table.layers.push_back({{Point3{}, BigInt(1)}});
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::map<Point3, BigInt> next;
    for (const auto& [p, c] : table.layers.back()) {
      for (const auto& e : stepset.entries()) {
        const Point3 q = p + e.step;
        if (!q.in_orthant()) continue;
        next[q] += c * e.weight;
      }
    }
    table.layers.push_back(std::move(next));
  }
  return table;
}

}  // namespace orthowalk
