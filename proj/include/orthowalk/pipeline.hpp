#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "orthowalk/bigint.hpp"
#include "orthowalk/boltzmann.hpp"
#include "orthowalk/grammar.hpp"
#include "orthowalk/halfspace.hpp"
#include "orthowalk/stepset.hpp"

namespace orthowalk {

struct Point3 {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;

  Point3 operator+(const Step3& s) const { return {x + s.dx, y + s.dy, z + s.dz}; }
  Point3 operator-(const Step3& s) const { return {x - s.dx, y - s.dy, z - s.dz}; }
  bool in_orthant() const { return x >= 0 && y >= 0 && z >= 0; }

  friend auto operator<=>(const Point3&, const Point3&) = default;
};

struct Walk3D {
  std::vector<Step3> steps;

  std::size_t length() const { return steps.size(); }
  /// Prefix sums starting at the origin; length() + 1 points.
  std::vector<Point3> positions() const;
  Point3 endpoint() const;
};

/// Replaces each atom by its source step. Throws UnknownAtom.
Walk3D lift(const SampledWord& word, const StepSet1D& steps);

/// True iff every prefix position is componentwise >= 0.
bool in_orthant(const Walk3D& walk);

struct ModelOptions {
  double minimizer_tolerance = 1e-12;
  double unit_log_eps = 1e-8;
  int max_den = 8;
  EvaluationPointOptions evaluation;
  /// Evaluate at this x instead of the singularity (experiments only).
  std::optional<double> x0_override;
};

/// Everything the setup phase computes for one model.
struct Model {
  WeightedStepSet3 stepset;
  Drift3 drift;
  Minimizer minimizer;
  ProjectionVector vector;
  IntegerProjection projection;
  StepSet1D steps1d;
  Analysis1D analysis;
  Grammar grammar;
  GFEvaluation evaluation;
  BoltzmannSampler sampler;
};

Model build_model(const WeightedStepSet3& stepset, const ModelOptions& options = {});

struct SampleCounters {
  std::uint64_t free_draws = 0;
  std::uint64_t oversize = 0;
  std::uint64_t undersize = 0;
  std::uint64_t orthant_rejects = 0;
  std::uint64_t accepted = 0;

  SampleCounters& operator+=(const SampleCounters& other);
};

struct SampleReport {
  std::vector<Walk3D> walks;
  SampleCounters counters;
  double wall_time_seconds = 0.0;
  std::uint64_t seed = 0;
};

class SamplingExhausted : public Error {
 public:
  SamplingExhausted(SampleReport partial, const std::string& message)
      : Error(ErrorCode::AttemptsExhausted, message), partial_(std::move(partial)) {}
  const SampleReport& partial() const { return partial_; }

 private:
  SampleReport partial_;
};

struct SampleRequest {
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  std::size_t count = 0;
  std::uint64_t max_attempts = 10'000'000;
  std::uint64_t seed = 0;
  /// Worker k draws count/workers walks (the first count % workers workers
  /// draw one more) from derive_seed(seed, k), or from seed itself when there
  /// is a single worker; results are concatenated in worker order, so output
  /// depends only on (seed, workers).
  unsigned workers = 1;
};

/// Boltzmann draws, lifted to 3D and filtered by the orthant. Throws
/// SamplingExhausted (carrying the partial report) once max_attempts free
/// draws are spent.
SampleReport sample_orthant_walks(const Model& model, const SampleRequest& request);

/// Steps drawn i.i.d. proportionally to weight, restarting on the first exit
/// from the orthant. Attempts are single-step draws: max_attempts bounds them
/// and counters.free_draws reports them; orthant_rejects counts abandoned walks.
SampleReport naive_sample(const WeightedStepSet3& stepset, std::size_t length, std::size_t count,
                          std::uint64_t max_attempts, std::uint64_t seed);

/// layers[n] maps each endpoint to the weighted number of orthant walks of
/// length n ending there.
struct CountTable {
  std::vector<std::map<Point3, BigInt>> layers;

  BigInt total(std::size_t n) const;
};

/// Throws BudgetExceeded when n_max > max_length.
CountTable count_orthant_walks(const WeightedStepSet3& stepset, std::size_t n_max,
                               std::size_t max_length = 64);

}  // namespace orthowalk
