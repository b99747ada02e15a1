#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "orthowalk/io.hpp"
#include "orthowalk/pipeline.hpp"

namespace orthowalk {

// Exit codes of the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAttemptsExhausted = 3;
inline constexpr int kExitIo = 4;

int exit_code_for(ErrorCode code);

/// Seed from the options or the model file; otherwise a fresh random one.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const ModelFile& model, bool& drawn);

Model load_model(const std::string& path, std::optional<int> max_den = std::nullopt,
                 std::optional<double> x0 = std::nullopt);

struct AnalyzeOptions {
  std::string model_path;
  std::optional<int> max_den;
  std::optional<double> x0;
};
nlohmann::json cmd_analyze(const AnalyzeOptions& options);

struct SampleOptions {
  std::string model_path;
  std::size_t min_len = 0;
  std::size_t max_len = 0;
  std::size_t count = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t max_attempts = 10'000'000;
  unsigned workers = 1;
  std::optional<int> max_den;
  std::optional<double> x0;
};

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json summary;
};

/// Writes walk records to `records`. When attempts run out the partial
/// records are still written, followed by a summary marker line.
CommandResult cmd_sample(const SampleOptions& options, std::ostream& records);

struct NaiveOptions {
  std::string model_path;
  std::size_t length = 0;
  std::size_t count = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t max_attempts = 100'000'000;
};
CommandResult cmd_naive(const NaiveOptions& options, std::ostream& records);

struct VerifyOptions {
  std::string model_path;
  std::size_t length = 10;
  std::size_t samples = 10'000;
  std::optional<std::uint64_t> seed;
  std::uint64_t max_attempts = 1'000'000'000;
  unsigned workers = 1;
  std::optional<int> max_den;
};
/// Samples at exactly `length` and compares endpoints against exact counts.
nlohmann::json cmd_verify(const VerifyOptions& options);
nlohmann::json verify_model(const Model& model, std::size_t length, std::size_t samples, std::uint64_t seed,
                            std::uint64_t max_attempts = 1'000'000'000, unsigned workers = 1);

struct BenchOptions {
  std::string model_path;
  std::size_t target_len = 100;
  std::size_t count = 10;
  std::optional<std::uint64_t> seed;
  /// The Boltzmann engine samples lengths in target * (1 -+ window_frac).
  double window_frac = 0.05;
  std::uint64_t naive_max_attempts = 1'000'000;
  std::uint64_t boltzmann_max_attempts = 10'000'000;
};

struct BenchRow {
  std::string engine;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  std::size_t requested = 0;
  std::size_t accepted = 0;
  std::uint64_t attempts = 0;
  double wall_time_seconds = 0.0;
  bool exhausted = false;

  /// Infinity when nothing was accepted.
  double attempts_per_accepted() const;
};

std::vector<BenchRow> run_bench(const Model& model, const BenchOptions& options, std::uint64_t seed);
nlohmann::json bench_document(const std::vector<BenchRow>& rows);
std::string bench_table(const std::vector<BenchRow>& rows);
std::vector<BenchRow> cmd_bench(const BenchOptions& options, std::uint64_t& seed_used);

void cmd_export(const std::string& records_path, const std::string& format, std::ostream& out);

struct HullResult {
  bool degenerate = false;
  std::size_t points = 0;
  std::size_t vertices = 0;
  std::size_t faces = 0;
};
/// OBJ mesh of the hull at `step`; for a degenerate point set the points are
/// written as bare vertices instead and the result is flagged.
HullResult cmd_hull(const std::string& records_path, std::size_t step, std::ostream& out);

}  // namespace orthowalk
