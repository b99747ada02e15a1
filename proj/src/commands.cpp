#include "orthowalk/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "orthowalk/hull.hpp"
#include "orthowalk/uniformity.hpp"

namespace orthowalk {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::AttemptsExhausted: return kExitAttemptsExhausted;
    case ErrorCode::IoError: return kExitIo;
    default: return kExitValidation;
  }
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const ModelFile& model, bool& drawn) {
  drawn = false;
  if (flag) return *flag;
  if (model.seed) return *model.seed;
  drawn = true;
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

Model load_model(const std::string& path, std::optional<int> max_den, std::optional<double> x0) {
  const ModelFile file = load_model_file(path);
  ModelOptions options;
  options.max_den = max_den.value_or(file.max_den.value_or(8));
  options.x0_override = x0;
  return build_model(validate_stepset(file.raw_steps), options);
}

json cmd_analyze(const AnalyzeOptions& options) {
  return analysis_document(load_model(options.model_path, options.max_den, options.x0));
}

namespace {

json counters_json(const SampleCounters& c) {
  return json{{"free_draws", c.free_draws}, {"oversize", c.oversize},       {"undersize", c.undersize},
              {"orthant_rejects", c.orthant_rejects}, {"accepted", c.accepted}};
}

json summary_json(const std::string& command, const SampleReport& report, bool seed_drawn, const char* status) {
  return json{{"command", command},
              {"status", status},
              {"seed", report.seed},
              {"seed_drawn", seed_drawn},
              {"generator", Rng::kGeneratorName},
              {"counters", counters_json(report.counters)},
              {"wall_time_seconds", report.wall_time_seconds}};
}

CommandResult finish_exhausted(const std::string& command, const SamplingExhausted& e, bool seed_drawn,
                               const std::string& digest, std::ostream& records) {
  write_walk_records(records, e.partial().walks, digest, e.partial().seed);
  json marker = {{"status", "attempts_exhausted"},
                 {"counters", counters_json(e.partial().counters)},
                 {"message", e.what()}};
  records << marker.dump() << '\n';
  records.flush();
  return CommandResult{kExitAttemptsExhausted, summary_json(command, e.partial(), seed_drawn, "attempts_exhausted")};
}

}  // namespace

CommandResult cmd_sample(const SampleOptions& options, std::ostream& records) {
  const ModelFile file = load_model_file(options.model_path);
  bool drawn = false;
  const std::uint64_t seed = resolve_seed(options.seed, file, drawn);
  ModelOptions model_options;
  model_options.max_den = options.max_den.value_or(file.max_den.value_or(8));
  model_options.x0_override = options.x0;
  const Model model = build_model(validate_stepset(file.raw_steps), model_options);
  const std::string digest = model_digest(model.stepset);

  SampleRequest request;
  request.n_min = options.min_len;
  request.n_max = options.max_len;
  request.count = options.count;
  request.max_attempts = options.max_attempts;
  request.seed = seed;
  request.workers = options.workers;
  try {
    const SampleReport report = sample_orthant_walks(model, request);
    write_walk_records(records, report.walks, digest, seed);
    json summary = summary_json("sample", report, drawn, "ok");
    summary["x0"] = model.evaluation.x0;
    summary["window"] = {options.min_len, options.max_len};
    return CommandResult{kExitOk, std::move(summary)};
  } catch (const SamplingExhausted& e) {
    return finish_exhausted("sample", e, drawn, digest, records);
  }
}

CommandResult cmd_naive(const NaiveOptions& options, std::ostream& records) {
  const ModelFile file = load_model_file(options.model_path);
  bool drawn = false;
  const std::uint64_t seed = resolve_seed(options.seed, file, drawn);
  const WeightedStepSet3 stepset = validate_stepset(file.raw_steps);
  const std::string digest = model_digest(stepset);
  try {
    const SampleReport report = naive_sample(stepset, options.length, options.count, options.max_attempts, seed);
    write_walk_records(records, report.walks, digest, seed);
    json summary = summary_json("naive", report, drawn, "ok");
    summary["length"] = options.length;
    return CommandResult{kExitOk, std::move(summary)};
  } catch (const SamplingExhausted& e) {
    return finish_exhausted("naive", e, drawn, digest, records);
  }
}

json verify_model(const Model& model, std::size_t length, std::size_t samples, std::uint64_t seed,
                  std::uint64_t max_attempts, unsigned workers) {
  const CountTable table = count_orthant_walks(model.stepset, length);
  const auto& exact = table.layers.at(length);

  SampleRequest request;
  request.n_min = length;
  request.n_max = length;
  request.count = samples;
  request.max_attempts = max_attempts;
  request.seed = seed;
  request.workers = workers;
  const SampleReport report = sample_orthant_walks(model, request);

  const EndpointTally tally = tally_endpoints(report.walks);
  const ChiSquareResult chi = chi_square_endpoints(tally, exact);
  return json{{"length", length},
              {"samples", samples},
              {"seed", seed},
              {"generator", Rng::kGeneratorName},
              {"endpoints", exact.size()},
              {"observed_endpoints", tally.size()},
              {"rmse", endpoint_rmse(tally, exact)},
              {"expected_rmse_perfect_sampler", expected_rmse(exact, samples)},
              {"chi_square", {{"statistic", chi.statistic}, {"dof", chi.dof}, {"cells", chi.cells}}},
              {"p_value", chi.p_value},
              {"counters", counters_json(report.counters)}};
}

json cmd_verify(const VerifyOptions& options) {
  const ModelFile file = load_model_file(options.model_path);
  bool drawn = false;
  const std::uint64_t seed = resolve_seed(options.seed, file, drawn);
  ModelOptions model_options;
  model_options.max_den = options.max_den.value_or(file.max_den.value_or(8));
  const Model model = build_model(validate_stepset(file.raw_steps), model_options);
  json doc = verify_model(model, options.length, options.samples, seed, options.max_attempts, options.workers);
  doc["seed_drawn"] = drawn;
  return doc;
}

double BenchRow::attempts_per_accepted() const {
  if (accepted == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(attempts) / static_cast<double>(accepted);
}

std::vector<BenchRow> run_bench(const Model& model, const BenchOptions& options, std::uint64_t seed) {
  std::vector<BenchRow> rows;
  const auto target = static_cast<double>(options.target_len);

  BenchRow naive{"naive", options.target_len, options.target_len, options.count};
  try {
    const SampleReport r = naive_sample(model.stepset, options.target_len, options.count,
                                        options.naive_max_attempts, derive_seed(seed, 0));
    naive.accepted = r.walks.size();
    naive.attempts = r.counters.free_draws;
    naive.wall_time_seconds = r.wall_time_seconds;
  } catch (const SamplingExhausted& e) {
    naive.accepted = e.partial().walks.size();
    naive.attempts = e.partial().counters.free_draws;
    naive.wall_time_seconds = e.partial().wall_time_seconds;
    naive.exhausted = true;
  }
  rows.push_back(naive);

  BenchRow boltzmann{"boltzmann", static_cast<std::size_t>(std::ceil(target * (1.0 - options.window_frac))),
                     static_cast<std::size_t>(std::floor(target * (1.0 + options.window_frac))), options.count};
  SampleRequest request;
  request.n_min = boltzmann.n_min;
  request.n_max = boltzmann.n_max;
  request.count = options.count;
  request.max_attempts = options.boltzmann_max_attempts;
  request.seed = derive_seed(seed, 1);
  try {
    const SampleReport r = sample_orthant_walks(model, request);
    boltzmann.accepted = r.walks.size();
    boltzmann.attempts = r.counters.free_draws;
    boltzmann.wall_time_seconds = r.wall_time_seconds;
  } catch (const SamplingExhausted& e) {
    boltzmann.accepted = e.partial().walks.size();
    boltzmann.attempts = e.partial().counters.free_draws;
    boltzmann.wall_time_seconds = e.partial().wall_time_seconds;
    boltzmann.exhausted = true;
  }
  rows.push_back(boltzmann);
  return rows;
}

json bench_document(const std::vector<BenchRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    const double ratio = r.attempts_per_accepted();
    out.push_back({{"engine", r.engine},
                   {"window", {r.n_min, r.n_max}},
                   {"requested", r.requested},
                   {"accepted", r.accepted},
                   {"attempts", r.attempts},
                   {"attempt_unit", r.engine == "naive" ? "step draw" : "free draw"},
                   {"attempts_per_accepted", std::isfinite(ratio) ? json(ratio) : json(nullptr)},
                   {"wall_time_seconds", r.wall_time_seconds},
                   {"exhausted", r.exhausted}});
  }
  return out;
}

std::string bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "engine" << std::setw(12) << "lengths" << std::right << std::setw(10)
      << "accepted" << std::setw(14) << "attempts" << std::setw(16) << "attempts/walk" << std::setw(12)
      << "seconds" << '\n';
  for (const auto& r : rows) {
    std::ostringstream lengths;
    lengths << r.n_min << '-' << r.n_max;
    std::ostringstream ratio;
    if (r.accepted == 0) {
      ratio << "-";
    } else {
      ratio << std::setprecision(6) << r.attempts_per_accepted();
    }
    out << std::left << std::setw(10) << r.engine << std::setw(12) << lengths.str() << std::right
        << std::setw(10) << (std::to_string(r.accepted) + "/" + std::to_string(r.requested)) << std::setw(14)
        << r.attempts << std::setw(16) << ratio.str() << std::setw(12) << std::fixed << std::setprecision(3)
        << r.wall_time_seconds << (r.exhausted ? "  (attempts exhausted)" : "") << '\n';
    out.unsetf(std::ios::fixed);
  }
  out << "(naive attempts are single-step draws, boltzmann attempts are free draws)\n";
  return out.str();
}

std::vector<BenchRow> cmd_bench(const BenchOptions& options, std::uint64_t& seed_used) {
  const ModelFile file = load_model_file(options.model_path);
  bool drawn = false;
  seed_used = resolve_seed(options.seed, file, drawn);
  ModelOptions model_options;
  model_options.max_den = file.max_den.value_or(8);
  const Model model = build_model(validate_stepset(file.raw_steps), model_options);
  return run_bench(model, options, seed_used);
}

namespace {

std::vector<Walk3D> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open walk records " + path);
  return read_walk_records(in);
}

}  // namespace

void cmd_export(const std::string& records_path, const std::string& format, std::ostream& out) {
  const ExportFormat fmt = parse_export_format(format);
  export_walks(out, read_records_file(records_path), fmt);
}

HullResult cmd_hull(const std::string& records_path, std::size_t step, std::ostream& out) {
  const auto points = positions_at_step(read_records_file(records_path), step);
  HullResult result;
  result.points = points.size();
  try {
    const HullMesh mesh = convex_hull_3d(points);
    write_hull_obj(out, mesh);
    result.vertices = mesh.vertices.size();
    result.faces = mesh.faces.size();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateHull) throw;
    result.degenerate = true;
    out << "# degenerate: " << e.what() << '\n';
    for (const auto& p : points) out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }
  return result;
}

}  // namespace orthowalk
