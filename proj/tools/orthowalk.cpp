// Command-line front end: analyze, sample, naive, verify, bench, export, hull.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "orthowalk/commands.hpp"

namespace {

using orthowalk::Error;

// stdout unless a path is given.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error(orthowalk::ErrorCode::IoError, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  bool is_stdout() const { return !file_; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void print_summary(const nlohmann::json& summary, bool records_on_stdout) {
  (records_on_stdout ? std::cerr : std::cout) << summary.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform sampling of weighted 3D lattice walks confined to the first orthant"};
  app.require_subcommand(1);

  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_den;
  std::optional<double> x0;

  auto* analyze = app.add_subcommand("analyze", "Half-space, grammar and generating-function setup for a model");
  std::string model_path;
  analyze->add_option("model", model_path, "Model file (JSON)")->required();
  analyze->add_option("--max-den", max_den, "Largest denominator for rationalizing the projection");
  analyze->add_option("--x0", x0, "Evaluation point override")->group("");
  analyze->add_option("--out", out_path, "Write the report here instead of stdout");

  auto* sample = app.add_subcommand("sample", "Boltzmann sampler with orthant rejection");
  orthowalk::SampleOptions sample_opts;
  sample->add_option("model", sample_opts.model_path, "Model file (JSON)")->required();
  sample->add_option("--min-len", sample_opts.min_len, "Shortest accepted length")->required();
  sample->add_option("--max-len", sample_opts.max_len, "Longest accepted length")->required();
  sample->add_option("--count", sample_opts.count, "Number of walks")->capture_default_str();
  sample->add_option("--seed", seed, "Master seed");
  sample->add_option("--max-attempts", sample_opts.max_attempts, "Budget of free Boltzmann draws")->capture_default_str();
  sample->add_option("--workers", sample_opts.workers, "Parallel workers")->capture_default_str();
  sample->add_option("--max-den", max_den, "Largest denominator for rationalizing the projection");
  sample->add_option("--x0", x0, "Evaluation point override")->group("");
  sample->add_option("--out", out_path, "Walk records (NDJSON) destination");

  auto* naive = app.add_subcommand("naive", "Naive step-by-step sampler with restart on exit");
  orthowalk::NaiveOptions naive_opts;
  naive->add_option("model", naive_opts.model_path, "Model file (JSON)")->required();
  naive->add_option("--len", naive_opts.length, "Walk length")->required();
  naive->add_option("--count", naive_opts.count, "Number of walks")->capture_default_str();
  naive->add_option("--seed", seed, "Seed");
  naive->add_option("--max-attempts", naive_opts.max_attempts, "Budget of single-step draws")->capture_default_str();
  naive->add_option("--out", out_path, "Walk records (NDJSON) destination");

  auto* verify = app.add_subcommand("verify", "Endpoint RMSE and chi-square against exact counts");
  orthowalk::VerifyOptions verify_opts;
  verify->add_option("model", verify_opts.model_path, "Model file (JSON)")->required();
  verify->add_option("--length", verify_opts.length, "Walk length")->capture_default_str();
  verify->add_option("--samples", verify_opts.samples, "Number of sampled walks")->capture_default_str();
  verify->add_option("--seed", seed, "Master seed");
  verify->add_option("--workers", verify_opts.workers, "Parallel workers")->capture_default_str();
  verify->add_option("--max-den", max_den, "Largest denominator for rationalizing the projection");
  verify->add_option("--out", out_path, "Write the report here instead of stdout");

  auto* bench = app.add_subcommand("bench", "Naive versus Boltzmann attempts per accepted walk");
  orthowalk::BenchOptions bench_opts;
  bool bench_json = false;
  bench->add_option("model", bench_opts.model_path, "Model file (JSON)")->required();
  bench->add_option("--target-len", bench_opts.target_len, "Target length")->capture_default_str();
  bench->add_option("--count", bench_opts.count, "Walks per engine")->capture_default_str();
  bench->add_option("--seed", seed, "Master seed");
  bench->add_option("--window-frac", bench_opts.window_frac, "Relative half-width of the Boltzmann length window")
      ->capture_default_str();
  bench->add_option("--naive-max-attempts", bench_opts.naive_max_attempts)->capture_default_str();
  bench->add_option("--boltzmann-max-attempts", bench_opts.boltzmann_max_attempts)->capture_default_str();
  bench->add_flag("--json", bench_json, "Emit JSON instead of a table");

  auto* exporter = app.add_subcommand("export", "Convert walk records to CSV, PLY or OBJ");
  std::string records_path;
  std::string format = "ply";
  exporter->add_option("records", records_path, "Walk records (NDJSON)")->required();
  exporter->add_option("--format", format, "csv, ply or obj")->capture_default_str();
  exporter->add_option("--out", out_path, "Destination file");

  auto* hull = app.add_subcommand("hull", "Convex hull of all walk positions at one step, as OBJ");
  std::size_t hull_step = 0;
  hull->add_option("records", records_path, "Walk records (NDJSON)")->required();
  hull->add_option("--step", hull_step, "Step index")->required();
  hull->add_option("--out", out_path, "Destination file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return orthowalk::kExitValidation;
  }

  try {
    Output out(out_path);
    if (analyze->parsed()) {
      out.stream() << orthowalk::cmd_analyze({model_path, max_den, x0}).dump(2) << '\n';
      return orthowalk::kExitOk;
    }
    if (sample->parsed()) {
      sample_opts.seed = seed;
      sample_opts.max_den = max_den;
      sample_opts.x0 = x0;
      const auto result = orthowalk::cmd_sample(sample_opts, out.stream());
      print_summary(result.summary, out.is_stdout());
      return result.exit_code;
    }
    if (naive->parsed()) {
      naive_opts.seed = seed;
      const auto result = orthowalk::cmd_naive(naive_opts, out.stream());
      print_summary(result.summary, out.is_stdout());
      return result.exit_code;
    }
    if (verify->parsed()) {
      verify_opts.seed = seed;
      verify_opts.max_den = max_den;
      out.stream() << orthowalk::cmd_verify(verify_opts).dump(2) << '\n';
      return orthowalk::kExitOk;
    }
    if (bench->parsed()) {
      bench_opts.seed = seed;
      std::uint64_t used = 0;
      const auto rows = orthowalk::cmd_bench(bench_opts, used);
      if (bench_json) {
        std::cout << nlohmann::json{{"seed", used}, {"rows", orthowalk::bench_document(rows)}}.dump(2) << '\n';
      } else {
        std::cout << "seed " << used << '\n' << orthowalk::bench_table(rows);
      }
      return orthowalk::kExitOk;
    }
    if (exporter->parsed()) {
      orthowalk::cmd_export(records_path, format, out.stream());
      return orthowalk::kExitOk;
    }
    if (hull->parsed()) {
      const auto result = orthowalk::cmd_hull(records_path, hull_step, out.stream());
      (out.is_stdout() ? std::cerr : std::cout)
          << nlohmann::json{{"points", result.points},
                            {"degenerate", result.degenerate},
                            {"vertices", result.vertices},
                            {"faces", result.faces}}
                 .dump()
          << '\n';
      return orthowalk::kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << nlohmann::json{{"error", orthowalk::to_string(e.code())}, {"message", e.what()}}.dump() << '\n';
    return orthowalk::exit_code_for(e.code());
  }
  return orthowalk::kExitValidation;
}
