#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orthowalk/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
  std::string err;
};

class Sandbox {
 public:
  Sandbox() : dir_(fs::temp_directory_path() / ("orthowalk_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Sandbox() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Run run(const std::string& args) const {
    const std::string out = path("stdout.txt"), err = path("stderr.txt");
    const std::string cmd = std::string(ORTHOWALK_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    Run r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

 private:
  fs::path dir_;
};

std::string data(const std::string& name) { return std::string(ORTHOWALK_TEST_DATA) + "/" + name; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("analyze") {
    Sandbox box;
    const auto r = box.run("analyze " + data("flagship.json"));
    REQUIRE(r.exit_code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["projection"]["vector"] == json::array({1.0, 1.0, 1.0}));
    CHECK(doc["analysis_1d"]["rho"].get<double>() == doctest::Approx(0.1178511));

    const auto z = json::parse(box.run("analyze " + data("minus_e2_doubled.json")).out);
    CHECK(z["projection"]["branch"] == "unit-z");
  }

  TEST_CASE("error exit codes") {
    Sandbox box;
    const auto bad = box.run("analyze " + data("malformed.json"));
    CHECK(bad.exit_code == 2);
    CHECK(json::parse(bad.err)["error"] == "ParseError");

    const auto span = box.run("analyze " + data("no_z.json"));
    CHECK(span.exit_code == 2);
    CHECK(json::parse(span.err)["error"] == "SpanViolation");

    CHECK(box.run("analyze /nonexistent.json").exit_code == 4);
    CHECK(box.run("sample " + data("flagship.json")).exit_code == 2);
    CHECK(box.run("frobnicate").exit_code == 2);
  }

  TEST_CASE("sample is reproducible") {
    Sandbox box;
    const std::string args = "sample " + data("flagship.json") + " --min-len 20 --max-len 40 --count 20 --seed 5 --out ";
    REQUIRE(box.run(args + box.path("a.ndjson")).exit_code == 0);
    REQUIRE(box.run(args + box.path("b.ndjson")).exit_code == 0);
    const auto a = Sandbox::slurp(box.path("a.ndjson"));
    CHECK(a == Sandbox::slurp(box.path("b.ndjson")));
    std::istringstream in(a);
    const auto walks = orthowalk::read_walk_records(in);
    CHECK(walks.size() == 20);
    for (const auto& w : walks) CHECK(orthowalk::in_orthant(w));

    const auto zero = box.run("sample " + data("flagship.json") + " --min-len 5 --max-len 5 --count 0 --seed 1");
    CHECK(zero.exit_code == 0);
    CHECK(zero.out.empty());
  }

  TEST_CASE("sample exhaustion flushes partial output") {
    Sandbox box;
    const auto r = box.run("sample " + data("flagship.json") +
                           " --min-len 95 --max-len 105 --count 10 --seed 1 --max-attempts 200000 --out " +
                           box.path("p.ndjson"));
    CHECK(r.exit_code == 3);
    const auto text = Sandbox::slurp(box.path("p.ndjson"));
    CHECK(text.find("attempts_exhausted") != std::string::npos);
  }

  TEST_CASE("naive") {
    Sandbox box;
    const std::string args = "naive " + data("flagship.json") + " --len 20 --count 10 --seed 2";
    const auto a = box.run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == box.run(args).out);
    std::istringstream in(a.out);
    CHECK(orthowalk::read_walk_records(in).size() == 10);

    const auto hard = box.run("naive " + data("flagship.json") + " --len 100 --max-attempts 1000000 --seed 1");
    CHECK(hard.exit_code == 3);

    const auto empty = box.run("naive " + data("flagship.json") + " --len 0 --count 3 --seed 1");
    CHECK(empty.exit_code == 0);
    std::istringstream e(empty.out);
    CHECK(orthowalk::read_walk_records(e).size() == 3);
  }

  TEST_CASE("verify is reproducible") {
    Sandbox box;
    const std::string args = "verify " + data("flagship.json") + " --length 6 --samples 2000 --seed 4";
    const auto a = box.run(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == box.run(args).out);
    const auto doc = json::parse(a.out);
    CHECK(doc["samples"] == 2000);
    CHECK(doc["p_value"].get<double>() > 0.001);
  }

  TEST_CASE("seed from the model file") {
    Sandbox box;
    const std::string args = "sample " + data("zero_drift.json") + " --min-len 4 --max-len 8 --count 5";
    const auto a = box.run(args);
    CHECK(a.exit_code == 0);
    CHECK(json::parse(a.err)["seed"] == 7);
    CHECK(a.out == box.run(args).out);
  }

  TEST_CASE("bench") {
    Sandbox box;
    const auto r = box.run("bench " + data("flagship.json") + " --target-len 20 --count 5 --seed 3 --json");
    REQUIRE(r.exit_code == 0);
    const auto doc = json::parse(r.out);
    REQUIRE(doc["rows"].size() == 2);
    CHECK(doc["rows"][0]["engine"] == "naive");
    CHECK(doc["rows"][1]["engine"] == "boltzmann");
    CHECK(doc["rows"][1]["accepted"] == 5);
    const auto table = box.run("bench " + data("flagship.json") + " --target-len 20 --count 5 --seed 3");
    CHECK(table.out.find("boltzmann") != std::string::npos);
  }

  TEST_CASE("export and hull") {
    Sandbox box;
    const std::string rec = box.path("w.ndjson");
    REQUIRE(box.run("sample " + data("flagship.json") + " --min-len 10 --max-len 30 --count 30 --seed 6 --out " + rec)
                .exit_code == 0);
    for (const std::string fmt : {"csv", "ply", "obj"}) {
      const auto r = box.run("export " + rec + " --format " + fmt + " --out " + box.path("w." + fmt));
      CHECK(r.exit_code == 0);
      CHECK_FALSE(Sandbox::slurp(box.path("w." + fmt)).empty());
    }
    CHECK(Sandbox::slurp(box.path("w.ply")).rfind("ply\n", 0) == 0);
    CHECK(box.run("export " + rec + " --format stl").exit_code == 2);
    CHECK(box.run("export /nonexistent.ndjson --format csv").exit_code == 4);

    const auto hull = box.run("hull " + rec + " --step 8");
    CHECK(hull.exit_code == 0);
    CHECK(hull.out.find("\nf ") != std::string::npos);
    const auto flat = box.run("hull " + rec + " --step 0");
    CHECK(flat.exit_code == 0);
    CHECK(flat.out.rfind("# degenerate", 0) == 0);
  }
}
