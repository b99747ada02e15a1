#include <doctest.h>

#include <cmath>
#include <sstream>

#include "orthowalk/io.hpp"
#include "support.hpp"

using namespace orthowalk;
using namespace orthowalk::test;
using nlohmann::json;

namespace {

ErrorCode parse_error_of(const std::string& text) {
  try {
    parse_model(json::parse(text));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error for " << text);
  return ErrorCode::IoError;
}

Walk3D random_walk(Rng& rng, std::size_t length) {
  static const Step3 steps[] = {e1, e2, e3, m1, m2, m3};
  Walk3D w;
  for (std::size_t i = 0; i < length; ++i) w.steps.push_back(steps[rng.below(6)]);
  return w;
}

// Minimal ASCII PLY reader: header element counts, then that many rows.
struct PlyContent {
  std::size_t vertices = 0, edges = 0;
  std::vector<std::array<double, 6>> vertex_rows;
  std::vector<std::array<long, 2>> edge_rows;
};

PlyContent read_ply(std::istream& in) {
  PlyContent ply;
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "ply");
  std::vector<std::string> props;
  while (std::getline(in, line) && line != "end_header") {
    std::istringstream h(line);
    std::string word, name;
    h >> word;
    if (word == "element") {
      std::size_t count = 0;
      h >> name >> count;
      (name == "vertex" ? ply.vertices : ply.edges) = count;
    }
  }
  REQUIRE(line == "end_header");
  for (std::size_t i = 0; i < ply.vertices; ++i) {
    std::array<double, 6> row{};
    for (auto& v : row) REQUIRE(static_cast<bool>(in >> v));
    ply.vertex_rows.push_back(row);
  }
  for (std::size_t i = 0; i < ply.edges; ++i) {
    std::array<long, 2> row{};
    REQUIRE(static_cast<bool>(in >> row[0] >> row[1]));
    ply.edge_rows.push_back(row);
  }
  std::string rest;
  CHECK_FALSE(static_cast<bool>(in >> rest));
  return ply;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("model files") {
    const auto m = parse_model(json::parse(R"({"steps": [{"step": [1,0,0]}, {"step": [-1,0,0], "weight": 3}],
                                                "max_den": 5, "seed": 17})"));
    REQUIRE(m.raw_steps.size() == 2);
    CHECK(m.raw_steps[0].weight == 1);
    CHECK(m.raw_steps[1].weight == 3);
    CHECK(m.max_den == 5);
    CHECK(m.seed == 17);
    CHECK(parse_error_of(R"({"step": []})") == ErrorCode::ParseError);
    CHECK(parse_error_of(R"({"steps": [{"step": [1,0]}]})") == ErrorCode::ParseError);
    CHECK(parse_error_of(R"({"steps": [{"step": [1,0,0], "weight": 0}]})") == ErrorCode::ParseError);
    CHECK(parse_error_of(R"({"steps": [{"step": [1,0,0.5]}]})") == ErrorCode::ParseError);
    CHECK(parse_error_of(R"({"steps": []})") == ErrorCode::ParseError);
    try {
      load_model_file("/nonexistent/model.json");
      FAIL("expected IoError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IoError);
    }
    try {
      load_model_file(std::string(ORTHOWALK_TEST_DATA) + "/malformed.json");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
    const auto flag = load_model_file(std::string(ORTHOWALK_TEST_DATA) + "/flagship.json");
    CHECK(model_digest(validate_stepset(flag.raw_steps)) == model_digest(flagship()));
  }

  TEST_CASE("digest ignores input order") {
    const auto a = make_stepset({{e1, 1}, {e2, 1}, {e3, 1}, {m1, 2}, {m2, 2}, {m3, 2}});
    const auto b = make_stepset({{m3, 2}, {e2, 1}, {m1, 1}, {e3, 1}, {m2, 2}, {e1, 1}, {m1, 1}});
    CHECK(model_digest(a) == model_digest(b));
    CHECK(model_digest(a).size() == 16);
    CHECK(model_digest(a) != model_digest(simple_walk()));
  }

  TEST_CASE("walk records round trip") {
    Rng rng(1);
    std::vector<Walk3D> walks;
    for (std::size_t n : {0, 1, 5, 17}) walks.push_back(random_walk(rng, n));
    std::stringstream buf;
    write_walk_records(buf, walks, "abc", 7);
    buf << R"({"status":"attempts_exhausted"})" << '\n';
    const auto back = read_walk_records(buf);
    REQUIRE(back.size() == walks.size());
    for (std::size_t i = 0; i < walks.size(); ++i) CHECK(back[i].steps == walks[i].steps);
    const auto rec = walk_record(walks[2], "abc", 7);
    CHECK(rec["model"] == "abc");
    CHECK(rec["seed"] == 7);
    CHECK(rec["length"] == 5);
  }

  TEST_CASE("hue conversion") {
    CHECK(hue_to_rgb(0) == Rgb{255, 0, 0});
    CHECK(hue_to_rgb(100) == Rgb{85, 255, 0});
    CHECK(hue_to_rgb(200) == Rgb{0, 170, 255});
    CHECK(hue_to_rgb(300) == Rgb{255, 0, 255});
    CHECK(hue_to_rgb(120) == Rgb{0, 255, 0});
    CHECK(hue_to_rgb(240) == Rgb{0, 0, 255});
    CHECK(progression_hue(0, 0) == 0.0);
    CHECK(progression_hue(3, 3) == 300.0);
  }

  TEST_CASE("ply for short walks") {
    std::ostringstream one;
    write_ply(one, {Walk3D{{e1}}});
    CHECK(one.str() ==
          "ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nproperty float y\nproperty float z\n"
          "property uchar red\nproperty uchar green\nproperty uchar blue\nelement edge 1\n"
          "property int vertex1\nproperty int vertex2\nend_header\n"
          "0 0 0 255 0 0\n1 0 0 255 0 255\n0 1\n");

    std::stringstream empty;
    write_ply(empty, {Walk3D{}});
    const auto e = read_ply(empty);
    CHECK(e.vertices == 1);
    CHECK(e.edges == 0);
    CHECK(e.vertex_rows[0] == std::array<double, 6>{0, 0, 0, 255, 0, 0});

    std::stringstream three;
    write_ply(three, {Walk3D{{e1, e2, e3}}});
    const auto t = read_ply(three);
    CHECK(t.vertex_rows[1] == std::array<double, 6>{1, 0, 0, 85, 255, 0});
    CHECK(t.vertex_rows[2] == std::array<double, 6>{1, 1, 0, 0, 170, 255});
  }

  TEST_CASE("ply consistent for random walks") {
    Rng rng(2);
    std::vector<Walk3D> walks;
    for (int i = 0; i < 100; ++i) walks.push_back(random_walk(rng, rng.below(30)));
    std::stringstream buf;
    write_ply(buf, walks);
    const auto ply = read_ply(buf);
    std::size_t v = 0;
    for (const auto& w : walks) {
      const auto pos = w.positions();
      for (std::size_t k = 0; k < pos.size(); ++k, ++v) {
        CHECK(ply.vertex_rows[v][0] == pos[k].x);
        CHECK(ply.vertex_rows[v][1] == pos[k].y);
        CHECK(ply.vertex_rows[v][2] == pos[k].z);
      }
    }
    CHECK(v == ply.vertices);
    for (const auto& edge : ply.edge_rows) {
      CHECK(edge[1] == edge[0] + 1);
      CHECK(edge[1] < static_cast<long>(ply.vertices));
    }
  }

  TEST_CASE("csv round trip") {
    Rng rng(3);
    std::vector<Walk3D> walks;
    for (int i = 0; i < 50; ++i) walks.push_back(random_walk(rng, rng.below(20)));
    std::stringstream buf;
    write_csv(buf, walks);
    CHECK(buf.str().rfind("walk_id,step_index,x,y,z\n", 0) == 0);
    const auto back = read_csv(buf);
    REQUIRE(back.size() == walks.size());
    for (std::size_t i = 0; i < walks.size(); ++i) CHECK(back[i] == walks[i].positions());
  }

  TEST_CASE("obj polylines") {
    std::ostringstream out;
    write_obj(out, {Walk3D{{e1}}, Walk3D{{e2, e3}}});
    CHECK(out.str() == "v 0 0 0\nv 1 0 0\nv 0 0 0\nv 0 1 0\nv 0 1 1\nl 1 2\nl 3 4 5\n");
  }

  TEST_CASE("export formats") {
    CHECK(parse_export_format("csv") == ExportFormat::Csv);
    CHECK(parse_export_format("ply") == ExportFormat::Ply);
    CHECK(parse_export_format("obj") == ExportFormat::Obj);
    try {
      parse_export_format("stl");
      FAIL("expected UnknownFormat");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownFormat);
    }
  }

  TEST_CASE("analysis document") {
    const auto doc = analysis_document(build_model(flagship()));
    CHECK(doc["drift"]["class"] == "reluctant");
    CHECK(doc["projection"]["branch"] == "generic");
    CHECK(doc["integer_projection"]["coefficients"] == json::array({1, 1, 1}));
    CHECK(doc["analysis_1d"]["rho"].get<double>() == doctest::Approx(1 / (6 * std::sqrt(2.0))));
    CHECK(doc["evaluation"]["at_singularity"] == true);
    CHECK(doc["steps_1d"]["atoms"].size() == 6);
    CHECK(doc["grammar"]["start"] == "W");
    CHECK(doc["predictions"]["naive_yield_base"].get<double>() == doctest::Approx(6 * std::sqrt(2.0) / 9));

    const auto z = analysis_document(build_model(minus_e2_doubled()));
    CHECK(z["projection"]["branch"] == "unit-z");
    CHECK(z["integer_projection"]["coefficients"] == json::array({0, 1, 0}));
  }
}
