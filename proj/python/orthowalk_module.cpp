#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orthowalk/commands.hpp"
#include "orthowalk/grammar.hpp"
#include "orthowalk/hull.hpp"
#include "orthowalk/io.hpp"
#include "orthowalk/pipeline.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using StepList = std::vector<std::pair<std::array<int, 3>, std::uint64_t>>;

orthowalk::WeightedStepSet3 to_stepset(const StepList& steps) {
  std::vector<orthowalk::WeightedStep> raw;
  for (const auto& [s, w] : steps) raw.push_back({orthowalk::Step3{s[0], s[1], s[2]}, w});
  return orthowalk::validate_stepset(raw);
}

orthowalk::Model to_model(const StepList& steps, int max_den) {
  orthowalk::ModelOptions options;
  options.max_den = max_den;
  return orthowalk::build_model(to_stepset(steps), options);
}

py::object to_python(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_python(v));
      return std::move(out);
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_python(v);
      return std::move(out);
    }
    default: return py::none();
  }
}

py::list walks_to_python(const std::vector<orthowalk::Walk3D>& walks) {
  py::list out;
  for (const auto& w : walks) {
    py::list steps;
    for (const auto& s : w.steps) steps.append(py::make_tuple(s.dx, s.dy, s.dz));
    out.append(std::move(steps));
  }
  return out;
}

py::dict report_to_python(const orthowalk::SampleReport& report) {
  const auto& c = report.counters;
  return py::dict("walks"_a = walks_to_python(report.walks),
                  "counters"_a = py::dict("free_draws"_a = c.free_draws, "oversize"_a = c.oversize,
                                          "undersize"_a = c.undersize, "orthant_rejects"_a = c.orthant_rejects,
                                          "accepted"_a = c.accepted),
                  "seed"_a = report.seed, "wall_time_seconds"_a = report.wall_time_seconds);
}

py::list big_to_python(const std::vector<orthowalk::BigInt>& values) {
  py::list out;
  for (const auto& v : values) out.append(py::int_(py::str(v.str())));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Uniform sampling of weighted 3D lattice walks confined to the first orthant";

  static py::exception<orthowalk::Error> error(m, "OrthowalkError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const orthowalk::Error& e) {
      PyErr_SetString(error.ptr(), (std::string(orthowalk::to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def(
      "analyze",
      [](const StepList& steps, int max_den) {
        return to_python(orthowalk::analysis_document(to_model(steps, max_den)));
      },
      "steps"_a, "max_den"_a = 8,
      "Setup report for a model given as [((i, j, k), weight), ...].");

  m.def(
      "sample",
      [](const StepList& steps, std::size_t min_len, std::size_t max_len, std::size_t count, std::uint64_t seed,
         std::uint64_t max_attempts, int max_den) {
        const auto model = to_model(steps, max_den);
        orthowalk::SampleRequest request;
        request.n_min = min_len;
        request.n_max = max_len;
        request.count = count;
        request.seed = seed;
        request.max_attempts = max_attempts;
        orthowalk::SampleReport report;
        {
          py::gil_scoped_release release;
          report = orthowalk::sample_orthant_walks(model, request);
        }
        return report_to_python(report);
      },
      "steps"_a, "min_len"_a, "max_len"_a, "count"_a = 1, "seed"_a = 0, "max_attempts"_a = 10'000'000,
      "max_den"_a = 8, "Boltzmann sampling with orthant rejection.");

  m.def(
      "naive",
      [](const StepList& steps, std::size_t length, std::size_t count, std::uint64_t seed, std::uint64_t max_attempts) {
        const auto stepset = to_stepset(steps);
        orthowalk::SampleReport report;
        {
          py::gil_scoped_release release;
          report = orthowalk::naive_sample(stepset, length, count, max_attempts, seed);
        }
        return report_to_python(report);
      },
      "steps"_a, "length"_a, "count"_a = 1, "seed"_a = 0, "max_attempts"_a = 100'000'000,
      "Naive sampling with restart on orthant exit.");

  m.def(
      "verify",
      [](const StepList& steps, std::size_t length, std::size_t samples, std::uint64_t seed) {
        const auto model = to_model(steps, 8);
        nlohmann::json doc;
        {
          py::gil_scoped_release release;
          doc = orthowalk::verify_model(model, length, samples, seed);
        }
        return to_python(doc);
      },
      "steps"_a, "length"_a, "samples"_a, "seed"_a = 0, "Endpoint RMSE and chi-square against exact counts.");

  m.def(
      "count_orthant_walks",
      [](const StepList& steps, std::size_t n_max) {
        const auto table = orthowalk::count_orthant_walks(to_stepset(steps), n_max);
        std::vector<orthowalk::BigInt> totals;
        for (std::size_t n = 0; n <= n_max; ++n) totals.push_back(table.total(n));
        return big_to_python(totals);
      },
      "steps"_a, "n_max"_a, "Weighted number of orthant walks of each length 0..n_max.");

  m.def(
      "count_meanders",
      [](const std::vector<std::pair<long, std::uint64_t>>& values, std::size_t n_max, bool excursions) {
        const auto steps = orthowalk::stepset_1d_from_values(values);
        const auto end = excursions ? std::optional<long>(0) : std::nullopt;
        return big_to_python(orthowalk::count_meanders_dp(steps, n_max, end));
      },
      "values"_a, "n_max"_a, "excursions"_a = false,
      "Weighted meander (or excursion) counts of a 1D stepset [(value, weight), ...].");

  m.def(
      "convex_hull",
      [](const std::vector<std::array<double, 3>>& points) {
        std::vector<Eigen::Vector3d> pts;
        for (const auto& p : points) pts.emplace_back(p[0], p[1], p[2]);
        const auto mesh = orthowalk::convex_hull_3d(pts);
        std::vector<std::array<double, 3>> vertices;
        for (const auto& v : mesh.vertices) vertices.push_back({v.x(), v.y(), v.z()});
        return py::make_tuple(vertices, mesh.faces);
      },
      "points"_a, "Convex hull as (vertices, triangles).");
}
