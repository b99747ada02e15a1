#include "orthowalk/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace orthowalk {

using nlohmann::json;

ModelFile parse_model(const json& doc) {
  if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array()) {
    throw Error(ErrorCode::ParseError, "model file needs a \"steps\" array");
  }
  ModelFile model;
  for (const auto& entry : doc["steps"]) {
    if (!entry.is_object() || !entry.contains("step")) {
      throw Error(ErrorCode::ParseError, "each step entry needs a \"step\" field");
    }
    const auto& s = entry["step"];
    if (!s.is_array() || s.size() != 3 ||
        !std::all_of(s.begin(), s.end(), [](const json& c) { return c.is_number_integer(); })) {
      throw Error(ErrorCode::ParseError, "\"step\" must be an array of three integers");
    }
    WeightedStep ws;
    ws.step = Step3{s[0].get<int>(), s[1].get<int>(), s[2].get<int>()};
    if (entry.contains("weight")) {
      const auto& w = entry["weight"];
      if (!w.is_number_integer() || w.get<long long>() < 1) {
        throw Error(ErrorCode::ParseError, "\"weight\" must be a positive integer");
      }
      ws.weight = w.get<std::uint64_t>();
    }
    model.raw_steps.push_back(ws);
  }
  if (model.raw_steps.empty()) throw Error(ErrorCode::ParseError, "\"steps\" is empty");
  if (doc.contains("max_den")) {
    if (!doc["max_den"].is_number_integer() || doc["max_den"].get<int>() < 1) {
      throw Error(ErrorCode::ParseError, "\"max_den\" must be a positive integer");
    }
    model.max_den = doc["max_den"].get<int>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw Error(ErrorCode::ParseError, "\"seed\" must be a nonnegative integer");
    model.seed = doc["seed"].get<std::uint64_t>();
  }
  return model;
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open model file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed model file: ") + e.what());
  }
  return parse_model(doc);
}

std::string model_digest(const WeightedStepSet3& stepset) {
  auto entries = stepset.entries();
  std::sort(entries.begin(), entries.end(),
            [](const WeightedStep& a, const WeightedStep& b) { return a.step < b.step; });
  std::ostringstream canon;
  for (const auto& e : entries) {
    canon << e.step.dx << ',' << e.step.dy << ',' << e.step.dz << ':' << e.weight << ';';
  }
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon.str()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << hash;
  return hex.str();
}

json walk_record(const Walk3D& walk, const std::string& digest, std::uint64_t seed) {
  json steps = json::array();
  for (const auto& s : walk.steps) steps.push_back({s.dx, s.dy, s.dz});
  return json{{"model", digest}, {"seed", seed}, {"length", walk.length()}, {"steps", std::move(steps)}};
}

void write_walk_records(std::ostream& out, const std::vector<Walk3D>& walks, const std::string& digest,
                        std::uint64_t seed) {
  for (const auto& w : walks) out << walk_record(w, digest, seed).dump() << '\n';
}

std::vector<Walk3D> read_walk_records(std::istream& in) {
  std::vector<Walk3D> walks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, "walk record line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("steps")) continue;
    Walk3D walk;
    for (const auto& s : doc["steps"]) {
      if (!s.is_array() || s.size() != 3) {
        throw Error(ErrorCode::ParseError, "walk record line " + std::to_string(line_no) + ": bad step");
      }
      walk.steps.push_back(Step3{s[0].get<int>(), s[1].get<int>(), s[2].get<int>()});
    }
    walks.push_back(std::move(walk));
  }
  return walks;
}

Rgb hue_to_rgb(double hue_degrees) {
  double h = std::fmod(hue_degrees, 360.0);
  if (h < 0.0) h += 360.0;
  const double sector = h / 60.0;
  const double x = 1.0 - std::abs(std::fmod(sector, 2.0) - 1.0);
  double r = 0.0, g = 0.0, b = 0.0;
  switch (static_cast<int>(sector)) {
    case 0: r = 1.0; g = x; break;
    case 1: r = x; g = 1.0; break;
    case 2: g = 1.0; b = x; break;
    case 3: g = x; b = 1.0; break;
    case 4: r = x; b = 1.0; break;
    default: r = 1.0; b = x; break;
  }
  auto channel = [](double v) { return static_cast<std::uint8_t>(std::lround(v * 255.0)); };
  return Rgb{channel(r), channel(g), channel(b)};
}

double progression_hue(std::size_t k, std::size_t steps) {
  if (steps == 0) return 0.0;
  return 300.0 * static_cast<double>(k) / static_cast<double>(steps);
}

ExportFormat parse_export_format(const std::string& name) {
  if (name == "csv") return ExportFormat::Csv;
  if (name == "ply") return ExportFormat::Ply;
  if (name == "obj") return ExportFormat::Obj;
  throw Error(ErrorCode::UnknownFormat, "unknown export format '" + name + "' (expected csv, ply or obj)");
}

void write_csv(std::ostream& out, const std::vector<Walk3D>& walks) {
  out << "walk_id,step_index,x,y,z\n";
  for (std::size_t w = 0; w < walks.size(); ++w) {
    const auto positions = walks[w].positions();
    for (std::size_t k = 0; k < positions.size(); ++k) {
      const auto& p = positions[k];
      out << w << ',' << k << ',' << p.x << ',' << p.y << ',' << p.z << '\n';
    }
  }
}

std::vector<std::vector<Point3>> read_csv(std::istream& in) {
  std::vector<std::vector<Point3>> out;
  std::string line;
  if (!std::getline(in, line)) return out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t walk_id = 0, step = 0;
    Point3 p;
    char c1, c2, c3, c4;
    if (!(row >> walk_id >> c1 >> step >> c2 >> p.x >> c3 >> p.y >> c4 >> p.z)) {
      throw Error(ErrorCode::ParseError, "bad CSV row: " + line);
    }
    if (walk_id >= out.size()) out.resize(walk_id + 1);
    out[walk_id].push_back(p);
  }
  return out;
}

void write_ply(std::ostream& out, const std::vector<Walk3D>& walks) {
  std::size_t vertices = 0, edges = 0;
  for (const auto& w : walks) {
    vertices += w.length() + 1;
    edges += w.length();
  }
  out << "ply\n"
      << "format ascii 1.0\n"
      << "element vertex " << vertices << '\n'
      << "property float x\n"
      << "property float y\n"
      << "property float z\n"
      << "property uchar red\n"
      << "property uchar green\n"
      << "property uchar blue\n"
      << "element edge " << edges << '\n'
      << "property int vertex1\n"
      << "property int vertex2\n"
      << "end_header\n";
  for (const auto& w : walks) {
    const auto positions = w.positions();
    for (std::size_t k = 0; k < positions.size(); ++k) {
      const auto& p = positions[k];
      const Rgb c = hue_to_rgb(progression_hue(k, w.length()));
      out << p.x << ' ' << p.y << ' ' << p.z << ' ' << int{c.r} << ' ' << int{c.g} << ' ' << int{c.b}
          << '\n';
    }
  }
  std::size_t base = 0;
  for (const auto& w : walks) {
    for (std::size_t k = 0; k < w.length(); ++k) out << base + k << ' ' << base + k + 1 << '\n';
    base += w.length() + 1;
  }
}

void write_obj(std::ostream& out, const std::vector<Walk3D>& walks) {
  for (const auto& w : walks) {
    for (const auto& p : w.positions()) out << "v " << p.x << ' ' << p.y << ' ' << p.z << '\n';
  }
  std::size_t base = 1;
  for (const auto& w : walks) {
    out << 'l';
    for (std::size_t k = 0; k <= w.length(); ++k) out << ' ' << base + k;
    out << '\n';
    base += w.length() + 1;
  }
}

void export_walks(std::ostream& out, const std::vector<Walk3D>& walks, ExportFormat format) {
  switch (format) {
    case ExportFormat::Csv: write_csv(out, walks); break;
    case ExportFormat::Ply: write_ply(out, walks); break;
    case ExportFormat::Obj: write_obj(out, walks); break;
  }
}

json analysis_document(const Model& model) {
  json doc;
  doc["model"] = model_digest(model.stepset);
  doc["total_weight"] = model.stepset.total_weight();
  doc["drift"] = {{"vector", {model.drift.dx, model.drift.dy, model.drift.dz}},
                  {"class", to_string(model.drift.cls)}};
  const auto& mp = model.minimizer.point;
  doc["minimizer"] = {{"point", {mp[0], mp[1], mp[2]}},
                      {"s_min", model.minimizer.s_min},
                      {"gradient_norm", model.minimizer.grad_norm},
                      {"iterations", model.minimizer.iterations}};
  doc["projection"] = {{"branch", to_string(model.vector.branch)},
                       {"vector", {model.vector.v[0], model.vector.v[1], model.vector.v[2]}},
                       {"reference_axis", model.vector.reference_axis}};
  const auto& ip = model.projection;
  doc["integer_projection"] = {{"coefficients", {ip.coeffs[0], ip.coeffs[1], ip.coeffs[2]}},
                               {"denominator", ip.denominator},
                               {"max_abs_error", ip.max_abs_error}};
  json atoms = json::array();
  for (const auto& a : model.steps1d.atoms()) {
    atoms.push_back({{"atom", a.id},
                     {"value", a.value},
                     {"weight", a.weight},
                     {"source", {a.source.dx, a.source.dy, a.source.dz}}});
  }
  doc["steps_1d"] = {{"atoms", std::move(atoms)},
                     {"max_down", model.steps1d.max_down()},
                     {"max_up", model.steps1d.max_up()}};
  doc["grammar"] = {{"nonterminals", model.grammar.size()},
                    {"alternatives", model.grammar.alternative_count()},
                    {"start", model.grammar.nonterminal(model.grammar.start()).name}};
  doc["analysis_1d"] = {{"tau", model.analysis.tau}, {"a_tau", model.analysis.a_tau}, {"rho", model.analysis.rho}};
  json values = json::object();
  for (std::size_t i = 0; i < model.grammar.size(); ++i) {
    values[model.grammar.nonterminal(static_cast<int>(i)).name] = model.evaluation.values[i];
  }
  doc["evaluation"] = {{"x0", model.evaluation.x0},
                       {"at_singularity", std::abs(model.evaluation.x0 - model.analysis.rho) <= 1e-12 * model.analysis.rho},
                       {"residual", model.evaluation.residual},
                       {"iterations", model.evaluation.iterations},
                       {"renormalization", model.sampler.max_renormalization()},
                       {"values", std::move(values)}};
  const double total = static_cast<double>(model.stepset.total_weight());
  const double halfspace_growth = 1.0 / model.analysis.rho;
  doc["predictions"] = {
      // naive yield ~ (s_min / total)^n up to polynomial factors
      {"naive_yield_base", model.minimizer.s_min / total},
      {"naive_yield_log10_per_step", std::log10(model.minimizer.s_min / total)},
      // orthant walks among half-space walks ~ (s_min / growth)^n up to polynomial factors
      {"halfspace_yield_base", model.minimizer.s_min / halfspace_growth},
      {"halfspace_yield_log10_per_step", std::log10(model.minimizer.s_min / halfspace_growth)}};
  return doc;
}

}  // namespace orthowalk
