#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "orthowalk/pipeline.hpp"

namespace orthowalk {

struct ModelFile {
  std::vector<WeightedStep> raw_steps;
  std::optional<int> max_den;
  std::optional<std::uint64_t> seed;
};

/// {"steps": [{"step": [i,j,k], "weight": w}, ...], "max_den"?: d, "seed"?: s}
/// Weight defaults to 1. Throws ParseError.
ModelFile parse_model(const nlohmann::json& doc);
/// Throws IoError when the file cannot be read, ParseError on bad content.
ModelFile load_model_file(const std::string& path);

/// 16 hex digits: FNV-1a 64 over the canonical text "i,j,k:w;" of each
/// entry, entries sorted by step.
std::string model_digest(const WeightedStepSet3& stepset);

/// One walk as {"model", "seed", "length", "steps": [[i,j,k], ...]}.
nlohmann::json walk_record(const Walk3D& walk, const std::string& digest, std::uint64_t seed);
void write_walk_records(std::ostream& out, const std::vector<Walk3D>& walks, const std::string& digest,
                        std::uint64_t seed);
/// Lines without a "steps" field (summary markers) are skipped.
std::vector<Walk3D> read_walk_records(std::istream& in);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// HSV to RGB at full saturation and value, channels rounded to nearest.
Rgb hue_to_rgb(double hue_degrees);
/// Hue of position k of a walk with `steps` steps: 300 * k / steps (0 for
/// the empty walk), red at the start and magenta at the end.
double progression_hue(std::size_t k, std::size_t steps);

enum class ExportFormat { Csv, Ply, Obj };
/// Throws UnknownFormat.
ExportFormat parse_export_format(const std::string& name);

void write_csv(std::ostream& out, const std::vector<Walk3D>& walks);
/// Position sequences per walk, as written by write_csv.
std::vector<std::vector<Point3>> read_csv(std::istream& in);
void write_ply(std::ostream& out, const std::vector<Walk3D>& walks);
void write_obj(std::ostream& out, const std::vector<Walk3D>& walks);
void export_walks(std::ostream& out, const std::vector<Walk3D>& walks, ExportFormat format);

/// Setup-phase report for the analyze command.
nlohmann::json analysis_document(const Model& model);

}  // namespace orthowalk
