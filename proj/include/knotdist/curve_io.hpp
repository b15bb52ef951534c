#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "knotdist/geometry.hpp"

namespace knotdist {

enum class CurveFormat { text, json };

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Parses a full decimal token; throws ParseError on trailing garbage.
double parse_double(std::string_view token);

// Plain-text polyline form:
//   CURVE <open|closed> <n>
//   x y z      (n lines)
void write_curve_text(std::ostream& out, const PolyCurve& curve);
PolyCurve read_curve_text(std::istream& in);

// Structured form: {"closed": bool, "vertices": [[x, y, z], ...]}
nlohmann::json curve_to_json(const PolyCurve& curve);
PolyCurve curve_from_json(const nlohmann::json& doc);

std::string curve_to_string(const PolyCurve& curve, CurveFormat format = CurveFormat::text);
PolyCurve curve_from_string(std::string_view content);

/// Reads either form; the format is detected from the first non-blank character.
PolyCurve load_curve(const std::filesystem::path& path);
void save_curve(const std::filesystem::path& path, const PolyCurve& curve,
                CurveFormat format = CurveFormat::text);

/// Writes via a sibling temporary file and rename, so readers never observe a
/// partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace knotdist
