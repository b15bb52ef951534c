#include "knotdist/curve_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <vector>

#include "knotdist/errors.hpp"

namespace knotdist {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError("not a number: '" + std::string(token) + "'");
  }
  return value;
}

void write_curve_text(std::ostream& out, const PolyCurve& curve) {
  out << "CURVE " << (curve.closed() ? "closed" : "open") << ' ' << curve.vertex_count() << '\n';
  for (const Vec3& v : curve.vertices()) {
    out << format_double(v.x) << ' ' << format_double(v.y) << ' ' << format_double(v.z) << '\n';
  }
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

PolyCurve read_curve_text(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_content_line(in, line, lineno)) throw ParseError("empty curve file");
  const auto header = split_ws(line);
  if (header.size() != 3 || header[0] != "CURVE") {
    throw ParseError("line " + std::to_string(lineno) + ": expected 'CURVE <open|closed> <n>'");
  }
  bool closed = false;
  if (header[1] == "closed") {
    closed = true;
  } else if (header[1] != "open") {
    throw ParseError("line " + std::to_string(lineno) + ": curve kind must be 'open' or 'closed'");
  }
  std::size_t count = 0;
  {
    const auto& tok = header[2];
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), count);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw ParseError("line " + std::to_string(lineno) + ": bad vertex count '" + tok + "'");
    }
  }
  std::vector<Vec3> vertices;
  vertices.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!next_content_line(in, line, lineno)) {
      throw ParseError("expected " + std::to_string(count) + " vertices, found " + std::to_string(i));
    }
    const auto tokens = split_ws(line);
    if (tokens.size() != 3) {
      throw ParseError("line " + std::to_string(lineno) + ": expected three coordinates");
    }
    try {
      vertices.push_back({parse_double(tokens[0]), parse_double(tokens[1]), parse_double(tokens[2])});
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (next_content_line(in, line, lineno)) {
    throw ParseError("line " + std::to_string(lineno) + ": trailing content after vertices");
  }
  return PolyCurve(std::move(vertices), closed);
}

nlohmann::json curve_to_json(const PolyCurve& curve) {
  nlohmann::json verts = nlohmann::json::array();
  for (const Vec3& v : curve.vertices()) verts.push_back({v.x, v.y, v.z});
  return {{"closed", curve.closed()}, {"vertices", std::move(verts)}};
}

PolyCurve curve_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("closed") || !doc.contains("vertices")) {
    throw ParseError("curve JSON needs 'closed' and 'vertices'");
  }
  if (!doc["closed"].is_boolean()) throw ParseError("'closed' must be a boolean");
  const auto& verts = doc["vertices"];
  if (!verts.is_array()) throw ParseError("'vertices' must be an array");
  std::vector<Vec3> out;
  out.reserve(verts.size());
  for (const auto& v : verts) {
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
      throw ParseError("each vertex must be an array of three numbers");
    }
    out.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
  }
  return PolyCurve(std::move(out), doc["closed"].get<bool>());
}

std::string curve_to_string(const PolyCurve& curve, CurveFormat format) {
  if (format == CurveFormat::json) return curve_to_json(curve).dump() + "\n";
  std::ostringstream out;
  write_curve_text(out, curve);
  return out.str();
}

PolyCurve curve_from_string(std::string_view content) {
  const auto pos = content.find_first_not_of(" \t\r\n");
  if (pos != std::string_view::npos && content[pos] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid curve JSON: ") + e.what());
    }
    return curve_from_json(doc);
  }
  std::istringstream in{std::string(content)};
  return read_curve_text(in);
}

PolyCurve load_curve(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open curve file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return curve_from_string(buf.str());
}

void save_curve(const std::filesystem::path& path, const PolyCurve& curve, CurveFormat format) {
  write_file_atomic(path, curve_to_string(curve, format));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace knotdist
