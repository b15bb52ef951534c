#include "knotdist/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "knotdist/bounds.hpp"
#include "knotdist/curve_io.hpp"
#include "knotdist/distortion.hpp"
#include "knotdist/errors.hpp"
#include "knotdist/knots.hpp"
#include "knotdist/optimize.hpp"
#include "knotdist/oracle.hpp"
#include "knotdist/parallel.hpp"

#ifndef KNOTDIST_VERSION
#define KNOTDIST_VERSION "0.0.0"
#endif

namespace knotdist {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalOptions {
  double tol = 1e-4;
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string out;
  std::string format = "text";
  int precision = -1;

  bool json_output() const { return format == "json"; }
};

/// Provenance record written once per run.
struct Manifest {
  std::string command;
  json parameters = json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  /// Where the manifest goes; empty means the diagnostic stream.
  fs::path path;
};

class Context {
 public:
  Context(const GlobalOptions& g, std::ostream& out) : g_(g), out_(out) {}

  const GlobalOptions& options() const { return g_; }
  Manifest& manifest() { return manifest_; }

  std::string num(double v) const {
    if (g_.precision < 0) return format_double(v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", g_.precision, v);
    return buf;
  }

  /// Writes a report to --out (atomically) or to the output stream.
  void emit(const std::string& text) {
    if (g_.out.empty()) {
      out_ << text;
      return;
    }
    write_file_atomic(g_.out, text);
    manifest_.outputs.push_back(g_.out);
    manifest_.path = g_.out + ".manifest.json";
  }

  void emit_to_stream(const std::string& text) { out_ << text; }

 private:
  const GlobalOptions& g_;
  std::ostream& out_;
  Manifest manifest_;
};

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json curve_point_json(const CurvePoint& p) {
  return {{"segment", p.seg}, {"t", p.t}, {"arclen", p.arclen}};
}

// ---------------------------------------------------------------------------
// compute

struct ComputeArgs {
  std::string curve_file;
  std::string profile_file;
  double profile_p0 = 0.0;
  std::size_t profile_points = 1000;
  std::size_t max_boxes = 10'000'000;
};

void cmd_compute(Context& ctx, const ComputeArgs& args) {
  const auto& g = ctx.options();
  Manifest& m = ctx.manifest();
  m.inputs.push_back(args.curve_file);
  m.parameters = {{"tol", g.tol}, {"max_boxes", args.max_boxes}};
  const PolyCurve curve = load_curve(args.curve_file);
  CertifyOptions opts;
  opts.tol = g.tol;
  opts.max_boxes = args.max_boxes;
  const DistortionResult r = distortion_certified(curve, opts);

  if (!args.profile_file.empty()) {
    m.parameters["profile_p0"] = args.profile_p0;
    m.parameters["profile_points"] = args.profile_points;
    std::ostringstream csv;
    csv << "arclen,distortion\n";
    for (const auto& s : distortion_profile(curve, args.profile_p0, args.profile_points))
      csv << format_double(s.arclen) << ',' << format_double(s.distortion) << '\n';
    write_file_atomic(args.profile_file, csv.str());
    m.outputs.push_back(args.profile_file);
  }

  const double mid = 0.5 * (r.lower + r.upper);
  const double half = 0.5 * r.width();
  if (g.json_output()) {
    ctx.emit(dump({{"lower", r.lower},
                   {"upper", r.upper},
                   {"distortion", mid},
                   {"half_width", half},
                   {"witness_p", curve_point_json(r.witness_p)},
                   {"witness_q", curve_point_json(r.witness_q)},
                   {"boxes_explored", r.boxes_explored},
                   {"iterations", r.iterations},
                   {"budget_exhausted", r.budget_exhausted}}));
    return;
  }
  std::ostringstream s;
  s << "distortion: " << ctx.num(mid) << " ± " << format_double(half) << '\n'
    << "lower: " << ctx.num(r.lower) << '\n'
    << "upper: " << ctx.num(r.upper) << '\n'
    << "witness_p: " << ctx.num(r.witness_p.arclen) << '\n'
    << "witness_q: " << ctx.num(r.witness_q.arclen) << '\n'
    << "boxes_explored: " << r.boxes_explored << '\n'
    << "budget_exhausted: " << (r.budget_exhausted ? "true" : "false") << '\n';
  ctx.emit(s.str());
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
  std::string name;
  std::vector<std::string> values;
};

const std::vector<std::pair<std::string, std::size_t>>& bound_arities() {
  static const std::vector<std::pair<std::string, std::size_t>> table{
      {"theta0", 2}, {"m", 3},         {"m1", 2},         {"quarter", 1},
      {"secant", 1}, {"curvature", 1}, {"ropelength", 1}, {"constant", 0},
  };
  return table;
}

BoundEval evaluate_bound(const std::string& name, const std::vector<double>& x) {
  if (name == "theta0") return {wrap_threshold_angle(x[0], x[1]), BoundBranch::none};
  if (name == "m") return ball_avoiding_length(x[0], x[1], x[2]);
  if (name == "m1") return ball_avoiding_length_any_start(x[0], x[1]);
  if (name == "quarter") return {quarter_circle_detour_length(x[0]), BoundBranch::none};
  if (name == "secant") return {essential_arc_length_bound(x[0]), BoundBranch::none};
  if (name == "curvature") return {curvature_distortion_bound(x[0]), BoundBranch::none};
  if (name == "ropelength") return {ropelength_distortion_bound(x[0]), BoundBranch::none};
  return {knot_distortion_lower_constant(), BoundBranch::none};
}

void cmd_bounds(Context& ctx, const BoundsArgs& args) {
  std::size_t arity = 0;
  bool known = false;
  for (const auto& [name, n] : bound_arities()) {
    if (name == args.name) {
      arity = n;
      known = true;
    }
  }
  if (!known) throw CLI::ValidationError("unknown bound '" + args.name + "'");
  if (args.values.size() != arity)
    throw CLI::ValidationError("bound '" + args.name + "' takes " + std::to_string(arity) +
                               " argument(s)");
  std::vector<double> x;
  for (const auto& v : args.values) x.push_back(parse_double(v));
  ctx.manifest().parameters = {{"name", args.name}, {"args", x}};
  const BoundEval b = evaluate_bound(args.name, x);
  const std::string branch(branch_name(b.branch));
  if (ctx.options().json_output()) {
    ctx.emit(dump({{"name", args.name}, {"args", x}, {"value", b.value}, {"branch", branch}}));
  } else {
    ctx.emit(ctx.num(b.value) + " branch=" + branch + "\n");
  }
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string suite = "all";
  std::size_t density = 0;
};

bool cmd_verify(Context& ctx, const VerifyArgs& args) {
  const auto& names = verify_suite_names();
  if (args.suite != "all" && std::find(names.begin(), names.end(), args.suite) == names.end())
    throw CLI::ValidationError("unknown verify suite '" + args.suite + "'");
  ctx.manifest().parameters = {{"suite", args.suite}, {"density", args.density}};
  std::vector<VerifyReport> reports;
  if (args.suite == "all" && args.density == 0) {
    reports = verify_all();
  } else if (args.suite == "all") {
    for (const auto& n : names) reports.push_back(verify_suite(n, args.density));
  } else {
    reports.push_back(verify_suite(args.suite, args.density));
  }
  bool all_passed = true;
  for (const auto& r : reports) all_passed = all_passed && r.passed;

  if (ctx.options().json_output()) {
    json doc = json::array();
    for (const auto& r : reports) {
      json point = json::object();
      for (const auto& [k, v] : r.worst_point) point[k] = v;
      doc.push_back({{"suite", r.suite},
                     {"grid", r.grid_spec},
                     {"worst_margin", r.worst_margin},
                     {"worst_point", point},
                     {"passed", r.passed}});
    }
    ctx.emit(dump({{"reports", doc}, {"passed", all_passed}}));
  } else {
    std::ostringstream s;
    for (const auto& r : reports) {
      s << "suite: " << r.suite << '\n'
        << "  grid: " << r.grid_spec << '\n'
        << "  worst_margin: " << ctx.num(r.worst_margin) << '\n'
        << "  worst_point:";
      for (const auto& [k, v] : r.worst_point) s << ' ' << k << '=' << ctx.num(v);
      s << '\n' << "  status: " << (r.passed ? "PASS" : "FAIL") << '\n';
    }
    s << (all_passed ? "all suites passed\n" : "some suites FAILED\n");
    ctx.emit(s.str());
  }
  return all_passed;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::size_t circle_n = 64;
  int p = 2;
  int q = 3;
  double big_r = 2.0;
  double small_r = 1.0;
  std::size_t torus_n = 256;
  std::size_t trefoil_n = 128;
  std::string tile_file;
  std::size_t tile_vertices = 128;
  std::size_t copies = 1;
  double ratio = 0.1;
  double loop_radius = 0.0;
  std::size_t loop_vertices = 128;
};

void write_curve_output(Context& ctx, const PolyCurve& curve) {
  const CurveFormat format = ctx.options().json_output() ? CurveFormat::json : CurveFormat::text;
  ctx.emit(curve_to_string(curve, format));
}

void cmd_gen(Context& ctx, const std::string& kind, const GenArgs& a) {
  Manifest& m = ctx.manifest();
  m.command = "gen " + kind;
  if (kind == "circle") {
    m.parameters = {{"n", a.circle_n}};
    write_curve_output(ctx, circle(a.circle_n));
  } else if (kind == "torus-knot") {
    m.parameters = {{"p", a.p}, {"q", a.q}, {"R", a.big_r}, {"r", a.small_r}, {"n", a.torus_n}};
    write_curve_output(ctx, torus_knot(a.p, a.q, a.big_r, a.small_r, a.torus_n));
  } else if (kind == "open-trefoil") {
    m.parameters = {{"n", a.trefoil_n}};
    write_curve_output(ctx, open_trefoil(a.trefoil_n));
  } else {
    if (a.tile_file.empty()) {
      m.parameters["tile_vertices"] = a.tile_vertices;
    } else {
      m.inputs.push_back(a.tile_file);
    }
    ConnectSumSpec spec{a.tile_file.empty() ? open_trefoil(a.tile_vertices) : load_curve(a.tile_file)};
    spec.copies = a.copies;
    spec.scale_ratio = a.ratio;
    spec.loop_radius = a.loop_radius;
    spec.loop_vertices = a.loop_vertices;
    m.parameters.update({{"copies", a.copies},
                         {"ratio", a.ratio},
                         {"loop_radius", a.loop_radius},
                         {"loop_vertices", a.loop_vertices}});
    write_curve_output(ctx, connect_sum(spec));
  }
}

// ---------------------------------------------------------------------------
// minimize

struct MinimizeArgs {
  std::string curve_file;
  std::string config_file;
  std::optional<double> initial_temp;
  std::optional<double> cooling;
  std::optional<std::size_t> steps_per_epoch;
  std::optional<std::size_t> epochs;
  std::optional<double> step_scale;
  std::optional<std::size_t> resample_every;
  std::optional<std::size_t> certify_every;
  bool tol_given = false;
};

AnnealConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  AnnealConfig c;
  auto real = [](const json& v, const std::string& key) {
    if (!v.is_number()) throw ParseError("config '" + key + "' must be a number");
    return v.get<double>();
  };
  auto count = [](const json& v, const std::string& key) {
    if (!v.is_number_unsigned()) throw ParseError("config '" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
  };
  for (const auto& [key, v] : doc.items()) {
    if (key == "initial_temp") c.initial_temp = real(v, key);
    else if (key == "cooling") c.cooling = real(v, key);
    else if (key == "steps_per_epoch") c.steps_per_epoch = count(v, key);
    else if (key == "epochs") c.epochs = count(v, key);
    else if (key == "step_scale") c.step_scale = real(v, key);
    else if (key == "resample_every") c.resample_every = count(v, key);
    else if (key == "certify_every") c.certify_every = count(v, key);
    else if (key == "seed") c.seed = count(v, key);
    else if (key == "certify_tol") c.certify_tol = real(v, key);
    else throw ParseError("unknown config key '" + key + "'");
  }
  return c;
}

json config_to_json(const AnnealConfig& c) {
  return {{"initial_temp", c.initial_temp},     {"cooling", c.cooling},
          {"steps_per_epoch", c.steps_per_epoch}, {"epochs", c.epochs},
          {"step_scale", c.step_scale},         {"resample_every", c.resample_every},
          {"certify_every", c.certify_every},   {"seed", c.seed},
          {"certify_tol", c.certify_tol}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trace_csv(const OptimizeTrace& trace) {
  std::ostringstream csv;
  csv << "epoch,temperature,sampled,acceptance_rate,certified,best_certified\n";
  for (const auto& e : trace.epochs) {
    csv << e.epoch << ',' << format_double(e.temperature) << ',' << format_double(e.sampled) << ','
        << format_double(e.acceptance_rate) << ','
        << (e.certified ? format_double(*e.certified) : std::string()) << ','
        << format_double(e.best_certified) << '\n';
  }
  return csv.str();
}

void cmd_minimize(Context& ctx, const MinimizeArgs& a) {
  const auto& g = ctx.options();
  if (g.out.empty()) throw CLI::ValidationError("minimize needs --out <directory>");
  Manifest& m = ctx.manifest();
  m.inputs.push_back(a.curve_file);

  AnnealConfig config;
  if (!a.config_file.empty()) {
    m.inputs.push_back(a.config_file);
    json doc;
    try {
      doc = json::parse(read_text_file(a.config_file));
    } catch (const json::parse_error& e) {
      throw ParseError(a.config_file + ": " + e.what());
    }
    config = config_from_json(doc);
  }
  if (a.initial_temp) config.initial_temp = *a.initial_temp;
  if (a.cooling) config.cooling = *a.cooling;
  if (a.steps_per_epoch) config.steps_per_epoch = *a.steps_per_epoch;
  if (a.epochs) config.epochs = *a.epochs;
  if (a.step_scale) config.step_scale = *a.step_scale;
  if (a.resample_every) config.resample_every = *a.resample_every;
  if (a.certify_every) config.certify_every = *a.certify_every;
  if (g.seed_given) config.seed = g.seed;
  if (a.tol_given) config.certify_tol = g.tol;
  validate(config);
  m.parameters = config_to_json(config);

  const PolyCurve curve = load_curve(a.curve_file);
  const fs::path dir = g.out;
  fs::create_directories(dir);
  m.path = dir / "manifest.json";
  const CurveFormat format = g.json_output() ? CurveFormat::json : CurveFormat::text;
  const std::string ext = g.json_output() ? ".json" : ".curve";

  const OptimizeTrace trace = minimize_distortion(
      curve, config, [&](std::size_t epoch, const PolyCurve& current, const DistortionResult&) {
        char name[64];
        std::snprintf(name, sizeof name, "checkpoint_%04zu", epoch);
        const fs::path path = dir / (name + ext);
        save_curve(path, current, format);
        m.outputs.push_back(path.string());
      });

  const fs::path final_path = dir / ("final" + ext);
  save_curve(final_path, trace.best_curve, format);
  const fs::path trace_path = dir / "trace.csv";
  write_file_atomic(trace_path, trace_csv(trace));
  m.outputs.push_back(final_path.string());
  m.outputs.push_back(trace_path.string());

  json summary = {{"initial_lower", trace.initial.lower},
                  {"initial_upper", trace.initial.upper},
                  {"best_lower", trace.best.lower},
                  {"best_upper", trace.best.upper},
                  {"proposed", trace.proposed},
                  {"accepted", trace.accepted},
                  {"rejected_isotopy", trace.rejected_isotopy},
                  {"resamples_applied", trace.resamples_applied},
                  {"resamples_rejected", trace.resamples_rejected},
                  {"final_curve", final_path.string()},
                  {"trace", trace_path.string()}};
  const fs::path summary_path = dir / "summary.json";
  write_file_atomic(summary_path, dump(summary));
  m.outputs.push_back(summary_path.string());

  // The summary goes to the output stream; --out names the directory.
  if (g.json_output()) {
    ctx.emit_to_stream(dump(summary));
  } else {
    std::ostringstream s;
    s << "initial: [" << ctx.num(trace.initial.lower) << ", " << ctx.num(trace.initial.upper) << "]\n"
      << "best: [" << ctx.num(trace.best.lower) << ", " << ctx.num(trace.best.upper) << "]\n"
      << "accepted: " << trace.accepted << " of " << trace.proposed << " proposals ("
      << trace.rejected_isotopy << " rejected by the isotopy check)\n"
      << "resamples: " << trace.resamples_applied << " applied, " << trace.resamples_rejected
      << " rejected\n"
      << "final curve: " << final_path.string() << '\n'
      << "trace: " << trace_path.string() << '\n';
    ctx.emit_to_stream(s.str());
  }
}

void write_manifest(const Manifest& m, int exit_code, double seconds, std::ostream& err) {
  const json doc = {{"command", m.command},
                    {"parameters", m.parameters},
                    {"inputs", m.inputs},
                    {"outputs", m.outputs},
                    {"tool", "distort"},
                    {"version", KNOTDIST_VERSION},
                    {"threads", worker_count()},
                    {"exit_code", exit_code},
                    {"wall_time_seconds", seconds}};
  if (m.path.empty()) {
    err << "manifest: " << doc.dump() << '\n';
    return;
  }
  try {
    write_file_atomic(m.path, dump(doc));
  } catch (const std::exception& e) {
    err << "error: cannot write manifest: " << e.what() << '\n';
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  GlobalOptions g;
  CLI::App app{"Certified distortion of polygonal space curves", "distort"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--tol", g.tol, "Certified enclosure width (absolute)");
  CLI::Option* seed_opt = app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output file (directory for minimize)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--precision", g.precision, "Fixed decimals for printed numbers")
      ->check(CLI::Range(0, 17));

  ComputeArgs compute_args;
  CLI::App* compute = app.add_subcommand("compute", "Certified distortion of a curve file");
  compute->add_option("curve", compute_args.curve_file, "Curve file")->required();
  compute->add_option("--profile", compute_args.profile_file, "CSV file for delta(p0, q)");
  compute->add_option("--p0", compute_args.profile_p0, "Arclength of the profile base point");
  compute->add_option("--profile-points", compute_args.profile_points, "Profile sample count");
  compute->add_option("--max-boxes", compute_args.max_boxes, "Branch-and-bound queue cap");

  BoundsArgs bounds_args;
  CLI::App* bounds = app.add_subcommand("bounds", "Evaluate a bound function by name");
  bounds
      ->add_option("name", bounds_args.name,
                   "theta0 r s | m r s theta | m1 s theta | quarter s | secant c | "
                   "curvature alpha | ropelength R | constant")
      ->required();
  bounds->add_option("args", bounds_args.values, "Arguments");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "Run numerical inequality suites");
  verify->add_option("suite", verify_args.suite, "Suite name or 'all'");
  verify->add_option("--density", verify_args.density, "Grid density (0 = suite default)");

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Generate a curve");
  gen->require_subcommand(1);
  CLI::App* gen_circle = gen->add_subcommand("circle", "Regular polygon");
  gen_circle->add_option("n", gen_args.circle_n, "Vertex count");
  CLI::App* gen_torus = gen->add_subcommand("torus-knot", "(p,q) torus knot");
  gen_torus->add_option("p", gen_args.p);
  gen_torus->add_option("q", gen_args.q);
  gen_torus->add_option("R", gen_args.big_r);
  gen_torus->add_option("r", gen_args.small_r);
  gen_torus->add_option("n", gen_args.torus_n);
  CLI::App* gen_trefoil = gen->add_subcommand("open-trefoil", "Long trefoil tile");
  gen_trefoil->add_option("n", gen_args.trefoil_n, "Vertex count");
  CLI::App* gen_sum = gen->add_subcommand("connect-sum", "Loop carrying scaled tile copies");
  gen_sum->add_option("--tile", gen_args.tile_file, "Tile curve file (default: open trefoil)");
  gen_sum->add_option("--tile-vertices", gen_args.tile_vertices, "Vertices of the default tile");
  gen_sum->add_option("--copies", gen_args.copies, "Number of tile copies");
  gen_sum->add_option("--ratio", gen_args.ratio, "Scale ratio between successive copies");
  gen_sum->add_option("--loop-radius", gen_args.loop_radius, "Loop radius (0 = automatic)");
  gen_sum->add_option("--loop-vertices", gen_args.loop_vertices, "Vertices of the full loop");

  MinimizeArgs min_args;
  CLI::App* minimize = app.add_subcommand("minimize", "Anneal a curve within its knot type");
  minimize->add_option("curve", min_args.curve_file, "Curve file")->required();
  minimize->add_option("--config", min_args.config_file, "JSON configuration file");
  minimize->add_option("--initial-temp", min_args.initial_temp, "Starting temperature relative to the initial distortion");
  minimize->add_option("--cooling", min_args.cooling, "Per-epoch temperature factor in (0, 1)");
  minimize->add_option("--steps-per-epoch", min_args.steps_per_epoch, "Moves per epoch (0 = 50 per vertex)");
  minimize->add_option("--epochs", min_args.epochs, "Number of epochs");
  minimize->add_option("--step-scale", min_args.step_scale, "Move size relative to the mean edge length");
  minimize->add_option("--resample-every", min_args.resample_every, "Epochs between re-parametrizations");
  minimize->add_option("--certify-every", min_args.certify_every, "Epochs between certified evaluations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  g.seed_given = seed_opt->count() > 0;
  min_args.tol_given = app.get_option("--tol")->count() > 0;

  const auto start = std::chrono::steady_clock::now();
  Context ctx(g, out);
  CLI::App* sub = app.get_subcommands().front();
  ctx.manifest().command = sub->get_name();
  int code = kExitOk;
  try {
    if (sub == compute) {
      cmd_compute(ctx, compute_args);
    } else if (sub == bounds) {
      cmd_bounds(ctx, bounds_args);
    } else if (sub == verify) {
      code = cmd_verify(ctx, verify_args) ? kExitOk : kExitCheckFailed;
    } else if (sub == gen) {
      cmd_gen(ctx, gen->get_subcommands().front()->get_name(), gen_args);
    } else {
      cmd_minimize(ctx, min_args);
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << '\n';
    code = kExitGeometry;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    code = kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kExitUsage;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(ctx.manifest(), code, seconds, err);
  return code;
}

}  // namespace knotdist
