// Batch front-end: every experiment is described by a config (assembled from
// flags or loaded from --config), validated against a per-command schema,
// and executed into an output directory as result.json + plot.csv (+ format
// artifacts). Runs are deterministic for a fixed config and seed; result
// payloads embed the config hash and library version, with the timestamp
// isolated in its own field.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "heiscut/cayley.hpp"
#include "heiscut/collapse.hpp"
#include "heiscut/cuts.hpp"
#include "heiscut/distortion.hpp"
#include "heiscut/grid.hpp"
#include "heiscut/io.hpp"
#include "heiscut/metric_space.hpp"
#include "heiscut/perimeter.hpp"
#include "heiscut/version.hpp"

namespace fs = std::filesystem;
using heiscut::io::json;

namespace {

// exit codes: 0 ok, 2 config violation, 3 missing input, 4 over-cap size,
// 5 numerical failure, 1 anything else
enum ExitCode {
  kOk = 0,
  kOther = 1,
  kConfigViolation = 2,
  kMissingInput = 3,
  kOverCap = 4,
  kNumerical = 5,
};

struct CliError {
  ExitCode code;
  std::string kind;
  std::string message;
};

[[noreturn]] void fail(ExitCode code, const std::string& kind,
                       const std::string& message) {
  throw CliError{code, kind, message};
}

// ----- config ---------------------------------------------------------------

const std::set<std::string> kTopLevelKeys = {
    "format_version", "command", "seed", "output_dir", "inputs", "params"};

struct CommandSpec {
  std::set<std::string> params;
  std::set<std::string> inputs;
};

const std::map<std::string, CommandSpec>& command_specs() {
  static const std::map<std::string, CommandSpec> specs = {
      {"moving-char", {{"n"}, {}}},
      {"cayley-ball", {{"k", "cap"}, {}}},
      {"distortion",
       {{"graph", "mode", "budget", "enum_cap", "seed_points", "radius"},
        {"space"}}},
      {"slice", {{}, {"map"}}},
      {"coarea", {{"column"}, {"map"}}},
      {"tv-identity", {{}, {"map"}}},
      {"perimeter",
       {{"fn", "coeffs", "threshold", "halfspace_theta", "resolution",
         "bounds"},
        {}}},
      {"alpha",
       {{"fn", "coeffs", "threshold", "halfspace_theta", "resolution",
         "bounds", "x", "r"},
        {}}},
      {"bad-mass",
       {{"fn", "coeffs", "levels", "eps", "R_list", "r_floor", "resolution",
         "bounds"},
        {}}},
      {"straighten",
       {{"fn", "coeffs", "levels", "x", "delta", "eps", "r", "R0",
         "resolution", "bounds"},
        {}}},
      {"collapse",
       {{"fn", "coeffs", "levels", "control", "count", "x", "t_list",
         "direction", "resolution", "bounds"},
        {}}},
      {"scale-compare",
       {{"fn", "coeffs", "levels", "x", "r_list", "delta", "eps", "pairs",
         "resolution", "bounds"},
        {}}},
  };
  return specs;
}

void validate_config(const json& cfg) {
  if (!cfg.is_object()) fail(kConfigViolation, "schema", "config must be an object");
  for (auto it = cfg.begin(); it != cfg.end(); ++it)
    if (!kTopLevelKeys.count(it.key()))
      fail(kConfigViolation, "schema", "unknown config field: " + it.key());
  if (!cfg.contains("command") || !cfg.at("command").is_string())
    fail(kConfigViolation, "schema", "missing command");
  if (cfg.value("format_version", 1) != 1)
    fail(kConfigViolation, "schema", "unsupported format_version");
  std::string cmd = cfg.at("command").get<std::string>();
  auto it = command_specs().find(cmd);
  if (it == command_specs().end())
    fail(kConfigViolation, "schema", "unknown command: " + cmd);
  if (cfg.contains("params"))
    for (auto p = cfg.at("params").begin(); p != cfg.at("params").end(); ++p)
      if (!it->second.params.count(p.key()))
        fail(kConfigViolation, "schema",
             "unknown param '" + p.key() + "' for command " + cmd);
  if (cfg.contains("inputs"))
    for (auto p = cfg.at("inputs").begin(); p != cfg.at("inputs").end(); ++p)
      if (!it->second.inputs.count(p.key()))
        fail(kConfigViolation, "schema",
             "unknown input '" + p.key() + "' for command " + cmd);
}

std::string read_input(const json& cfg, const std::string& key) {
  if (!cfg.contains("inputs") || !cfg.at("inputs").contains(key))
    fail(kMissingInput, "missing_input", "required input: " + key);
  std::string path = cfg.at("inputs").at(key).get<std::string>();
  if (!fs::exists(path))
    fail(kMissingInput, "missing_input", "input file not found: " + path);
  return heiscut::io::read_file(path);
}

json params_of(const json& cfg) {
  return cfg.contains("params") ? cfg.at("params") : json::object();
}

// ----- grid helpers ---------------------------------------------------------

heiscut::GeometryPtr geometry_from(const json& params) {
  std::array<std::size_t, 3> res = {96, 96, 192};
  std::array<double, 3> lo = {-1, -1, -1}, hi = {1, 1, 1};
  if (params.contains("resolution")) {
    auto v = params.at("resolution");
    for (int k = 0; k < 3; ++k) res[k] = v.at(k).get<std::size_t>();
  }
  if (params.contains("bounds")) {
    auto v = params.at("bounds");
    for (int k = 0; k < 3; ++k) lo[k] = v.at(k).get<double>();
    for (int k = 0; k < 3; ++k) hi[k] = v.at(3 + k).get<double>();
  }
  return std::make_shared<heiscut::GridGeometry>(lo, hi, res);
}

// linear + quadratic function catalog; "coeffs" overrides the named presets
std::function<double(const heiscut::GroupElement&)> function_from(
    const json& params) {
  std::map<std::string, double> co;
  std::string fn = params.value("fn", std::string("generic"));
  if (fn == "a") {
    co = {{"a", 1.0}};
  } else if (fn == "c") {
    co = {{"c", 1.0}};
  } else if (fn == "abc") {
    co = {{"a", 1.0}, {"b2", 1.0}, {"c", 1.0}};
  } else if (fn == "generic") {
    co = {{"a", 1.0},  {"b", 0.6},   {"c", 0.3},
          {"b2", 0.25}, {"ab", 0.1}, {"a2", -0.15}};
  } else if (fn != "coeffs") {
    fail(kConfigViolation, "schema", "unknown fn: " + fn);
  }
  if (params.contains("coeffs")) {
    co.clear();
    for (auto it = params.at("coeffs").begin(); it != params.at("coeffs").end();
         ++it)
      co[it.key()] = it.value().get<double>();
  }
  return [co](const heiscut::GroupElement& p) {
    double v = 0.0;
    for (const auto& [k, w] : co) {
      if (k == "const") v += w;
      else if (k == "a") v += w * p.a;
      else if (k == "b") v += w * p.b;
      else if (k == "c") v += w * p.c;
      else if (k == "a2") v += w * p.a * p.a;
      else if (k == "b2") v += w * p.b * p.b;
      else if (k == "c2") v += w * p.c * p.c;
      else if (k == "ab") v += w * p.a * p.b;
      else throw std::invalid_argument("unknown coefficient: " + k);
    }
    return v;
  };
}

heiscut::GroupElement point_from(const json& params, const std::string& key,
                                 heiscut::GroupElement fallback) {
  if (!params.contains(key)) return fallback;
  auto v = params.at(key);
  return {v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()};
}

json geometry_meta(const heiscut::GridGeometry& g) {
  return {{"resolution", {g.res()[0], g.res()[1], g.res()[2]}},
          {"bounds",
           {g.lo()[0], g.lo()[1], g.lo()[2], g.hi()[0], g.hi()[1], g.hi()[2]}},
          {"gauge", "koranyi"}};
}

// ----- handlers -------------------------------------------------------------

struct RunOutput {
  json results;
  std::string plot_csv;
  json extra_meta;  // e.g. grid metadata
};

RunOutput run_moving_char(const json& cfg) {
  std::size_t n = params_of(cfg).value("n", 100);
  double err = heiscut::moving_char_check(n);
  RunOutput out;
  out.results = {{"n", n}, {"max_error", err}};
  out.plot_csv = "n,max_error\n" + std::to_string(n) + "," +
                 std::to_string(err) + "\n";
  return out;
}

RunOutput run_cayley_ball(const json& cfg) {
  heiscut::CayleySpec spec;
  auto params = params_of(cfg);
  spec.radius = params.value("k", 2);
  spec.cap = params.value("cap", 6);
  if (spec.radius > spec.cap)
    fail(kOverCap, "over_cap",
         "k above cap; estimated points ~ " +
             std::to_string(static_cast<long long>(
                 0.5 * std::pow(double(spec.radius), 4.0))));
  auto ball = heiscut::generate_ball(spec);
  json spacej = heiscut::io::metric_space_to_json(ball);
  std::string space_str = spacej.dump(2);

  std::string outdir = cfg.value("output_dir", "out");
  heiscut::io::write_file(outdir + "/space.json", space_str);
  heiscut::io::write_file(outdir + "/edges.txt",
                          heiscut::io::metric_space_edge_list(ball));

  std::string csv = "k,points\n";
  heiscut::CayleySpec sweep = spec;
  for (int k = 0; k <= spec.radius; ++k) {
    sweep.radius = k;
    csv += std::to_string(k) + "," +
           std::to_string(heiscut::generate_ball(sweep).size()) + "\n";
  }
  RunOutput out;
  out.results = {{"k", spec.radius},
                 {"points", ball.size()},
                 {"space_ref", "space.json"},
                 {"space_hash", heiscut::io::fnv1a(space_str)}};
  out.plot_csv = csv;
  return out;
}

RunOutput run_distortion(const json& cfg) {
  auto params = params_of(cfg);
  heiscut::FiniteMetricSpace space;
  std::uint64_t input_hash = 0;
  if (cfg.contains("inputs") && cfg.at("inputs").contains("space")) {
    std::string text = read_input(cfg, "space");
    input_hash = heiscut::io::fnv1a(text);
    space = heiscut::io::metric_space_from_json(json::parse(text));
  } else if (params.contains("graph")) {
    std::string name = params.at("graph").get<std::string>();
    space = heiscut::builtin_space(name);
    input_hash = heiscut::io::fnv1a(name);
  } else {
    fail(kMissingInput, "missing_input", "need inputs.space or params.graph");
  }

  std::string mode = params.value("mode", std::string("exact"));
  std::size_t enum_cap = params.value("enum_cap", 16);
  heiscut::DistortionResult res;
  if (mode == "exact") {
    if (space.size() > enum_cap)
      fail(kOverCap, "over_cap",
           "space size " + std::to_string(space.size()) +
               " above enumeration cap " + std::to_string(enum_cap));
    res = heiscut::min_distortion_exact(space, enum_cap);
  } else if (mode == "colgen") {
    heiscut::ColgenOptions opts;
    opts.budget = params.value("budget", 200);
    opts.seed = cfg.value("seed", 1);
    res = heiscut::min_distortion_colgen(space, opts);
  } else {
    fail(kConfigViolation, "schema", "mode must be exact or colgen");
  }

  std::string outdir = cfg.value("output_dir", "out");
  heiscut::io::write_file(
      outdir + "/witness.json",
      heiscut::io::cut_measure_to_json(res.witness).dump(2));

  auto rep = heiscut::verify_witness(space, res);
  std::string csv = "i,j,d,d_sigma\n";
  auto dsig = heiscut::cut_metric(res.witness);
  std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      csv += std::to_string(i) + "," + std::to_string(j) + "," +
             std::to_string(space.d(i, j)) + "," +
             std::to_string(dsig[i * n + j]) + "\n";

  RunOutput out;
  out.results = heiscut::io::distortion_to_json(res);
  out.results["witness_ref"] = "witness.json";
  out.results["input_hash"] = input_hash;
  out.results["n_points"] = n;
  out.results["verify"] = heiscut::io::witness_report_to_json(rep);
  out.plot_csv = csv;
  return out;
}

RunOutput run_slice(const json& cfg) {
  heiscut::L1Map f = heiscut::io::l1map_from_csv(read_input(cfg, "map"));
  heiscut::CutMeasure sigma = heiscut::cut_measure_from_map(f);
  auto d_sigma = heiscut::cut_metric(sigma);
  auto d_f = f.pairwise_l1();
  double round_trip = 0.0;
  for (std::size_t i = 0; i < d_f.size(); ++i)
    round_trip = std::max(round_trip, std::fabs(d_sigma[i] - d_f[i]));
  double mass_err =
      std::fabs(sigma.total_mass(f.domain_weights) - f.norm());

  std::string outdir = cfg.value("output_dir", "out");
  heiscut::io::write_file(outdir + "/cutmeasure.json",
                          heiscut::io::cut_measure_to_json(sigma).dump(2));
  std::string csv = "atom,weight,size\n";
  for (std::size_t k = 0; k < sigma.atoms.size(); ++k)
    csv += std::to_string(k) + "," + std::to_string(sigma.atoms[k].weight) +
           "," + std::to_string(sigma.atoms[k].cut.count()) + "\n";

  RunOutput out;
  out.results = {{"n", f.n},
                 {"m", f.m},
                 {"atoms", sigma.atoms.size()},
                 {"cutmeasure_ref", "cutmeasure.json"},
                 {"roundtrip_error", round_trip},
                 {"mass_identity_error", mass_err}};
  out.plot_csv = csv;
  return out;
}

RunOutput run_coarea(const json& cfg) {
  heiscut::L1Map f = heiscut::io::l1map_from_csv(read_input(cfg, "map"));
  std::size_t column = params_of(cfg).value("column", 0);
  if (column >= f.m)
    fail(kConfigViolation, "schema", "column out of range");
  std::vector<double> h(f.n);
  for (std::size_t i = 0; i < f.n; ++i) h[i] = f(i, column);
  auto dec = heiscut::LineDecomposition::single_line(f.n);
  auto [lhs, rhs] = heiscut::coarea_check(h, dec);

  std::set<double> distinct(h.begin(), h.end());
  std::string csv = "threshold,superlevel_variation\n";
  std::vector<double> ind(f.n);
  for (double t : distinct) {
    for (std::size_t i = 0; i < f.n; ++i) ind[i] = h[i] >= t ? 1.0 : 0.0;
    csv += std::to_string(t) + "," +
           std::to_string(heiscut::line_variation(ind, dec)) + "\n";
  }
  RunOutput out;
  out.results = {{"column", column},
                 {"variation", lhs},
                 {"threshold_integral", rhs},
                 {"error", std::fabs(lhs - rhs)}};
  out.plot_csv = csv;
  return out;
}

RunOutput run_tv_identity(const json& cfg) {
  heiscut::L1Map f = heiscut::io::l1map_from_csv(read_input(cfg, "map"));
  auto dec = heiscut::LineDecomposition::single_line(f.n);
  auto [per, var] = heiscut::total_variation_identity(f, dec);
  std::string csv = "coordinate,variation\n";
  std::vector<double> col(f.n);
  for (std::size_t j = 0; j < f.m; ++j) {
    for (std::size_t i = 0; i < f.n; ++i) col[i] = f(i, j);
    csv += std::to_string(j) + "," +
           std::to_string(f.target_weights[j] *
                          heiscut::line_variation(col, dec)) +
           "\n";
  }
  RunOutput out;
  out.results = {{"total_perimeter", per},
                 {"total_variation", var},
                 {"error", std::fabs(per - var)}};
  out.plot_csv = csv;
  return out;
}

heiscut::GridSet set_from_params(const json& params,
                                 const heiscut::GeometryPtr& geom) {
  if (params.contains("halfspace_theta")) {
    double theta = params.at("halfspace_theta").get<double>();
    return heiscut::rasterize_halfspace(geom, heiscut::HalfSpace{0, 0, theta});
  }
  double threshold = params.value("threshold", 0.0);
  auto f = function_from(params);
  return heiscut::rasterize(geom, [&](const heiscut::GroupElement& p) {
    return f(p) >= threshold;
  });
}

RunOutput run_perimeter(const json& cfg) {
  auto params = params_of(cfg);
  auto geom = geometry_from(params);
  heiscut::GridSet E = set_from_params(params, geom);
  heiscut::PerimeterField field = heiscut::perimeter(E);

  std::string outdir = cfg.value("output_dir", "out");
  heiscut::io::write_gridset(outdir + "/set.hgs", E);
  std::string csv = heiscut::io::perimeter_field_to_csv(field);
  RunOutput out;
  out.results = {{"per_total", field.mass()},
                 {"measure", E.measure()},
                 {"set_ref", "set.hgs"},
                 {"field_ref", "plot.csv"}};
  out.extra_meta = geometry_meta(*geom);
  out.plot_csv = csv;
  return out;
}

RunOutput run_alpha(const json& cfg) {
  auto params = params_of(cfg);
  auto geom = geometry_from(params);
  heiscut::GridSet E = set_from_params(params, geom);
  heiscut::GroupElement x = point_from(params, "x", {0, 0, 0});
  double r = params.value("r", 0.3);
  heiscut::BallCache cache(geom);
  heiscut::AlphaResult res;
  try {
    res = heiscut::alpha(E, x, r, cache);
  } catch (const heiscut::BallClippedError& e) {
    fail(kNumerical, "ball_clipped",
         std::string(e.what()) + " (clipped fraction " +
             std::to_string(e.clipped_fraction) + ")");
  }
  auto scan = heiscut::alpha_scan(E, x, r, cache, 360);
  std::string csv = "theta,mismatch_fraction\n";
  for (auto [theta, value] : scan)
    csv += std::to_string(theta) + "," + std::to_string(value) + "\n";
  RunOutput out;
  out.results = {{"alpha", res.value},
                 {"theta", res.argmin.theta},
                 {"ball_voxels", res.ball_voxels},
                 {"snapped_center",
                  {res.snapped_center.a, res.snapped_center.b,
                   res.snapped_center.c}},
                 {"r", r}};
  out.extra_meta = geometry_meta(*geom);
  out.plot_csv = csv;
  return out;
}

RunOutput run_bad_mass(const json& cfg) {
  auto params = params_of(cfg);
  auto geom = geometry_from(params);
  auto f = function_from(params);
  std::size_t levels = params.value("levels", 32);
  double eps = params.value("eps", 0.15);
  std::vector<double> R_list = {0.4, 0.2, 0.1, 0.05};
  if (params.contains("R_list"))
    R_list = params.at("R_list").get<std::vector<double>>();

  auto field = heiscut::sample_function(geom, f);
  auto sliced = heiscut::slice_scalar_field(field, levels);
  heiscut::BadSetOptions opts;
  opts.r_floor = params.value("r_floor", 0.0);
  auto rep = heiscut::bad_mass_decay(sliced.sigma, eps, R_list, opts);

  std::string csv = "R,bad_mass,fraction\n";
  for (std::size_t i = 0; i < rep.R_list.size(); ++i)
    csv += std::to_string(rep.R_list[i]) + "," +
           std::to_string(rep.bad_mass[i]) + "," +
           std::to_string(rep.bad_mass[i] / rep.total_mass) + "\n";
  RunOutput out;
  out.results = heiscut::io::bad_mass_to_json(rep);
  out.results["levels"] = levels;
  out.results["scale_sampling"] = "dyadic";
  out.extra_meta = geometry_meta(*geom);
  out.plot_csv = csv;
  return out;
}

RunOutput run_straighten(const json& cfg) {
  auto params = params_of(cfg);
  auto geom = geometry_from(params);
  auto f = function_from(params);
  std::size_t levels = params.value("levels", 32);
  heiscut::GroupElement x = point_from(params, "x", {0, 0, 0});
  double delta = params.value("delta", 0.1);
  double eps = params.value("eps", 0.1);
  double r = params.value("r", 0.2);
  double R0 = params.value("R0", 2.05 * r);

  auto field = heiscut::sample_function(geom, f);
  auto sliced = heiscut::slice_scalar_field(field, levels);
  heiscut::BallCache cache(geom);
  heiscut::StraightenResult st;
  try {
    st = heiscut::straighten(sliced.sigma, x, delta, eps, r, R0, cache);
  } catch (const std::invalid_argument& e) {
    fail(kConfigViolation, "schema", e.what());
  } catch (const heiscut::BallClippedError& e) {
    fail(kNumerical, "ball_clipped", e.what());
  }
  std::string csv = "source,theta,weight,alpha_2r\n";
  for (const auto& a : st.atoms)
    csv += std::to_string(a.source) + "," + std::to_string(a.half_space.theta) +
           "," + std::to_string(a.weight) + "," + std::to_string(a.alpha_2r) +
           "\n";
  RunOutput out;
  out.results = heiscut::io::straighten_to_json(st);
  out.results["params"] = {
      {"delta", delta}, {"eps", eps}, {"r", r}, {"R0", R0}, {"levels", levels}};
  out.extra_meta = geometry_meta(*geom);
  out.plot_csv = csv;
  return out;
}

RunOutput run_collapse(const json& cfg) {
  auto params = params_of(cfg);
  auto geom = geometry_from(params);
  heiscut::GroupElement x = point_from(params, "x", {0.1, -0.05, 0.2});
  std::vector<double> ts = {0.2, 0.1, 0.05, 0.025};
  if (params.contains("t_list"))
    ts = params.at("t_list").get<std::vector<double>>();
  std::string direction = params.value("direction", std::string("both"));

  heiscut::CutFamily fam;
  heiscut::SlicedField sliced;
  if (params.value("control", std::string()) == "halfspaces") {
    fam.half_spaces = heiscut::make_halfspace_control(
        params.value("count", 64), cfg.value("seed", 1));
  } else {
    auto f = function_from(params);
    auto field = heiscut::sample_function(geom, f);
    sliced = heiscut::slice_scalar_field(field, params.value("levels", 96));
    fam.grid = &sliced.sigma;
  }

  RunOutput out;
  std::string csv = "t,center_ratio,horizontal_ratio\n";
  heiscut::CollapseReport cen, hor;
  if (direction == "center" || direction == "both")
    cen = heiscut::center_collapse(fam, x, ts);
  if (direction == "horizontal" || direction == "both")
    hor = heiscut::horizontal_control(fam, x, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    csv += std::to_string(ts[i]) + ",";
    csv += (i < cen.ratios.size() ? std::to_string(cen.ratios[i]) : "");
    csv += ",";
    csv += (i < hor.ratios.size() ? std::to_string(hor.ratios[i]) : "");
    csv += "\n";
  }
  if (!cen.ratios.empty()) out.results["center"] = heiscut::io::collapse_to_json(cen);
  if (!hor.ratios.empty())
    out.results["horizontal"] = heiscut::io::collapse_to_json(hor);
  out.extra_meta = geometry_meta(*geom);
  out.plot_csv = csv;
  return out;
}

RunOutput run_scale_compare(const json& cfg) {
  auto params = params_of(cfg);
  auto geom = geometry_from(params);
  auto f = function_from(params);
  std::size_t levels = params.value("levels", 32);
  heiscut::GroupElement x = point_from(params, "x", {0.05, -0.04, 0.1});
  std::vector<double> rs = {0.4, 0.2, 0.1, 0.05};
  if (params.contains("r_list"))
    rs = params.at("r_list").get<std::vector<double>>();
  double delta = params.value("delta", 0.1);
  double eps = params.value("eps", 0.1);

  auto field = heiscut::sample_function(geom, f);
  auto sliced = heiscut::slice_scalar_field(field, levels);
  heiscut::ScaleComparisonOptions opts;
  opts.seed = cfg.value("seed", 1);
  opts.pairs = params.value("pairs", 10000);
  auto rep = heiscut::scale_comparison(sliced.sigma, x, rs, delta, eps, opts);

  std::string csv = "r,D,D_good,D_bad,skipped\n";
  for (const auto& e : rep.entries)
    csv += std::to_string(e.r) + "," + std::to_string(e.D) + "," +
           std::to_string(e.D_good) + "," + std::to_string(e.D_bad) + "," +
           (e.skipped ? "1" : "0") + "\n";
  RunOutput out;
  out.results = heiscut::io::scale_report_to_json(rep);
  out.results["levels"] = levels;
  out.extra_meta = geometry_meta(*geom);
  out.plot_csv = csv;
  return out;
}

// ----- dispatch -------------------------------------------------------------

int run_config(const json& cfg) {
  validate_config(cfg);
  std::string cmd = cfg.at("command").get<std::string>();
  std::string outdir = cfg.value("output_dir", "out");
  fs::create_directories(outdir);

  RunOutput out;
  if (cmd == "moving-char") out = run_moving_char(cfg);
  else if (cmd == "cayley-ball") out = run_cayley_ball(cfg);
  else if (cmd == "distortion") out = run_distortion(cfg);
  else if (cmd == "slice") out = run_slice(cfg);
  else if (cmd == "coarea") out = run_coarea(cfg);
  else if (cmd == "tv-identity") out = run_tv_identity(cfg);
  else if (cmd == "perimeter") out = run_perimeter(cfg);
  else if (cmd == "alpha") out = run_alpha(cfg);
  else if (cmd == "bad-mass") out = run_bad_mass(cfg);
  else if (cmd == "straighten") out = run_straighten(cfg);
  else if (cmd == "collapse") out = run_collapse(cfg);
  else if (cmd == "scale-compare") out = run_scale_compare(cfg);
  else fail(kConfigViolation, "schema", "unknown command: " + cmd);

  json result;
  result["command"] = cmd;
  result["config"] = cfg;
  result["config_hash"] = heiscut::io::fnv1a(cfg.dump());
  result["format_version"] = 1;
  result["library_version"] = heiscut::kVersion;
  result["results"] = out.results;
  if (!out.extra_meta.is_null()) result["grid"] = out.extra_meta;
  auto now = std::chrono::system_clock::now();
  result["timestamp"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          now.time_since_epoch())
          .count();

  heiscut::io::write_file(outdir + "/result.json", result.dump(2) + "\n");
  if (!out.plot_csv.empty())
    heiscut::io::write_file(outdir + "/plot.csv", out.plot_csv);
  std::cout << result.dump(2) << std::endl;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cut metrics, L1 distortion LPs, and Heisenberg BV experiments"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "run a config JSON file");

  json cfg;
  cfg["format_version"] = 1;
  json params = json::object();
  json inputs = json::object();

  std::uint64_t seed = 1;
  std::string output_dir = "out";
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out", output_dir, "output directory");

  // flag plumbing: each subcommand assembles the equivalent config object
  auto add_param = [&params](const std::string& key) {
    return [&params, key](const std::string& v) {
      params[key] = json::parse(v, nullptr, false).is_discarded()
                        ? json(v)
                        : json::parse(v);
    };
  };

  auto* mc = app.add_subcommand("moving-char", "isometry check of the moving indicator map");
  mc->add_option_function<std::string>("--n", add_param("n"));

  auto* cb = app.add_subcommand("cayley-ball", "generate the ball W_k of the integer Heisenberg group");
  cb->add_option_function<std::string>("--k", add_param("k"));
  cb->add_option_function<std::string>("--cap", add_param("cap"));

  auto* di = app.add_subcommand("distortion", "optimal L1 distortion of a finite metric space");
  di->add_option_function<std::string>("--graph", add_param("graph"));
  std::string space_path;
  di->add_option("--space", space_path, "metric space JSON file");
  bool exact_flag = false, colgen_flag = false;
  di->add_flag("--exact", exact_flag, "full cut enumeration");
  di->add_flag("--colgen", colgen_flag, "column generation");
  di->add_option_function<std::string>("--budget", add_param("budget"));
  di->add_option_function<std::string>("--enum-cap", add_param("enum_cap"));

  auto* sl = app.add_subcommand("slice", "cut measure of an L1 map (CSV)");
  std::string map_path;
  sl->add_option("--input", map_path, "L1 map CSV file");

  auto* co = app.add_subcommand("coarea", "discrete coarea identity of one coordinate");
  co->add_option("--input", map_path, "L1 map CSV file");
  co->add_option_function<std::string>("--column", add_param("column"));

  auto* tv = app.add_subcommand("tv-identity", "total perimeter vs total variation");
  tv->add_option("--input", map_path, "L1 map CSV file");

  auto* pe = app.add_subcommand("perimeter", "crossing-count perimeter field of a voxel set");
  auto* al = app.add_subcommand("alpha", "half-space closeness at a point and scale");
  auto* bm = app.add_subcommand("bad-mass", "decay of the bad part of the total perimeter measure");
  auto* st = app.add_subcommand("straighten", "replace good cuts by half-spaces");
  auto* cl = app.add_subcommand("collapse", "center collapse ratios and horizontal control");
  auto* sc = app.add_subcommand("scale-compare", "straightened-metric discrepancy across scales");
  for (auto* sub : {pe, al, bm, st, cl, sc}) {
    sub->add_option_function<std::string>("--fn", add_param("fn"));
    sub->add_option_function<std::string>("--resolution", add_param("resolution"));
    sub->add_option_function<std::string>("--bounds", add_param("bounds"));
  }
  pe->add_option_function<std::string>("--threshold", add_param("threshold"));
  pe->add_option_function<std::string>("--halfspace-theta", add_param("halfspace_theta"));
  al->add_option_function<std::string>("--threshold", add_param("threshold"));
  al->add_option_function<std::string>("--halfspace-theta", add_param("halfspace_theta"));
  al->add_option_function<std::string>("--x", add_param("x"));
  al->add_option_function<std::string>("--r", add_param("r"));
  bm->add_option_function<std::string>("--levels", add_param("levels"));
  bm->add_option_function<std::string>("--eps", add_param("eps"));
  bm->add_option_function<std::string>("--R-list", add_param("R_list"));
  st->add_option_function<std::string>("--levels", add_param("levels"));
  st->add_option_function<std::string>("--x", add_param("x"));
  st->add_option_function<std::string>("--delta", add_param("delta"));
  st->add_option_function<std::string>("--eps", add_param("eps"));
  st->add_option_function<std::string>("--r", add_param("r"));
  st->add_option_function<std::string>("--R0", add_param("R0"));
  cl->add_option_function<std::string>("--levels", add_param("levels"));
  cl->add_option_function<std::string>("--control", add_param("control"));
  cl->add_option_function<std::string>("--count", add_param("count"));
  cl->add_option_function<std::string>("--x", add_param("x"));
  cl->add_option_function<std::string>("--t-list", add_param("t_list"));
  cl->add_option_function<std::string>("--direction", add_param("direction"));
  sc->add_option_function<std::string>("--levels", add_param("levels"));
  sc->add_option_function<std::string>("--x", add_param("x"));
  sc->add_option_function<std::string>("--r-list", add_param("r_list"));
  sc->add_option_function<std::string>("--delta", add_param("delta"));
  sc->add_option_function<std::string>("--eps", add_param("eps"));
  sc->add_option_function<std::string>("--pairs", add_param("pairs"));

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      if (!fs::exists(config_path))
        fail(kMissingInput, "missing_input", "config not found: " + config_path);
      json loaded = json::parse(heiscut::io::read_file(config_path), nullptr,
                                false);
      if (loaded.is_discarded())
        fail(kConfigViolation, "schema", "config is not valid JSON");
      return run_config(loaded);
    }

    std::string cmd;
    for (auto* sub : app.get_subcommands()) cmd = sub->get_name();
    if (cmd.empty()) {
      std::cerr << app.help() << std::endl;
      return kConfigViolation;
    }
    cfg["command"] = cmd;
    cfg["seed"] = seed;
    cfg["output_dir"] = output_dir;
    if (cmd == "distortion") {
      params["mode"] = colgen_flag ? "colgen" : "exact";
      if (!space_path.empty()) inputs["space"] = space_path;
    }
    if ((cmd == "slice" || cmd == "coarea" || cmd == "tv-identity") &&
        !map_path.empty())
      inputs["map"] = map_path;
    if (!params.empty()) cfg["params"] = params;
    if (!inputs.empty()) cfg["inputs"] = inputs;
    return run_config(cfg);
  } catch (const CliError& e) {
    json err = {{"error",
                 {{"kind", e.kind}, {"message", e.message}, {"code", int(e.code)}}}};
    std::cerr << err.dump(2) << std::endl;
    return e.code;
  } catch (const heiscut::NumericalError& e) {
    json err = {{"error", {{"kind", "numerical"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << std::endl;
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    json err = {{"error", {{"kind", "invalid_argument"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << std::endl;
    return kConfigViolation;
  } catch (const std::exception& e) {
    json err = {{"error", {{"kind", "unexpected"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << std::endl;
    return kOther;
  }
}
