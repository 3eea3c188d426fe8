#include "fga/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "fga/error.hpp"
#include "fga/pipelines.hpp"

namespace fga {
namespace {

namespace fs = std::filesystem;

enum class Kind { integer, pow2, real, positive, nonnegative, boolean, choice, reals, object_or_null, real_or_null };

struct ParamSpec {
  const char* name;
  Kind kind;
  json fallback;
  std::set<Command> commands;
  std::vector<std::string> choices = {};
};

const std::vector<ParamSpec>& param_table() {
  using C = Command;
  static const std::vector<ParamSpec> t{
      {"n", Kind::integer, 1, {C::spectrum, C::fga}},
      {"N", Kind::pow2, 128, {C::spectrum, C::fga, C::drum}},
      {"L", Kind::positive, 12.0, {C::spectrum, C::fga}},
      {"potential", Kind::object_or_null, nullptr, {C::spectrum, C::fga}},
      {"how_many", Kind::integer, 2, {C::spectrum}},
      {"tol", Kind::positive, 1e-8, {C::spectrum}},
      {"dirichlet_radius", Kind::real_or_null, nullptr, {C::spectrum}},
      {"reference", Kind::real_or_null, nullptr, {C::spectrum, C::drum}},
      {"reference_tolerance", Kind::positive, 0.02, {C::spectrum, C::drum}},
      {"save_state", Kind::boolean, true, {C::spectrum, C::fga}},
      {"r", Kind::positive, 3.0, {C::fga}},
      {"eps0", Kind::positive, 0.1, {C::fga, C::drum}},
      {"scaled", Kind::boolean, true, {C::fga}},
      {"adiabatic_eps", Kind::positive, 0.1, {C::fga, C::drum}},
      {"time_scale", Kind::positive, 1.0, {C::fga}},
      {"total_time", Kind::nonnegative, 0.0, {C::fga, C::drum}},
      {"t_sweep", Kind::reals, json::array({0.25, 0.5, 1.0, 2.0}), {C::fga}},
      {"measure", Kind::choice, "expectation", {C::fga}, {"expectation", "sample"}},
      {"sampling_init", Kind::boolean, false, {C::fga}},
      {"bypass_bowl", Kind::boolean, false, {C::fga}},
      {"bowl_samples", Kind::integer, 2000, {C::fga}},
      {"trace_stride", Kind::integer, 0, {C::fga, C::drum}},
      {"max_steps", Kind::integer, 20000000, {C::fga, C::drum}},
      {"energy_tolerance", Kind::positive, 0.05, {C::fga}},
      {"overlap_threshold", Kind::positive, 0.9, {C::fga}},
      {"gap_fraction", Kind::positive, 0.9, {C::fga}},
      {"drift_limit", Kind::positive, 1e-8, {C::fga}},
      {"mode", Kind::choice, "direct", {C::drum}, {"direct", "fga"}},
      {"auto_N", Kind::boolean, false, {C::drum}},
      {"max_N", Kind::pow2, 512, {C::drum}},
      {"norm_cap", Kind::positive, kScaledNormCap, {C::drum}},
      {"sweep_start", Kind::positive, 1e2, {C::drum}},
      {"sweep_factor", Kind::positive, 10.0, {C::drum}},
      {"stabilize_tol", Kind::positive, 1e-3, {C::drum}},
      {"solver_tol", Kind::positive, 1e-3, {C::drum}},
      {"masked_check", Kind::boolean, true, {C::drum}},
      {"fd_check", Kind::boolean, true, {C::drum}},
      {"fd_resolution", Kind::integer, 512, {C::drum}},
      {"R", Kind::nonnegative, 0.0, {C::drum}},
      {"lower_bound", Kind::real_or_null, nullptr, {C::drum}},
      {"oracle_tolerance", Kind::positive, 0.03, {C::drum}},
      {"suite", Kind::choice, "all", {C::verify}, suite_names()},
  };
  return t;
}

const ParamSpec* find_param(const std::string& name) {
  for (const auto& p : param_table())
    if (name == p.name) return &p;
  return nullptr;
}

json check_value(const ParamSpec& p, const json& v, const std::string& where) {
  auto fail = [&](const std::string& what) -> json { throw ConfigError(where + ": " + what); };
  switch (p.kind) {
    case Kind::integer:
      if (!v.is_number_integer()) return fail("expected an integer");
      if (v.get<long>() < 0) return fail("must be >= 0");
      return v;
    case Kind::pow2:
      if (!v.is_number_integer()) return fail("expected an integer");
      if (!is_power_of_two(v.get<long>()) || v.get<long>() < 4) return fail("must be a power of two >= 4");
      return v;
    case Kind::real:
    case Kind::positive:
    case Kind::nonnegative: {
      if (!v.is_number()) return fail("expected a number");
      const double d = v.get<double>();
      if (!std::isfinite(d)) return fail("must be finite");
      if (p.kind == Kind::positive && !(d > 0.0)) return fail("must be > 0");
      if (p.kind == Kind::nonnegative && d < 0.0) return fail("must be >= 0");
      return json(d);
    }
    case Kind::boolean:
      if (!v.is_boolean()) return fail("expected true or false");
      return v;
    case Kind::choice:
      if (!v.is_string()) return fail("expected a string");
      if (std::find(p.choices.begin(), p.choices.end(), v.get<std::string>()) == p.choices.end()) {
        std::string all;
        for (const auto& c : p.choices) all += (all.empty() ? "" : ", ") + c;
        return fail("must be one of: " + all);
      }
      return v;
    case Kind::reals: {
      if (!v.is_array() || v.empty()) return fail("expected a non-empty array of numbers");
      json out = json::array();
      for (const auto& e : v) {
        if (!e.is_number() || !(e.get<double>() > 0.0)) return fail("entries must be positive numbers");
        out.push_back(e.get<double>());
      }
      return out;
    }
    case Kind::object_or_null:
      if (!v.is_null() && !v.is_object()) return fail("expected an object");
      return v;
    case Kind::real_or_null:
      if (v.is_null()) return v;
      if (!v.is_number() || !std::isfinite(v.get<double>())) return fail("expected a finite number or null");
      return json(v.get<double>());
  }
  return v;
}

void set_parameter(RunManifest& m, const std::string& key, const json& value, const std::string& where) {
  const ParamSpec* p = find_param(key);
  if (!p) throw ConfigError(where + ": unknown parameter '" + key + "'");
  if (!p->commands.count(m.command))
    throw ConfigError(where + ": parameter '" + key + "' does not apply to command " + to_string(m.command));
  m.parameters[key] = check_value(*p, value, where);
}

void set_constant(RunManifest& m, const std::string& key, const json& value, const std::string& where) {
  const auto& names = ThetaConstants::names();
  if (std::find(names.begin(), names.end(), key) == names.end())
    throw ConfigError(where + ": unknown constant '" + key + "'");
  if (!value.is_number() || !(value.get<double>() > 0.0) || !std::isfinite(value.get<double>()))
    throw ConfigError(where + ": constant '" + key + "' must be a positive finite number");
  m.constants[key] = value.get<double>();
}

std::uint64_t parse_seed(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(where + ": seed must be a non-negative integer");
  return v.get<std::uint64_t>();
}

ThetaConstants constants_of(const RunManifest& m) {
  ThetaConstants c;
  for (const auto& [k, v] : m.constants.items()) c.set(k, v.get<double>());
  return c;
}

// Potential for spectrum/fga: inline parameter wins over the instance file.
PotentialPtr load_potential(const RunManifest& m) {
  if (!m.parameters.at("potential").is_null()) return potential_from_json(m.parameters.at("potential"));
  if (m.instance.empty()) throw ConfigError("no potential: set parameters.potential or an instance file");
  const json j = read_json_file(m.instance);
  if (j.is_object() && j.contains("type")) return potential_from_json(j);
  if (!j.is_object()) throw ConfigError(m.instance.string() + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (k != "name" && k != "description" && k != "potential")
      throw ConfigError(m.instance.string() + ": unknown key '" + k + "'");
  if (!j.contains("potential")) throw ConfigError(m.instance.string() + ": missing 'potential'");
  return potential_from_json(j.at("potential"));
}

DrumFile load_drum(const RunManifest& m) {
  if (m.instance.empty()) throw ConfigError("drum: an instance file is required");
  return drum_file_from_json(read_json_file(m.instance));
}

double par(const RunManifest& m, const char* k) { return m.parameters.at(k).get<double>(); }
int ipar(const RunManifest& m, const char* k) { return m.parameters.at(k).get<int>(); }
bool bpar(const RunManifest& m, const char* k) { return m.parameters.at(k).get<bool>(); }
std::optional<double> opar(const RunManifest& m, const char* k) {
  const auto& v = m.parameters.at(k);
  return v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
}

json audit_json(const FgaParams& p) {
  json a = json::array();
  for (const auto& e : p.audit) a.push_back({{"name", e.name}, {"value", e.value}, {"formula", e.formula}});
  return a;
}

json params_json(const FgaParams& p) {
  return {{"n", p.n}, {"N", p.N},         {"L", p.L},           {"r", p.r},           {"a", p.a},
          {"b", p.b}, {"c", p.c},         {"E0", p.E0},         {"sigma", p.sigma},   {"eps0", p.eps0},
          {"scaled", p.scaled}, {"overflow", p.overflow}, {"waived", p.waived}, {"audit", audit_json(p)}};
}

json bowl_json(const BowlReport& b) {
  json inc = json::array();
  for (const auto& c : b.inclusions)
    inc.push_back({{"name", c.name}, {"pass", c.pass}, {"worst_slack", c.worst_slack}, {"samples", c.samples}});
  return {{"inclusions", inc}, {"convex", b.convex}, {"worst_convexity", b.worst_convexity}, {"pass", b.pass()}};
}

struct Context {
  const RunManifest& m;
  ResultRecord& rec;
  std::string& stage;
  fs::path out;
  void artifact(const std::string& name) { rec.artifacts.push_back(name); }
};

void run_spectrum(Context& cx) {
  const RunManifest& m = cx.m;
  cx.stage = "load";
  const auto V = load_potential(m);
  const GridSpec grid = build_grid(ipar(m, "n"), ipar(m, "N"), par(m, "L"));
  cx.stage = "hamiltonian";
  HamiltonianOp h = make_hamiltonian(*V, grid);
  if (auto rad = opar(m, "dirichlet_radius")) h = dirichlet_restrict(h, RestrictionMask{BallMask{*rad, false, {}}, grid});
  cx.stage = "spectrum";
  SolveOptions so;
  so.how_many = std::max(2, ipar(m, "how_many"));
  so.tol = par(m, "tol");
  so.seed = m.seed;
  const SpectralReport rep = solve_spectrum(h, so);
  cx.rec.lambda0_estimate = rep.lambda0;
  cx.rec.diagnostics = {{"eigenvalues", rep.eigenvalues}, {"lambda1", rep.lambda1},     {"gap", rep.gap},
                        {"degenerate", rep.degenerate},   {"residual0", rep.residual0}, {"residual1", rep.residual1},
                        {"method", to_string(rep.method)}, {"iterations", rep.iterations},
                        {"dimension", h.dimension()},     {"norm_estimate", h.norm_estimate()}};
  cx.rec.checks["residual_within_tolerance"] = rep.residual0 <= std::max(so.tol, 1e-10 * h.norm_estimate());
  if (auto ref = opar(m, "reference")) {
    cx.rec.references["reference"] = *ref;
    const double rel = (rep.lambda0 - *ref) / std::abs(*ref);
    cx.rec.deltas["reference_relative"] = rel;
    cx.rec.checks["reference_within_tolerance"] = std::abs(rel) <= par(m, "reference_tolerance");
  }
  cx.stage = "write";
  std::vector<double> idx;
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) idx.push_back(static_cast<double>(i));
  write_xy_csv(cx.out / "plot_spectrum.csv", "index", "eigenvalue", idx, rep.eigenvalues);
  cx.artifact("plot_spectrum.csv");
  if (bpar(m, "save_state"))
    for (const auto& f : write_wavefunction(cx.out, "ground_state", rep.ground)) cx.artifact(f);
}

void run_fga_command(Context& cx) {
  const RunManifest& m = cx.m;
  cx.stage = "load";
  const auto V = load_potential(m);
  const GridSpec grid = build_grid(ipar(m, "n"), ipar(m, "N"), par(m, "L"));
  const ThetaConstants constants = constants_of(m);

  cx.stage = "parameters";
  FgaParams params = scaled_fga_params(*V, grid, par(m, "r"), par(m, "eps0"), constants);
  if (!bpar(m, "scaled")) {
    const double a = params.a;
    params = derive_fga_params(grid.n, a, par(m, "r"), grid.L, par(m, "eps0"), constants);
    params.N = grid.N;
  }
  cx.rec.diagnostics["parameters"] = params_json(params);

  FgaOptions fo;
  fo.bypass_bowl = bpar(m, "bypass_bowl");
  fo.bowl_samples = ipar(m, "bowl_samples");
  fo.adiabatic_eps = par(m, "adiabatic_eps");
  fo.total_time = par(m, "total_time");
  fo.measure = m.parameters.at("measure") == "sample" ? MeasureMode::sample : MeasureMode::expectation;
  fo.sampling_init = bpar(m, "sampling_init");
  fo.seed = m.seed;
  fo.trace_stride = ipar(m, "trace_stride");
  fo.max_steps = m.parameters.at("max_steps").get<long>();

  std::vector<double> sweep = m.parameters.at("t_sweep").get<std::vector<double>>();
  std::sort(sweep.begin(), sweep.end());
  if (std::find(sweep.begin(), sweep.end(), 1.0) == sweep.end()) sweep.insert(std::upper_bound(sweep.begin(), sweep.end(), 1.0), 1.0);

  std::optional<FgaResult> main;
  std::vector<double> sweep_T, sweep_overlap, sweep_energy;
  for (double f : sweep) {
    cx.stage = "fga(time_scale=" + format_double(f) + ")";
    FgaOptions o = fo;
    o.time_scale = par(m, "time_scale") * f;
    o.trace_overlaps = f == 1.0;
    FgaResult r = run_fga(*V, params, grid, o);
    sweep_T.push_back(r.total_time);
    sweep_overlap.push_back(r.final_overlap);
    sweep_energy.push_back(r.lambda0_estimate);
    if (f == 1.0) main = std::move(r);
  }
  const FgaResult& r = *main;

  cx.rec.lambda0_estimate = r.lambda0_estimate;
  cx.rec.references["dense_lambda0_final"] = r.final_report.lambda0;
  cx.rec.references["gap_bound"] = r.gap_bound;
  cx.rec.deltas["energy_vs_dense"] = r.lambda0_estimate - r.final_report.lambda0;
  double worst_l1 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.path_lambda1.size(); ++i) worst_l1 = std::max(worst_l1, r.path_lambda1[i] - r.lambda1_bounds[i]);
  bool monotone = true;
  for (std::size_t i = 1; i < sweep_overlap.size(); ++i) monotone = monotone && sweep_overlap[i] >= sweep_overlap[i - 1] - 1e-9;

  cx.rec.checks["energy_within_tolerance"] = std::abs(r.lambda0_estimate - r.final_report.lambda0) <= par(m, "energy_tolerance");
  cx.rec.checks["final_overlap"] = r.final_overlap >= par(m, "overlap_threshold");
  cx.rec.checks["path_gap"] = r.min_gap >= par(m, "gap_fraction") * r.gap_bound;
  cx.rec.checks["lambda1_upper_bound"] = worst_l1 <= 1e-6;
  cx.rec.checks["norm_drift"] = r.max_norm_drift <= par(m, "drift_limit");
  if (sweep.size() > 1) cx.rec.checks["overlap_monotone_in_T"] = monotone;

  cx.rec.diagnostics["total_time"] = r.total_time;
  cx.rec.diagnostics["steps"] = r.steps;
  cx.rec.diagnostics["final_overlap"] = r.final_overlap;
  cx.rec.diagnostics["final_lambda1"] = r.final_report.lambda1;
  cx.rec.diagnostics["min_gap"] = r.min_gap;
  cx.rec.diagnostics["s_points"] = r.s_points;
  cx.rec.diagnostics["path_lambda0"] = r.path_lambda0;
  cx.rec.diagnostics["path_lambda1"] = r.path_lambda1;
  cx.rec.diagnostics["path_gaps"] = r.path_gaps;
  cx.rec.diagnostics["lambda1_bounds"] = r.lambda1_bounds;
  cx.rec.diagnostics["norm_diff"] = r.norm_diff;
  cx.rec.diagnostics["norm_diff_bound"] = r.norm_diff_bound;
  cx.rec.diagnostics["max_norm_drift"] = r.max_norm_drift;
  cx.rec.diagnostics["initial_energy"] = r.init.energy;
  cx.rec.diagnostics["t_sweep"] = {{"time_scale", sweep}, {"total_time", sweep_T}, {"final_overlap", sweep_overlap},
                                   {"lambda0_estimate", sweep_energy}};
  if (!fo.bypass_bowl) {
    cx.rec.diagnostics["bowl"] = bowl_json(r.bowl);
    cx.rec.checks["bowl_conditions"] = r.bowl.pass();
  }

  cx.stage = "write";
  write_trace_csv(cx.out / "trace.csv", r.trace);
  cx.artifact("trace.csv");
  write_xy_csv(cx.out / "plot_gap_vs_s.csv", "s", "gap", r.s_points, r.path_gaps);
  cx.artifact("plot_gap_vs_s.csv");
  write_xy_csv(cx.out / "plot_overlap_vs_t.csv", "t", "overlap", r.trace.times, r.trace.overlaps);
  cx.artifact("plot_overlap_vs_t.csv");
  write_xy_csv(cx.out / "plot_overlap_vs_T.csv", "T", "final_overlap", sweep_T, sweep_overlap);
  cx.artifact("plot_overlap_vs_T.csv");
  if (bpar(m, "save_state"))
    for (const auto& f : write_wavefunction(cx.out, "final_ground_state", r.final_report.ground)) cx.artifact(f);
}

void run_drum_command(Context& cx) {
  const RunManifest& m = cx.m;
  cx.stage = "load";
  const DrumFile file = load_drum(m);
  const double R = par(m, "R") > 0.0 ? par(m, "R") : file.R;
  const DrumInstance drum = make_drum(file.planes, R, par(m, "eps0"));

  DrumOptions o;
  o.N = ipar(m, "N");
  o.auto_N = bpar(m, "auto_N");
  o.max_N = ipar(m, "max_N");
  o.norm_cap = par(m, "norm_cap");
  o.sweep_start = par(m, "sweep_start");
  o.sweep_factor = par(m, "sweep_factor");
  o.stabilize_tol = par(m, "stabilize_tol");
  o.solver_tol = par(m, "solver_tol");
  o.masked_check = bpar(m, "masked_check");
  o.fd_check = bpar(m, "fd_check");
  o.fd_resolution = ipar(m, "fd_resolution");
  o.constants = constants_of(m);
  o.fga.adiabatic_eps = par(m, "adiabatic_eps");
  o.fga.total_time = par(m, "total_time");
  o.fga.trace_stride = ipar(m, "trace_stride");
  o.fga.max_steps = m.parameters.at("max_steps").get<long>();
  o.fga.seed = m.seed;
  const DrumMode mode = m.parameters.at("mode") == "fga" ? DrumMode::fga : DrumMode::direct;

  cx.stage = "drum(" + m.parameters.at("mode").get<std::string>() + ")";
  const DrumResult r = solve_drum(drum, mode, o);
  cx.rec.lambda0_estimate = r.lambda0_estimate;

  const auto reference = opar(m, "reference") ? opar(m, "reference") : file.reference;
  const auto lower = opar(m, "lower_bound") ? opar(m, "lower_bound") : file.lower_bound;
  if (reference) {
    cx.rec.references["reference"] = *reference;
    const double rel = (r.lambda0_estimate - *reference) / *reference;
    cx.rec.deltas["reference_relative"] = rel;
    cx.rec.checks["reference_within_tolerance"] = std::abs(rel) <= par(m, "reference_tolerance");
  }
  if (lower) {
    cx.rec.references["lower_bound"] = *lower;
    cx.rec.checks["above_lower_bound"] = r.lambda0_estimate >= *lower;
  }
  if (r.oracle) {
    cx.rec.references["oracle"] = {{"lambda0", r.oracle->lambda0},
                                   {"coarse", r.oracle->coarse},
                                   {"fine", r.oracle->fine},
                                   {"coarse_resolution", r.oracle->coarse_resolution},
                                   {"fine_resolution", r.oracle->fine_resolution}};
    const double rel = (r.lambda0_estimate - r.oracle->lambda0) / r.oracle->lambda0;
    cx.rec.deltas["oracle_relative"] = rel;
    cx.rec.checks["oracle_within_tolerance"] = std::abs(rel) <= par(m, "oracle_tolerance");
  }
  if (r.masked_lambda0) {
    cx.rec.references["masked_dirichlet"] = *r.masked_lambda0;
    cx.rec.checks["dirichlet_bracket"] = r.bracket_ok;
  }
  if (mode == DrumMode::direct) {
    cx.rec.checks["sweep_stabilized"] = r.stabilized;
    cx.rec.checks["sweep_monotone"] = r.sweep_monotone;
  }

  json d = {{"N", r.N},
            {"L", r.L},
            {"lambda0_normalized", r.lambda0_normalized},
            {"inradius", r.normalized.inradius},
            {"circumradius", r.normalized.circumradius},
            {"center", r.normalized.center},
            {"strength_cap", r.strength_cap},
            {"sweep_strengths", r.sweep_strengths},
            {"sweep_lambda0", r.sweep_lambda0},
            {"resolutions", r.resolutions},
            {"resolution_lambda0", r.resolution_lambda0},
            {"E", r.params.E},
            {"mu", r.params.mu},
            {"eps", r.params.eps},
            {"formula_strength", r.params.strength},
            {"b_closed_form", r.params.b_closed_form},
            {"m", r.params.m},
            {"parameters", params_json(r.params.fga)}};
  if (r.fga) {
    d["fga"] = {{"total_time", r.fga->total_time}, {"final_overlap", r.fga->final_overlap},
                {"min_gap", r.fga->min_gap},       {"dense_lambda0", r.fga->final_report.lambda0},
                {"path_gaps", r.fga->path_gaps},   {"max_norm_drift", r.fga->max_norm_drift}};
  }
  cx.rec.diagnostics = d;

  cx.stage = "write";
  write_xy_csv(cx.out / "plot_sweep.csv", "strength", "lambda0", r.sweep_strengths, r.sweep_lambda0);
  cx.artifact("plot_sweep.csv");
  std::vector<double> ns(r.resolutions.begin(), r.resolutions.end());
  write_xy_csv(cx.out / "plot_lambda0_vs_N.csv", "N", "lambda0", ns, r.resolution_lambda0);
  cx.artifact("plot_lambda0_vs_N.csv");
  if (r.fga) {
    write_trace_csv(cx.out / "trace.csv", r.fga->trace);
    cx.artifact("trace.csv");
    write_xy_csv(cx.out / "plot_gap_vs_s.csv", "s", "gap", r.fga->s_points, r.fga->path_gaps);
    cx.artifact("plot_gap_vs_s.csv");
  }
}

void run_verify(Context& cx) {
  const RunManifest& m = cx.m;
  const std::string suite = m.parameters.at("suite").get<std::string>();
  cx.stage = "verify(" + suite + ")";
  const SuiteReport rep = run_suite(suite, m.seed);
  cx.rec.checks["suite_pass"] = rep.pass();
  json failed = json::array();
  for (const auto& r : rep.records)
    if (!r.pass) failed.push_back(r.probe + "/" + r.instance);
  cx.rec.diagnostics = {{"suite", suite}, {"records", rep.records.size()}, {"failures", rep.failures()}, {"failed", failed}};
  cx.stage = "write";
  write_json_file(cx.out / "probes.json", to_json(rep));
  cx.artifact("probes.json");
  write_summary_csv(cx.out / "summary.csv", rep);
  cx.artifact("summary.csv");
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::fga: return "fga";
    case Command::drum: return "drum";
    case Command::verify: return "verify";
  }
  return "?";
}

Command command_from_string(const std::string& s) {
  if (s == "spectrum") return Command::spectrum;
  if (s == "fga") return Command::fga;
  if (s == "drum") return Command::drum;
  if (s == "verify") return Command::verify;
  throw ConfigError("unknown command '" + s + "'");
}

std::vector<std::string> parameter_names(Command c) {
  std::vector<std::string> out;
  for (const auto& p : param_table())
    if (p.commands.count(c)) out.emplace_back(p.name);
  return out;
}

RunManifest default_manifest(Command c) {
  RunManifest m;
  m.command = c;
  for (const auto& p : param_table())
    if (p.commands.count(c)) m.parameters[p.name] = p.fallback;
  const ThetaConstants defaults;
  for (const auto& [k, v] : defaults.values()) m.constants[k] = v;
  return m;
}

RunManifest parse_config(const fs::path& path, std::optional<Command> expected) {
  const json j = read_json_file(path);
  if (!j.is_object()) throw ConfigError(path.string() + ": top level must be an object");
  static const std::set<std::string> top{"command", "instance", "seed", "output", "parameters", "constants"};
  for (const auto& [k, v] : j.items())
    if (!top.count(k)) throw ConfigError(path.string() + ": unknown key '" + k + "'");

  Command cmd;
  if (j.contains("command")) {
    if (!j.at("command").is_string()) throw ConfigError(path.string() + ": command: expected a string");
    cmd = command_from_string(j.at("command").get<std::string>());
    if (expected && *expected != cmd)
      throw ConfigError(path.string() + ": config is for command '" + to_string(cmd) + "', not '" + to_string(*expected) + "'");
  } else if (expected) {
    cmd = *expected;
  } else {
    throw ConfigError(path.string() + ": missing 'command'");
  }
  RunManifest m = default_manifest(cmd);
  const std::string where = path.string();
  if (j.contains("instance")) {
    if (!j.at("instance").is_string()) throw ConfigError(where + ": instance: expected a path string");
    fs::path inst = j.at("instance").get<std::string>();
    m.instance = inst.is_absolute() ? inst : path.parent_path() / inst;
  }
  if (j.contains("seed")) m.seed = parse_seed(j.at("seed"), where + ": seed");
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError(where + ": output: expected a path string");
    m.output = j.at("output").get<std::string>();
  }
  if (j.contains("parameters")) {
    if (!j.at("parameters").is_object()) throw ConfigError(where + ": parameters: expected an object");
    for (const auto& [k, v] : j.at("parameters").items()) set_parameter(m, k, v, where + ": parameters." + k);
  }
  if (j.contains("constants")) {
    if (!j.at("constants").is_object()) throw ConfigError(where + ": constants: expected an object");
    for (const auto& [k, v] : j.at("constants").items()) set_constant(m, k, v, where + ": constants." + k);
  }
  validate_manifest(m);
  return m;
}

void apply_override(RunManifest& m, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "': expected key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  const std::string where = "override " + key;
  if (key == "seed") {
    m.seed = parse_seed(value, where);
  } else if (key == "instance") {
    m.instance = text;
  } else if (key == "output") {
    m.output = text;
  } else if (key.size() > 9 && key.ends_with("_constant")) {
    set_constant(m, key, value, where);
  } else {
    set_parameter(m, key, value, where);
  }
}

void validate_manifest(const RunManifest& m) {
  for (const auto& p : param_table())
    if (p.commands.count(m.command)) {
      if (!m.parameters.contains(p.name)) throw ConfigError(std::string("missing parameter '") + p.name + "'");
      check_value(p, m.parameters.at(p.name), std::string("parameters.") + p.name);
    }
  for (const auto& [k, v] : m.parameters.items())
    if (!find_param(k) || !find_param(k)->commands.count(m.command)) throw ConfigError("unknown parameter '" + k + "'");
  if (!m.instance.empty() && !fs::exists(m.instance))
    throw ConfigError("instance file '" + m.instance.string() + "' does not exist");
  if (m.output.empty()) throw ConfigError("output directory must be set");

  auto eps_ok = [&](const char* k) {
    const double e = m.parameters.at(k).get<double>();
    if (!(e > 0.0 && e < 1.0)) throw ConfigError(std::string("parameters.") + k + ": must lie in (0, 1)");
  };
  switch (m.command) {
    case Command::spectrum:
    case Command::fga: {
      const int n = m.parameters.at("n").get<int>();
      if (n < 1 || n > 3) throw ConfigError("parameters.n: must be 1, 2 or 3");
      try {
        build_grid(n, m.parameters.at("N").get<int>(), m.parameters.at("L").get<double>());
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
      }
      const auto V = load_potential(m);
      const int pd = potential_dimension(*V);
      if (pd != 0 && pd != n) throw ConfigError("potential dimension does not match parameters.n");
      if (m.command == Command::fga) {
        eps_ok("eps0");
        eps_ok("adiabatic_eps");
        if (!(m.parameters.at("r").get<double>() >= 1.0 && m.parameters.at("r").get<double>() < m.parameters.at("L").get<double>() / 2.0))
          throw ConfigError("parameters.r: must lie in [1, L/2)");
      }
      break;
    }
    case Command::drum: {
      eps_ok("eps0");
      if (m.parameters.at("sweep_factor").get<double>() <= 1.0) throw ConfigError("parameters.sweep_factor: must exceed 1");
      if (m.parameters.at("fd_resolution").get<int>() < 8) throw ConfigError("parameters.fd_resolution: must be >= 8");
      if (m.parameters.at("max_N").get<int>() < m.parameters.at("N").get<int>())
        throw ConfigError("parameters.max_N: must be >= N");
      load_drum(m);
      break;
    }
    case Command::verify:
      break;
  }
}

json to_json(const RunManifest& m) {
  return {{"command", to_string(m.command)},
          {"instance", m.instance.string()},
          {"seed", m.seed},
          {"output", m.output.string()},
          {"parameters", m.parameters},
          {"constants", m.constants}};
}

RunOutcome run(const RunManifest& m) {
  RunOutcome outcome;
  ResultRecord& rec = outcome.record;
  rec.command = to_string(m.command);
  rec.inputs = to_json(m);
  std::string stage = "setup";
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(m.output);
  Context cx{m, rec, stage, m.output};
  try {
    switch (m.command) {
      case Command::spectrum: run_spectrum(cx); break;
      case Command::fga: run_fga_command(cx); break;
      case Command::drum: run_drum_command(cx); break;
      case Command::verify: run_verify(cx); break;
    }
    require_finite(to_json(rec));
  } catch (const std::exception& e) {
    rec.error = {{"stage", stage}, {"message", e.what()}};
  }
  rec.timings["total_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.artifacts.push_back("result.json");
  write_json_file(m.output / "result.json", to_json(rec));
  outcome.exit_code = rec.pass() ? kExitPass : kExitCheckFailure;
  return outcome;
}

}  // namespace fga
