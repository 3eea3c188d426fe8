#include "fga/io.hpp"

#include <zlib.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "fga/error.hpp"

namespace fga {
namespace {

void expect_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j.at(key), where + "." + key) : fallback;
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, where));
  return out;
}

std::vector<int> integers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of integers");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
    out.push_back(v.get<int>());
  }
  return out;
}

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const GridSpec& grid) { return {{"n", grid.n}, {"N", grid.N}, {"L", grid.L}}; }

GridSpec grid_from_json(const json& j) {
  expect_keys(j, {"n", "N", "L"}, "grid");
  if (!field(j, "n", "grid").is_number_integer() || !field(j, "N", "grid").is_number_integer())
    throw ConfigError("grid: n and N must be integers");
  try {
    return build_grid(j.at("n").get<int>(), j.at("N").get<int>(), number(field(j, "L", "grid"), "grid.L"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

json to_json(const std::vector<Halfplane>& planes) {
  json out = json::array();
  for (const auto& p : planes) out.push_back({{"a", p.a}, {"b", p.b}});
  return out;
}

std::vector<Halfplane> planes_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("planes: expected a non-empty list of {a, b}");
  std::vector<Halfplane> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "planes[" + std::to_string(i) + "]";
    expect_keys(j[i], {"a", "b"}, where);
    out.push_back({numbers(field(j[i], "a", where), where + ".a"), number(field(j[i], "b", where), where + ".b")});
  }
  return out;
}

json to_json(const PotentialSpec& p) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          return {{"type", "quadratic"}, {"center", v.center}, {"curvature", v.curvature}};
        } else if constexpr (std::is_same_v<T, BarrierSum>) {
          return {{"type", "barrier"}, {"planes", to_json(v.planes)}, {"strength", v.strength}, {"eps", v.eps}};
        } else if constexpr (std::is_same_v<T, InitialCut>) {
          return {{"type", "initial_cut"}, {"height", v.height}, {"alpha", v.alpha}, {"beta", v.beta}};
        } else if constexpr (std::is_same_v<T, Saturated>) {
          return {{"type", "saturated"}, {"inner", to_json(*v.inner)}, {"c", v.c}, {"width", v.width}};
        } else if constexpr (std::is_same_v<T, Interpolated>) {
          return {{"type", "interpolated"}, {"p0", to_json(*v.p0)}, {"pT", to_json(*v.pT)}, {"s", v.s}};
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          return {{"type", "tabulated"}, {"grid", to_json(v.grid)}, {"values", v.values}};
        } else {
          json terms = json::array();
          for (const auto& t : v.terms)
            terms.push_back({{"frequency", t.frequency}, {"cos", t.cos_coef}, {"sin", t.sin_coef}});
          return {{"type", "trig"}, {"L", v.L}, {"constant", v.constant}, {"terms", terms}};
        }
      },
      p.value);
}

namespace {

PotentialPtr build_potential(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ConfigError("potential: expected an object with a string 'type'");
  const std::string type = j.at("type").get<std::string>();
  const std::string where = "potential(" + type + ")";
  PotentialPtr out;
  if (type == "quadratic") {
    expect_keys(j, {"type", "center", "curvature"}, where);
    out = quadratic(numbers(field(j, "center", where), where + ".center"),
                    numbers(field(j, "curvature", where), where + ".curvature"));
  } else if (type == "isotropic_quadratic") {
    expect_keys(j, {"type", "n", "curvature"}, where);
    if (!field(j, "n", where).is_number_integer()) throw ConfigError(where + ".n: expected an integer");
    out = isotropic_quadratic(j.at("n").get<int>(), number_or(j, "curvature", 1.0, where));
  } else if (type == "constant") {
    expect_keys(j, {"type", "value"}, where);
    out = constant_potential(number(field(j, "value", where), where + ".value"));
  } else if (type == "barrier") {
    expect_keys(j, {"type", "planes", "strength", "eps"}, where);
    out = barrier_sum(planes_from_json(field(j, "planes", where)), number(field(j, "strength", where), where),
                      number(field(j, "eps", where), where));
  } else if (type == "initial_cut") {
    expect_keys(j, {"type", "height", "alpha", "beta"}, where);
    out = make_potential(InitialCut{number(field(j, "height", where), where), number_or(j, "alpha", 0.25, where),
                                    number_or(j, "beta", 0.25, where)});
  } else if (type == "saturated") {
    expect_keys(j, {"type", "inner", "c", "width"}, where);
    out = saturated(potential_from_json(field(j, "inner", where)), number(field(j, "c", where), where),
                    number_or(j, "width", 1.0, where));
  } else if (type == "interpolated") {
    expect_keys(j, {"type", "p0", "pT", "s"}, where);
    out = interpolated(potential_from_json(field(j, "p0", where)), potential_from_json(field(j, "pT", where)),
                       number(field(j, "s", where), where));
  } else if (type == "tabulated") {
    expect_keys(j, {"type", "grid", "values"}, where);
    out = tabulated(grid_from_json(field(j, "grid", where)), numbers(field(j, "values", where), where));
  } else if (type == "trig") {
    expect_keys(j, {"type", "L", "constant", "terms"}, where);
    std::vector<TrigTerm> terms;
    if (j.contains("terms")) {
      if (!j.at("terms").is_array()) throw ConfigError(where + ".terms: expected an array");
      for (const auto& t : j.at("terms")) {
        expect_keys(t, {"frequency", "cos", "sin"}, where + ".terms");
        terms.push_back({integers(field(t, "frequency", where), where + ".frequency"), number_or(t, "cos", 0.0, where),
                         number_or(t, "sin", 0.0, where)});
      }
    }
    out = trig_polynomial(number(field(j, "L", where), where), number_or(j, "constant", 0.0, where), std::move(terms));
  } else {
    throw ConfigError("potential: unknown type '" + type + "'");
  }
  validate(*out);
  return out;
}

}  // namespace

PotentialPtr potential_from_json(const json& j) {
  try {
    return build_potential(j);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
}

DrumFile drum_file_from_json(const json& j) {
  DrumFile d;
  if (j.is_array()) {
    d.planes = planes_from_json(j);
    return d;
  }
  expect_keys(j, {"name", "description", "planes", "R", "eps0", "reference", "lower_bound"}, "drum instance");
  if (j.contains("name")) d.name = j.at("name").get<std::string>();
  d.planes = planes_from_json(field(j, "planes", "drum instance"));
  d.R = number_or(j, "R", 0.0, "drum instance");
  d.eps0 = number_or(j, "eps0", 0.1, "drum instance");
  if (j.contains("reference")) d.reference = number(j.at("reference"), "drum instance.reference");
  if (j.contains("lower_bound")) d.lower_bound = number(j.at("lower_bound"), "drum instance.lower_bound");
  return d;
}

json to_json(const ProbeRecord& r) {
  json measured = json::object(), bound = json::object(), inputs = json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = json_number(v);
  for (const auto& [k, v] : r.measured) measured[k] = json_number(v);
  for (const auto& [k, v] : r.bound) bound[k] = json_number(v);
  return {{"probe", r.probe}, {"instance", r.instance}, {"expectation", r.expectation}, {"inputs", inputs},
          {"measured", measured}, {"bound", bound}, {"notes", r.notes}, {"pass", r.pass}};
}

json to_json(const SuiteReport& r) {
  json recs = json::array();
  for (const auto& p : r.records) recs.push_back(to_json(p));
  return {{"suite", r.suite}, {"seed", r.seed}, {"pass", r.pass()}, {"failures", r.failures()}, {"records", recs}};
}

bool ResultRecord::pass() const {
  if (!error.is_null()) return false;
  for (const auto& [k, v] : checks.items())
    if (!v.is_boolean() || !v.get<bool>()) return false;
  return true;
}

json to_json(const ResultRecord& r) {
  json j = {{"schema_version", r.schema_version},
            {"command", r.command},
            {"inputs", r.inputs},
            {"lambda0_estimate", r.lambda0_estimate ? json(*r.lambda0_estimate) : json(nullptr)},
            {"references", r.references},
            {"deltas", r.deltas},
            {"checks", r.checks},
            {"diagnostics", r.diagnostics},
            {"timings", r.timings},
            {"artifacts", r.artifacts},
            {"error", r.error},
            {"pass", r.pass()}};
  return j;
}

ResultRecord result_from_json(const json& j) {
  expect_keys(j,
              {"schema_version", "command", "inputs", "lambda0_estimate", "references", "deltas", "checks",
               "diagnostics", "timings", "artifacts", "error", "pass"},
              "result");
  ResultRecord r;
  r.schema_version = field(j, "schema_version", "result").get<std::string>();
  if (r.schema_version != kSchemaVersion) throw ConfigError("result: unsupported schema_version '" + r.schema_version + "'");
  r.command = field(j, "command", "result").get<std::string>();
  r.inputs = j.value("inputs", json::object());
  if (j.contains("lambda0_estimate") && !j.at("lambda0_estimate").is_null())
    r.lambda0_estimate = number(j.at("lambda0_estimate"), "result.lambda0_estimate");
  r.references = j.value("references", json::object());
  r.deltas = j.value("deltas", json::object());
  r.checks = j.value("checks", json::object());
  r.diagnostics = j.value("diagnostics", json::object());
  r.timings = j.value("timings", json::object());
  r.artifacts = j.value("artifacts", std::vector<std::string>{});
  r.error = j.value("error", json(nullptr));
  return r;
}

void require_finite(const json& j, const std::string& where) {
  if (j.is_number_float()) {
    if (!std::isfinite(j.get<double>())) throw NonFiniteValue("non-finite value at '" + where + "'");
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) require_finite(v, where.empty() ? k : where + "." + k);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) require_finite(j[i], where + "[" + std::to_string(i) + "]");
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

void write_trace_csv(const std::filesystem::path& path, const EvolutionTrace& t) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "time,norm,energy,overlap\n";
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    out << format_double(t.times[i]) << ',' << format_double(i < t.norms.size() ? t.norms[i] : NAN) << ','
        << format_double(i < t.energies.size() ? t.energies[i] : NAN) << ','
        << (i < t.overlaps.size() ? format_double(t.overlaps[i]) : std::string()) << '\n';
  }
}

void write_xy_csv(const std::filesystem::path& path, const std::string& x_name, const std::string& y_name,
                  const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("write_xy_csv: column lengths differ");
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << x_name << ',' << y_name << '\n';
  for (std::size_t i = 0; i < xs.size(); ++i) out << format_double(xs[i]) << ',' << format_double(ys[i]) << '\n';
}

void write_summary_csv(const std::filesystem::path& path, const SuiteReport& report) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "probe,instance,expectation,pass,measured,bound\n";
  auto flat = [](const std::map<std::string, double>& m) {
    std::string s;
    for (const auto& [k, v] : m) s += (s.empty() ? "" : ";") + k + "=" + format_double(v);
    return s;
  };
  for (const auto& r : report.records)
    out << r.probe << ',' << r.instance << ',' << r.expectation << ',' << (r.pass ? "pass" : "fail") << ",\""
        << flat(r.measured) << "\",\"" << flat(r.bound) << "\"\n";
}

std::vector<std::string> write_wavefunction(const std::filesystem::path& dir, const std::string& stem,
                                            const WaveState& psi) {
  json meta = {{"grid", to_json(psi.grid())}, {"count", psi.size()}};
  std::vector<std::string> files{stem + ".json"};
  if (psi.size() <= kInlineAmplitudeLimit) {
    std::vector<double> re, im;
    for (const auto& a : psi.amplitudes()) {
      re.push_back(a.real());
      im.push_back(a.imag());
    }
    meta["format"] = "inline";
    meta["re"] = re;
    meta["im"] = im;
  } else {
    std::vector<unsigned char> bytes(psi.size() * 8);
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const float parts[2] = {static_cast<float>(psi[i].real()), static_cast<float>(psi[i].imag())};
      for (int p = 0; p < 2; ++p) {
        auto word = std::bit_cast<std::uint32_t>(parts[p]);
        for (int b = 0; b < 4; ++b) bytes[i * 8 + static_cast<std::size_t>(p) * 4 + static_cast<std::size_t>(b)] =
            static_cast<unsigned char>((word >> (8 * b)) & 0xffu);
      }
    }
    const std::string bin = stem + ".bin";
    std::ofstream out(dir / bin, std::ios::binary);
    if (!out) throw Error("cannot write '" + (dir / bin).string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    meta["format"] = "complex64-le";
    meta["file"] = bin;
    meta["crc32"] = crc32(0L, bytes.data(), static_cast<uInt>(bytes.size()));
    files.push_back(bin);
  }
  write_json_file(dir / files.front(), meta);
  return files;
}

WaveState read_wavefunction(const std::filesystem::path& json_path) {
  const json meta = read_json_file(json_path);
  expect_keys(meta, {"grid", "count", "format", "re", "im", "file", "crc32"}, "wavefunction");
  const GridSpec grid = grid_from_json(field(meta, "grid", "wavefunction"));
  const auto count = field(meta, "count", "wavefunction").get<std::size_t>();
  if (count != grid.size()) throw ConfigError("wavefunction: count does not match grid");
  std::vector<cplx> amps(count);
  const std::string format = field(meta, "format", "wavefunction").get<std::string>();
  if (format == "inline") {
    const auto re = numbers(field(meta, "re", "wavefunction"), "wavefunction.re");
    const auto im = numbers(field(meta, "im", "wavefunction"), "wavefunction.im");
    if (re.size() != count || im.size() != count) throw ConfigError("wavefunction: amplitude count mismatch");
    for (std::size_t i = 0; i < count; ++i) amps[i] = {re[i], im[i]};
  } else if (format == "complex64-le") {
    const std::string file = field(meta, "file", "wavefunction").get<std::string>();
    if (file.find('/') != std::string::npos || file.find("..") != std::string::npos)
      throw ConfigError("wavefunction: binary file must sit next to its sidecar");
    std::ifstream in(json_path.parent_path() / file, std::ios::binary);
    std::vector<unsigned char> bytes(count * 8);
    if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())))
      throw ConfigError("wavefunction: binary payload is truncated");
    if (crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())) != field(meta, "crc32", "wavefunction").get<unsigned long>())
      throw ConfigError("wavefunction: checksum mismatch");
    for (std::size_t i = 0; i < count; ++i) {
      float parts[2];
      for (int p = 0; p < 2; ++p) {
        std::uint32_t word = 0;
        for (int b = 0; b < 4; ++b)
          word |= static_cast<std::uint32_t>(bytes[i * 8 + static_cast<std::size_t>(p) * 4 + static_cast<std::size_t>(b)]) << (8 * b);
        parts[p] = std::bit_cast<float>(word);
      }
      amps[i] = {parts[0], parts[1]};
    }
  } else {
    throw ConfigError("wavefunction: unknown format '" + format + "'");
  }
  return WaveState(grid, std::move(amps));
}

}  // namespace fga
