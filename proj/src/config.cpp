#include "obpc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace obpc {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const char* to_string(TransmissionMeasure m) {
  return m == TransmissionMeasure::kPower ? "power" : "modulus";
}
const char* to_string(DetuningMode m) {
  return m == DetuningMode::kFrozen ? "frozen" : "tied";
}
const char* to_string(ScanAxis a) { return a == ScanAxis::kSgc ? "sgc" : "rabi"; }

// Reads section[key] into `out` when present. Type mismatches surface as
// DomainError naming the dotted key.
template <typename T>
void read(const json& section, const std::string& prefix, const char* key, T& out) {
  const auto it = section.find(key);
  if (it == section.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw DomainError(prefix + "." + key + ": wrong value type");
  }
}

template <typename Enum>
Enum parse_enum(const json& section, const std::string& prefix, const char* key,
                Enum fallback, std::initializer_list<std::pair<const char*, Enum>> names) {
  const auto it = section.find(key);
  if (it == section.end()) return fallback;
  if (!it->is_string()) throw DomainError(prefix + "." + key + ": expected a string");
  const std::string value = it->get<std::string>();
  for (const auto& [name, e] : names)
    if (value == name) return e;
  throw DomainError(prefix + "." + key + ": unknown value '" + value + "'");
}

void reject_unknown(const json& section, const std::string& prefix,
                    std::initializer_list<const char*> known) {
  if (!section.is_object()) throw DomainError(prefix + ": expected an object");
  for (const auto& [key, value] : section.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw DomainError("unknown configuration key '" + prefix + "." + key + "'");
  }
}

void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

void flatten_into(const ordered_json& node, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items())
      flatten_into(value, prefix.empty() ? key : prefix + "." + key, out);
  } else {
    out.emplace_back(prefix, node.dump());
  }
}

}  // namespace

void validate(const RunConfig& c) {
  require(c.stack.lambda_pc > 0, "stack.lambda_pc must be positive");
  require(c.stack.n_a > 0, "stack.n_a must be positive");
  require(c.stack.n_b > 0, "stack.n_b must be positive");
  require(c.stack.n_d > 0, "stack.n_d must be positive");
  require(c.stack.n0 > 0, "stack.n0 must be positive");
  validate(c.atomic);
  require(c.probe_omega > 0 && std::isfinite(c.probe_omega),
          "probe.omega_p must be positive");
  require(c.solver.tolerance > 0, "solver.tolerance must be positive");
  require(c.solver.relaxation > 0 && c.solver.relaxation <= 1,
          "solver.relaxation must lie in (0, 1]");
  require(c.solver.max_iter > 0, "solver.max_iter must be positive");
  require(c.sweep.n_points >= 2, "sweep.n_points must be at least 2");
  require(!c.sweep.u_f_max || (*c.sweep.u_f_max > 0 && std::isfinite(*c.sweep.u_f_max)),
          "sweep.u_f_max must be positive (or null for adaptive)");
  require(c.sweep.initial_u_f_max > 0, "sweep.initial_u_f_max must be positive");
  require(c.sweep.max_doublings >= 0, "sweep.max_doublings must be >= 0");
  require(c.sweep.max_bisections >= 0, "sweep.max_bisections must be >= 0");
  require(c.spectrum.n_points >= 1, "spectrum.n_points must be at least 1");
  require(c.spectrum.lo_fraction > 0 && c.spectrum.hi_fraction >= c.spectrum.lo_fraction,
          "spectrum.lo_fraction must be positive and <= spectrum.hi_fraction");
  require(c.spectrum.detuning == DetuningMode::kFrozen || c.spectrum.gamma > 0,
          "spectrum.gamma must be positive for tied detuning");
  require(c.chi_scan.delta_points >= 1 && c.chi_scan.axis_points >= 1,
          "chi_scan grids must be non-empty");
  require(c.chi_scan.delta_max >= c.chi_scan.delta_min, "chi_scan.delta_max < delta_min");
  require(c.chi_scan.axis_max >= c.chi_scan.axis_min, "chi_scan.axis_max < axis_min");
  if (c.chi_scan.axis == ScanAxis::kSgc) {
    require(c.chi_scan.axis_min >= 0 && c.chi_scan.axis_max <= 1,
            "chi_scan: p axis must lie in [0, 1]");
    require(c.chi_scan.fixed >= 0, "chi_scan.fixed (omega_c0) must be >= 0");
  } else {
    require(c.chi_scan.axis_min >= 0, "chi_scan: omega_c0 axis must be >= 0");
    require(c.chi_scan.fixed >= 0 && c.chi_scan.fixed <= 1,
            "chi_scan.fixed (p) must lie in [0, 1]");
  }
  require(c.output.format == "csv" || c.output.format == "record",
          "output.format must be 'csv' or 'record'");
}

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["stack"] = {{"lambda_pc", c.stack.lambda_pc}, {"n_a", c.stack.n_a},
                {"n_b", c.stack.n_b},             {"n_d", c.stack.n_d},
                {"n0", c.stack.n0}};
  j["atomic"] = {{"delta_p", c.atomic.delta_p},
                 {"omega_c0", c.atomic.omega_c0},
                 {"sgc_p", c.atomic.sgc_p},
                 {"s1", c.atomic.s1}};
  j["probe"] = {{"omega_p", c.probe_omega}};
  j["solver"] = {{"tolerance", c.solver.tolerance},
                 {"relaxation", c.solver.relaxation},
                 {"max_iter", c.solver.max_iter},
                 {"transmission", to_string(c.solver.measure)}};
  j["sweep"] = {{"n_points", c.sweep.n_points},
                {"u_f_max", c.sweep.u_f_max ? ordered_json(*c.sweep.u_f_max) : ordered_json()},
                {"initial_u_f_max", c.sweep.initial_u_f_max},
                {"max_doublings", c.sweep.max_doublings},
                {"max_bisections", c.sweep.max_bisections}};
  j["spectrum"] = {{"n_points", c.spectrum.n_points},
                   {"lo_fraction", c.spectrum.lo_fraction},
                   {"hi_fraction", c.spectrum.hi_fraction},
                   {"detuning", to_string(c.spectrum.detuning)},
                   {"gamma", c.spectrum.gamma}};
  j["chi_scan"] = {{"axis", to_string(c.chi_scan.axis)},
                   {"delta_min", c.chi_scan.delta_min},
                   {"delta_max", c.chi_scan.delta_max},
                   {"delta_points", c.chi_scan.delta_points},
                   {"axis_min", c.chi_scan.axis_min},
                   {"axis_max", c.chi_scan.axis_max},
                   {"axis_points", c.chi_scan.axis_points},
                   {"fixed", c.chi_scan.fixed}};
  j["output"] = {{"path", c.output.path}, {"format", c.output.format}};
  return j;
}

RunConfig config_from_json(const json& doc) {
  RunConfig c;
  reject_unknown(doc, "config",
                 {"stack", "atomic", "probe", "solver", "sweep", "spectrum", "chi_scan",
                  "output"});
  auto section = [&](const char* name) -> const json& {
    static const json empty = json::object();
    const auto it = doc.find(name);
    return it == doc.end() ? empty : *it;
  };

  const json& stack = section("stack");
  reject_unknown(stack, "stack", {"lambda_pc", "n_a", "n_b", "n_d", "n0"});
  read(stack, "stack", "lambda_pc", c.stack.lambda_pc);
  read(stack, "stack", "n_a", c.stack.n_a);
  read(stack, "stack", "n_b", c.stack.n_b);
  read(stack, "stack", "n_d", c.stack.n_d);
  read(stack, "stack", "n0", c.stack.n0);

  const json& atomic = section("atomic");
  reject_unknown(atomic, "atomic", {"delta_p", "omega_c0", "sgc_p", "s1"});
  read(atomic, "atomic", "delta_p", c.atomic.delta_p);
  read(atomic, "atomic", "omega_c0", c.atomic.omega_c0);
  read(atomic, "atomic", "sgc_p", c.atomic.sgc_p);
  read(atomic, "atomic", "s1", c.atomic.s1);

  const json& probe = section("probe");
  reject_unknown(probe, "probe", {"omega_p"});
  read(probe, "probe", "omega_p", c.probe_omega);

  const json& solver = section("solver");
  reject_unknown(solver, "solver", {"tolerance", "relaxation", "max_iter", "transmission"});
  read(solver, "solver", "tolerance", c.solver.tolerance);
  read(solver, "solver", "relaxation", c.solver.relaxation);
  read(solver, "solver", "max_iter", c.solver.max_iter);
  c.solver.measure = parse_enum(solver, "solver", "transmission", c.solver.measure,
                                {{"power", TransmissionMeasure::kPower},
                                 {"modulus", TransmissionMeasure::kModulus}});

  const json& sweep = section("sweep");
  reject_unknown(sweep, "sweep",
                 {"n_points", "u_f_max", "initial_u_f_max", "max_doublings", "max_bisections"});
  read(sweep, "sweep", "n_points", c.sweep.n_points);
  if (const auto it = sweep.find("u_f_max"); it != sweep.end()) {
    if (it->is_null() || (it->is_string() && it->get<std::string>() == "auto")) {
      c.sweep.u_f_max.reset();
    } else if (it->is_number()) {
      c.sweep.u_f_max = it->get<double>();
    } else {
      throw DomainError("sweep.u_f_max: expected a number, null or \"auto\"");
    }
  }
  read(sweep, "sweep", "initial_u_f_max", c.sweep.initial_u_f_max);
  read(sweep, "sweep", "max_doublings", c.sweep.max_doublings);
  read(sweep, "sweep", "max_bisections", c.sweep.max_bisections);
  c.sweep.solver = c.solver;

  const json& spectrum = section("spectrum");
  reject_unknown(spectrum, "spectrum",
                 {"n_points", "lo_fraction", "hi_fraction", "detuning", "gamma"});
  read(spectrum, "spectrum", "n_points", c.spectrum.n_points);
  read(spectrum, "spectrum", "lo_fraction", c.spectrum.lo_fraction);
  read(spectrum, "spectrum", "hi_fraction", c.spectrum.hi_fraction);
  c.spectrum.detuning = parse_enum(spectrum, "spectrum", "detuning", c.spectrum.detuning,
                                   {{"frozen", DetuningMode::kFrozen},
                                    {"tied", DetuningMode::kTiedToFrequency}});
  read(spectrum, "spectrum", "gamma", c.spectrum.gamma);

  const json& scan = section("chi_scan");
  reject_unknown(scan, "chi_scan",
                 {"axis", "delta_min", "delta_max", "delta_points", "axis_min", "axis_max",
                  "axis_points", "fixed"});
  c.chi_scan.axis = parse_enum(scan, "chi_scan", "axis", c.chi_scan.axis,
                               {{"sgc", ScanAxis::kSgc}, {"rabi", ScanAxis::kRabi}});
  read(scan, "chi_scan", "delta_min", c.chi_scan.delta_min);
  read(scan, "chi_scan", "delta_max", c.chi_scan.delta_max);
  read(scan, "chi_scan", "delta_points", c.chi_scan.delta_points);
  read(scan, "chi_scan", "axis_min", c.chi_scan.axis_min);
  read(scan, "chi_scan", "axis_max", c.chi_scan.axis_max);
  read(scan, "chi_scan", "axis_points", c.chi_scan.axis_points);
  read(scan, "chi_scan", "fixed", c.chi_scan.fixed);

  const json& output = section("output");
  reject_unknown(output, "output", {"path", "format"});
  read(output, "output", "path", c.output.path);
  read(output, "output", "format", c.output.format);

  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw DomainError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

std::vector<std::pair<std::string, std::string>> flatten(const ordered_json& doc) {
  std::vector<std::pair<std::string, std::string>> out;
  flatten_into(doc, "", out);
  return out;
}

json apply_overrides(json doc,
                     const std::vector<std::pair<std::string, std::string>>& overrides) {
  for (const auto& [key, text] : overrides) {
    json value;
    try {
      value = json::parse(text);
    } catch (const json::parse_error&) {
      value = text;
    }
    json::json_pointer ptr("/" + [&] {
      std::string p = key;
      for (auto& ch : p)
        if (ch == '.') ch = '/';
      return p;
    }());
    doc[ptr] = value;
  }
  return doc;
}

StackSpecd build_stack(const StackConfig& c) {
  return standard_stack(c.lambda_pc, c.n_a, c.n_b, c.n_d, c.n0);
}

}  // namespace obpc
