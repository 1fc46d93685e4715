#pragma once

// Run configuration: one JSON document with nested sections, overridable
// key-by-key with dotted paths ("atomic.delta_p" -> --atomic.delta_p).

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "obpc/constants.hpp"
#include "obpc/nonlinear_defect.hpp"
#include "obpc/response.hpp"
#include "obpc/susceptibility.hpp"
#include "obpc/tmm.hpp"

namespace obpc {

struct StackConfig {
  double lambda_pc = constants::kMidgapWavelength;
  double n_a = constants::kIndexA;
  double n_b = constants::kIndexB;
  double n_d = constants::kIndexDefect;
  double n0 = constants::kAmbientIndex;
  bool operator==(const StackConfig&) const = default;
};

struct SpectrumConfig {
  std::size_t n_points = 2000;
  double lo_fraction = 0.8;  // of the midgap frequency
  double hi_fraction = 1.2;
  DetuningMode detuning = DetuningMode::kFrozen;
  double gamma = 0.0;        // rad/s, tied detuning only
  bool operator==(const SpectrumConfig&) const = default;
};

struct ChiScanConfig {
  ScanAxis axis = ScanAxis::kSgc;
  double delta_min = -0.2;
  double delta_max = 0.2;
  std::size_t delta_points = 101;
  double axis_min = 0.0;
  double axis_max = 0.999;
  std::size_t axis_points = 101;
  double fixed = 4.0;  // omega_c0 for the p axis, p for the omega_c0 axis
  bool operator==(const ChiScanConfig&) const = default;
};

struct OutputConfig {
  std::string path;           // empty: stdout
  std::string format = "csv";  // csv | record
  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  StackConfig stack;
  AtomicParams atomic;
  double probe_omega = constants::kProbeFrequency;
  SolverSettings solver;
  SweepSettings sweep;
  SpectrumConfig spectrum;
  ChiScanConfig chi_scan;
  OutputConfig output;

  bool operator==(const RunConfig&) const = default;
};

/// Throws DomainError naming the offending key.
void validate(const RunConfig& config);

nlohmann::ordered_json to_json(const RunConfig& config);

/// Missing keys take their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& doc);

RunConfig load_config(const std::string& path);

/// Dotted key -> JSON-encoded value, in document order.
std::vector<std::pair<std::string, std::string>> flatten(const nlohmann::ordered_json& doc);

/// Applies `key = value` overrides. Values are parsed as JSON where possible
/// and otherwise taken as strings.
nlohmann::json apply_overrides(nlohmann::json doc,
                               const std::vector<std::pair<std::string, std::string>>& overrides);

StackSpecd build_stack(const StackConfig& config);

}  // namespace obpc
