#pragma once

// Tabular and record output for the experiments, plus the reference table of
// susceptibilities and switching thresholds at delta_p = 0.05.

#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "obpc/config.hpp"
#include "obpc/response.hpp"

namespace obpc {

/// 9 significant digits, locale independent.
std::string format_number(double value);

/// Rounds to 9 significant digits (for structured records).
double round9(double value);

struct ReferenceRow {
  double sgc_p;
  double omega_c0;
  double chi1_re;
  double chi1_tol;  // one unit of the last printed digit
  double chi3_re;
  double chi3_tol;
  double u_i;
  double u_i_tol;
};

/// The six (p, omega_c0) reference rows at delta_p = 0.05.
std::span<const ReferenceRow> reference_table();

inline constexpr double kReferenceDetuning = 0.05;

struct Table1Row {
  ReferenceRow reference;
  double chi1_re = 0.0;
  double chi3_re = 0.0;
  std::optional<double> u_i;          // switch-up threshold
  std::optional<double> intensity;    // c eps0 U_i / (2 Re chi3)
  std::string error;                  // sweep failure, empty when fine
  bool chi1_pass = false;
  bool chi3_pass = false;
  bool u_i_pass = false;

  bool pass() const { return chi1_pass && chi3_pass && u_i_pass; }
};

/// Runs every reference row with the stack, probe and solver settings of
/// `base`. Failures are recorded per row.
std::vector<Table1Row> run_table1(const RunConfig& base);

std::string table1_text(std::span<const Table1Row> rows);
nlohmann::ordered_json table1_record(std::span<const Table1Row> rows);

/// '#'-prefixed lines recording the command and every configuration key.
std::string metadata_block(const std::string& command, const RunConfig& config);

std::string spectrum_csv(const RunConfig& config, std::span<const SpectrumPoint> spectrum);
nlohmann::ordered_json spectrum_record(const RunConfig& config,
                                       std::span<const SpectrumPoint> spectrum);

std::string hysteresis_csv(const RunConfig& config, const HysteresisCurve& curve);
nlohmann::ordered_json summary_record(const RunConfig& config,
                                      const HysteresisSummary& summary,
                                      const HysteresisCurve& curve);

std::string chi_scan_csv(const RunConfig& config, std::span<const ChiSample> samples);
nlohmann::ordered_json chi_scan_record(const RunConfig& config,
                                       std::span<const ChiSample> samples);

/// Grids implied by a configuration.
std::vector<double> spectrum_grid(const RunConfig& config);
std::vector<ChiSample> run_chi_scan(const RunConfig& config);
std::vector<SpectrumPoint> run_spectrum(const RunConfig& config);

}  // namespace obpc
