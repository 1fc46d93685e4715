#include "obpc/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace obpc {

using nlohmann::ordered_json;

namespace {

constexpr std::array<ReferenceRow, 6> kReference{{
    {0.0, 4.0, -0.0031, 1e-4, 0.00039, 1e-5, 0.31, 0.02},
    {0.0, 6.0, -0.0014, 1e-4, 0.000077, 1e-6, 0.31, 0.02},
    {0.0, 8.0, -0.0008, 1e-4, 0.000024, 1e-6, 0.31, 0.02},
    {0.99, 4.0, -0.1439, 1e-4, 0.9756, 1e-4, 0.48, 0.02},
    {0.99, 6.0, -0.0687, 1e-4, 0.1969, 1e-4, 0.38, 0.02},
    {0.99, 8.0, -0.0391, 1e-4, 0.0621, 1e-4, 0.34, 0.02},
}};

// Slack for comparing a value against a printed reference at +/- tol, so
// that rounding of the tolerance itself does not decide the flag.
bool within(double value, double reference, double tol) {
  return std::abs(value - reference) <= tol * (1.0 + 1e-9);
}

ordered_json number_or_null(const std::optional<double>& v) {
  return v ? ordered_json(round9(*v)) : ordered_json();
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

double round9(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_number(value).c_str(), nullptr);
}

std::span<const ReferenceRow> reference_table() { return kReference; }

std::vector<Table1Row> run_table1(const RunConfig& base) {
  const StackSpecd stack = build_stack(base.stack);
  std::vector<Table1Row> rows;
  for (const ReferenceRow& ref : kReference) {
    Table1Row row;
    row.reference = ref;
    AtomicParams atomic = base.atomic;
    atomic.delta_p = kReferenceDetuning;
    atomic.sgc_p = ref.sgc_p;
    atomic.omega_c0 = ref.omega_c0;
    try {
      const Susceptibilities chi = susceptibilities(atomic);
      row.chi1_re = chi.chi1.real();
      row.chi3_re = chi.chi3.real();
      row.chi1_pass = within(row.chi1_re, ref.chi1_re, ref.chi1_tol);
      row.chi3_pass = within(row.chi3_re, ref.chi3_re, ref.chi3_tol);
      const HysteresisCurve curve = trace_hysteresis(stack, atomic, base.probe_omega, base.sweep);
      const HysteresisSummary summary = summarize(curve);
      row.u_i = summary.switch_up_ui;
      if (row.u_i) {
        row.intensity = physical_intensity(*row.u_i, row.chi3_re);
        row.u_i_pass = within(*row.u_i, ref.u_i, ref.u_i_tol);
      } else {
        row.error = "no switch-up fold within the sweep";
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {
constexpr const char* kRowFormat =
    "%-5s %-4s | %-16s %-8s %-4s | %-16s %-8s %-4s | %-12s %-5s %-4s | %s\n";
}  // namespace

std::string table1_text(std::span<const Table1Row> rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "# threshold table, delta_p = %s\n",
                format_number(kReferenceDetuning).c_str());
  out << line;
  std::snprintf(line, sizeof line, kRowFormat,
                "p", "Wc0", "Re chi1", "ref", "ok", "Re chi3", "ref", "ok", "U_i", "ref",
                "ok", "I_i");
  out << line;
  auto flag = [](bool ok) { return ok ? "pass" : "FAIL"; };
  for (const Table1Row& r : rows) {
    const std::string ui = r.u_i ? format_number(*r.u_i) : std::string("-");
    const std::string ii = r.intensity ? format_number(*r.intensity) : std::string("-");
    std::snprintf(line, sizeof line,
                  kRowFormat,
                  format_number(r.reference.sgc_p).c_str(),
                  format_number(r.reference.omega_c0).c_str(),
                  format_number(r.chi1_re).c_str(), format_number(r.reference.chi1_re).c_str(),
                  flag(r.chi1_pass), format_number(r.chi3_re).c_str(),
                  format_number(r.reference.chi3_re).c_str(), flag(r.chi3_pass), ui.c_str(),
                  format_number(r.reference.u_i).c_str(), flag(r.u_i_pass), ii.c_str());
    out << line;
    if (!r.error.empty()) out << "#   error: " << r.error << "\n";
  }
  return out.str();
}

ordered_json table1_record(std::span<const Table1Row> rows) {
  ordered_json doc;
  doc["delta_p"] = kReferenceDetuning;
  doc["rows"] = ordered_json::array();
  for (const Table1Row& r : rows) {
    ordered_json row;
    row["sgc_p"] = r.reference.sgc_p;
    row["omega_c0"] = r.reference.omega_c0;
    row["chi1_re"] = {{"value", round9(r.chi1_re)},
                      {"reference", r.reference.chi1_re},
                      {"pass", r.chi1_pass}};
    row["chi3_re"] = {{"value", round9(r.chi3_re)},
                      {"reference", r.reference.chi3_re},
                      {"pass", r.chi3_pass}};
    row["u_i"] = {{"value", number_or_null(r.u_i)},
                  {"reference", r.reference.u_i},
                  {"pass", r.u_i_pass}};
    row["intensity"] = number_or_null(r.intensity);
    if (!r.error.empty()) row["error"] = r.error;
    doc["rows"].push_back(row);
  }
  return doc;
}

std::string metadata_block(const std::string& command, const RunConfig& config) {
  std::ostringstream out;
  out << "# obpc " << command << "\n";
  for (const auto& [key, value] : flatten(to_json(config)))
    out << "# " << key << " = " << value << "\n";
  return out.str();
}

std::vector<double> spectrum_grid(const RunConfig& config) {
  const double w_pc = midgap_frequency(config.stack.lambda_pc);
  return uniform_grid(config.spectrum.lo_fraction * w_pc, config.spectrum.hi_fraction * w_pc,
                      config.spectrum.n_points);
}

std::vector<SpectrumPoint> run_spectrum(const RunConfig& config) {
  SpectrumOptions options;
  options.mode = config.spectrum.detuning;
  options.gamma = config.spectrum.gamma;
  options.probe_omega = config.probe_omega;
  options.measure = config.solver.measure;
  const std::vector<double> grid = spectrum_grid(config);
  return linear_spectrum(build_stack(config.stack), config.atomic, grid, options);
}

std::string spectrum_csv(const RunConfig& config, std::span<const SpectrumPoint> spectrum) {
  std::ostringstream out;
  out << metadata_block("spectrum", config);
  out << "omega,omega_over_midgap,T\n";
  const double w_pc = midgap_frequency(config.stack.lambda_pc);
  for (const auto& p : spectrum)
    out << format_number(p.omega) << ',' << format_number(p.omega / w_pc) << ','
        << format_number(p.t) << '\n';
  return out.str();
}

ordered_json spectrum_record(const RunConfig& config, std::span<const SpectrumPoint> spectrum) {
  ordered_json doc;
  doc["command"] = "spectrum";
  doc["config"] = to_json(config);
  const SpectrumPeak peak = find_defect_peak(spectrum);
  doc["peak"] = {{"omega", round9(peak.omega)},
                 {"t", round9(peak.t)},
                 {"fwhm", round9(peak.fwhm)},
                 {"in_gap", peak.in_gap}};
  ordered_json rows = ordered_json::array();
  for (const auto& p : spectrum) rows.push_back({round9(p.omega), round9(p.t)});
  doc["columns"] = {"omega", "T"};
  doc["rows"] = rows;
  return doc;
}

std::string hysteresis_csv(const RunConfig& config, const HysteresisCurve& curve) {
  std::ostringstream out;
  out << metadata_block("hysteresis", config);
  out << "u_f,u_plus,u_minus,T,u_i,iterations\n";
  for (const auto& p : curve.points)
    out << format_number(p.u_f) << ',' << format_number(p.fields.u_plus) << ','
        << format_number(p.fields.u_minus) << ',' << format_number(p.t) << ','
        << format_number(p.u_i) << ',' << p.iterations << '\n';
  return out.str();
}

ordered_json summary_record(const RunConfig& config, const HysteresisSummary& s,
                            const HysteresisCurve& curve) {
  ordered_json doc;
  doc["command"] = "hysteresis";
  doc["config"] = to_json(config);
  const Susceptibilities chi = susceptibilities(curve.atomic);
  doc["susceptibility"] = {{"chi1_re", round9(chi.chi1.real())},
                           {"chi1_im", round9(chi.chi1.imag())},
                           {"chi3_re", round9(chi.chi3.real())},
                           {"chi3_im", round9(chi.chi3.imag())}};
  doc["sweep"] = {{"points", curve.points.size()},
                  {"u_f_max", curve.points.empty() ? 0.0 : round9(curve.points.back().u_f)}};
  doc["summary"] = {{"bistable", s.bistable},
                    {"switch_up_ui", number_or_null(s.switch_up_ui)},
                    {"switch_down_ui", number_or_null(s.switch_down_ui)},
                    {"loop_width", number_or_null(s.loop_width)},
                    {"contrast", round9(s.contrast)},
                    {"switch_up_intensity", number_or_null(s.switch_up_intensity)},
                    {"switch_down_intensity", number_or_null(s.switch_down_intensity)},
                    {"loop_width_intensity", number_or_null(s.loop_width_intensity)}};
  return doc;
}

std::vector<ChiSample> run_chi_scan(const RunConfig& config) {
  const auto& c = config.chi_scan;
  const std::vector<double> deltas = uniform_grid(c.delta_min, c.delta_max, c.delta_points);
  const std::vector<double> axis = uniform_grid(c.axis_min, c.axis_max, c.axis_points);
  return chi_scan(deltas, axis, c.axis, c.fixed);
}

std::string chi_scan_csv(const RunConfig& config, std::span<const ChiSample> samples) {
  std::ostringstream out;
  out << metadata_block("chi-scan", config);
  out << "delta_p,sgc_p,omega_c0,chi1_re,chi1_im,chi3_re,chi3_im\n";
  for (const auto& s : samples)
    out << format_number(s.delta_p) << ',' << format_number(s.sgc_p) << ','
        << format_number(s.omega_c0) << ',' << format_number(s.chi1.real()) << ','
        << format_number(s.chi1.imag()) << ',' << format_number(s.chi3.real()) << ','
        << format_number(s.chi3.imag()) << '\n';
  return out.str();
}

ordered_json chi_scan_record(const RunConfig& config, std::span<const ChiSample> samples) {
  ordered_json doc;
  doc["command"] = "chi-scan";
  doc["config"] = to_json(config);
  doc["columns"] = {"delta_p", "sgc_p", "omega_c0", "chi1_re", "chi1_im", "chi3_re", "chi3_im"};
  ordered_json rows = ordered_json::array();
  for (const auto& s : samples)
    rows.push_back({round9(s.delta_p), round9(s.sgc_p), round9(s.omega_c0),
                    round9(s.chi1.real()), round9(s.chi1.imag()), round9(s.chi3.real()),
                    round9(s.chi3.imag())});
  doc["rows"] = rows;
  return doc;
}

}  // namespace obpc
