// obpc: transmission, bistability and susceptibility tables for a doped
// one-dimensional photonic crystal.
//
//   obpc spectrum   [--config file] [--out file] [--format csv|record] [--key value...]
//   obpc hysteresis ...
//   obpc table1     ...
//   obpc chi-scan   ...
//
// Every configuration key is also a flag: --atomic.delta_p 0.1, --sweep.u_f_max 2.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>

#include "obpc/config.hpp"
#include "obpc/report.hpp"

namespace {

enum ExitCode { kOk = 0, kComputationFailed = 1, kInvalidInput = 2, kIoError = 3 };

// Writes via a temporary file in the target directory and renames it into
// place, so a failed run never leaves a partial output behind.
void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move output into '" + path + "': " + ec.message());
  }
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    write_atomically(path, content);
  }
}

std::string dump(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  using namespace obpc;

  CLI::App app{"Optical bistability of a doped 1D photonic crystal"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand and key");

  std::string config_path;
  std::string out_path;
  std::string format;
  bool strict = false;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "output file (stdout when omitted)");
  app.add_option("--format", format, "csv or record")->check(CLI::IsMember({"csv", "record"}));
  app.add_flag("--seed-free", "accepted for compatibility; every computation is deterministic");

  // One flag per configuration key, in document order.
  std::map<std::string, std::string> overrides;
  auto* keys = app.add_option_group("Configuration keys");
  const auto defaults = flatten(to_json(RunConfig{}));
  for (const auto& [key, value] : defaults) {
    keys->add_option("--" + key, overrides[key], "default " + value);
  }

  auto* spectrum = app.add_subcommand("spectrum", "linear transmission spectrum (chi3 = 0)");
  auto* hysteresis = app.add_subcommand("hysteresis", "input-output sweep and fold thresholds");
  auto* table1 = app.add_subcommand("table1", "reference thresholds at delta_p = 0.05");
  table1->add_flag("--strict", strict, "exit non-zero unless every row matches its reference");
  auto* chi = app.add_subcommand("chi-scan", "susceptibility grid");
  for (auto* sub : {spectrum, hysteresis, table1, chi}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalidInput;
  }

  RunConfig config;
  try {
    nlohmann::json doc = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    }
    std::vector<std::pair<std::string, std::string>> given;
    for (const auto& [key, _] : defaults) {
      if (keys->get_option("--" + key)->count() > 0) given.emplace_back(key, overrides[key]);
    }
    if (!out_path.empty()) given.emplace_back("output.path", nlohmann::json(out_path).dump());
    if (!format.empty()) given.emplace_back("output.format", nlohmann::json(format).dump());
    config = config_from_json(apply_overrides(doc, given));
  } catch (const std::exception& e) {
    std::cerr << "obpc: invalid configuration: " << e.what() << "\n";
    return kInvalidInput;
  }

  const std::string& path = config.output.path;
  const bool record = config.output.format == "record";
  try {
    if (spectrum->parsed()) {
      const auto data = run_spectrum(config);
      emit(path, record ? dump(spectrum_record(config, data)) : spectrum_csv(config, data));
      return kOk;
    }
    if (chi->parsed()) {
      const auto data = run_chi_scan(config);
      emit(path, record ? dump(chi_scan_record(config, data)) : chi_scan_csv(config, data));
      return kOk;
    }
    if (hysteresis->parsed()) {
      const StackSpecd stack = build_stack(config.stack);
      HysteresisCurve curve;
      try {
        curve = trace_hysteresis(stack, config.atomic, config.probe_omega, config.sweep);
      } catch (const ConvergenceError& e) {
        std::cerr << "obpc: solver did not converge at u_f = " << format_number(e.u_f())
                  << " (residual " << format_number(e.residual()) << ")\n";
        return kComputationFailed;
      }
      const HysteresisSummary summary = summarize(curve);
      auto sidecar = summary_record(config, summary, curve);
      if (record) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& p : curve.points)
          rows.push_back({round9(p.u_f), round9(p.fields.u_plus), round9(p.fields.u_minus),
                          round9(p.t), round9(p.u_i), p.iterations});
        sidecar["columns"] = {"u_f", "u_plus", "u_minus", "T", "u_i", "iterations"};
        sidecar["rows"] = rows;
        emit(path, dump(sidecar));
      } else if (path.empty() || path == "-") {
        std::cout << hysteresis_csv(config, curve);
        std::istringstream lines(sidecar["summary"].dump(2));
        for (std::string line; std::getline(lines, line);) std::cout << "# " << line << "\n";
      } else {
        write_atomically(path + ".summary.json", dump(sidecar));
        write_atomically(path, hysteresis_csv(config, curve));
      }
      return kOk;
    }
    if (table1->parsed()) {
      const auto rows = run_table1(config);
      emit(path, record ? dump(table1_record(rows)) : table1_text(rows));
      bool converged = true, all_pass = true;
      for (const auto& r : rows) {
        converged = converged && r.error.empty();
        all_pass = all_pass && r.pass();
      }
      if (!converged) return kComputationFailed;
      return strict && !all_pass ? kComputationFailed : kOk;
    }
  } catch (const DomainError& e) {
    std::cerr << "obpc: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "obpc: " << e.what() << "\n";
    return kIoError;
  }
  return kInvalidInput;
}
