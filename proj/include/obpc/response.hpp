#pragma once

// Parameter sweeps over the doped crystal: linear spectra, susceptibility
// scans and input-output hysteresis traces, plus threshold extraction.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "obpc/nonlinear_defect.hpp"
#include "obpc/susceptibility.hpp"
#include "obpc/tmm.hpp"

namespace obpc {

/// Medium of the doped defect layer of `stack` probed at angular frequency
/// omega. The host permittivity is the real part of stack.defect.epsilon.
DefectMediumd defect_medium(const StackSpecd& stack, const AtomicParams& atomic,
                            double omega);

/// n points uniformly spaced on [lo, hi] (n >= 2), or {lo} for n == 1.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

// --- linear spectra --------------------------------------------------------

/// How the atomic detuning follows the scanned frequency.
enum class DetuningMode {
  kFrozen,            // chi1 fixed at the configured delta_p
  kTiedToFrequency,   // delta_p(omega) = delta_p + (omega_p - omega) / gamma
};

struct SpectrumOptions {
  DetuningMode mode = DetuningMode::kFrozen;
  double probe_omega = constants::kProbeFrequency;  // rad/s, tied mode only
  double gamma = 0.0;                               // rad/s, tied mode only
  TransmissionMeasure measure = TransmissionMeasure::kPower;
  unsigned threads = 1;
};

struct SpectrumPoint {
  double omega;
  double t;
};

/// Transmission of the doped stack with chi3 = 0 over omega_grid.
std::vector<SpectrumPoint> linear_spectrum(const StackSpecd& stack,
                                           const AtomicParams& atomic,
                                           std::span<const double> omega_grid,
                                           const SpectrumOptions& options = {});

struct SpectrumPeak {
  double omega = 0.0;     // parabolic estimate of the peak center
  double t = 0.0;         // transmission at the highest grid sample
  double fwhm = 0.0;      // full width at t/2, linear interpolation
  bool in_gap = false;    // transmission falls below gap_fraction * t on both sides
  int high_peaks = 0;     // local maxima with t above half of the peak value
};

/// Locates the highest transmission peak of a spectrum.
SpectrumPeak find_defect_peak(std::span<const SpectrumPoint> spectrum,
                              double gap_fraction = 0.1);

// --- susceptibility scans --------------------------------------------------

enum class ScanAxis { kSgc, kRabi };

struct ChiSample {
  double delta_p;
  double sgc_p;
  double omega_c0;
  std::complex<double> chi1;  // dimensionless, s1 not applied
  std::complex<double> chi3;
};

/// Row-major table over delta_grid x second_grid. The second axis is p
/// (kSgc, omega_c0 held at `fixed`) or omega_c0 (kRabi, p held at `fixed`).
std::vector<ChiSample> chi_scan(std::span<const double> delta_grid,
                                std::span<const double> second_grid, ScanAxis axis,
                                double fixed);

// --- hysteresis ------------------------------------------------------------

struct HysteresisCurve {
  std::vector<OperatingPoint> points;  // strictly increasing u_f
  AtomicParams atomic;
  StackSpecd stack;
  double probe_omega = constants::kProbeFrequency;
};

struct SweepSettings {
  std::size_t n_points = 2000;
  std::optional<double> u_f_max;  // adaptive when empty
  double initial_u_f_max = 0.0625;
  int max_doublings = 8;
  int max_bisections = 20;
  SolverSettings solver;

  bool operator==(const SweepSettings&) const = default;
};

/// Warm-started sweep of operating points over a uniform u_f grid on
/// [0, u_f_max]. A step that fails to converge is halved up to
/// max_bisections times; the intermediate states only seed the warm start.
HysteresisCurve trace_hysteresis(const StackSpecd& stack, const AtomicParams& atomic,
                                 double probe_omega, double u_f_max, std::size_t n_points,
                                 const SolverSettings& solver = {}, int max_bisections = 20);

/// Every grid point solved independently from a cold start, in parallel.
HysteresisCurve trace_hysteresis_cold(const StackSpecd& stack, const AtomicParams& atomic,
                                      double probe_omega, double u_f_max,
                                      std::size_t n_points, const SolverSettings& solver = {},
                                      unsigned threads = 0);

struct HysteresisSummary {
  std::optional<double> switch_up_ui;    // first fold (local max of U_i)
  std::optional<double> switch_down_ui;  // next fold (local min of U_i)
  std::optional<double> loop_width;      // switch_up - switch_down
  double contrast = 0.0;                 // T range across the bistable interval
  bool bistable = false;
  // Same thresholds converted with I = c eps0 U / (2 Re chi3).
  std::optional<double> switch_up_intensity;
  std::optional<double> switch_down_intensity;
  std::optional<double> loop_width_intensity;
};

HysteresisSummary summarize(const HysteresisCurve& curve);

/// Threshold extraction on raw columns; chi3_re enables the intensity fields.
HysteresisSummary summarize(std::span<const double> u_f, std::span<const double> u_i,
                            std::span<const double> t,
                            std::optional<double> chi3_re = std::nullopt);

/// Sweep with settings.u_f_max, or adaptively: starting from
/// initial_u_f_max, double until both folds are inside the trace.
HysteresisCurve trace_hysteresis(const StackSpecd& stack, const AtomicParams& atomic,
                                 double probe_omega, const SweepSettings& settings);

/// Vertex value of the parabola through three points.
double parabolic_extremum(double x0, double y0, double x1, double y1, double x2,
                          double y2);

}  // namespace obpc
