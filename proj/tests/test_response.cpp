#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "obpc/response.hpp"

using namespace obpc;
using doctest::Approx;

namespace {

const double kLambda = constants::kMidgapWavelength;
const double kOmegaPc = midgap_frequency(kLambda);
const double kProbe = constants::kProbeFrequency;

StackSpecd standard_crystal() { return standard_stack(kLambda, 2.22, 1.41, 1.41, 1.0); }

std::vector<SpectrumPoint> spectrum_of(const AtomicParams& a, std::size_t n = 2000,
                                       SpectrumOptions opt = {}) {
  const auto grid = uniform_grid(0.8 * kOmegaPc, 1.2 * kOmegaPc, n);
  return linear_spectrum(standard_crystal(), a, grid, opt);
}

}  // namespace

TEST_CASE("uniform_grid") {
  const auto g = uniform_grid(-0.2, 0.2, 101);
  REQUIRE(g.size() == 101);
  CHECK(g.front() == -0.2);
  CHECK(g.back() == 0.2);
  CHECK(g[50] == 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == -g[100 - i]);
  CHECK(uniform_grid(3.0, 5.0, 1) == std::vector<double>{3.0});
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 0), DomainError);
}

TEST_CASE("undoped spectrum is mirror-symmetric about midgap") {
  AtomicParams undoped;
  undoped.s1 = 0.0;
  const auto s = spectrum_of(undoped, 2001);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(std::abs(s[i].t - s[s.size() - 1 - i].t) < 1e-9);
  CHECK(s[1000].t == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("defect mode moves up in frequency as the coupling field weakens") {
  double previous = 0.0;
  for (double w0 : {8.0, 6.0, 4.0}) {
    const auto peak = find_defect_peak(spectrum_of(AtomicParams{0.05, w0, 0.99, 1.0}));
    CHECK(peak.in_gap);
    CHECK(peak.high_peaks == 1);
    CHECK(peak.omega > previous);
    CHECK(peak.omega > kOmegaPc);
    previous = peak.omega;
    MESSAGE("omega_c0 = " << w0 << ": center " << peak.omega / kOmegaPc << ", fwhm "
                          << peak.fwhm / kOmegaPc << ", T " << peak.t);
  }
}

TEST_CASE("spectra do not depend on the thread count") {
  const AtomicParams a{0.05, 4.0, 0.99, 1.0};
  SpectrumOptions one, many;
  many.threads = 7;
  const auto s1 = spectrum_of(a, 2000, one);
  const auto s7 = spectrum_of(a, 2000, many);
  REQUIRE(s1.size() == s7.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].omega == s7[i].omega);
    CHECK(s1[i].t == s7[i].t);
  }
}

TEST_CASE("tied detuning") {
  SpectrumOptions opt;
  opt.mode = DetuningMode::kTiedToFrequency;
  CHECK_THROWS_AS(spectrum_of(AtomicParams{}, 10, opt), DomainError);

  // At the probe frequency the tied and frozen chi1 coincide.
  opt.gamma = 1e13;
  opt.probe_omega = kOmegaPc;
  const std::vector<double> at{kOmegaPc};
  const AtomicParams a{0.05, 4.0, 0.99, 1.0};
  const auto tied = linear_spectrum(standard_crystal(), a, at, opt);
  const auto frozen = linear_spectrum(standard_crystal(), a, at);
  CHECK(tied[0].t == frozen[0].t);
}

TEST_CASE("chi_scan layout") {
  const auto deltas = uniform_grid(-0.2, 0.2, 101);
  const auto ps = uniform_grid(0.0, 0.999, 101);
  const auto table = chi_scan(deltas, ps, ScanAxis::kSgc, 4.0);
  REQUIRE(table.size() == 101 * 101);
  const auto& row = table[37 * 101 + 88];
  CHECK(row.delta_p == deltas[37]);
  CHECK(row.sgc_p == ps[88]);
  CHECK(row.omega_c0 == 4.0);
  const double wc = effective_rabi(4.0, ps[88]);
  CHECK(row.chi1 == chi1_dimensionless(deltas[37], wc));
  CHECK(row.chi3 == chi3_dimensionless(deltas[37], wc, ps[88]));
  // Zero detuning column is exactly zero.
  for (std::size_t j = 0; j < ps.size(); ++j) {
    CHECK(table[50 * 101 + j].chi1 == std::complex<double>(0.0));
    CHECK(table[50 * 101 + j].chi3 == std::complex<double>(0.0));
  }

  const auto rabi = chi_scan(deltas, uniform_grid(1.0, 10.0, 10), ScanAxis::kRabi, 0.5);
  CHECK(rabi[13].sgc_p == 0.5);
  CHECK(rabi[13].omega_c0 == 4.0);
  CHECK_THROWS_AS(chi_scan({}, ps, ScanAxis::kSgc, 4.0), DomainError);
}

TEST_CASE("hysteresis trace contract") {
  const auto curve = trace_hysteresis(standard_crystal(), AtomicParams{}, kProbe, 0.5, 500);
  REQUIRE(curve.points.size() == 500);
  CHECK(curve.points.front().u_f == 0.0);
  CHECK(curve.points.back().u_f == 0.5);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    CHECK(p.u_f > curve.points[i - 1].u_f);
    CHECK(p.converged);
    CHECK(p.u_i * p.t == Approx(p.u_f).epsilon(1e-12));
  }
  CHECK_THROWS_AS(trace_hysteresis(standard_crystal(), AtomicParams{}, kProbe, 0.0, 10),
                  DomainError);
  CHECK_THROWS_AS(trace_hysteresis(standard_crystal(), AtomicParams{}, kProbe, 1.0, 1),
                  DomainError);
}

TEST_CASE("thresholds without SGC sit near 0.31") {
  const auto curve = trace_hysteresis(standard_crystal(), AtomicParams{0.05, 4.0, 0.0, 1.0},
                                      kProbe, SweepSettings{});
  const auto s = summarize(curve);
  REQUIRE(s.bistable);
  CHECK(std::abs(*s.switch_up_ui - 0.31) <= 0.02);
  CHECK(*s.switch_down_ui < *s.switch_up_ui);
  CHECK(s.contrast > 0.0);
  CHECK(s.contrast <= 1.0);
  REQUIRE(s.switch_up_intensity);
  CHECK(*s.switch_up_intensity ==
        Approx(physical_intensity(*s.switch_up_ui, 0.0003900)).epsilon(0.01));
}

TEST_CASE("summarize: monotone curve has no thresholds") {
  std::vector<double> u_f, u_i, t;
  for (int k = 0; k <= 100; ++k) {
    u_f.push_back(0.01 * k);
    u_i.push_back(0.02 * k);
    t.push_back(0.5);
  }
  const auto s = summarize(u_f, u_i, t, 0.3);
  CHECK_FALSE(s.bistable);
  CHECK_FALSE(s.switch_up_ui);
  CHECK_FALSE(s.switch_down_ui);
  CHECK_FALSE(s.switch_up_intensity);
  CHECK(s.contrast == 0.0);
  CHECK_THROWS_AS(summarize(u_f, u_i, std::vector<double>(3), std::nullopt), DomainError);
}

TEST_CASE("summarize: cubic S-curve") {
  // u_i = u^3 - 1.5 u^2 + 0.6 u has a local max and min at u = (3 -/+ sqrt(1.8)) / 6.
  auto f = [](double u) { return u * u * u - 1.5 * u * u + 0.6 * u; };
  std::vector<double> u_f, u_i, t;
  for (int k = 0; k <= 1000; ++k) {
    const double u = 0.001 * k;
    u_f.push_back(u);
    u_i.push_back(f(u));
    t.push_back(k == 0 ? 1.0 : u / f(u));
  }
  const double up = f((3.0 - std::sqrt(1.8)) / 6.0);
  const double down = f((3.0 + std::sqrt(1.8)) / 6.0);
  const auto s = summarize(u_f, u_i, t, 0.5);
  REQUIRE(s.bistable);
  CHECK(*s.switch_up_ui == Approx(up).epsilon(1e-7));
  CHECK(*s.switch_down_ui == Approx(down).epsilon(1e-7));
  CHECK(*s.loop_width == Approx(up - down).epsilon(1e-6));
  CHECK(*s.switch_up_intensity == Approx(physical_intensity(*s.switch_up_ui, 0.5)));
  CHECK(*s.loop_width_intensity ==
        Approx(*s.switch_up_intensity - *s.switch_down_intensity));
  CHECK(s.contrast > 0.0);
  CHECK(s.contrast <= 1.0);
}

TEST_CASE("parabolic_extremum") {
  CHECK(parabolic_extremum(-1, 0, 0, 1, 1, 0) == Approx(1.0));
  CHECK(parabolic_extremum(0, 1, 1, 2, 2, 1) == Approx(2.0));
  // Off-center vertex of y = 3 - (x - 0.3)^2.
  auto g = [](double x) { return 3 - (x - 0.3) * (x - 0.3); };
  CHECK(parabolic_extremum(0, g(0), 0.25, g(0.25), 0.5, g(0.5)) == Approx(3.0));
  // Collinear samples fall back to the middle one.
  CHECK(parabolic_extremum(0, 0, 1, 1, 2, 2) == 1.0);
}

TEST_CASE("threshold extraction is stable under grid refinement") {
  const StackSpecd s = standard_crystal();
  const AtomicParams a{0.05, 4.0, 0.99, 1.0};
  const auto coarse = summarize(trace_hysteresis(s, a, kProbe, 0.5, 2000));
  const auto fine = summarize(trace_hysteresis(s, a, kProbe, 0.5, 4000));
  REQUIRE(coarse.bistable);
  REQUIRE(fine.bistable);
  CHECK(std::abs(*coarse.switch_up_ui - *fine.switch_up_ui) < 1e-3);
  CHECK(std::abs(*coarse.switch_down_ui - *fine.switch_down_ui) < 1e-3);
}

TEST_CASE("cold starts reproduce the lower branch") {
  const StackSpecd s = standard_crystal();
  const AtomicParams a{0.05, 6.0, 0.99, 1.0};
  const auto warm = trace_hysteresis(s, a, kProbe, 0.1, 200);
  const auto cold = trace_hysteresis_cold(s, a, kProbe, 0.1, 200, {}, 4);
  REQUIRE(cold.points.size() == warm.points.size());
  for (std::size_t i = 0; i < warm.points.size(); ++i) {
    CHECK(cold.points[i].u_f == warm.points[i].u_f);
    CHECK(std::abs(cold.points[i].u_i - warm.points[i].u_i) < 1e-8);
  }
}

TEST_CASE("adaptive sweep widens until both folds are inside") {
  SweepSettings settings;
  settings.n_points = 1000;
  const auto curve =
      trace_hysteresis(standard_crystal(), AtomicParams{0.05, 8.0, 0.99, 1.0}, kProbe, settings);
  CHECK(summarize(curve).bistable);
  const double reach = curve.points.back().u_f / settings.initial_u_f_max;
  CHECK(reach == std::exp2(std::round(std::log2(reach))));

  settings.max_doublings = 0;
  const auto single =
      trace_hysteresis(standard_crystal(), AtomicParams{0.05, 8.0, 0.99, 1.0}, kProbe, settings);
  CHECK(single.points.back().u_f == settings.initial_u_f_max);

  settings.u_f_max = 0.25;
  const auto fixed =
      trace_hysteresis(standard_crystal(), AtomicParams{0.05, 8.0, 0.99, 1.0}, kProbe, settings);
  CHECK(fixed.points.back().u_f == 0.25);
}
