#include "obpc/response.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <utility>

namespace obpc {

namespace {

struct Vertex {
  double x;
  double y;
};

// Vertex of the parabola through three points, in coordinates centered on x1.
// Falls back to the middle sample when the points are collinear.
Vertex parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double a0 = x0 - x1;
  const double a2 = x2 - x1;
  // y = c + b s + a s^2 with s = x - x1, c = y1.
  const double d0 = (y0 - y1) / a0;
  const double d2 = (y2 - y1) / a2;
  const double a = (d2 - d0) / (a2 - a0);
  const double b = d0 - a * a0;
  if (a == 0.0 || !std::isfinite(a)) return {x1, y1};
  const double s = -b / (2.0 * a);
  if (s < a0 || s > a2) return {x1, y1};
  return {x1 + s, y1 - b * b / (4.0 * a)};
}

// Splits [0, n) into contiguous chunks, one per thread. Each index is written
// by exactly one worker, so the result does not depend on scheduling.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::size_t end = std::min(n, (w + 1) * chunk);
          for (std::size_t i = w * chunk; i < end; ++i) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

double parabolic_extremum(double x0, double y0, double x1, double y1, double x2,
                          double y2) {
  return parabola_vertex(x0, y0, x1, y1, x2, y2).y;
}

DefectMediumd defect_medium(const StackSpecd& stack, const AtomicParams& atomic,
                            double omega) {
  const Susceptibilities chi = susceptibilities(atomic);
  return make_defect_medium(stack.defect.epsilon.real(), chi.chi1, stack.defect.thickness,
                            omega / constants::kSpeedOfLight);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n == 0) throw DomainError("grid must contain at least one point");
  if (n == 1) return {lo};
  std::vector<double> grid(n);
  // Weighted form keeps symmetric grids exactly symmetric (0 lands on 0).
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i);
    grid[i] = (lo * (last - k) + hi * k) / last;
  }
  return grid;
}

std::vector<SpectrumPoint> linear_spectrum(const StackSpecd& stack,
                                           const AtomicParams& atomic,
                                           std::span<const double> omega_grid,
                                           const SpectrumOptions& options) {
  if (omega_grid.empty()) throw DomainError("frequency grid is empty");
  for (double w : omega_grid)
    if (!(w > 0.0)) throw DomainError("frequency grid must be positive");
  validate(atomic);
  if (options.mode == DetuningMode::kTiedToFrequency && !(options.gamma > 0.0))
    throw DomainError("tied detuning mode needs a positive gamma (rad/s)");

  const double eps_host = stack.defect.epsilon.real();
  const double omega_c = effective_rabi(atomic.omega_c0, atomic.sgc_p);
  const std::complex<double> frozen_chi1 =
      atomic.s1 * chi1_dimensionless(atomic.delta_p, omega_c);

  std::vector<SpectrumPoint> out(omega_grid.size());
  parallel_for(omega_grid.size(), options.threads, [&](std::size_t i) {
    const double omega = omega_grid[i];
    std::complex<double> chi1 = frozen_chi1;
    if (options.mode == DetuningMode::kTiedToFrequency) {
      const double delta = atomic.delta_p + (options.probe_omega - omega) / options.gamma;
      chi1 = atomic.s1 * chi1_dimensionless(delta, omega_c);
    }
    LayerSpecd defect = stack.defect;
    defect.epsilon = eps_host + chi1;
    const CMat2d m = stack_matrix(stack, omega, layer_matrix(defect, omega));
    out[i] = {omega, transmission(m, stack.n0, options.measure)};
  });
  return out;
}

SpectrumPeak find_defect_peak(std::span<const SpectrumPoint> s, double gap_fraction) {
  SpectrumPeak peak;
  if (s.empty()) return peak;
  const auto it = std::max_element(s.begin(), s.end(), [](const auto& a, const auto& b) {
    return a.t < b.t;
  });
  const std::size_t k = static_cast<std::size_t>(it - s.begin());
  peak.t = s[k].t;
  peak.omega = s[k].omega;
  if (k > 0 && k + 1 < s.size())
    peak.omega = parabola_vertex(s[k - 1].omega, s[k - 1].t, s[k].omega, s[k].t,
                                 s[k + 1].omega, s[k + 1].t).x;

  const double half = 0.5 * peak.t;
  std::optional<double> left, right;
  for (std::size_t j = k; j > 0; --j) {
    if (s[j - 1].t < half) {
      const double f = (half - s[j - 1].t) / (s[j].t - s[j - 1].t);
      left = s[j - 1].omega + f * (s[j].omega - s[j - 1].omega);
      break;
    }
  }
  for (std::size_t j = k; j + 1 < s.size(); ++j) {
    if (s[j + 1].t < half) {
      const double f = (s[j].t - half) / (s[j].t - s[j + 1].t);
      right = s[j].omega + f * (s[j + 1].omega - s[j].omega);
      break;
    }
  }
  if (left && right) peak.fwhm = *right - *left;

  double min_left = peak.t, min_right = peak.t;
  for (std::size_t j = 0; j < k; ++j) min_left = std::min(min_left, s[j].t);
  for (std::size_t j = k + 1; j < s.size(); ++j) min_right = std::min(min_right, s[j].t);
  const double floor = gap_fraction * peak.t;
  peak.in_gap = min_left < floor && min_right < floor;

  for (std::size_t j = 1; j + 1 < s.size(); ++j)
    if (s[j].t > s[j - 1].t && s[j].t >= s[j + 1].t && s[j].t > half) ++peak.high_peaks;
  return peak;
}

std::vector<ChiSample> chi_scan(std::span<const double> delta_grid,
                                std::span<const double> second_grid, ScanAxis axis,
                                double fixed) {
  if (delta_grid.empty() || second_grid.empty()) throw DomainError("scan grid is empty");
  std::vector<ChiSample> out;
  out.reserve(delta_grid.size() * second_grid.size());
  for (double delta : delta_grid) {
    for (double v : second_grid) {
      const double p = axis == ScanAxis::kSgc ? v : fixed;
      const double w0 = axis == ScanAxis::kSgc ? fixed : v;
      const double wc = effective_rabi(w0, p);
      out.push_back({delta, p, w0, chi1_dimensionless(delta, wc),
                     chi3_dimensionless(delta, wc, p)});
    }
  }
  return out;
}

namespace {

struct SweepContext {
  DefectMediumd medium;
  CMat2d m_left;
  CMat2d m_right;
  double n0;
  SolverSettings solver;
};

SweepContext make_context(const StackSpecd& stack, const AtomicParams& atomic,
                          double probe_omega, const SolverSettings& solver) {
  if (!(probe_omega > 0.0)) throw DomainError("probe frequency must be positive");
  return {defect_medium(stack, atomic, probe_omega), left_submatrix(stack, probe_omega),
          right_submatrix(stack, probe_omega), stack.n0, solver};
}

OperatingPoint advance(const SweepContext& ctx, const FieldIntensitiesd& from,
                       double u_from, double u_to, int depth, int max_depth) {
  try {
    return operating_point(u_to, ctx.medium, ctx.m_left, ctx.m_right, ctx.n0, from,
                           ctx.solver);
  } catch (const ConvergenceError&) {
    if (depth >= max_depth) throw;
  }
  const double mid = 0.5 * (u_from + u_to);
  const OperatingPoint half = advance(ctx, from, u_from, mid, depth + 1, max_depth);
  return advance(ctx, half.fields, mid, u_to, depth + 1, max_depth);
}

void check_sweep(double u_f_max, std::size_t n_points) {
  if (!(u_f_max > 0.0) || !std::isfinite(u_f_max))
    throw DomainError("u_f_max must be positive");
  if (n_points < 2) throw DomainError("a sweep needs at least two points");
}

}  // namespace

HysteresisCurve trace_hysteresis(const StackSpecd& stack, const AtomicParams& atomic,
                                 double probe_omega, double u_f_max, std::size_t n_points,
                                 const SolverSettings& solver, int max_bisections) {
  check_sweep(u_f_max, n_points);
  const SweepContext ctx = make_context(stack, atomic, probe_omega, solver);
  const std::vector<double> grid = uniform_grid(0.0, u_f_max, n_points);

  HysteresisCurve curve{{}, atomic, stack, probe_omega};
  curve.points.reserve(n_points);
  FieldIntensitiesd state{};
  double u_prev = 0.0;
  for (double u_f : grid) {
    OperatingPoint op = advance(ctx, state, u_prev, u_f, 0, max_bisections);
    state = op.fields;
    u_prev = u_f;
    curve.points.push_back(op);
  }
  return curve;
}

HysteresisCurve trace_hysteresis_cold(const StackSpecd& stack, const AtomicParams& atomic,
                                      double probe_omega, double u_f_max,
                                      std::size_t n_points, const SolverSettings& solver,
                                      unsigned threads) {
  check_sweep(u_f_max, n_points);
  const SweepContext ctx = make_context(stack, atomic, probe_omega, solver);
  const std::vector<double> grid = uniform_grid(0.0, u_f_max, n_points);
  HysteresisCurve curve{std::vector<OperatingPoint>(n_points), atomic, stack, probe_omega};
  parallel_for(n_points, threads, [&](std::size_t i) {
    curve.points[i] = operating_point(grid[i], ctx.medium, ctx.m_left, ctx.m_right,
                                      ctx.n0, std::nullopt, ctx.solver);
  });
  return curve;
}

HysteresisSummary summarize(std::span<const double> u_f, std::span<const double> u_i,
                            std::span<const double> t, std::optional<double> chi3_re) {
  if (u_f.size() != u_i.size() || u_f.size() != t.size())
    throw DomainError("hysteresis columns differ in length");
  HysteresisSummary out;
  const std::size_t n = u_i.size();
  std::optional<std::size_t> up_idx, down_idx;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    if (u_i[j] > u_i[j - 1] && u_i[j] >= u_i[j + 1]) {
      up_idx = j;
      break;
    }
  }
  if (up_idx) {
    for (std::size_t j = *up_idx + 1; j + 1 < n; ++j) {
      if (u_i[j] < u_i[j - 1] && u_i[j] <= u_i[j + 1]) {
        down_idx = j;
        break;
      }
    }
  }
  auto refine = [&](std::size_t j) {
    return parabola_vertex(u_f[j - 1], u_i[j - 1], u_f[j], u_i[j], u_f[j + 1], u_i[j + 1]).y;
  };
  if (up_idx) out.switch_up_ui = refine(*up_idx);
  if (down_idx) out.switch_down_ui = refine(*down_idx);

  out.bistable = out.switch_up_ui && out.switch_down_ui &&
                 *out.switch_up_ui > *out.switch_down_ui && *out.switch_down_ui > 0.0;
  if (out.bistable) {
    const double hi = *out.switch_up_ui;
    const double lo = *out.switch_down_ui;
    out.loop_width = hi - lo;
    double t_min = 1.0, t_max = 0.0;
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (u_i[j] >= lo && u_i[j] <= hi) {
        t_min = std::min(t_min, t[j]);
        t_max = std::max(t_max, t[j]);
        any = true;
      }
    }
    out.contrast = any ? std::clamp(t_max - t_min, 0.0, 1.0) : 0.0;
  } else {
    out.switch_up_ui.reset();
    out.switch_down_ui.reset();
  }

  if (chi3_re && *chi3_re != 0.0 && out.bistable) {
    out.switch_up_intensity = physical_intensity(*out.switch_up_ui, *chi3_re);
    out.switch_down_intensity = physical_intensity(*out.switch_down_ui, *chi3_re);
    out.loop_width_intensity = *out.switch_up_intensity - *out.switch_down_intensity;
  }
  return out;
}

HysteresisSummary summarize(const HysteresisCurve& curve) {
  std::vector<double> u_f, u_i, t;
  u_f.reserve(curve.points.size());
  u_i.reserve(curve.points.size());
  t.reserve(curve.points.size());
  for (const auto& p : curve.points) {
    u_f.push_back(p.u_f);
    u_i.push_back(p.u_i);
    t.push_back(p.t);
  }
  const double chi3_re = susceptibilities(curve.atomic).chi3.real();
  return summarize(u_f, u_i, t, chi3_re);
}

HysteresisCurve trace_hysteresis(const StackSpecd& stack, const AtomicParams& atomic,
                                 double probe_omega, const SweepSettings& settings) {
  if (settings.u_f_max)
    return trace_hysteresis(stack, atomic, probe_omega, *settings.u_f_max,
                            settings.n_points, settings.solver, settings.max_bisections);
  double u_f_max = settings.initial_u_f_max;
  HysteresisCurve curve;
  for (int k = 0; k <= settings.max_doublings; ++k, u_f_max *= 2.0) {
    curve = trace_hysteresis(stack, atomic, probe_omega, u_f_max, settings.n_points,
                             settings.solver, settings.max_bisections);
    if (summarize(curve).bistable) break;
  }
  return curve;
}

}  // namespace obpc
