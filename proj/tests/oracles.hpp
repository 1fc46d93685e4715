#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library's numerical paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
inline constexpr cd I{0.0, 1.0};
inline constexpr double kC = 299792458.0;

// Linear susceptibility without the density prefactor, unequal decay rates.
inline cd chi1_unscaled(double delta, double omega, double g2, double g3) {
  return -delta / (omega * omega + I * (g2 + g3 + I * delta) * delta);
}

// Third-order susceptibility without the density prefactor, unequal decay
// rates, transcribed term by term.
inline cd chi3_unscaled(double delta, double omega, double p, double g2, double g3) {
  const double W = omega, D = delta;
  const cd sgc = 4.0 * I * std::pow(W, 4) * p * p * g2 * (g2 + g3) * D * D * (W * W - D * D);
  const cd f1 = W * W + I * (g2 + g3 + I * D) * D;
  const cd f2 = W * W - I * (g2 + g3 - I * D) * D;
  const cd f3 = 2.0 * std::pow(W, 4) * g3 - I * W * W * g2 * (g2 + g3) * D +
                D * D * (3.0 * W * W * g2 + g2 * g3 * g3 + g2 * g2 * g2 +
                         2.0 * g3 * (W * W + g2 * g2));
  const cd numerator = sgc + D * f1 * f2 * f3;
  const cd beta = g3 * std::pow(std::pow(W, 3) - I * W * (g2 + g3 - I * D) * D, 2) *
                  std::pow(W * W + I * (g2 + g3 + I * D) * D, 3);
  return numerator / beta;
}

// Same expression with the SGC term removed (the p = 0 route).
inline cd chi3_without_sgc(double delta, double omega) {
  return chi3_unscaled(delta, omega, 0.0, 1.0, 1.0);
}

// Power transmission of a non-magnetic multilayer between two identical
// ambient media, computed from forward/backward plane-wave amplitudes and
// interface continuity of E and H (no characteristic matrices).
// indices[j], thicknesses[j] describe the layers in propagation order.
inline double fresnel_transmittance(const std::vector<cd>& indices,
                                    const std::vector<double>& thicknesses, double n0,
                                    double omega) {
  const double k0 = omega / kC;
  // Media: ambient, layers..., ambient. Start in the exit medium with
  // amplitudes (a, b) = (1, 0) and walk back to the entrance.
  std::vector<cd> n;
  n.push_back(n0);
  n.insert(n.end(), indices.begin(), indices.end());
  n.push_back(n0);
  cd a = 1.0, b = 0.0;
  for (std::size_t j = n.size() - 1; j > 0; --j) {
    const std::size_t left = j - 1;
    const cd r = n[j] / n[left];
    // Amplitudes in medium `left` at its right boundary.
    cd al = 0.5 * ((1.0 + r) * a + (1.0 - r) * b);
    cd bl = 0.5 * ((1.0 - r) * a + (1.0 + r) * b);
    if (left > 0) {
      const cd phase = n[left] * k0 * thicknesses[left - 1];
      al *= std::exp(-I * phase);
      bl *= std::exp(I * phase);
    }
    a = al;
    b = bl;
  }
  return std::norm(1.0 / a);
}

// --- intensity equations ---------------------------------------------------

struct Boundary {
  cd n_l;
  cd row_top;     // m11 + m12 of the right-hand block
  cd row_bottom;  // m21 + m22
};

inline std::array<double, 2> intensity_map(double u_f, const Boundary& b,
                                           std::array<double, 2> u) {
  const cd pp = b.n_l * std::sqrt(cd(1.0 + u[1] + 2.0 * u[0]));
  const cd pm = b.n_l * std::sqrt(cd(1.0 + u[0] + 2.0 * u[1]));
  const cd s = pp + pm;
  return {std::norm((pp * b.row_top + b.row_bottom) / s) * u_f,
          std::norm((pp * b.row_top - b.row_bottom) / s) * u_f};
}

struct NewtonResult {
  std::array<double, 2> u;
  double residual;
  int iterations;
  bool converged;
};

// Damped Newton on F(u) = map(u) - u with a central-difference Jacobian.
inline NewtonResult newton_intensities(double u_f, const Boundary& b,
                                       std::array<double, 2> u, double tol = 1e-13,
                                       int max_iter = 200) {
  auto F = [&](const std::array<double, 2>& x) {
    const auto m = intensity_map(u_f, b, x);
    return std::array<double, 2>{m[0] - x[0], m[1] - x[1]};
  };
  auto norm = [](const std::array<double, 2>& v) {
    return std::max(std::abs(v[0]), std::abs(v[1]));
  };
  std::array<double, 2> f = F(u);
  for (int it = 0; it < max_iter; ++it) {
    if (norm(f) <= tol) return {u, norm(f), it, true};
    double J[2][2];
    for (int k = 0; k < 2; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(u[k]));
      auto up = u, dn = u;
      up[k] += h;
      dn[k] -= h;
      const auto fp = F(up), fm = F(dn);
      J[0][k] = (fp[0] - fm[0]) / (2 * h);
      J[1][k] = (fp[1] - fm[1]) / (2 * h);
    }
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const std::array<double, 2> step = {(-f[0] * J[1][1] + f[1] * J[0][1]) / det,
                                        (-f[1] * J[0][0] + f[0] * J[1][0]) / det};
    double lambda = 1.0;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      const std::array<double, 2> trial = {u[0] + lambda * step[0], u[1] + lambda * step[1]};
      const auto ft = F(trial);
      if (norm(ft) < norm(f) || k == 29) {
        u = trial;
        f = ft;
        break;
      }
    }
  }
  return {u, norm(f), max_iter, norm(f) <= tol};
}

}  // namespace oracle
