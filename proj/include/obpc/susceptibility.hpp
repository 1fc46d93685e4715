#pragma once

// Linear and third-order susceptibilities of Lambda-type three-level dopants
// with spontaneously generated coherence (SGC).
//
// Frequencies are in units of gamma, the common half decay rate of the two
// excited-state channels (gamma_2 = gamma_3 = gamma). In these units the
// susceptibilities split into a dimensionless part (computed here) and the
// physical prefactors s1, s3 (see scale_factors).

#include <cmath>
#include <complex>

#include "obpc/errors.hpp"

namespace obpc {

/// Dimensionless atomic control knobs.
struct AtomicParams {
  double delta_p = 0.05;  // probe detuning omega_13 - omega_p, units of gamma
  double omega_c0 = 4.0;  // coupling Rabi frequency for orthogonal dipoles
  double sgc_p = 0.99;    // cos(theta) between mu_12 and mu_13, in [0, 1]
  double s1 = 1.0;        // linear scale factor applied to chi1

  bool operator==(const AtomicParams&) const = default;
};

/// Physical constants of the dopant ensemble (SI).
struct PhysicalScales {
  double omega_13;        // rad/s
  double gamma;           // rad/s
  double dopant_density;  // 1/m^3
  double dipole_moment;   // C m
};

struct Susceptibilities {
  std::complex<double> chi1;  // s1 * dimensionless chi1
  std::complex<double> chi3;  // dimensionless chi3 (s3 not applied)
};

struct ScaleFactors {
  double s1;  // dimensionless
  double s3;  // m^2/V^2
};

/// Throws DomainError unless 0 <= sgc_p <= 1, omega_c0 >= 0 and s1 >= 0.
void validate(const AtomicParams& params);

/// Coupling Rabi frequency seen by the atoms, omega_c0 * sqrt(1 - p^2).
template <typename Scalar>
Scalar effective_rabi(Scalar omega_c0, Scalar sgc_p) {
  if (!(sgc_p >= Scalar(0) && sgc_p <= Scalar(1)))
    throw DomainError("SGC parameter p must lie in [0, 1]");
  if (!(omega_c0 >= Scalar(0)))
    throw DomainError("coupling Rabi frequency must be non-negative");
  using std::sqrt;
  return omega_c0 * sqrt((Scalar(1) - sgc_p) * (Scalar(1) + sgc_p));
}

namespace detail {

// Omega^2 + i(2 + i Delta) Delta, the resonance denominator shared by chi1
// and chi3.
template <typename Scalar>
std::complex<Scalar> dressed_denominator(Scalar delta, Scalar omega) {
  const std::complex<Scalar> i(0, 1);
  return omega * omega + i * (Scalar(2) + i * delta) * delta;
}

}  // namespace detail

/// chi1 / s1 = -Delta / (Omega^2 + i(2 + i Delta) Delta).
template <typename Scalar>
std::complex<Scalar> chi1_dimensionless(Scalar delta_p, Scalar omega_c) {
  const auto den = detail::dressed_denominator(delta_p, omega_c);
  if (std::abs(den) < Scalar(kSingularityFloor))
    throw SingularityError("chi1 denominator vanishes (delta_p = omega_c = 0)");
  return -delta_p / den;
}

/// chi3 / s3 for equal decay rates.
///
/// The denominator is kept as the product of its two factors,
/// [Omega^3 - i Omega (2 - i Delta) Delta]^2 [Omega^2 + i(2 + i Delta) Delta]^3,
/// instead of being expanded.
template <typename Scalar>
std::complex<Scalar> chi3_dimensionless(Scalar delta_p, Scalar omega_c,
                                        Scalar sgc_p) {
  using C = std::complex<Scalar>;
  const C i(0, 1);
  const Scalar d = delta_p;
  const Scalar w = omega_c;
  const Scalar w2 = w * w;
  const Scalar w4 = w2 * w2;

  const C plus = detail::dressed_denominator(d, w);     // Omega^2 + i(2+iD)D
  const C minus = w2 - i * (Scalar(2) - i * d) * d;     // Omega^2 - i(2-iD)D
  const C cubic = w * w2 - i * w * (Scalar(2) - i * d) * d;

  const C beta = (cubic * cubic) * (plus * plus * plus);
  if (std::abs(beta) < Scalar(kSingularityFloor))
    throw SingularityError("chi3 denominator vanishes");

  const C sgc_term = Scalar(8) * i * w4 * sgc_p * sgc_p * d * d * (w2 - d * d);
  const C bracket = Scalar(2) * w4 - Scalar(2) * i * w2 * d +
                    d * d * (Scalar(5) * w2 + Scalar(4));
  const C numerator = sgc_term + d * plus * minus * bracket;
  return numerator / beta;
}

/// Both susceptibilities at the given operating knobs (s1 applied to chi1).
Susceptibilities susceptibilities(const AtomicParams& params);

/// Radiative decay rate implied by a dipole moment,
/// |mu|^2 omega^3 / (3 pi eps0 hbar c^3).
double gamma_from_dipole(double dipole_moment, double omega_13);

/// s1 = 2 N |mu|^2 / (eps0 hbar gamma), s3 = 2 N |mu|^4 / (3 eps0 hbar^3 gamma^3).
ScaleFactors scale_factors(const PhysicalScales& scales);

/// Dopant density that makes s1 = 1 when gamma is radiative:
/// omega^3 / (6 pi c^3).
double unit_s1_density(double omega_13);

/// Incident intensity c eps0 U_i / (2 Re chi3) in the same arbitrary units as
/// U_i. With to_milliwatt_per_cm2 the quoted a.u. -> mW/cm^2 factor is applied.
double physical_intensity(double u_i, double chi3_re,
                          bool to_milliwatt_per_cm2 = false);

}  // namespace obpc
