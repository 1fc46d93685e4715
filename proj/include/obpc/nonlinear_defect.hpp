#pragma once

// Kerr-type doped defect layer. Intensities are scaled by chi3
// (U = chi3 |A|^2) so the solver never sees an absolute intensity scale.

#include <complex>
#include <optional>

#include "obpc/errors.hpp"
#include "obpc/tmm.hpp"

namespace obpc {

template <typename Scalar>
struct DefectMedium {
  Scalar epsilon_host{};           // n_D^2 of the undoped layer
  std::complex<Scalar> chi1{};     // dopant linear susceptibility, s1 applied
  std::complex<Scalar> n_l{};      // sqrt(epsilon_host + chi1), principal branch
  Scalar thickness{};              // m
  Scalar k0{};                     // vacuum wavenumber, 1/m
};

using DefectMediumd = DefectMedium<double>;

template <typename Scalar>
DefectMedium<Scalar> make_defect_medium(Scalar epsilon_host, std::complex<Scalar> chi1,
                                        Scalar thickness, Scalar k0) {
  if (!(thickness >= Scalar(0))) throw DomainError("defect thickness must be >= 0");
  if (!(k0 > Scalar(0))) throw DomainError("vacuum wavenumber must be positive");
  const std::complex<Scalar> eps_l = epsilon_host + chi1;
  if (eps_l == std::complex<Scalar>(0))
    throw DomainError("linear permittivity of the defect vanishes");
  return {epsilon_host, chi1, std::sqrt(eps_l), thickness, k0};
}

/// Scaled forward/backward intensities inside the defect.
template <typename Scalar>
struct FieldIntensities {
  Scalar u_plus{0};
  Scalar u_minus{0};

  bool operator==(const FieldIntensities&) const = default;
};

using FieldIntensitiesd = FieldIntensities<double>;

template <typename Scalar>
Scalar max_abs_difference(const FieldIntensities<Scalar>& a,
                          const FieldIntensities<Scalar>& b) {
  using std::abs;
  return std::max(abs(a.u_plus - b.u_plus), abs(a.u_minus - b.u_minus));
}

template <typename Scalar>
struct Wavevectors {
  std::complex<Scalar> k_plus;
  std::complex<Scalar> k_minus;
};

/// k(+/-) = k0 n_l sqrt(1 + U(+/-) + 2 U(-/+)): cross-phase modulation from the
/// counter-propagating wave counts twice.
template <typename Scalar>
Wavevectors<Scalar> wavevectors(const DefectMedium<Scalar>& medium,
                                const FieldIntensities<Scalar>& fields) {
  using C = std::complex<Scalar>;
  const C base = medium.k0 * medium.n_l;
  return {base * std::sqrt(C(Scalar(1) + fields.u_plus + Scalar(2) * fields.u_minus)),
          base * std::sqrt(C(Scalar(1) + fields.u_minus + Scalar(2) * fields.u_plus))};
}

/// Characteristic matrix of the nonlinear layer for fixed intensities.
template <typename Scalar>
CMat2<Scalar> defect_matrix(const DefectMedium<Scalar>& medium,
                            const FieldIntensities<Scalar>& fields) {
  using C = std::complex<Scalar>;
  const C i(0, 1);
  const auto [kp, km] = wavevectors(medium, fields);
  const C sum = kp + km;
  if (std::abs(sum) < Scalar(kSingularityFloor))
    throw SingularityError("k+ + k- vanishes in defect matrix");
  const C fwd = std::exp(-i * kp * medium.thickness);
  const C bwd = std::exp(i * km * medium.thickness);
  const Scalar k0 = medium.k0;
  CMat2<Scalar> m;
  m(0, 0) = (km * fwd + kp * bwd) / sum;
  m(0, 1) = k0 * (fwd - bwd) / sum;
  m(1, 0) = km * kp * (fwd - bwd) / (k0 * sum);
  m(1, 1) = (kp * fwd + km * bwd) / sum;
  return m;
}

/// One application of the intensity map at the right boundary of the defect:
///   U(+/-) = |(p+ (m11 + m12) +/- (m21 + m22)) / (p- + p+)|^2 U_f,
///   p(+/-) = n_l sqrt(1 + U(-/+) + 2 U(+/-)),
/// where m are the elements of the matrix of the layers to the right.
template <typename Scalar>
FieldIntensities<Scalar> boundary_map(Scalar u_f, const DefectMedium<Scalar>& medium,
                                      const CMat2<Scalar>& m_r,
                                      const FieldIntensities<Scalar>& fields) {
  using C = std::complex<Scalar>;
  const C p_plus =
      medium.n_l * std::sqrt(C(Scalar(1) + fields.u_minus + Scalar(2) * fields.u_plus));
  const C p_minus =
      medium.n_l * std::sqrt(C(Scalar(1) + fields.u_plus + Scalar(2) * fields.u_minus));
  const C sum = p_plus + p_minus;
  if (std::abs(sum) < Scalar(kSingularityFloor))
    throw SingularityError("p+ + p- vanishes in boundary map");
  const C row_top = m_r(0, 0) + m_r(0, 1);
  const C row_bottom = m_r(1, 0) + m_r(1, 1);
  return {std::norm((p_plus * row_top + row_bottom) / sum) * u_f,
          std::norm((p_plus * row_top - row_bottom) / sum) * u_f};
}

struct SolverSettings {
  double tolerance = 1e-10;  // infinity-norm residual of one more map step
  double relaxation = 0.5;   // x <- (1 - a) x + a map(x)
  long max_iter = 100000;
  TransmissionMeasure measure = TransmissionMeasure::kPower;

  bool operator==(const SolverSettings&) const = default;
};

struct SolveResult {
  FieldIntensitiesd fields;
  long iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Damped fixed-point solve of the boundary map for a given transmitted
/// intensity. Starts from warm_start, or (0, 0) when absent. Throws
/// ConvergenceError after settings.max_iter iterations.
SolveResult solve_intensities(double u_f, const DefectMediumd& medium, const CMat2d& m_r,
                              std::optional<FieldIntensitiesd> warm_start = std::nullopt,
                              const SolverSettings& settings = {});

/// One converged nonlinear state of the crystal.
struct OperatingPoint {
  double u_f = 0.0;  // transmitted intensity (a.u.)
  FieldIntensitiesd fields;
  double t = 0.0;    // transmission in the configured measure
  double u_i = 0.0;  // incident intensity u_f / t (a.u.)
  long iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Solves the intensities, builds the defect matrix, and evaluates the full
/// stack transmission at the probe frequency omega. The defect geometry is
/// taken from `medium`; only the passive layers of `stack` are used.
OperatingPoint operating_point(double u_f, const DefectMediumd& medium,
                               const StackSpecd& stack, double omega,
                               std::optional<FieldIntensitiesd> warm_start = std::nullopt,
                               const SolverSettings& settings = {});

/// Same, with the passive submatrices precomputed (sweep inner loop).
OperatingPoint operating_point(double u_f, const DefectMediumd& medium,
                               const CMat2d& m_left, const CMat2d& m_right, double n0,
                               std::optional<FieldIntensitiesd> warm_start,
                               const SolverSettings& settings);

}  // namespace obpc
