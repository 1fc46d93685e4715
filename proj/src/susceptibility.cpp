#include "obpc/susceptibility.hpp"

#include "obpc/constants.hpp"

namespace obpc {

using namespace constants;

void validate(const AtomicParams& params) {
  if (!(params.sgc_p >= 0.0 && params.sgc_p <= 1.0))
    throw DomainError("atomic.sgc_p must lie in [0, 1]");
  if (!(params.omega_c0 >= 0.0))
    throw DomainError("atomic.omega_c0 must be non-negative");
  if (!(params.s1 >= 0.0)) throw DomainError("atomic.s1 must be non-negative");
  if (!std::isfinite(params.delta_p))
    throw DomainError("atomic.delta_p must be finite");
}

Susceptibilities susceptibilities(const AtomicParams& params) {
  validate(params);
  const double omega_c = effective_rabi(params.omega_c0, params.sgc_p);
  return {params.s1 * chi1_dimensionless(params.delta_p, omega_c),
          chi3_dimensionless(params.delta_p, omega_c, params.sgc_p)};
}

double gamma_from_dipole(double dipole_moment, double omega_13) {
  if (dipole_moment < 0.0 || !(omega_13 > 0.0))
    throw DomainError("dipole moment must be >= 0 and omega_13 > 0");
  const double c3 = kSpeedOfLight * kSpeedOfLight * kSpeedOfLight;
  return dipole_moment * dipole_moment * omega_13 * omega_13 * omega_13 /
         (3.0 * kPi * kVacuumPermittivity * kReducedPlanck * c3);
}

ScaleFactors scale_factors(const PhysicalScales& s) {
  if (!(s.omega_13 > 0 && s.gamma > 0 && s.dopant_density > 0 &&
        s.dipole_moment > 0))
    throw DomainError("physical scales must be strictly positive");
  const double mu2 = s.dipole_moment * s.dipole_moment;
  const double hbar_gamma = kReducedPlanck * s.gamma;
  const double s1 = 2.0 * s.dopant_density * mu2 / (kVacuumPermittivity * hbar_gamma);
  const double s3 = 2.0 * s.dopant_density * mu2 * mu2 /
                    (3.0 * kVacuumPermittivity * hbar_gamma * hbar_gamma * hbar_gamma);
  return {s1, s3};
}

double unit_s1_density(double omega_13) {
  const double c3 = kSpeedOfLight * kSpeedOfLight * kSpeedOfLight;
  return omega_13 * omega_13 * omega_13 / (6.0 * kPi * c3);
}

double physical_intensity(double u_i, double chi3_re, bool to_milliwatt_per_cm2) {
  if (chi3_re == 0.0)
    throw SingularityError("Re(chi3) = 0: intensity conversion undefined");
  const double intensity = kSpeedOfLight * kVacuumPermittivity * u_i / (2.0 * chi3_re);
  return to_milliwatt_per_cm2 ? intensity * kAuToMilliwattPerCm2 : intensity;
}

}  // namespace obpc
