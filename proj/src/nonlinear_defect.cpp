#include "obpc/nonlinear_defect.hpp"

#include <cmath>
#include <string>

namespace obpc {

SolveResult solve_intensities(double u_f, const DefectMediumd& medium, const CMat2d& m_r,
                              std::optional<FieldIntensitiesd> warm_start,
                              const SolverSettings& settings) {
  if (!(u_f >= 0.0) || !std::isfinite(u_f))
    throw DomainError("transmitted intensity must be finite and >= 0");
  if (!(settings.relaxation > 0.0 && settings.relaxation <= 1.0))
    throw DomainError("relaxation must lie in (0, 1]");

  const double a = settings.relaxation;
  FieldIntensitiesd x = warm_start.value_or(FieldIntensitiesd{});
  double residual = 0.0;
  for (long it = 1; it <= settings.max_iter; ++it) {
    const FieldIntensitiesd next = boundary_map(u_f, medium, m_r, x);
    residual = max_abs_difference(next, x);
    if (!std::isfinite(residual)) break;
    if (residual <= settings.tolerance) return {x, it, residual, true};
    x = {(1.0 - a) * x.u_plus + a * next.u_plus, (1.0 - a) * x.u_minus + a * next.u_minus};
  }
  throw ConvergenceError("fixed-point iteration did not converge at u_f = " +
                             std::to_string(u_f),
                         u_f, residual);
}

OperatingPoint operating_point(double u_f, const DefectMediumd& medium,
                               const CMat2d& m_left, const CMat2d& m_right, double n0,
                               std::optional<FieldIntensitiesd> warm_start,
                               const SolverSettings& settings) {
  const SolveResult solved = solve_intensities(u_f, medium, m_right, warm_start, settings);
  const CMat2d m = m_left * defect_matrix(medium, solved.fields) * m_right;
  const double t = transmission(m, n0, settings.measure);
  if (!(t > 0.0)) throw SingularityError("transmission vanished; U_i undefined");
  OperatingPoint op;
  op.u_f = u_f;
  op.fields = solved.fields;
  op.t = t;
  op.u_i = u_f / t;
  op.iterations = solved.iterations;
  op.residual = solved.residual;
  op.converged = solved.converged;
  return op;
}

OperatingPoint operating_point(double u_f, const DefectMediumd& medium,
                               const StackSpecd& stack, double omega,
                               std::optional<FieldIntensitiesd> warm_start,
                               const SolverSettings& settings) {
  return operating_point(u_f, medium, left_submatrix(stack, omega),
                         right_submatrix(stack, omega), stack.n0, warm_start, settings);
}

}  // namespace obpc
