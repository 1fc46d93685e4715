#pragma once

#include <stdexcept>
#include <string>

namespace obpc {

/// Input outside the admissible parameter domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A denominator fell below the singularity floor.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The fixed-point solver exhausted its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double u_f, double residual)
      : std::runtime_error(what), u_f_(u_f), residual_(residual) {}

  double u_f() const noexcept { return u_f_; }
  double residual() const noexcept { return residual_; }

 private:
  double u_f_;
  double residual_;
};

/// Magnitude below which a denominator is treated as zero.
inline constexpr double kSingularityFloor = 1e-30;

}  // namespace obpc
