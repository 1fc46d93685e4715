#pragma once

// Characteristic-matrix algebra for normally incident light on a planar
// multilayer. Each layer maps the tangential (E, H) pair across its
// thickness; the stack matrix is the ordered product with the incident side
// first.

#include <Eigen/Core>
#include <Eigen/LU>
#include <complex>
#include <span>
#include <vector>

#include "obpc/constants.hpp"
#include "obpc/errors.hpp"

namespace obpc {

template <typename Scalar>
using CMat2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

using CMat2d = CMat2<double>;

template <typename Scalar>
struct LayerSpec {
  std::complex<Scalar> epsilon{1};
  std::complex<Scalar> mu{1};
  Scalar thickness{0};  // m
};

template <typename Scalar>
struct StackSpec {
  std::vector<LayerSpec<Scalar>> prefix;  // incident side of the defect
  LayerSpec<Scalar> defect;               // host of the doped layer
  std::vector<LayerSpec<Scalar>> suffix;  // exit side of the defect
  Scalar n0{1};                           // ambient index on both sides
};

using LayerSpecd = LayerSpec<double>;
using StackSpecd = StackSpec<double>;

/// Characteristic matrix of a homogeneous layer at angular frequency omega,
///   [[cos(kd), -i sqrt(mu/eps) sin(kd)], [-i sqrt(eps/mu) sin(kd), cos(kd)]]
/// with k = sqrt(eps mu) omega / c.
template <typename Scalar>
CMat2<Scalar> layer_matrix(const LayerSpec<Scalar>& layer, Scalar omega) {
  using C = std::complex<Scalar>;
  if (layer.epsilon == C(0)) throw DomainError("layer permittivity is zero");
  if (layer.mu == C(0)) throw DomainError("layer permeability is zero");
  if (!(omega > Scalar(0))) throw DomainError("frequency must be positive");
  const C i(0, 1);
  const C root_eps = std::sqrt(layer.epsilon);
  const C root_mu = std::sqrt(layer.mu);
  const C phase =
      root_eps * root_mu * omega / Scalar(constants::kSpeedOfLight) * layer.thickness;
  const C c = std::cos(phase);
  const C s = std::sin(phase);
  CMat2<Scalar> m;
  m << c, -i * (root_mu / root_eps) * s,
       -i * (root_eps / root_mu) * s, c;
  return m;
}

/// Ordered product m[0] * m[1] * ... ; the empty product is the identity.
template <typename Scalar>
CMat2<Scalar> compose(std::span<const CMat2<Scalar>> matrices) {
  CMat2<Scalar> out = CMat2<Scalar>::Identity();
  for (const auto& m : matrices) out = (out * m).eval();
  return out;
}

template <typename Scalar>
CMat2<Scalar> compose(const std::vector<CMat2<Scalar>>& matrices) {
  return compose(std::span<const CMat2<Scalar>>(matrices));
}

template <typename Scalar>
CMat2<Scalar> compose_layers(std::span<const LayerSpec<Scalar>> layers, Scalar omega) {
  CMat2<Scalar> out = CMat2<Scalar>::Identity();
  for (const auto& layer : layers) out = (out * layer_matrix(layer, omega)).eval();
  return out;
}

/// Matrix of the layers to the left of the defect.
template <typename Scalar>
CMat2<Scalar> left_submatrix(const StackSpec<Scalar>& stack, Scalar omega) {
  return compose_layers(std::span<const LayerSpec<Scalar>>(stack.prefix), omega);
}

/// Matrix of the layers to the right of the defect.
template <typename Scalar>
CMat2<Scalar> right_submatrix(const StackSpec<Scalar>& stack, Scalar omega) {
  return compose_layers(std::span<const LayerSpec<Scalar>>(stack.suffix), omega);
}

/// Full stack matrix with an externally supplied defect-layer matrix.
template <typename Scalar>
CMat2<Scalar> stack_matrix(const StackSpec<Scalar>& stack, Scalar omega,
                           const CMat2<Scalar>& defect) {
  return left_submatrix(stack, omega) * defect * right_submatrix(stack, omega);
}

/// Full stack matrix with the defect treated as a linear layer.
template <typename Scalar>
CMat2<Scalar> stack_matrix(const StackSpec<Scalar>& stack, Scalar omega) {
  return stack_matrix(stack, omega, layer_matrix(stack.defect, omega));
}

/// Complex amplitude transmission t = 2 n0 / ((m11 + m12 n0) + (m21 + m22 n0))
/// for equal ambient media on both sides.
template <typename Scalar>
std::complex<Scalar> transmission_amplitude(const CMat2<Scalar>& m, Scalar n0) {
  const std::complex<Scalar> den =
      (m(0, 0) + m(0, 1) * n0) + (m(1, 0) + m(1, 1) * n0);
  if (std::abs(den) < Scalar(kSingularityFloor))
    throw SingularityError("transmission denominator vanishes");
  return Scalar(2) * n0 / den;
}

/// |t|, the modulus form of the transmission coefficient.
template <typename Scalar>
Scalar transmission(const CMat2<Scalar>& m, Scalar n0) {
  return std::abs(transmission_amplitude(m, n0));
}

/// |t|^2, the transmitted fraction of the incident intensity.
template <typename Scalar>
Scalar power_transmittance(const CMat2<Scalar>& m, Scalar n0) {
  return std::norm(transmission_amplitude(m, n0));
}

/// Which of the two transmission measures an operating point reports.
enum class TransmissionMeasure {
  kPower,    // |t|^2
  kModulus,  // |t|
};

template <typename Scalar>
Scalar transmission(const CMat2<Scalar>& m, Scalar n0, TransmissionMeasure measure) {
  return measure == TransmissionMeasure::kPower ? power_transmittance(m, n0)
                                                : transmission(m, n0);
}

/// The symmetric (AB)^2 A D (AB)^2 A crystal: quarter-wave A and B layers and
/// a half-wave defect, all designed for the midgap wavelength lambda_pc.
template <typename Scalar>
StackSpec<Scalar> standard_stack(Scalar lambda_pc, Scalar n_a, Scalar n_b,
                                 Scalar n_d, Scalar n0) {
  if (!(lambda_pc > 0 && n_a > 0 && n_b > 0 && n_d > 0 && n0 > 0))
    throw DomainError("wavelength and refractive indices must be positive");
  const LayerSpec<Scalar> a{n_a * n_a, 1, lambda_pc / (4 * n_a)};
  const LayerSpec<Scalar> b{n_b * n_b, 1, lambda_pc / (4 * n_b)};
  StackSpec<Scalar> stack;
  stack.prefix = {a, b, a, b, a};
  stack.suffix = stack.prefix;
  stack.defect = {n_d * n_d, 1, lambda_pc / (2 * n_d)};
  stack.n0 = n0;
  return stack;
}

/// Angular midgap frequency 2 pi c / lambda.
template <typename Scalar>
Scalar midgap_frequency(Scalar lambda_pc) {
  return Scalar(2 * constants::kPi * constants::kSpeedOfLight) / lambda_pc;
}

}  // namespace obpc
