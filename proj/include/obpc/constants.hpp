#pragma once

#include <numbers>

namespace obpc::constants {

// CODATA 2018, SI units.
inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kReducedPlanck = 1.054571817e-34;   // J s
inline constexpr double kPi = std::numbers::pi;

// Reference operating values of the doped crystal.
inline constexpr double kMidgapWavelength = 692e-9;  // m
inline constexpr double kIndexA = 2.22;
inline constexpr double kIndexB = 1.41;
inline constexpr double kIndexDefect = 1.41;
inline constexpr double kAmbientIndex = 1.0;
inline constexpr double kProbeFrequency = 2.5e15;  // rad/s

// Quoted conversion values for a dopant with omega_13 ~ 1e15 rad/s. They
// depend on a decay rate that is not fixed by the model, so they are carried
// as reference numbers rather than derived.
inline constexpr double kReferenceS3 = 5.4e-8;            // m^2/V^2
inline constexpr double kAuToMilliwattPerCm2 = 50.0;

}  // namespace obpc::constants
