#pragma once

namespace ionsim {

// CODATA 2018 values, SI units.
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;     // kg
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// 171Yb+ (AME2020 atomic mass minus one electron mass).
inline constexpr double kYb171IonMassKg = 170.9357772 * kAtomicMassUnit;

// Counter-propagating 355 nm Raman beams: effective wave vector 2 * 2pi/lambda.
inline constexpr double kRaman355CounterPropKVec = 2.0 * kTwoPi / 355.0e-9;  // rad/m

}  // namespace ionsim
