#pragma once

namespace vtrack {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kCodeRate = 1.023e6;       // chips/s, GPS L1 C/A and Galileo E1
inline constexpr double kCarrierFreq = 1.57542e9;  // Hz, L1/E1
inline constexpr double kChipLength = kSpeedOfLight / kCodeRate;
inline constexpr double kCarrierWavelength = kSpeedOfLight / kCarrierFreq;

inline constexpr double kEarthMu = 3.986004418e14;
inline constexpr double kWgs84A = 6378137.0;
inline constexpr double kWgs84F = 1.0 / 298.257223563;
inline constexpr double kWgs84B = kWgs84A * (1.0 - kWgs84F);
inline constexpr double kWgs84E2 = kWgs84F * (2.0 - kWgs84F);

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double kEpochPeriod = 0.02;  // s, correlator integration and EKF rate
inline constexpr double kHalfPeriod = 0.01;   // s, FLL cross-product sub-interval

}  // namespace vtrack
