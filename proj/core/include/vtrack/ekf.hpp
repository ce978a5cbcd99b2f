#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vtrack/correlator.hpp"
#include "vtrack/geometry.hpp"

namespace vtrack {

using StateVector = Eigen::Matrix<double, 9, 1>;
using StateCovariance = Eigen::Matrix<double, 9, 9>;
using Matrix9 = Eigen::Matrix<double, 9, 9>;

// [x, vx, y, vy, z, vz, GPS clock bias, Galileo clock bias, clock drift]
enum StateIndex : int { kX = 0, kVx = 1, kY = 2, kVy = 3, kZ = 4, kVz = 5, kBiasGps = 6, kBiasGal = 7, kDrift = 8 };

Vec3 state_position(const StateVector& x);
Vec3 state_velocity(const StateVector& x);
EcefState state_ecef(const StateVector& x);
void set_state_ecef(StateVector& x, const EcefState& s);
double state_clock_bias(const StateVector& x, Constellation c);

struct ProcessNoiseConfig {
  double sigma2_x = 0.01;  // (m/s)^2/Hz
  double sigma2_y = 0.01;
  double sigma2_z = 0.01;
  double h0 = 1e-21;
  double hm2 = 2e-20;
  double f_carr = 1.57542e9;
  // GPS/GAL bias covariance sigma_d^2 dt^3/3 from the common drift. When off the
  // clock block is indefinite once dt exceeds sqrt(6 sigma_b^2 / sigma_d^2).
  bool shared_drift_cross_term = true;
};

void validate(const ProcessNoiseConfig& cfg);

struct ClockPsd {
  double phase_psd = 0.0;  // rad^2/s, omega_c^2 * h0 / 2
  double freq_psd = 0.0;   // rad^2/s^3, 2 pi^2 omega_c^2 h-2
  double bias_psd = 0.0;   // m^2/s
  double drift_psd = 0.0;  // m^2/s^3
};

ClockPsd clock_psd_from_allan(double h0, double hm2, double f_carr = 1.57542e9);

// Throws std::invalid_argument unless 0 <= dt <= 1 s.
Matrix9 build_transition(double dt);
Matrix9 build_process_noise(double dt, const ProcessNoiseConfig& cfg);

void predict(StateVector& x, StateCovariance& P, const Matrix9& phi, const Matrix9& q);

// Measurements are ordered as all pseudoranges, then all pseudorange rates.
// Satellite clocks are taken as known and removed: rho = R + b_rx - b_sv.
struct PredictedMeasurements {
  Eigen::VectorXd z;
  std::vector<bool> valid;  // false for a degenerate satellite-user geometry
};

PredictedMeasurements predict_measurements(const StateVector& x, const std::vector<SatelliteEpochState>& sats);
// Rows of invalid channels are left zero.
Eigen::MatrixXd build_observation(const StateVector& x, const std::vector<SatelliteEpochState>& sats);

enum class NoiseMode { OpenLoop, ClosedLoop };

struct ChannelNoiseInput {
  CorrelationModel model;
  double cn0_dbhz = 45.0;
};

struct MeasurementNoiseConfig {
  double T_dll = 0.02;
  double T_fll = 0.02;
  double dll_bandwidth = 1.0;    // closed-loop scaling of the code rows
  double rate_bandwidth = 10.0;  // closed-loop scaling of the rate rows
  double cn0_floor_dbhz = 15.0;
};

Eigen::MatrixXd build_measurement_noise(const std::vector<ChannelNoiseInput>& channels, NoiseMode mode,
                                        const MeasurementNoiseConfig& cfg = {});

// Code innovations in m from chips, rate innovations in m/s from Hz.
Eigen::VectorXd innovation_from_discriminators(const Eigen::VectorXd& dll_chips, const Eigen::VectorXd& fll_hz,
                                               double f_code = 1.023e6, double f_carr = 1.57542e9);

struct UpdateResult {
  bool applied = false;
  double nis = 0.0;
  double condition = 0.0;  // estimated condition number of H P H' + R
};

inline constexpr double kMaxInnovationCondition = 1e12;

// Joseph-form update. Skipped (state and covariance untouched) when the
// innovation covariance is not positive definite or its condition number
// exceeds kMaxInnovationCondition.
UpdateResult update(StateVector& x, StateCovariance& P, const Eigen::MatrixXd& H, const Eigen::MatrixXd& R,
                    const Eigen::VectorXd& dz);

struct CovarianceHealth {
  double asymmetry = 0.0;        // |P - P'|_inf / |P|_inf
  double min_eig_over_trace = 0.0;
  bool ok(double tol = 1e-9) const { return asymmetry < tol && min_eig_over_trace > -tol; }
};

CovarianceHealth covariance_health(const Eigen::MatrixXd& P);

// Keeps the listed rows of a stacked range/rate vector or matrix. keep has
// one flag per channel; both the range and the rate row of a channel follow it.
Eigen::VectorXd select_channels(const Eigen::VectorXd& v, const std::vector<bool>& keep);
Eigen::MatrixXd select_channel_rows(const Eigen::MatrixXd& m, const std::vector<bool>& keep);
Eigen::MatrixXd select_channel_block(const Eigen::MatrixXd& r, const std::vector<bool>& keep);

}  // namespace vtrack
