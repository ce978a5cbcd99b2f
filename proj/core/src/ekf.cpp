#include "vtrack/ekf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vtrack/constants.hpp"
#include "vtrack/discriminators.hpp"

namespace vtrack {

Vec3 state_position(const StateVector& x) { return {x[kX], x[kY], x[kZ]}; }
Vec3 state_velocity(const StateVector& x) { return {x[kVx], x[kVy], x[kVz]}; }
EcefState state_ecef(const StateVector& x) { return {state_position(x), state_velocity(x)}; }

void set_state_ecef(StateVector& x, const EcefState& s) {
  x[kX] = s.position.x();
  x[kY] = s.position.y();
  x[kZ] = s.position.z();
  x[kVx] = s.velocity.x();
  x[kVy] = s.velocity.y();
  x[kVz] = s.velocity.z();
}

double state_clock_bias(const StateVector& x, Constellation c) {
  return c == Constellation::Gps ? x[kBiasGps] : x[kBiasGal];
}

void validate(const ProcessNoiseConfig& cfg) {
  for (double v : {cfg.sigma2_x, cfg.sigma2_y, cfg.sigma2_z, cfg.h0, cfg.hm2, cfg.f_carr})
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("process noise parameters must be positive");
}

ClockPsd clock_psd_from_allan(double h0, double hm2, double f_carr) {
  if (!(h0 > 0.0 && hm2 > 0.0)) throw std::invalid_argument("Allan parameters must be positive");
  const double wc = kTwoPi * f_carr;
  ClockPsd p;
  p.phase_psd = wc * wc * h0 / 2.0;
  p.freq_psd = 2.0 * kPi * kPi * wc * wc * hm2;
  const double to_range = kSpeedOfLight * kSpeedOfLight / (wc * wc);
  p.bias_psd = p.phase_psd * to_range;
  p.drift_psd = p.freq_psd * to_range;
  return p;
}

Matrix9 build_transition(double dt) {
  if (!(dt >= 0.0 && dt <= 1.0)) throw std::invalid_argument("transition interval must lie in [0, 1] s");
  Matrix9 phi = Matrix9::Identity();
  phi(kX, kVx) = dt;
  phi(kY, kVy) = dt;
  phi(kZ, kVz) = dt;
  phi(kBiasGps, kDrift) = dt;
  phi(kBiasGal, kDrift) = dt;
  return phi;
}

Matrix9 build_process_noise(double dt, const ProcessNoiseConfig& cfg) {
  if (!(dt > 0.0)) throw std::invalid_argument("process noise interval must be positive");
  validate(cfg);
  Matrix9 q = Matrix9::Zero();
  const double dt2 = dt * dt, dt3 = dt2 * dt;
  const double s2[3] = {cfg.sigma2_x, cfg.sigma2_y, cfg.sigma2_z};
  for (int a = 0; a < 3; ++a) {
    const int p = 2 * a, v = 2 * a + 1;
    q(p, p) = s2[a] * dt3 / 3.0;
    q(p, v) = q(v, p) = s2[a] * dt2 / 2.0;
    q(v, v) = s2[a] * dt;
  }
  const ClockPsd clk = clock_psd_from_allan(cfg.h0, cfg.hm2, cfg.f_carr);
  const double a = clk.bias_psd * dt + clk.drift_psd * dt3 / 3.0;
  const double b = clk.drift_psd * dt2 / 2.0;
  const double c = clk.drift_psd * dt;
  q(kBiasGps, kBiasGps) = a;
  q(kBiasGal, kBiasGal) = a;
  q(kBiasGps, kDrift) = q(kDrift, kBiasGps) = b;
  q(kBiasGal, kDrift) = q(kDrift, kBiasGal) = b;
  q(kDrift, kDrift) = c;
  if (cfg.shared_drift_cross_term) q(kBiasGps, kBiasGal) = q(kBiasGal, kBiasGps) = clk.drift_psd * dt3 / 3.0;
  return q;
}

void predict(StateVector& x, StateCovariance& P, const Matrix9& phi, const Matrix9& q) {
  x = phi * x;
  P = phi * P * phi.transpose() + q;
  P = 0.5 * (P + P.transpose()).eval();
}

PredictedMeasurements predict_measurements(const StateVector& x, const std::vector<SatelliteEpochState>& sats) {
  const auto m = static_cast<Eigen::Index>(sats.size());
  PredictedMeasurements out;
  out.z = Eigen::VectorXd::Zero(2 * m);
  out.valid.assign(sats.size(), true);
  const EcefState user = state_ecef(x);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& s = sats[static_cast<std::size_t>(j)];
    const double r = predicted_range(s.ecef.position, user.position);
    if (!(r >= 1.0)) {
      out.valid[static_cast<std::size_t>(j)] = false;
      continue;
    }
    const Vec3 los = (s.ecef.position - user.position) / r;
    out.z[j] = r + state_clock_bias(x, s.constellation) - s.clock_bias;
    out.z[m + j] = velocity_projection(s, user, los) + x[kDrift] - s.clock_drift;
  }
  return out;
}

Eigen::MatrixXd build_observation(const StateVector& x, const std::vector<SatelliteEpochState>& sats) {
  const auto m = static_cast<Eigen::Index>(sats.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * m, 9);
  const EcefState user = state_ecef(x);
  const int pos_col[3] = {kX, kY, kZ};
  const int vel_col[3] = {kVx, kVy, kVz};
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& s = sats[static_cast<std::size_t>(j)];
    const Vec3 d = s.ecef.position - user.position;
    const double r = d.norm();
    if (!(r >= 1.0)) continue;
    const Vec3 a = d / r;
    const Vec3 dv = s.ecef.velocity - user.velocity;
    const double v = dv.dot(a);
    for (int i = 0; i < 3; ++i) {
      h(j, pos_col[i]) = -a[i];
      h(m + j, pos_col[i]) = d[i] * v / (r * r) - dv[i] / r;
      h(m + j, vel_col[i]) = -a[i];
    }
    h(j, s.constellation == Constellation::Gps ? kBiasGps : kBiasGal) = 1.0;
    h(m + j, kDrift) = 1.0;
  }
  return h;
}

Eigen::MatrixXd build_measurement_noise(const std::vector<ChannelNoiseInput>& channels, NoiseMode mode,
                                        const MeasurementNoiseConfig& cfg) {
  const auto m = static_cast<Eigen::Index>(channels.size());
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  const double code_scale = mode == NoiseMode::ClosedLoop ? closed_loop_factor(cfg.dll_bandwidth, cfg.T_dll) : 1.0;
  const double rate_scale = mode == NoiseMode::ClosedLoop ? closed_loop_factor(cfg.rate_bandwidth, cfg.T_fll) : 1.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& ch = channels[static_cast<std::size_t>(j)];
    const double cn0 = std::isfinite(ch.cn0_dbhz) ? std::max(ch.cn0_dbhz, cfg.cn0_floor_dbhz) : cfg.cn0_floor_dbhz;
    r(j, j) = code_scale * open_loop_code_variance(cn0, cfg.T_dll, ch.model.spacing, ch.model.sharpness).value;
    r(m + j, m + j) = rate_scale * open_loop_freq_variance(cn0, cfg.T_fll).value;
  }
  return r;
}

Eigen::VectorXd innovation_from_discriminators(const Eigen::VectorXd& dll_chips, const Eigen::VectorXd& fll_hz,
                                               double f_code, double f_carr) {
  if (dll_chips.size() != fll_hz.size()) throw std::invalid_argument("one code and one frequency output per channel");
  const auto m = dll_chips.size();
  Eigen::VectorXd dz(2 * m);
  dz.head(m) = (kSpeedOfLight / f_code) * dll_chips;
  dz.tail(m) = (kSpeedOfLight / f_carr) * fll_hz;
  return dz;
}

UpdateResult update(StateVector& x, StateCovariance& P, const Eigen::MatrixXd& H, const Eigen::MatrixXd& R,
                    const Eigen::VectorXd& dz) {
  UpdateResult res;
  if (H.rows() != dz.size() || R.rows() != dz.size() || R.cols() != dz.size() || H.cols() != 9)
    throw std::invalid_argument("update dimensions do not match");
  if (dz.size() == 0) return res;
  const Eigen::MatrixXd PHt = P * H.transpose();
  Eigen::MatrixXd S = H * PHt + R;
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    res.condition = std::numeric_limits<double>::infinity();
    return res;
  }
  const double rc = llt.rcond();
  res.condition = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  if (res.condition > kMaxInnovationCondition) return res;

  const Eigen::MatrixXd K = llt.solve(PHt.transpose()).transpose();
  res.nis = dz.dot(llt.solve(dz));
  x += K * dz;
  const Eigen::MatrixXd ikh = Eigen::MatrixXd::Identity(9, 9) - K * H;
  StateCovariance p = ikh * P * ikh.transpose() + K * R * K.transpose();
  P = 0.5 * (p + p.transpose());
  res.applied = true;
  return res;
}

CovarianceHealth covariance_health(const Eigen::MatrixXd& P) {
  CovarianceHealth h;
  const double norm = P.cwiseAbs().rowwise().sum().maxCoeff();
  const double asym = (P - P.transpose()).cwiseAbs().rowwise().sum().maxCoeff();
  h.asymmetry = norm > 0.0 ? asym / norm : asym;
  const Eigen::MatrixXd sym = 0.5 * (P + P.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  const double tr = P.trace();
  h.min_eig_over_trace = tr > 0.0 ? es.eigenvalues().minCoeff() / tr : es.eigenvalues().minCoeff();
  return h;
}

namespace {
std::vector<Eigen::Index> kept_rows(const std::vector<bool>& keep) {
  const auto m = static_cast<Eigen::Index>(keep.size());
  std::vector<Eigen::Index> rows;
  for (Eigen::Index j = 0; j < m; ++j)
    if (keep[static_cast<std::size_t>(j)]) rows.push_back(j);
  for (Eigen::Index j = 0; j < m; ++j)
    if (keep[static_cast<std::size_t>(j)]) rows.push_back(m + j);
  return rows;
}
}  // namespace

Eigen::VectorXd select_channels(const Eigen::VectorXd& v, const std::vector<bool>& keep) {
  const auto rows = kept_rows(keep);
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[rows[i]];
  return out;
}

Eigen::MatrixXd select_channel_rows(const Eigen::MatrixXd& m, const std::vector<bool>& keep) {
  const auto rows = kept_rows(keep);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

Eigen::MatrixXd select_channel_block(const Eigen::MatrixXd& r, const std::vector<bool>& keep) {
  const auto rows = kept_rows(keep);
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = r(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace vtrack
