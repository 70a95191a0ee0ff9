#include "gbmt/bmt.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

namespace gbmt {
namespace {

ModelParams params(double mu_prime) {
  ModelParams p;
  p.mu_prime = mu_prime;
  return p;
}

Matrix4 magnetic_z(double b) {
  return field_tensor_real(FieldConfig::constant({0, 0, 0}, {0, 0, b}), Vector4::Zero());
}

// Spin in the plane of motion, along x (lab frame, u along x).
BMTState planar_state(double gamma) {
  BMTState st;
  const double ub = std::sqrt(gamma * gamma - 1.0);
  st.u = Vector4(gamma, ub, 0, 0);
  const Vector4 s(ub, gamma, 0, 0);  // boosted unit spin along x
  st.spin = spin_tensor_from_vector(st.u, s);
  return st;
}

double max_deviation(const BMTState& a, const BMTState& b) {
  return std::max({(a.x - b.x).cwiseAbs().maxCoeff(), (a.u - b.u).cwiseAbs().maxCoeff(),
                   (a.spin - b.spin).cwiseAbs().maxCoeff()});
}

TEST(BMTTest, SpinVectorHandExample) {
  BMTState st;
  st.u = Vector4(1, 0, 0, 0);
  st.spin(1, 2) = 0.7;
  st.spin(2, 1) = -0.7;
  const Vector4 s = spin_vector(st);
  EXPECT_EQ(s, Vector4(0, 0, 0, 0.7));
  EXPECT_EQ(spin_tensor_from_vector(st.u, s), st.spin);
}

TEST(BMTTest, SpinVectorRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Vector3d w(dist(rng), dist(rng), dist(rng));
    Vector4 u;
    u << std::sqrt(1.0 + w.squaredNorm()), w;
    Vector4 s(dist(rng), dist(rng), dist(rng), dist(rng));
    s -= minkowski_dot(s, u) * u;
    const Vector4 back = spin_vector(u, spin_tensor_from_vector(u, s));
    EXPECT_LT((back - s).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(BMTTest, LorentzForceHandExample) {
  // du^1/ds = F^{12} u_2 = (-B)(-u^2), du^2/ds = F^{21} u_1 = -B u^1.
  BMTState st;
  st.u = Vector4(2, 0.5, 1.5, 0);
  const BMTDerivative d = bmt_rhs(st, magnetic_z(1.0), params(1.0));
  EXPECT_EQ(d.du, Vector4(0, 1.5, -0.5, 0));
  EXPECT_EQ(d.dx, st.u);
}

TEST(BMTTest, ElectricFieldAccelerates) {
  BMTState st;
  st.u = Vector4(1, 0, 0, 0);
  const Matrix4 f = field_tensor_real(FieldConfig::constant({0.5, 0, 0}, {0, 0, 0}), Vector4::Zero());
  const BMTDerivative d = bmt_rhs(st, f, params(1.0));
  EXPECT_EQ(d.du, Vector4(0, 0.5, 0, 0));
}

TEST(BMTTest, FieldFreeSpinIsConstant) {
  const BMTState st = planar_state(1.7);
  const BMTDerivative d = bmt_rhs(st, Matrix4::Zero(), params(1.3));
  EXPECT_EQ(d.dspin, Matrix4::Zero());
  EXPECT_EQ(d.du, Vector4::Zero());
}

TEST(BMTTest, RestFrameLarmorPrecession) {
  // At rest in B along z the spin vector rotates as ds/dt = (mu'/m) s x B.
  BMTState st;
  st.u = Vector4(1, 0, 0, 0);
  st.spin = spin_tensor_from_vector(st.u, Vector4(0, 1, 0, 0));
  const double mu_prime = 1.4;
  const BMTDerivative d = bmt_rhs(st, magnetic_z(2.0), params(mu_prime));
  BMTState ahead = st;
  ahead.spin += 1e-7 * d.dspin;
  const Vector4 rate = (spin_vector(ahead) - spin_vector(st)) / 1e-7;
  EXPECT_NEAR(rate[1], 0.0, 1e-6);
  EXPECT_NEAR(rate[2], -mu_prime * 2.0, 1e-6);  // x cross z = -y
}

TEST(BMTTest, AnalyticCircularOrbit) {
  const double b = 1.5;
  BMTState st;
  st.u = Vector4(2.0, std::sqrt(3.0), 0, 0);
  const double s = 0.9;
  const BMTState out = analytic_constant_field(st, magnetic_z(b), params(1.0), s);
  const double r = std::sqrt(3.0) / b;
  EXPECT_NEAR(out.u[1], std::sqrt(3.0) * std::cos(b * s), 1e-14);
  EXPECT_NEAR(out.u[2], -std::sqrt(3.0) * std::sin(b * s), 1e-14);
  EXPECT_NEAR(out.x[0], 2.0 * s, 1e-14);
  EXPECT_NEAR(out.x[1], r * std::sin(b * s), 1e-14);
  EXPECT_NEAR(out.x[2], r * (std::cos(b * s) - 1.0), 1e-14);
}

TEST(BMTTest, AnalyticSpinFollowsVelocityForNormalMoment) {
  // mu' = e: the rest-frame spin keeps its angle to the velocity, so an
  // initially longitudinal spin stays longitudinal.
  const BMTState st = planar_state(2.0);
  const double t = 2.0;
  const BMTState out = analytic_constant_field(st, magnetic_z(1.0), params(1.0), t);
  const double ub = std::sqrt(3.0);
  const Vector4 s = spin_vector(out);
  const Vector4 expected(ub, 2.0 * std::cos(t), -2.0 * std::sin(t), 0);
  EXPECT_LT((s - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BMTTest, IntegratorMatchesOracle) {
  const ModelParams p = params(1.2);
  const BMTState st = planar_state(2.0);
  IntegratorSettings s;
  s.step = 2.0 * std::numbers::pi / 1000.0;
  s.steps = 2000;
  s.record_every = 500;
  const auto cfg = FieldConfig::constant({0, 0, 0}, {0, 0, 1});
  const BMTTrajectory traj = integrate_bmt(st, cfg, p, s);
  std::vector<double> times;
  for (const auto& sample : traj) times.push_back(sample.state.s);
  const std::vector<BMTState> ref = analytic_constant_field(st, magnetic_z(1.0), p, times);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    EXPECT_LT(max_deviation(traj[i].state, ref[i]), 3e-9);
  }
}

TEST(BMTTest, FourthOrderConvergence) {
  const ModelParams p = params(1.2);
  const BMTState st = planar_state(2.0);
  const auto cfg = FieldConfig::constant({0, 0, 0}, {0, 0, 1});
  const BMTState ref = analytic_constant_field(st, magnetic_z(1.0), p, 3.0);
  double err[2];
  for (int k = 0; k < 2; ++k) {
    IntegratorSettings s;
    s.steps = 100 << k;
    s.step = 3.0 / static_cast<double>(s.steps);
    err[k] = max_deviation(integrate_bmt(st, cfg, p, s).back().state, ref);
  }
  EXPECT_GT(err[0] / err[1], 12.0);
  EXPECT_LT(err[0] / err[1], 20.0);
}

TEST(BMTTest, InvariantsConserved) {
  const ModelParams p = params(1.2);
  const BMTState st = planar_state(1.5);
  const auto cfg = FieldConfig::constant({0.1, 0.0, 0.05}, {0.2, 0.3, 1.0});
  IntegratorSettings s;
  s.step = 1e-2;
  s.steps = 500;
  const BMTTrajectory traj = integrate_bmt(st, cfg, p, s);
  for (const auto& sample : traj) {
    EXPECT_NEAR(sample.inv.uu, 1.0, 1e-8);
    EXPECT_LT(sample.inv.us_max, 1e-8);
    EXPECT_NEAR(sample.inv.ss, traj.front().inv.ss, 1e-8);
  }
}

TEST(BMTTest, ZeroFieldHasNoDrift) {
  IntegratorSettings s;
  s.steps = 100;
  const BMTTrajectory traj = integrate_bmt(planar_state(1.5), FieldConfig::zero(), params(1.0), s);
  for (const auto& sample : traj) {
    EXPECT_EQ(sample.state.u, traj.front().state.u);
    EXPECT_EQ(sample.state.spin, traj.front().state.spin);
  }
}

TEST(BMTTest, RenormalizationKeepsUnitVelocity) {
  IntegratorSettings s;
  s.step = 0.2;
  s.steps = 100;
  const auto cfg = FieldConfig::constant({0, 0, 0}, {0, 0, 1});
  const BMTTrajectory traj = integrate_bmt(planar_state(2.0), cfg, params(1.0), s, true);
  EXPECT_NEAR(traj.back().inv.uu, 1.0, 1e-14);
}

TEST(BMTTest, AnomalousPrecessionRate) {
  // Relative to the velocity the rest-frame spin turns at -(mu' - e) gamma B / m
  // per unit proper time.
  const double gamma = 2.0;
  const auto cfg = FieldConfig::constant({0, 0, 0}, {0, 0, 1});
  IntegratorSettings s;
  s.step = 2.0 * std::numbers::pi / 1000.0;
  s.steps = 3000;
  s.record_every = 10;
  for (double mu_prime : {1.0, 1.1, 0.8}) {
    const BMTTrajectory traj = integrate_bmt(planar_state(gamma), cfg, params(mu_prime), s);
    EXPECT_NEAR(anomalous_precession(traj), -(mu_prime - 1.0) * gamma, 1e-7);
  }
}

TEST(BMTTest, PrecessionDiagnosticsRejectBadInput) {
  BMTTrajectory traj(2);
  traj[0].state.u = Vector4(1.5, 0, 0, std::sqrt(1.25));
  traj[1].state = traj[0].state;
  EXPECT_THROW(anomalous_precession(traj), DiagnosticError);
  EXPECT_THROW(spin_velocity_angles(traj, 4), std::invalid_argument);
  EXPECT_THROW(anomalous_precession(BMTTrajectory(1)), DiagnosticError);
}

}  // namespace
}  // namespace gbmt
