#include "gbmt/super_dynamics.hpp"

#include <cmath>
#include <random>

#include "gbmt/bmt.hpp"
#include "gtest/gtest.h"

namespace gbmt {
namespace {

constexpr int kN = 4;

ModelParams params(double mu_prime) {
  ModelParams p;
  p.mu_prime = mu_prime;
  return p;
}

// A_2 = -(x^1 + 0.05 (x^1)^2): magnetic field along z growing with x^1.
FieldConfig graded_field() {
  std::array<Polynomial4, 4> a;
  a[2].add_term({0, 1, 0, 0}, -1.0).add_term({0, 2, 0, 0}, -0.05);
  return FieldConfig::from_potential(a);
}

Vector4 boost_x(double gamma) { return Vector4(gamma, std::sqrt(gamma * gamma - 1.0), 0, 0); }

// Random unit timelike u and spacelike vectors c1, c2 orthogonal to it.
struct RandomKinematics {
  Vector4 u;
  Vector4 c1;
  Vector4 c2;
};

RandomKinematics random_kinematics(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-0.6, 0.6);
  RandomKinematics k;
  Eigen::Vector3d w(dist(rng), dist(rng), dist(rng));
  k.u << std::sqrt(1.0 + w.squaredNorm()), w;
  auto orthogonalize = [&](Vector4 c) { return Vector4(c - minkowski_dot(c, k.u) * k.u); };
  k.c1 = orthogonalize(Vector4(dist(rng), dist(rng), dist(rng), dist(rng)));
  k.c2 = orthogonalize(Vector4(dist(rng), dist(rng), dist(rng), dist(rng)));
  return k;
}

SuperState random_state(std::mt19937_64& rng, int n = kN) {
  const RandomKinematics k = random_kinematics(rng);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  return make_super_state(n, Vector4(dist(rng), dist(rng), dist(rng), dist(rng)), k.u,
                          {k.c1, k.c2});
}

double max_abs(const GrassmannVector4& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, c.max_abs());
  return m;
}

TEST(SuperDynamicsTest, MultiplierHandExample) {
  // B along z, v = (2, sqrt3, 0, 0), xi = theta_1 e_y:
  // F_{mu nu} v^mu xi^nu = F_{12} v^1 xi^2 = -sqrt3 theta_1.
  const FieldConfig cfg = FieldConfig::constant({0, 0, 0}, {0, 0, 1});
  const SuperState st = make_super_state(kN, Vector4::Zero(), boost_x(2.0), {Vector4(0, 0, 1, 0)});
  const GrassmannNumber lambda = lambda_solve(st, cfg, params(1.2));
  const GrassmannNumber expected = (0.1 * -std::sqrt(3.0)) * GrassmannNumber::generator(kN, 0);
  EXPECT_TRUE(approx_equal(lambda, expected, 1e-15));
}

TEST(SuperDynamicsTest, MultiplierVanishesWithoutAnomaly) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const SuperState st = random_state(rng);
    for (const auto form : {EquationForm::standard, EquationForm::euler_lagrange}) {
      const SuperDerivative d = eom_rhs(st, graded_field(), params(1.0), form);
      EXPECT_TRUE(d.lambda.is_zero());
      EXPECT_TRUE(d.lambda_dot.is_zero());
    }
  }
}

TEST(SuperDynamicsTest, LightlikeVelocityRejected) {
  const SuperState st = make_super_state(kN, Vector4::Zero(), Vector4(1, 1, 0, 0), {});
  EXPECT_THROW(lambda_solve(st, FieldConfig::zero(), params(1.2)), LightlikeVelocityError);
}

TEST(SuperDynamicsTest, StateParityChecked) {
  SuperState st = make_super_state(kN, Vector4::Zero(), Vector4(1, 0, 0, 0), {});
  st.xi[1] = GrassmannNumber::scalar(kN, 1.0);
  EXPECT_THROW(st.validate(), DomainError);
  EXPECT_THROW(make_super_state(2, Vector4::Zero(), Vector4(1, 0, 0, 0),
                                {Vector4::Zero(), Vector4::Zero(), Vector4::Zero()}),
               ConfigurationError);
}

TEST(SuperDynamicsTest, FreeParticle) {
  const SuperState st =
      make_super_state(kN, Vector4(0, 1, 2, 3), boost_x(1.5), {Vector4(0, 0, 1, 0)});
  const SuperDerivative d = eom_rhs(st, FieldConfig::zero(), params(1.2));
  EXPECT_EQ(max_abs(d.dv), 0.0);
  EXPECT_EQ(max_abs(d.dxi), 0.0);
  EXPECT_TRUE(d.lambda.is_zero());
}

TEST(SuperDynamicsTest, ConstraintRateVanishes) {
  // d/ds (xi . v) = xidot . v + xi . vdot on arbitrary states, including
  // ones off the constraint surface.
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  for (const auto form : {EquationForm::standard, EquationForm::euler_lagrange}) {
    for (const FieldConfig& cfg :
         {FieldConfig::constant({0.3, -0.2, 0.1}, {0.5, 1.0, -0.4}), graded_field()}) {
      for (int trial = 0; trial < 10; ++trial) {
        SuperState st = random_state(rng);
        for (auto& c : st.xi) c.add_scaled(dist(rng), GrassmannNumber::generator(kN, 2));
        for (auto& c : st.v) c.add_scaled(dist(rng), GrassmannNumber::monomial(kN, 0b0101, 1.0));
        const SuperDerivative d = eom_rhs(st, cfg, params(1.2), form);
        const GrassmannNumber rate = minkowski_dot(d.dxi, st.v) + minkowski_dot(st.xi, d.dv);
        EXPECT_LT(rate.max_abs(), 1e-12) << to_string(form);
      }
    }
  }
}

TEST(SuperDynamicsTest, LambdaDotMatchesFiniteDifference) {
  std::mt19937_64 rng(3);
  const double h = 1e-3;
  for (const auto form : {EquationForm::standard, EquationForm::euler_lagrange}) {
    const FieldConfig cfg = graded_field();
    const ModelParams p = params(1.3);
    const SuperState st = random_state(rng);
    const SuperDerivative d = eom_rhs(st, cfg, p, form);
    const GrassmannNumber ahead = lambda_solve(rk4_step(st, h, cfg, p, form), cfg, p, form);
    const GrassmannNumber behind = lambda_solve(rk4_step(st, -h, cfg, p, form), cfg, p, form);
    const GrassmannNumber fd = (ahead - behind) * (1.0 / (2.0 * h));
    EXPECT_TRUE(approx_equal(fd, d.lambda_dot, 1e-6)) << to_string(form);
    EXPECT_LE(d.fixed_point_passes, kN + 2);
  }
}

TEST(SuperDynamicsTest, SpinRateMatchesReducedEquation) {
  // Lowest-degree part of d/ds (1/2 xi^mu xi^nu) against the reduced spin rate.
  std::mt19937_64 rng(4);
  const FieldConfig cfg = FieldConfig::constant({0.4, -0.1, 0.3}, {0.2, -0.7, 1.1});
  const Matrix4 f = field_tensor_real(cfg, Vector4::Zero());
  for (double mu_prime : {0.0, 1.0, 1.2, 2.5}) {
    const ModelParams p = params(mu_prime);
    for (int trial = 0; trial < 25; ++trial) {
      const RandomKinematics k = random_kinematics(rng);
      const SuperState st = make_super_state(kN, Vector4::Zero(), k.u, {k.c1, k.c2});
      const SuperDerivative d = eom_rhs(st, cfg, p);
      BMTState reduced;
      reduced.u = k.u;
      reduced.spin = spin_from_xi_coefficients(k.c1, k.c2);
      const Matrix4 expected = bmt_rhs(reduced, f, p).dspin;
      for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
          const GrassmannNumber rate = 0.5 * (d.dxi[mu] * st.xi[nu] + st.xi[mu] * d.dxi[nu]);
          EXPECT_NEAR(rate.coeff(kLeadingPair), expected(mu, nu), 1e-12);
        }
      }
    }
  }
}

TEST(SuperDynamicsTest, FormsAgreeAtLowestDegree) {
  std::mt19937_64 rng(5);
  const SuperState st = random_state(rng);
  const SuperDerivative a = eom_rhs(st, graded_field(), params(1.2), EquationForm::standard);
  const SuperDerivative b = eom_rhs(st, graded_field(), params(1.2), EquationForm::euler_lagrange);
  for (int mu = 0; mu < 4; ++mu) {
    EXPECT_NEAR(a.dv[mu].body(), b.dv[mu].body(), 1e-15);
    EXPECT_TRUE(approx_equal(a.dxi[mu].grade(1), b.dxi[mu].grade(1), 1e-15));
  }
}

TEST(SuperDynamicsTest, ParityPreservedAlongFlow) {
  std::mt19937_64 rng(6);
  const SuperState st0 = random_state(rng);
  IntegratorSettings s;
  s.step = 1e-2;
  s.steps = 50;
  s.record_every = 10;
  const SuperTrajectory traj = integrate_super(st0, graded_field(), params(1.2), s);
  ASSERT_EQ(traj.size(), 6u);
  for (const auto& sample : traj) {
    EXPECT_NO_THROW(sample.state.validate());
    const Parity lp = sample.lambda.parity();
    EXPECT_TRUE(lp == Parity::odd || lp == Parity::zero);
  }
  EXPECT_DOUBLE_EQ(traj.back().state.s, 0.5);
}

TEST(SuperDynamicsTest, RecordsFinalStep) {
  IntegratorSettings s;
  s.step = 0.1;
  s.steps = 7;
  s.record_every = 3;
  const SuperState st0 = make_super_state(kN, Vector4::Zero(), Vector4(1, 0, 0, 0), {});
  const SuperTrajectory traj = integrate_super(st0, FieldConfig::zero(), params(1.0), s);
  ASSERT_EQ(traj.size(), 4u);  // steps 0, 3, 6, 7
  EXPECT_NEAR(traj.back().state.x[0].body(), 0.7, 1e-15);
}

TEST(SuperDynamicsTest, LightlikeAbortReportsStep) {
  IntegratorSettings s;
  const SuperState st0 = make_super_state(kN, Vector4::Zero(), Vector4(1, 1, 0, 0), {});
  try {
    integrate_super(st0, FieldConfig::zero(), params(1.2), s);
    FAIL() << "expected NumericalAbort";
  } catch (const NumericalAbort& e) {
    EXPECT_EQ(e.step(), 0);
  }
}

TEST(SuperDynamicsTest, VanishingSpinGivesLorentzMotion) {
  const FieldConfig cfg = FieldConfig::constant({0, 0, 0}, {0, 0, 1});
  const ModelParams p = params(1.2);
  IntegratorSettings s;
  s.step = 1e-2;
  s.steps = 300;
  s.record_every = 50;
  const SuperTrajectory traj =
      integrate_super(make_super_state(kN, Vector4::Zero(), boost_x(2.0), {}), cfg, p, s);
  BMTState b;
  b.u = boost_x(2.0);
  const BMTTrajectory ref = integrate_bmt(b, cfg, p, s);
  ASSERT_EQ(traj.size(), ref.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (int mu = 0; mu < 4; ++mu) {
      EXPECT_TRUE(approx_equal(traj[i].state.x[mu], GrassmannNumber::scalar(kN, ref[i].state.x[mu])));
      EXPECT_TRUE(approx_equal(traj[i].state.v[mu], GrassmannNumber::scalar(kN, ref[i].state.u[mu])));
      EXPECT_TRUE(traj[i].state.xi[mu].is_zero());
    }
  }
}

TEST(SuperDynamicsTest, UnderlineState) {
  const Vector4 c1(0, 1, 0, 0);
  const Vector4 c2(0, 0, 2, 0);
  const SuperState st = make_super_state(kN, Vector4(1, 2, 3, 4), Vector4(1, 0, 0, 0), {c1, c2});
  const ReducedSample r = underline_state(st);
  EXPECT_EQ(r.x, Vector4(1, 2, 3, 4));
  EXPECT_DOUBLE_EQ(r.spin(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(r.spin(2, 1), -1.0);
  EXPECT_EQ(r.spin, spin_from_xi_coefficients(c1, c2));
  EXPECT_FALSE(r.xi_degree[0].has_value());
  EXPECT_EQ(r.xi_degree[1], 1);
  EXPECT_THROW(underline_state(st, 0b1), ConfigurationError);
}

TEST(SuperDynamicsTest, EquationFormNames) {
  EXPECT_EQ(equation_form_from_string("standard"), EquationForm::standard);
  EXPECT_EQ(equation_form_from_string(to_string(EquationForm::euler_lagrange)),
            EquationForm::euler_lagrange);
  EXPECT_THROW(equation_form_from_string("newton"), ConfigurationError);
}

}  // namespace
}  // namespace gbmt
