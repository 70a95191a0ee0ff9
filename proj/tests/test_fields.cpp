#include "gbmt/fields.hpp"

#include <random>

#include "gbmt/metric.hpp"
#include "gtest/gtest.h"

namespace gbmt {
namespace {

constexpr int kN = 4;

// Direct Grassmann evaluation of sum_alpha c_alpha prod (x^mu)^alpha_mu.
// Even components commute, so this is the analytic extension; it uses no
// derivatives and serves as the oracle for the Taylor route.
GrassmannNumber direct_evaluate(const Polynomial4& p, const EvenVector4& x) {
  const int n = x[0].n_generators();
  GrassmannNumber sum(n);
  for (const auto& [e, c] : p.terms()) {
    GrassmannNumber t = GrassmannNumber::scalar(n, c);
    for (int mu = 0; mu < 4; ++mu) {
      for (int k = 0; k < e[mu]; ++k) t = t * x[mu];
    }
    sum += t;
  }
  return sum;
}

Polynomial4 random_polynomial(std::mt19937_64& rng, int max_degree) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Polynomial4 p;
  for (int a = 0; a <= max_degree; ++a) {
    for (int b = 0; a + b <= max_degree; ++b) {
      for (int c = 0; a + b + c <= max_degree; ++c) {
        for (int d = 0; a + b + c + d <= max_degree; ++d) p.add_term({a, b, c, d}, dist(rng));
      }
    }
  }
  return p;
}

FieldConfig random_field(std::mt19937_64& rng, int max_degree = 3) {
  std::array<Polynomial4, 4> a;
  for (auto& c : a) c = random_polynomial(rng, max_degree);
  return FieldConfig::from_potential(a);
}

EvenVector4 random_even_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  EvenVector4 x = zero_vector(n);
  for (auto& c : x) {
    for (Mask m = 0; m < c.size(); ++m) {
      if (degree(m) % 2 == 0) c.coeff(m) = dist(rng);
    }
  }
  return x;
}

TEST(PolynomialTest, Differentiation) {
  Polynomial4 p;
  p.add_term({2, 1, 0, 0}, 3.0).add_term({0, 0, 0, 1}, -1.0);
  Polynomial4 dp0;
  dp0.add_term({1, 1, 0, 0}, 6.0);
  EXPECT_EQ(p.derivative(0), dp0);
  EXPECT_TRUE(p.derivative(2).empty());
  EXPECT_EQ(p.total_degree(), 3);
  EXPECT_DOUBLE_EQ(p.evaluate({2.0, 0.5, 0.0, 4.0}), 3.0 * 4.0 * 0.5 - 4.0);
}

TEST(FieldsTest, ZeroPotentialGivesZeroField) {
  std::mt19937_64 rng(1);
  const EvenVector4 x = random_even_point(rng, kN);
  for (const auto& row : field_tensor(FieldConfig::zero(), x)) {
    for (const auto& c : row) EXPECT_TRUE(c.is_zero());
  }
}

TEST(FieldsTest, SymmetricGaugeMagneticField) {
  // A^mu = (0, -B y/2, B x/2, 0), i.e. A_1 = B y/2, A_2 = -B x/2.
  const double b = 1.7;
  std::array<Polynomial4, 4> a;
  a[1] = Polynomial4::coordinate(2, 0.5 * b);
  a[2] = Polynomial4::coordinate(1, -0.5 * b);
  const FieldConfig cfg = FieldConfig::from_potential(a);
  const Matrix4 f = field_tensor_real(cfg, Vector4(0.3, -1.0, 2.0, 0.7));
  Matrix4 expected = Matrix4::Zero();
  expected(1, 2) = -b;  // F_{12} = d_1 A_2 - d_2 A_1 = -B/2 - B/2
  expected(2, 1) = b;
  EXPECT_EQ(f, expected);

  // The constant-field constructor uses the same conventions.
  EXPECT_EQ(field_tensor_real(FieldConfig::constant({0, 0, 0}, {0, 0, b}), Vector4::Zero()),
            expected);
}

TEST(FieldsTest, ConstantElectricField) {
  const Matrix4 f = field_tensor_real(FieldConfig::constant({1.0, 2.0, 3.0}, {0, 0, 0}),
                                      Vector4(1, 2, 3, 4));
  for (int i = 1; i <= 3; ++i) {
    EXPECT_DOUBLE_EQ(f(0, i), i);  // F_{0i} = E^i
    EXPECT_DOUBLE_EQ(f(i, 0), -i);
  }
  const Matrix4 g = field_tensor_real(FieldConfig::constant({0, 0, 0}, {1.0, 2.0, 3.0}),
                                      Vector4(1, 2, 3, 4));
  EXPECT_DOUBLE_EQ(g(2, 3), -1.0);  // F_{23} = -B^1
  EXPECT_DOUBLE_EQ(g(3, 1), -2.0);  // F_{31} = -B^2
  EXPECT_DOUBLE_EQ(g(1, 2), -3.0);
}

TEST(FieldsTest, TaylorRouteMatchesDirectEvaluation) {
  std::mt19937_64 rng(2);
  for (int n : {2, 4, 6}) {
    for (int trial = 0; trial < 10; ++trial) {
      const FieldConfig cfg = random_field(rng);
      const EvenVector4 x = random_even_point(rng, n);
      const GrassmannTensor2 f = field_tensor(cfg, x);
      for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
          EXPECT_TRUE(approx_equal(f[mu][nu], direct_evaluate(cfg.tensor().lower[mu][nu], x),
                                   1e-12));
        }
      }
      const GrassmannVector4 a = potential_at(cfg, x);
      for (int mu = 0; mu < 4; ++mu) {
        EXPECT_TRUE(approx_equal(a[mu], direct_evaluate(cfg.potential()[mu], x), 1e-12));
      }
    }
  }
}

TEST(FieldsTest, RealPointMatchesRealEvaluationExactly) {
  std::mt19937_64 rng(3);
  const FieldConfig cfg = random_field(rng);
  const Vector4 x(0.2, -0.4, 1.1, 0.9);
  const GrassmannTensor2 f = field_tensor(cfg, real_vector(kN, x));
  const Matrix4 fr = field_tensor_real(cfg, x);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      EXPECT_EQ(f[mu][nu], GrassmannNumber::scalar(kN, fr(mu, nu)));
    }
  }
}

TEST(FieldsTest, Antisymmetry) {
  std::mt19937_64 rng(4);
  const FieldConfig cfg = random_field(rng);
  const GrassmannTensor2 f = field_tensor(cfg, random_even_point(rng, kN));
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) EXPECT_TRUE((f[mu][nu] + f[nu][mu]).is_zero());
  }
}

TEST(FieldsTest, LinearInPotential) {
  std::mt19937_64 rng(5);
  const FieldConfig a = random_field(rng);
  const FieldConfig b = random_field(rng);
  FieldConfig combo = a;
  combo *= 2.0;
  FieldConfig scaled_b = b;
  scaled_b *= -0.5;
  combo += scaled_b;
  const EvenVector4 x = random_even_point(rng, kN);
  const GrassmannTensor2 fa = field_tensor(a, x);
  const GrassmannTensor2 fb = field_tensor(b, x);
  const GrassmannTensor2 fc = field_tensor(combo, x);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      EXPECT_TRUE(approx_equal(fc[mu][nu], 2.0 * fa[mu][nu] - 0.5 * fb[mu][nu], 1e-12));
    }
  }
}

TEST(FieldsTest, NonEvenPointRejected) {
  EvenVector4 x = zero_vector(kN);
  x[2] = GrassmannNumber::generator(kN, 0);
  EXPECT_THROW(field_tensor(FieldConfig::zero(), x), DomainError);
}

TEST(FieldsTest, DerivativeOfHomogeneousFieldsVanishes) {
  std::mt19937_64 rng(6);
  const EvenVector4 x = random_even_point(rng, kN);
  for (const FieldConfig& cfg :
       {FieldConfig::constant({0.1, 0.2, 0.3}, {1, 2, 3}), random_field(rng, 1)}) {
    for (const auto& slice : field_derivative(cfg, x)) {
      for (const auto& row : slice) {
        for (const auto& c : row) EXPECT_TRUE(c.is_zero());
      }
    }
  }
}

TEST(FieldsTest, DerivativeOfLinearField) {
  // A_2 = -(x^1 + 0.05 (x^1)^2), A_0 = 0.3 x^1 x^3 give
  //   F_{01} = -d1 A0 = -0.3 x^3,  F_{03} = -d3 A0 = -0.3 x^1,
  //   F_{12} = d1 A2 = -1 - 0.1 x^1.
  std::array<Polynomial4, 4> a;
  a[2].add_term({0, 1, 0, 0}, -1.0).add_term({0, 2, 0, 0}, -0.05);
  a[0].add_term({0, 1, 0, 1}, 0.3);
  const FieldConfig cfg = FieldConfig::from_potential(a);
  std::mt19937_64 rng(7);
  const GrassmannTensor3 d = field_derivative(cfg, random_even_point(rng, kN));
  auto raised = [](int r, int s) { return metric::eta(r) * metric::eta(s); };
  GrassmannTensor3 expected;
  for (auto& slice : expected) slice = zero_tensor(kN);
  auto put = [&](int k, int r, int s, double v) {
    expected[k][r][s] = GrassmannNumber::scalar(kN, raised(r, s) * v);
    expected[k][s][r] = GrassmannNumber::scalar(kN, -raised(r, s) * v);
  };
  put(1, 1, 2, -0.1);
  put(3, 0, 1, -0.3);
  put(1, 0, 3, -0.3);
  for (int k = 0; k < 4; ++k) {
    for (int r = 0; r < 4; ++r) {
      for (int s = 0; s < 4; ++s) EXPECT_TRUE(approx_equal(d[k][r][s], expected[k][r][s], 1e-14));
    }
  }
}

TEST(FieldsTest, MaxwellResidualVanishesForPotentials) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const FieldConfig cfg = random_field(rng);
    const GrassmannVector4 r = maxwell_residual(cfg, random_even_point(rng, kN));
    for (const auto& c : r) EXPECT_LT(c.max_abs(), 1e-12);
  }
}

TEST(FieldsTest, MaxwellResidualOfConstantTensor) {
  FieldTensorPolynomial f;
  f.set(0, 1, Polynomial4::constant(2.0)).set(2, 3, Polynomial4::constant(-1.0));
  for (const auto& c : maxwell_residual(f, real_vector(kN, Vector4(1, 2, 3, 4)))) {
    EXPECT_TRUE(c.is_zero());
  }
}

TEST(FieldsTest, MaxwellResidualDetectsNonClosedField) {
  // F_{12} = x^3: eps^{0 3 1 2} d_3 F_{12} + eps^{0 3 2 1} d_3 F_{21} = 1 + 1.
  FieldTensorPolynomial f;
  f.set(1, 2, Polynomial4::coordinate(3));
  const GrassmannVector4 r = maxwell_residual(f, real_vector(kN, Vector4(0.5, 0.1, 0.2, 0.3)));
  EXPECT_EQ(r[0], GrassmannNumber::scalar(kN, 2.0));
  for (int mu = 1; mu < 4; ++mu) EXPECT_TRUE(r[mu].is_zero());
}

TEST(FieldsTest, PotentialDegreeLimit) {
  std::array<Polynomial4, 4> a;
  a[1].add_term({0, 0, 4, 0}, 1.0);
  EXPECT_THROW(FieldConfig::from_potential(a), ConfigurationError);
  EXPECT_NO_THROW(FieldConfig::from_potential(a, 4));
}

}  // namespace
}  // namespace gbmt
