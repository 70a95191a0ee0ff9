#pragma once

// Electromagnetic backgrounds given by polynomial four-potentials A_mu(x).
// Field values at Grassmann-even points follow from the Taylor expansion
// about the body of the point, which terminates because the soul is nilpotent.

#include <array>
#include <vector>

#include <Eigen/Core>

#include "gbmt/grassmann.hpp"
#include "gbmt/polynomial.hpp"

namespace gbmt {

using GrassmannVector4 = std::array<GrassmannNumber, 4>;
using EvenVector4 = GrassmannVector4;
using OddVector4 = GrassmannVector4;
using GrassmannTensor2 = std::array<std::array<GrassmannNumber, 4>, 4>;
using GrassmannTensor3 = std::array<GrassmannTensor2, 4>;

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

GrassmannVector4 zero_vector(int n_generators);
GrassmannTensor2 zero_tensor(int n_generators);
GrassmannVector4 real_vector(int n_generators, const Vector4& v);

// Precomputed soul powers n^beta of an even point x = x0 + n.
class GrassmannPoint {
 public:
  GrassmannPoint(const EvenVector4& x, int max_order);

  int n_generators() const { return n_; }
  const std::array<double, 4>& body() const { return body_; }

  struct SoulPower {
    Exponents beta;
    GrassmannNumber value;  // prod_mu (n^mu)^{beta_mu} / beta!
  };
  const std::vector<SoulPower>& soul_powers() const { return powers_; }

 private:
  int n_;
  std::array<double, 4> body_{};
  std::vector<SoulPower> powers_;
};

// p(x0 + n) = sum_beta (d^beta p)(x0) n^beta / beta!
GrassmannNumber evaluate(const Polynomial4& p, const GrassmannPoint& x);

// F_{mu nu} as polynomials (lower indices).  Built from a potential, or given
// directly, possibly violating the homogeneous Maxwell equations.
struct FieldTensorPolynomial {
  std::array<std::array<Polynomial4, 4>, 4> lower;

  static FieldTensorPolynomial from_potential(const std::array<Polynomial4, 4>& a_lower);
  // Sets F_{mu nu} = p and F_{nu mu} = -p.
  FieldTensorPolynomial& set(int mu, int nu, const Polynomial4& p);
  int total_degree() const;
};

class FieldConfig {
 public:
  static constexpr int kDefaultMaxDegree = 3;

  FieldConfig();

  static FieldConfig zero() { return FieldConfig(); }
  // Homogeneous field: F_{0i} = E^i, F_{ij} = -eps_{ijk} B^k, realised by the
  // potential A_mu = -1/2 F_{mu nu} x^nu.
  static FieldConfig constant(const std::array<double, 3>& e, const std::array<double, 3>& b);
  static FieldConfig constant(const Matrix4& f_lower);
  // a_lower[mu] = A_mu.  Throws ConfigurationError if any component has total
  // degree above max_degree.
  static FieldConfig from_potential(const std::array<Polynomial4, 4>& a_lower,
                                    int max_degree = kDefaultMaxDegree);

  const std::array<Polynomial4, 4>& potential() const { return potential_; }
  const FieldTensorPolynomial& tensor() const { return tensor_; }
  const Polynomial4& tensor_derivative(int kappa, int mu, int nu) const {
    return d_tensor_[kappa][mu][nu];
  }
  int potential_degree() const { return degree_; }
  bool is_homogeneous() const;

  FieldConfig& operator+=(const FieldConfig& o);
  FieldConfig& operator*=(double s);

 private:
  void rebuild();

  std::array<Polynomial4, 4> potential_;
  FieldTensorPolynomial tensor_;
  std::array<std::array<std::array<Polynomial4, 4>, 4>, 4> d_tensor_;
  int degree_ = 0;
};

GrassmannVector4 potential_at(const FieldConfig& cfg, const EvenVector4& x);

// F_{mu nu}(x), lower indices.
GrassmannTensor2 field_tensor(const FieldConfig& cfg, const EvenVector4& x);
// d_kappa F^{rho sigma}(x), indexed [kappa][rho][sigma]; rho, sigma raised.
GrassmannTensor3 field_derivative(const FieldConfig& cfg, const EvenVector4& x);

struct FieldSample {
  GrassmannTensor2 f_lower;   // F_{mu nu}
  GrassmannTensor3 df_lower;  // d_kappa F_{mu nu}
  bool homogeneous = false;   // df identically zero
};
FieldSample sample_field(const FieldConfig& cfg, const EvenVector4& x);

// Real-point evaluation, F_{mu nu}.
Matrix4 field_tensor_real(const FieldConfig& cfg, const Vector4& x);

// eps^{mu nu rho sigma} d_nu F_{rho sigma}
GrassmannVector4 maxwell_residual(const FieldTensorPolynomial& f, const EvenVector4& x);
GrassmannVector4 maxwell_residual(const FieldConfig& cfg, const EvenVector4& x);

GrassmannTensor2 raise_indices(const GrassmannTensor2& f_lower);

}  // namespace gbmt
