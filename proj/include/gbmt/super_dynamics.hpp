#pragma once

// Grassmann-valued equations of motion of a spinning charged particle with
// anomalous moment, constrained by xi_mu xdot^mu = 0 through a multiplier
// lambda:
//
//   m xddot^mu = e F^{mu nu} xdot_nu + (mu'/2m) d^mu F^{rho sigma} S_{rho sigma}
//                - lambdadot xi^mu
//   xidot^mu   = (mu'/m) F^{mu nu} xi_nu - 2 lambda xdot^mu
//   lambda (xdot.xdot) = (mu'-e)/2m F^{mu nu} xdot_mu xi_nu
//
// with S_{mu nu} = 1/2 xi_mu xi_nu.  lambda is Grassmann-odd.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbmt/fields.hpp"
#include "gbmt/grassmann.hpp"

namespace gbmt {

struct ModelParams {
  double mass = 1.0;
  double charge = 1.0;
  double mu_prime = 1.0;

  // Magnetic moment mu'/2m.
  double moment() const { return mu_prime / (2.0 * mass); }
  // Throws ConfigurationError unless mass > 0.
  void validate() const;
};

// standard: the equations above as written, without the -lambda xidot^mu
//   term in the x-equation.
// euler_lagrange: the complete Euler-Lagrange system of the constrained
//   action.  The x-equation keeps the extra -lambda xidot^mu term and lambda
//   solves lambda (xdot.xdot - (mu'/m^2) F^{mu nu} S_{mu nu})
//   = (mu'-e)/2m F^{mu nu} xdot_mu xi_nu, which keeps the constraint exact.
//   Both forms agree at lowest Grassmann degree.
enum class EquationForm { standard, euler_lagrange };

std::string to_string(EquationForm f);
EquationForm equation_form_from_string(const std::string& s);

struct SuperState {
  EvenVector4 x;
  EvenVector4 v;
  OddVector4 xi;
  double s = 0.0;

  int n_generators() const { return x[0].n_generators(); }
  // Throws DomainError when x, v are not even or xi not odd.
  void validate() const;
};

class LightlikeVelocityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(long step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

// Minkowski product a_mu b^mu, factors kept in the given order.
GrassmannNumber minkowski_dot(const GrassmannVector4& a, const GrassmannVector4& b);

// S^{mu nu} = 1/2 xi^mu xi^nu (upper indices).
GrassmannTensor2 spin_tensor(const OddVector4& xi);

// xi_mu xdot^mu
GrassmannNumber constraint_value(const SuperState& st);

GrassmannNumber lambda_solve(const SuperState& st, const FieldConfig& cfg, const ModelParams& p,
                             EquationForm form = EquationForm::standard);

struct SuperDerivative {
  EvenVector4 dx;
  EvenVector4 dv;
  OddVector4 dxi;
  GrassmannNumber lambda;
  GrassmannNumber lambda_dot;
  int fixed_point_passes = 0;
};

// lambdadot is the proper-time derivative of the multiplier along the flow.
// It depends on xddot, which depends on lambdadot through a term carrying an
// extra xi; the iteration from lambdadot = 0 therefore terminates exactly.
SuperDerivative eom_rhs(const SuperState& st, const FieldConfig& cfg, const ModelParams& p,
                        EquationForm form = EquationForm::standard);

struct IntegratorSettings {
  double step = 1e-3;
  long steps = 1000;
  long record_every = 1;

  void validate() const;
};

struct SuperSample {
  SuperState state;
  GrassmannNumber lambda;
  GrassmannNumber constraint;
};

using SuperTrajectory = std::vector<SuperSample>;

// Classical RK4 on every Grassmann coefficient.  Records step 0, every
// record_every-th step, and the final step.
SuperTrajectory integrate_super(const SuperState& st0, const FieldConfig& cfg,
                                const ModelParams& p, const IntegratorSettings& settings,
                                EquationForm form = EquationForm::standard);

// One RK4 step.
SuperState rk4_step(const SuperState& st, double h, const FieldConfig& cfg, const ModelParams& p,
                    EquationForm form);

// xi^mu(0) = sum_a c_a^mu theta_a, with c_a given in xi_coefficients[a].
SuperState make_super_state(int n_generators, const Vector4& x0, const Vector4& u0,
                            const std::vector<Vector4>& xi_coefficients);

// 1/2 (c1 c2^T - c2 c1^T): the theta_1 theta_2 coefficient of 1/2 xi^mu xi^nu.
Matrix4 spin_from_xi_coefficients(const Vector4& c1, const Vector4& c2);

inline constexpr Mask kLeadingPair = 0b11;

struct ReducedSample {
  double s = 0.0;
  Vector4 x;
  Vector4 u;
  Matrix4 spin;  // S^{mu nu}, coefficient of the chosen generator pair
  // Lowest Grassmann degree of each xi^mu; empty when the component vanishes.
  std::array<std::optional<int>, 4> xi_degree;
};

ReducedSample underline_state(const SuperState& st, Mask pair = kLeadingPair);
std::vector<ReducedSample> underline_trajectory(const SuperTrajectory& traj,
                                                Mask pair = kLeadingPair);

}  // namespace gbmt
