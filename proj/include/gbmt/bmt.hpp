#pragma once

// Reduced real-valued dynamics (lowest Grassmann degree):
//
//   m du^mu/ds     = e F^{mu nu} u_nu
//   m dS^{mu nu}/ds = mu' F^{rho[nu} S_rho^{ mu]}
//                   + (mu'-e) F^{rho sigma} u_rho S_sigma^{ [mu} u^{nu]}
//
// with A^{[mu nu]} = A^{mu nu} - A^{nu mu} (no factor 1/2).

#include <stdexcept>
#include <vector>

#include "gbmt/fields.hpp"
#include "gbmt/super_dynamics.hpp"

namespace gbmt {

struct BMTState {
  Vector4 x = Vector4::Zero();
  Vector4 u = Vector4::Zero();
  Matrix4 spin = Matrix4::Zero();  // S^{mu nu}
  double s = 0.0;
};

struct BMTDerivative {
  Vector4 dx;
  Vector4 du;
  Matrix4 dspin;
};

BMTDerivative bmt_rhs(const BMTState& st, const Matrix4& f_lower, const ModelParams& p);
BMTDerivative bmt_rhs(const BMTState& st, const FieldConfig& cfg, const ModelParams& p);

struct InvariantLog {
  double uu = 0.0;      // u.u
  double us_max = 0.0;  // max_nu |u_mu S^{mu nu}|
  double ss = 0.0;      // S_{mu nu} S^{mu nu}
};

InvariantLog invariants(const BMTState& st);

struct BMTSample {
  BMTState state;
  InvariantLog inv;
};

using BMTTrajectory = std::vector<BMTSample>;

// RK4; with renormalize the velocity is rescaled to u.u = 1 after each step.
BMTTrajectory integrate_bmt(const BMTState& st0, const FieldConfig& cfg, const ModelParams& p,
                            const IntegratorSettings& settings, bool renormalize = false);

// Constant-field reference solution.  u and x come from matrix exponentials;
// S is integrated with RK4 using the exact u(s), substeps no longer than
// max_substep.
inline constexpr double kOracleSubstep = 5e-5;

BMTState analytic_constant_field(const BMTState& st0, const Matrix4& f_lower,
                                 const ModelParams& p, double s,
                                 double max_substep = kOracleSubstep);
// Same, at increasing times (relative to st0.s), reusing the previous result.
std::vector<BMTState> analytic_constant_field(const BMTState& st0, const Matrix4& f_lower,
                                              const ModelParams& p,
                                              const std::vector<double>& times,
                                              double max_substep = kOracleSubstep);

// s^mu = -1/2 eps^{mu nu rho sigma} u_nu S_{rho sigma}
Vector4 spin_vector(const BMTState& st);
Vector4 spin_vector(const Vector4& u, const Matrix4& spin);
// Inverse of spin_vector for u.u = 1 and u.s = 0: S^{mu nu} = -eps^{mu nu rho sigma} u_rho s_sigma.
Matrix4 spin_tensor_from_vector(const Vector4& u, const Vector4& s);

double minkowski_dot(const Vector4& a, const Vector4& b);

class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rest-frame angle of the in-plane spin relative to the in-plane velocity
// direction, unwrapped along the trajectory.  axis is the spatial index (1..3)
// normal to the plane of motion.
std::vector<double> spin_velocity_angles(const BMTTrajectory& traj, int axis = 3);

// Least-squares slope of spin_velocity_angles against proper time.
double anomalous_precession(const BMTTrajectory& traj, int axis = 3);

}  // namespace gbmt
