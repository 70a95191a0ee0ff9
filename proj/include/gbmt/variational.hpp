#pragma once

// Discretised action of the spinning particle,
//
//   L = m/2 xdot.xdot - 1/4 xi^mu xidot_mu + e A_mu xdot^mu
//       + (mu'/2m) F^{mu nu} S_{mu nu} + lambda xi_mu xdot^mu,
//
// on a uniform grid (midpoint rule: averages for values, forward differences
// for derivatives).  Used to check that integrated trajectories are
// stationary points.

#include <array>
#include <vector>

#include "gbmt/fields.hpp"
#include "gbmt/super_dynamics.hpp"

namespace gbmt {

struct DiscretePath {
  double s0 = 0.0;
  double h = 0.0;
  std::vector<EvenVector4> x;
  std::vector<OddVector4> xi;
  std::vector<GrassmannNumber> lambda;  // multiplier at each node

  std::size_t nodes() const { return x.size(); }
  int n_generators() const { return x.front()[0].n_generators(); }
  void validate() const;
};

// Requires uniformly spaced samples; lambda is taken from each sample.
DiscretePath path_from_trajectory(const SuperTrajectory& traj);

// Recomputes lambda at every node from central-difference velocities.
void recompute_multiplier(DiscretePath& path, const FieldConfig& cfg, const ModelParams& p,
                          EquationForm form = EquationForm::standard);

GrassmannNumber action(const DiscretePath& path, const FieldConfig& cfg, const ModelParams& p);

// Per-node real perturbation amplitudes.  dx is added to x (even direction);
// dxi multiplies a fresh generator and is added to xi (odd direction).
// Either may be empty.
struct PathVariation {
  std::vector<std::array<double, 4>> dx;
  std::vector<std::array<double, 4>> dxi;
};

// Symmetric difference quotient (S[x + t dx] - S[x - t dx]) / 2t.
GrassmannNumber even_difference_quotient(const DiscretePath& path, const FieldConfig& cfg,
                                         const ModelParams& p,
                                         const std::vector<std::array<double, 4>>& dx, double t);

struct DirectionalDerivative {
  // d/dt S[x + t dx] at t = 0, Richardson-extrapolated from t = h_dir, h_dir/2.
  GrassmannNumber even;
  // Coefficient multiplying the fresh generator in S[xi + dxi theta_new].
  GrassmannNumber odd;
  double magnitude = 0.0;  // max |coefficient| over both
};

DirectionalDerivative directional_derivative(const DiscretePath& path, const FieldConfig& cfg,
                                             const ModelParams& p,
                                             const PathVariation& variation, double h_dir);

double stationarity_residual(const DiscretePath& path, const FieldConfig& cfg,
                             const ModelParams& p, const PathVariation& variation,
                             double h_dir = 1e-3);

// Interior nodes 1..M-1: max over Grassmann coefficients of
// |m xddot_fd - m vdot| and |xidot_fd - xidot| with central differences.
std::vector<double> euler_lagrange_residual(const DiscretePath& path, const FieldConfig& cfg,
                                            const ModelParams& p,
                                            EquationForm form = EquationForm::standard);

}  // namespace gbmt
