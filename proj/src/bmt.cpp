#include "gbmt/bmt.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "gbmt/metric.hpp"

namespace gbmt {

using metric::eta;

double minkowski_dot(const Vector4& a, const Vector4& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

namespace {

const Matrix4& eta_matrix() {
  static const Matrix4 m = Vector4(1.0, -1.0, -1.0, -1.0).asDiagonal();
  return m;
}

}  // namespace

BMTDerivative bmt_rhs(const BMTState& st, const Matrix4& f_lower, const ModelParams& p) {
  const Matrix4& g = eta_matrix();
  const Matrix4 f_up = g * f_lower * g;
  const Vector4 u_low = g * st.u;
  const Matrix4 s_mixed = g * st.spin;  // S_rho^{ mu} at (rho, mu)
  const double m = p.mass;

  BMTDerivative d;
  d.dx = st.u;
  d.du = (p.charge / m) * (f_up * u_low);

  const Vector4 a = f_up.transpose() * u_low;  // a^sigma = F^{rho sigma} u_rho
  const Vector4 sa = s_mixed.transpose() * a;  // S_sigma^{ mu} a^sigma
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      double rot = 0.0;
      for (int rho = 0; rho < 4; ++rho) {
        rot += f_up(rho, nu) * s_mixed(rho, mu) - f_up(rho, mu) * s_mixed(rho, nu);
      }
      const double anomalous = sa[mu] * st.u[nu] - sa[nu] * st.u[mu];
      d.dspin(mu, nu) = (p.mu_prime * rot + (p.mu_prime - p.charge) * anomalous) / m;
    }
  }
  return d;
}

BMTDerivative bmt_rhs(const BMTState& st, const FieldConfig& cfg, const ModelParams& p) {
  return bmt_rhs(st, field_tensor_real(cfg, st.x), p);
}

InvariantLog invariants(const BMTState& st) {
  const Matrix4& g = eta_matrix();
  InvariantLog log;
  log.uu = minkowski_dot(st.u, st.u);
  const Vector4 us = st.spin.transpose() * (g * st.u);
  log.us_max = us.cwiseAbs().maxCoeff();
  const Matrix4 s_low = g * st.spin * g;
  log.ss = s_low.cwiseProduct(st.spin).sum();
  return log;
}

namespace {

BMTState advance(const BMTState& st, double h, const BMTDerivative& d) {
  BMTState out;
  out.x = st.x + h * d.dx;
  out.u = st.u + h * d.du;
  out.spin = st.spin + h * d.dspin;
  out.s = st.s + h;
  return out;
}

BMTState rk4(const BMTState& st, double h, const FieldConfig& cfg, const ModelParams& p) {
  const BMTDerivative k1 = bmt_rhs(st, cfg, p);
  const BMTDerivative k2 = bmt_rhs(advance(st, 0.5 * h, k1), cfg, p);
  const BMTDerivative k3 = bmt_rhs(advance(st, 0.5 * h, k2), cfg, p);
  const BMTDerivative k4 = bmt_rhs(advance(st, h, k3), cfg, p);
  BMTState out;
  out.x = st.x + (h / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  out.u = st.u + (h / 6.0) * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
  out.spin = st.spin + (h / 6.0) * (k1.dspin + 2.0 * k2.dspin + 2.0 * k3.dspin + k4.dspin);
  out.s = st.s + h;
  return out;
}

}  // namespace

BMTTrajectory integrate_bmt(const BMTState& st0, const FieldConfig& cfg, const ModelParams& p,
                            const IntegratorSettings& settings, bool renormalize) {
  settings.validate();
  p.validate();
  BMTTrajectory traj;
  BMTState st = st0;
  traj.push_back({st, invariants(st)});
  for (long i = 1; i <= settings.steps; ++i) {
    st = rk4(st, settings.step, cfg, p);
    st.s = st0.s + static_cast<double>(i) * settings.step;
    if (renormalize) {
      const double uu = minkowski_dot(st.u, st.u);
      if (uu > 0.0) st.u /= std::sqrt(uu);
    }
    if (i % settings.record_every == 0 || i == settings.steps) traj.push_back({st, invariants(st)});
  }
  return traj;
}

namespace {

// Advances S by RK4 over [0, ds] in n substeps with u propagated exactly.
Matrix4 evolve_spin(const Matrix4& f_lower, const ModelParams& p, const Matrix4& generator,
                    const Vector4& u_start, const Matrix4& spin_start, double ds,
                    double max_substep) {
  if (ds == 0.0) return spin_start;
  const long n = std::max(1L, static_cast<long>(std::ceil(std::abs(ds) / max_substep)));
  const double h = ds / static_cast<double>(n);
  const Matrix4 half = (0.5 * h * generator).exp();
  BMTState st;
  st.u = u_start;
  st.spin = spin_start;
  for (long i = 0; i < n; ++i) {
    const Vector4 u0 = st.u;
    const Vector4 u_mid = half * u0;
    const Vector4 u1 = half * u_mid;
    BMTState stage;
    stage.u = u0;
    stage.spin = st.spin;
    const Matrix4 k1 = bmt_rhs(stage, f_lower, p).dspin;
    stage.u = u_mid;
    stage.spin = st.spin + 0.5 * h * k1;
    const Matrix4 k2 = bmt_rhs(stage, f_lower, p).dspin;
    stage.spin = st.spin + 0.5 * h * k2;
    const Matrix4 k3 = bmt_rhs(stage, f_lower, p).dspin;
    stage.u = u1;
    stage.spin = st.spin + h * k3;
    const Matrix4 k4 = bmt_rhs(stage, f_lower, p).dspin;
    st.spin += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    st.u = u1;
  }
  return st.spin;
}

}  // namespace

std::vector<BMTState> analytic_constant_field(const BMTState& st0, const Matrix4& f_lower,
                                              const ModelParams& p,
                                              const std::vector<double>& times,
                                              double max_substep) {
  p.validate();
  // du/ds = generator u with generator = (e/m) eta F_lower (one index raised).
  const Matrix4 generator = (p.charge / p.mass) * (eta_matrix() * f_lower);
  std::vector<BMTState> out;
  out.reserve(times.size());
  double prev_t = 0.0;
  Matrix4 spin = st0.spin;
  Vector4 u_prev = st0.u;
  for (double t : times) {
    if (t < prev_t) throw std::invalid_argument("oracle times must be non-decreasing");
    BMTState st;
    st.s = st0.s + t;
    st.u = (t * generator).exp() * st0.u;
    // x(t) = x0 + int_0^t exp(generator s) ds u0, read off an augmented exponential.
    Eigen::Matrix<double, 5, 5> aug = Eigen::Matrix<double, 5, 5>::Zero();
    aug.topLeftCorner<4, 4>() = t * generator;
    aug.topRightCorner<4, 1>() = t * st0.u;
    const Eigen::Matrix<double, 5, 5> e = aug.exp();
    st.x = st0.x + e.topRightCorner<4, 1>();
    spin = evolve_spin(f_lower, p, generator, u_prev, spin, t - prev_t, max_substep);
    st.spin = spin;
    out.push_back(st);
    prev_t = t;
    u_prev = st.u;
  }
  return out;
}

BMTState analytic_constant_field(const BMTState& st0, const Matrix4& f_lower, const ModelParams& p,
                                 double s, double max_substep) {
  return analytic_constant_field(st0, f_lower, p, std::vector<double>{s}, max_substep).front();
}

Vector4 spin_vector(const Vector4& u, const Matrix4& spin) {
  const Matrix4& g = eta_matrix();
  const Vector4 u_low = g * u;
  const Matrix4 s_low = g * spin * g;
  Vector4 s = Vector4::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      for (int rho = 0; rho < 4; ++rho) {
        for (int sigma = 0; sigma < 4; ++sigma) {
          const int e = metric::levi_civita(mu, nu, rho, sigma);
          if (e != 0) s[mu] -= 0.5 * e * u_low[nu] * s_low(rho, sigma);
        }
      }
    }
  }
  return s;
}

Vector4 spin_vector(const BMTState& st) { return spin_vector(st.u, st.spin); }

Matrix4 spin_tensor_from_vector(const Vector4& u, const Vector4& s) {
  const Matrix4& g = eta_matrix();
  const Vector4 u_low = g * u;
  const Vector4 s_low = g * s;
  Matrix4 spin = Matrix4::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      for (int rho = 0; rho < 4; ++rho) {
        for (int sigma = 0; sigma < 4; ++sigma) {
          const int e = metric::levi_civita(mu, nu, rho, sigma);
          if (e != 0) spin(mu, nu) -= e * u_low[rho] * s_low[sigma];
        }
      }
    }
  }
  return spin;
}

std::vector<double> spin_velocity_angles(const BMTTrajectory& traj, int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be a spatial index 1..3");
  const int a = axis % 3 + 1;
  const int b = a % 3 + 1;
  std::vector<double> angles;
  angles.reserve(traj.size());
  double previous = 0.0;
  double offset = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const BMTState& st = traj[i].state;
    const double in_plane = std::hypot(st.u[a], st.u[b]);
    if (std::abs(st.u[axis]) > 1e-9 * std::max(1.0, in_plane)) {
      throw DiagnosticError("non-planar trajectory: u^" + std::to_string(axis) + " = " +
                            std::to_string(st.u[axis]) + " at sample " + std::to_string(i));
    }
    if (in_plane < 1e-12) throw DiagnosticError("velocity has no in-plane component");
    const double na = st.u[a] / in_plane;
    const double nb = st.u[b] / in_plane;
    const Vector4 sv = spin_vector(st);
    // Longitudinal lab component is gamma times the rest-frame one.
    const double along = (sv[a] * na + sv[b] * nb) / st.u[0];
    const double across = sv[b] * na - sv[a] * nb;
    if (std::hypot(along, across) < 1e-14) throw DiagnosticError("spin has no in-plane component");
    const double raw = std::atan2(across, along);
    if (i > 0) {
      double delta = raw + offset - previous;
      while (delta > std::numbers::pi) {
        offset -= 2.0 * std::numbers::pi;
        delta -= 2.0 * std::numbers::pi;
      }
      while (delta < -std::numbers::pi) {
        offset += 2.0 * std::numbers::pi;
        delta += 2.0 * std::numbers::pi;
      }
    }
    previous = raw + offset;
    angles.push_back(previous);
  }
  return angles;
}

double anomalous_precession(const BMTTrajectory& traj, int axis) {
  if (traj.size() < 2) throw DiagnosticError("need at least two samples to fit a rate");
  const std::vector<double> phi = spin_velocity_angles(traj, axis);
  const double n = static_cast<double>(phi.size());
  double ms = 0.0;
  double mp = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    ms += traj[i].state.s;
    mp += phi[i];
  }
  ms /= n;
  mp /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double ds = traj[i].state.s - ms;
    sxy += ds * (phi[i] - mp);
    sxx += ds * ds;
  }
  return sxy / sxx;
}

}  // namespace gbmt
