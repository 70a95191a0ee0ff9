#include "gbmt/super_dynamics.hpp"

#include <cmath>

#include "gbmt/metric.hpp"

namespace gbmt {

using metric::eta;

void ModelParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ConfigurationError("mass must be positive, got " + std::to_string(mass));
  }
  if (!std::isfinite(charge) || !std::isfinite(mu_prime)) {
    throw ConfigurationError("charge and mu_prime must be finite");
  }
}

std::string to_string(EquationForm f) {
  return f == EquationForm::standard ? "standard" : "euler_lagrange";
}

EquationForm equation_form_from_string(const std::string& s) {
  if (s == "standard") return EquationForm::standard;
  if (s == "euler_lagrange") return EquationForm::euler_lagrange;
  throw ConfigurationError("unknown equation form '" + s + "' (expected standard or euler_lagrange)");
}

void SuperState::validate() const {
  const int n = n_generators();
  for (int mu = 0; mu < 4; ++mu) {
    if (x[mu].n_generators() != n || v[mu].n_generators() != n || xi[mu].n_generators() != n) {
      throw ConfigurationError("state components live in different Grassmann algebras");
    }
    const Parity px = x[mu].parity();
    const Parity pv = v[mu].parity();
    const Parity pxi = xi[mu].parity();
    if (px == Parity::odd || px == Parity::mixed) {
      throw DomainError("x^" + std::to_string(mu) + " must be even, is " + to_string(px));
    }
    if (pv == Parity::odd || pv == Parity::mixed) {
      throw DomainError("v^" + std::to_string(mu) + " must be even, is " + to_string(pv));
    }
    if (pxi == Parity::even || pxi == Parity::mixed) {
      throw DomainError("xi^" + std::to_string(mu) + " must be odd, is " + to_string(pxi));
    }
  }
}

GrassmannNumber minkowski_dot(const GrassmannVector4& a, const GrassmannVector4& b) {
  GrassmannNumber r(a[0].n_generators());
  for (int mu = 0; mu < 4; ++mu) r.add_scaled(eta(mu), a[mu] * b[mu]);
  return r;
}

GrassmannTensor2 spin_tensor(const OddVector4& xi) {
  GrassmannTensor2 s = zero_tensor(xi[0].n_generators());
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu + 1; nu < 4; ++nu) {
      s[mu][nu] = 0.5 * (xi[mu] * xi[nu]);
      s[nu][mu] = -s[mu][nu];
    }
  }
  return s;
}

GrassmannNumber constraint_value(const SuperState& st) { return minkowski_dot(st.xi, st.v); }

namespace {

// F^{mu nu} w_nu = eta^{mu mu} F_{mu nu} w^nu
GrassmannVector4 contract_mixed(const GrassmannTensor2& f_lower, const GrassmannVector4& w) {
  GrassmannVector4 r = zero_vector(w[0].n_generators());
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      if (mu == nu) continue;
      r[mu] += f_lower[mu][nu] * w[nu];
    }
    r[mu] *= eta(mu);
  }
  return r;
}

// F_{mu nu} a^mu b^nu, factor order F a b.
GrassmannNumber bilinear(const GrassmannTensor2& f_lower, const GrassmannVector4& a,
                         const GrassmannVector4& b) {
  GrassmannNumber r(a[0].n_generators());
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      if (mu == nu) continue;
      r += f_lower[mu][nu] * a[mu] * b[nu];
    }
  }
  return r;
}

// v^kappa d_kappa F_{mu nu}
GrassmannTensor2 transport(const GrassmannTensor3& df_lower, const GrassmannVector4& v) {
  GrassmannTensor2 r = zero_tensor(v[0].n_generators());
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu + 1; nu < 4; ++nu) {
      for (int k = 0; k < 4; ++k) r[mu][nu] += df_lower[k][mu][nu] * v[k];
      r[nu][mu] = -r[mu][nu];
    }
  }
  return r;
}

struct Multiplier {
  double k = 0.0;              // (mu' - e) / 2m
  double q_weight = 0.0;       // coefficient of Q in the denominator
  GrassmannNumber numerator;   // F^{mu nu} v_mu xi_nu
  GrassmannNumber inverse;     // inverse of the denominator
  GrassmannNumber q;           // F_{ab} xi^a xi^b
  GrassmannNumber lambda;
};

Multiplier solve_multiplier(const SuperState& st, const GrassmannTensor2& f_lower,
                            const ModelParams& p, EquationForm form) {
  const int n = st.n_generators();
  Multiplier m;
  m.k = (p.mu_prime - p.charge) / (2.0 * p.mass);
  GrassmannNumber denom = minkowski_dot(st.v, st.v);
  if (std::abs(denom.body()) < 1e-15) {
    throw LightlikeVelocityError("lightlike velocity: body(v.v) = " +
                                 std::to_string(denom.body()));
  }
  m.q = GrassmannNumber(n);
  if (form == EquationForm::euler_lagrange) {
    m.q_weight = -p.mu_prime / (2.0 * p.mass * p.mass);
    m.q = bilinear(f_lower, st.xi, st.xi);
    denom.add_scaled(m.q_weight, m.q);
  }
  m.inverse = denom.inverse_even();
  if (m.k == 0.0) {
    m.numerator = GrassmannNumber(n);
    m.lambda = GrassmannNumber(n);
    return m;
  }
  m.numerator = bilinear(f_lower, st.v, st.xi);
  m.lambda = m.k * (m.numerator * m.inverse);
  return m;
}

}  // namespace

GrassmannNumber lambda_solve(const SuperState& st, const FieldConfig& cfg, const ModelParams& p,
                             EquationForm form) {
  p.validate();
  return solve_multiplier(st, field_tensor(cfg, st.x), p, form).lambda;
}

SuperDerivative eom_rhs(const SuperState& st, const FieldConfig& cfg, const ModelParams& p,
                        EquationForm form) {
  const int n = st.n_generators();
  const double m = p.mass;
  const FieldSample field = sample_field(cfg, st.x);
  const GrassmannTensor2& f = field.f_lower;
  const Multiplier mult = solve_multiplier(st, f, p, form);

  SuperDerivative d;
  d.dx = st.v;
  d.lambda = mult.lambda;

  const GrassmannVector4 f_xi = contract_mixed(f, st.xi);
  d.dxi = zero_vector(n);
  for (int mu = 0; mu < 4; ++mu) {
    d.dxi[mu].add_scaled(p.mu_prime / m, f_xi[mu]);
    d.dxi[mu].add_scaled(-2.0, mult.lambda * st.v[mu]);
  }

  // Acceleration without the lambdadot term.
  const GrassmannVector4 f_v = contract_mixed(f, st.v);
  EvenVector4 accel = zero_vector(n);
  for (int mu = 0; mu < 4; ++mu) accel[mu].add_scaled(p.charge / m, f_v[mu]);
  if (!field.homogeneous && p.mu_prime != 0.0) {
    const GrassmannTensor2 spin = spin_tensor(st.xi);
    for (int mu = 0; mu < 4; ++mu) {
      GrassmannNumber grad(n);
      for (int rho = 0; rho < 4; ++rho) {
        for (int sigma = 0; sigma < 4; ++sigma) {
          if (rho != sigma) grad += field.df_lower[mu][rho][sigma] * spin[rho][sigma];
        }
      }
      accel[mu].add_scaled(eta(mu) * p.mu_prime / (2.0 * m * m), grad);
    }
  }
  if (form == EquationForm::euler_lagrange) {
    for (int mu = 0; mu < 4; ++mu) accel[mu].add_scaled(-1.0 / m, mult.lambda * d.dxi[mu]);
  }

  d.lambda_dot = GrassmannNumber(n);
  d.dv = accel;
  if (mult.k == 0.0) return d;

  // Pieces of d/ds of numerator and denominator that do not involve vdot.
  const GrassmannTensor2 f_dot = field.homogeneous ? zero_tensor(n) : transport(field.df_lower, st.v);
  GrassmannNumber num_dot_fixed = bilinear(f, st.v, d.dxi);
  GrassmannNumber den_dot_fixed(n);
  if (!field.homogeneous) num_dot_fixed += bilinear(f_dot, st.v, st.xi);
  if (form == EquationForm::euler_lagrange) {
    GrassmannNumber q_dot = bilinear(f, d.dxi, st.xi) + bilinear(f, st.xi, d.dxi);
    if (!field.homogeneous) q_dot += bilinear(f_dot, st.xi, st.xi);
    den_dot_fixed.add_scaled(mult.q_weight, q_dot);
  }

  const int max_passes = n + 2;
  for (int pass = 1; pass <= max_passes; ++pass) {
    for (int mu = 0; mu < 4; ++mu) {
      d.dv[mu] = accel[mu];
      d.dv[mu].add_scaled(-1.0 / m, d.lambda_dot * st.xi[mu]);
    }
    const GrassmannNumber num_dot = num_dot_fixed + bilinear(f, d.dv, st.xi);
    const GrassmannNumber den_dot = den_dot_fixed + 2.0 * minkowski_dot(st.v, d.dv);
    // lambda = k P D^-1  =>  lambdadot = k (Pdot D^-1 - P D^-1 Ddot D^-1)
    GrassmannNumber next = num_dot * mult.inverse;
    next -= mult.numerator * mult.inverse * den_dot * mult.inverse;
    next *= mult.k;
    d.fixed_point_passes = pass;
    if (next == d.lambda_dot) break;
    d.lambda_dot = std::move(next);
  }
  for (int mu = 0; mu < 4; ++mu) {
    d.dv[mu] = accel[mu];
    d.dv[mu].add_scaled(-1.0 / m, d.lambda_dot * st.xi[mu]);
  }
  return d;
}

void IntegratorSettings::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ConfigurationError("integrator step must be positive, got " + std::to_string(step));
  }
  if (steps < 0) throw ConfigurationError("integrator steps must be non-negative");
  if (record_every < 1) throw ConfigurationError("record_every must be at least 1");
}

namespace {

SuperState advance(const SuperState& st, double h, const SuperDerivative& d) {
  SuperState out = st;
  for (int mu = 0; mu < 4; ++mu) {
    out.x[mu].add_scaled(h, d.dx[mu]);
    out.v[mu].add_scaled(h, d.dv[mu]);
    out.xi[mu].add_scaled(h, d.dxi[mu]);
  }
  out.s = st.s + h;
  return out;
}

}  // namespace

SuperState rk4_step(const SuperState& st, double h, const FieldConfig& cfg, const ModelParams& p,
                    EquationForm form) {
  const SuperDerivative k1 = eom_rhs(st, cfg, p, form);
  const SuperDerivative k2 = eom_rhs(advance(st, 0.5 * h, k1), cfg, p, form);
  const SuperDerivative k3 = eom_rhs(advance(st, 0.5 * h, k2), cfg, p, form);
  const SuperDerivative k4 = eom_rhs(advance(st, h, k3), cfg, p, form);
  SuperState out = st;
  const double w1 = h / 6.0;
  const double w2 = h / 3.0;
  for (int mu = 0; mu < 4; ++mu) {
    out.x[mu].add_scaled(w1, k1.dx[mu]).add_scaled(w2, k2.dx[mu]);
    out.x[mu].add_scaled(w2, k3.dx[mu]).add_scaled(w1, k4.dx[mu]);
    out.v[mu].add_scaled(w1, k1.dv[mu]).add_scaled(w2, k2.dv[mu]);
    out.v[mu].add_scaled(w2, k3.dv[mu]).add_scaled(w1, k4.dv[mu]);
    out.xi[mu].add_scaled(w1, k1.dxi[mu]).add_scaled(w2, k2.dxi[mu]);
    out.xi[mu].add_scaled(w2, k3.dxi[mu]).add_scaled(w1, k4.dxi[mu]);
  }
  out.s = st.s + h;
  return out;
}

SuperTrajectory integrate_super(const SuperState& st0, const FieldConfig& cfg,
                                const ModelParams& p, const IntegratorSettings& settings,
                                EquationForm form) {
  settings.validate();
  p.validate();
  st0.validate();
  SuperTrajectory traj;
  auto record = [&](const SuperState& st, long step) {
    try {
      traj.push_back({st, lambda_solve(st, cfg, p, form), constraint_value(st)});
    } catch (const DomainError& e) {
      throw NumericalAbort(step, e.what());
    }
  };
  SuperState st = st0;
  record(st, 0);
  for (long i = 1; i <= settings.steps; ++i) {
    try {
      st = rk4_step(st, settings.step, cfg, p, form);
      st.s = st0.s + static_cast<double>(i) * settings.step;
    } catch (const DomainError& e) {
      throw NumericalAbort(i, e.what());
    }
    if (i % settings.record_every == 0 || i == settings.steps) record(st, i);
  }
  return traj;
}

SuperState make_super_state(int n_generators, const Vector4& x0, const Vector4& u0,
                            const std::vector<Vector4>& xi_coefficients) {
  if (static_cast<int>(xi_coefficients.size()) > n_generators) {
    throw ConfigurationError("more spin coefficient vectors than generators");
  }
  SuperState st;
  st.x = real_vector(n_generators, x0);
  st.v = real_vector(n_generators, u0);
  st.xi = zero_vector(n_generators);
  for (std::size_t a = 0; a < xi_coefficients.size(); ++a) {
    const GrassmannNumber theta = GrassmannNumber::generator(n_generators, static_cast<int>(a));
    for (int mu = 0; mu < 4; ++mu) st.xi[mu].add_scaled(xi_coefficients[a][mu], theta);
  }
  return st;
}

Matrix4 spin_from_xi_coefficients(const Vector4& c1, const Vector4& c2) {
  return 0.5 * (c1 * c2.transpose() - c2 * c1.transpose());
}

ReducedSample underline_state(const SuperState& st, Mask pair) {
  if (degree(pair) != 2) throw ConfigurationError("spin projection needs a two-generator mask");
  ReducedSample r;
  r.s = st.s;
  for (int mu = 0; mu < 4; ++mu) {
    r.x[mu] = st.x[mu].body();
    r.u[mu] = st.v[mu].body();
    if (st.xi[mu].max_abs() > kPruneThreshold) r.xi_degree[mu] = st.xi[mu].underline().degree;
  }
  const GrassmannTensor2 spin = spin_tensor(st.xi);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) r.spin(mu, nu) = spin[mu][nu].coeff(pair);
  }
  return r;
}

std::vector<ReducedSample> underline_trajectory(const SuperTrajectory& traj, Mask pair) {
  std::vector<ReducedSample> out;
  out.reserve(traj.size());
  for (const auto& sample : traj) out.push_back(underline_state(sample.state, pair));
  return out;
}

}  // namespace gbmt
