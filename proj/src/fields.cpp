#include "gbmt/fields.hpp"

#include <string>

#include "gbmt/metric.hpp"

namespace gbmt {

GrassmannVector4 zero_vector(int n_generators) {
  return {GrassmannNumber(n_generators), GrassmannNumber(n_generators),
          GrassmannNumber(n_generators), GrassmannNumber(n_generators)};
}

GrassmannTensor2 zero_tensor(int n_generators) {
  GrassmannTensor2 t;
  for (auto& row : t) row = zero_vector(n_generators);
  return t;
}

GrassmannVector4 real_vector(int n_generators, const Vector4& v) {
  GrassmannVector4 g = zero_vector(n_generators);
  for (int mu = 0; mu < 4; ++mu) g[mu] = GrassmannNumber::scalar(n_generators, v[mu]);
  return g;
}

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

int n_generators_of(const EvenVector4& x) {
  const int n = x[0].n_generators();
  for (const auto& c : x) {
    if (c.n_generators() != n) {
      throw ConfigurationError("point components live in different Grassmann algebras");
    }
  }
  return n;
}

}  // namespace

GrassmannPoint::GrassmannPoint(const EvenVector4& x, int max_order) : n_(n_generators_of(x)) {
  std::array<GrassmannNumber, 4> soul;
  for (int mu = 0; mu < 4; ++mu) {
    const Parity p = x[mu].parity();
    if (p != Parity::even && p != Parity::zero) {
      throw DomainError("coordinate x^" + std::to_string(mu) + " is not Grassmann-even (" +
                        to_string(p) + ")");
    }
    body_[mu] = x[mu].body();
    soul[mu] = x[mu].soul();
  }

  // Souls start at degree 2, so n^beta vanishes once 2|beta| > N.
  const int order = std::max(0, std::min(max_order, n_ / 2));
  powers_.push_back({{0, 0, 0, 0}, GrassmannNumber::scalar(n_, 1.0)});
  bool has_soul = false;
  for (const auto& s : soul) has_soul = has_soul || !s.is_zero();
  if (!has_soul) return;

  std::array<std::vector<GrassmannNumber>, 4> pw;
  for (int mu = 0; mu < 4; ++mu) {
    pw[mu].push_back(GrassmannNumber::scalar(n_, 1.0));
    for (int k = 1; k <= order; ++k) pw[mu].push_back(pw[mu].back() * soul[mu]);
  }
  for (int b0 = 0; b0 <= order; ++b0) {
    for (int b1 = 0; b0 + b1 <= order; ++b1) {
      for (int b2 = 0; b0 + b1 + b2 <= order; ++b2) {
        for (int b3 = 0; b0 + b1 + b2 + b3 <= order; ++b3) {
          if (b0 + b1 + b2 + b3 == 0) continue;
          GrassmannNumber v = pw[0][b0] * pw[1][b1] * pw[2][b2] * pw[3][b3];
          if (v.is_zero()) continue;
          v *= 1.0 / (factorial(b0) * factorial(b1) * factorial(b2) * factorial(b3));
          powers_.push_back({{b0, b1, b2, b3}, std::move(v)});
        }
      }
    }
  }
}

GrassmannNumber evaluate(const Polynomial4& p, const GrassmannPoint& x) {
  GrassmannNumber result(x.n_generators());
  if (p.empty()) return result;
  const auto& x0 = x.body();
  for (const auto& [beta, power] : x.soul_powers()) {
    double t_beta = 0.0;
    bool any = false;
    for (const auto& [alpha, c] : p.terms()) {
      bool divides = true;
      for (int mu = 0; mu < 4; ++mu) divides = divides && alpha[mu] >= beta[mu];
      if (!divides) continue;
      double t = c;
      for (int mu = 0; mu < 4; ++mu) {
        for (int k = 0; k < beta[mu]; ++k) t *= alpha[mu] - k;
      }
      for (int mu = 0; mu < 4; ++mu) {
        for (int k = 0; k < alpha[mu] - beta[mu]; ++k) t *= x0[mu];
      }
      t_beta += t;
      any = true;
    }
    if (any) result.add_scaled(t_beta, power);
  }
  return result;
}

FieldTensorPolynomial FieldTensorPolynomial::from_potential(
    const std::array<Polynomial4, 4>& a_lower) {
  FieldTensorPolynomial f;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu + 1; nu < 4; ++nu) {
      f.set(mu, nu, a_lower[nu].derivative(mu) - a_lower[mu].derivative(nu));
    }
  }
  return f;
}

FieldTensorPolynomial& FieldTensorPolynomial::set(int mu, int nu, const Polynomial4& p) {
  if (mu == nu) throw ConfigurationError("diagonal field-tensor entries must vanish");
  lower[mu][nu] = p;
  lower[nu][mu] = -1.0 * p;
  return *this;
}

int FieldTensorPolynomial::total_degree() const {
  int d = 0;
  for (const auto& row : lower) {
    for (const auto& p : row) d = std::max(d, p.total_degree());
  }
  return d;
}

FieldConfig::FieldConfig() { rebuild(); }

FieldConfig FieldConfig::constant(const std::array<double, 3>& e, const std::array<double, 3>& b) {
  Matrix4 f = Matrix4::Zero();
  for (int i = 1; i <= 3; ++i) {
    f(0, i) = e[i - 1];
    f(i, 0) = -e[i - 1];
  }
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      for (int k = 1; k <= 3; ++k) {
        // eps_{ijk} on spatial indices; the 4d symbol with a leading 0 matches it.
        f(i, j) -= metric::levi_civita(0, i, j, k) * b[k - 1];
      }
    }
  }
  return constant(f);
}

FieldConfig FieldConfig::constant(const Matrix4& f_lower) {
  std::array<Polynomial4, 4> a;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      if (f_lower(mu, nu) != 0.0) a[mu] += Polynomial4::coordinate(nu, -0.5 * f_lower(mu, nu));
    }
  }
  return from_potential(a);
}

FieldConfig FieldConfig::from_potential(const std::array<Polynomial4, 4>& a_lower, int max_degree) {
  FieldConfig cfg;
  for (int mu = 0; mu < 4; ++mu) {
    if (a_lower[mu].total_degree() > max_degree) {
      throw ConfigurationError("potential component A_" + std::to_string(mu) +
                               " has total degree " +
                               std::to_string(a_lower[mu].total_degree()) +
                               " above the configured maximum " + std::to_string(max_degree));
    }
  }
  cfg.potential_ = a_lower;
  cfg.rebuild();
  return cfg;
}

void FieldConfig::rebuild() {
  tensor_ = FieldTensorPolynomial::from_potential(potential_);
  degree_ = 0;
  for (const auto& a : potential_) degree_ = std::max(degree_, a.total_degree());
  for (int k = 0; k < 4; ++k) {
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) d_tensor_[k][mu][nu] = tensor_.lower[mu][nu].derivative(k);
    }
  }
}

bool FieldConfig::is_homogeneous() const { return degree_ <= 1; }

FieldConfig& FieldConfig::operator+=(const FieldConfig& o) {
  for (int mu = 0; mu < 4; ++mu) potential_[mu] += o.potential_[mu];
  rebuild();
  return *this;
}

FieldConfig& FieldConfig::operator*=(double s) {
  for (auto& a : potential_) a *= s;
  rebuild();
  return *this;
}

GrassmannVector4 potential_at(const FieldConfig& cfg, const EvenVector4& x) {
  const GrassmannPoint pt(x, cfg.potential_degree());
  GrassmannVector4 a;
  for (int mu = 0; mu < 4; ++mu) a[mu] = evaluate(cfg.potential()[mu], pt);
  return a;
}

namespace {

GrassmannTensor2 tensor_at(const FieldTensorPolynomial& f, const GrassmannPoint& pt) {
  GrassmannTensor2 out = zero_tensor(pt.n_generators());
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu + 1; nu < 4; ++nu) {
      out[mu][nu] = evaluate(f.lower[mu][nu], pt);
      out[nu][mu] = -out[mu][nu];
    }
  }
  return out;
}

GrassmannTensor3 derivative_at(const FieldConfig& cfg, const GrassmannPoint& pt) {
  GrassmannTensor3 out;
  for (int k = 0; k < 4; ++k) {
    out[k] = zero_tensor(pt.n_generators());
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = mu + 1; nu < 4; ++nu) {
        out[k][mu][nu] = evaluate(cfg.tensor_derivative(k, mu, nu), pt);
        out[k][nu][mu] = -out[k][mu][nu];
      }
    }
  }
  return out;
}

}  // namespace

GrassmannTensor2 field_tensor(const FieldConfig& cfg, const EvenVector4& x) {
  return tensor_at(cfg.tensor(), GrassmannPoint(x, cfg.potential_degree()));
}

GrassmannTensor3 field_derivative(const FieldConfig& cfg, const EvenVector4& x) {
  GrassmannTensor3 d = derivative_at(cfg, GrassmannPoint(x, cfg.potential_degree()));
  for (auto& slice : d) slice = raise_indices(slice);
  return d;
}

FieldSample sample_field(const FieldConfig& cfg, const EvenVector4& x) {
  const GrassmannPoint pt(x, cfg.potential_degree());
  FieldSample s;
  s.f_lower = tensor_at(cfg.tensor(), pt);
  s.homogeneous = cfg.is_homogeneous();
  if (s.homogeneous) {
    for (auto& slice : s.df_lower) slice = zero_tensor(pt.n_generators());
  } else {
    s.df_lower = derivative_at(cfg, pt);
  }
  return s;
}

Matrix4 field_tensor_real(const FieldConfig& cfg, const Vector4& x) {
  const std::array<double, 4> p{x[0], x[1], x[2], x[3]};
  Matrix4 f = Matrix4::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu + 1; nu < 4; ++nu) {
      f(mu, nu) = cfg.tensor().lower[mu][nu].evaluate(p);
      f(nu, mu) = -f(mu, nu);
    }
  }
  return f;
}

GrassmannVector4 maxwell_residual(const FieldTensorPolynomial& f, const EvenVector4& x) {
  const GrassmannPoint pt(x, f.total_degree());
  GrassmannTensor3 d;
  for (int nu = 0; nu < 4; ++nu) {
    d[nu] = zero_tensor(pt.n_generators());
    for (int rho = 0; rho < 4; ++rho) {
      for (int sigma = 0; sigma < 4; ++sigma) {
        d[nu][rho][sigma] = evaluate(f.lower[rho][sigma].derivative(nu), pt);
      }
    }
  }
  GrassmannVector4 r = zero_vector(pt.n_generators());
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      for (int rho = 0; rho < 4; ++rho) {
        for (int sigma = 0; sigma < 4; ++sigma) {
          const int eps = metric::levi_civita(mu, nu, rho, sigma);
          if (eps != 0) r[mu].add_scaled(eps, d[nu][rho][sigma]);
        }
      }
    }
  }
  return r;
}

GrassmannVector4 maxwell_residual(const FieldConfig& cfg, const EvenVector4& x) {
  return maxwell_residual(cfg.tensor(), x);
}

GrassmannTensor2 raise_indices(const GrassmannTensor2& f_lower) {
  GrassmannTensor2 up = f_lower;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) up[mu][nu] *= metric::eta(mu) * metric::eta(nu);
  }
  return up;
}

}  // namespace gbmt
