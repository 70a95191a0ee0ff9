#include "gbmt/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gbmt/metric.hpp"

namespace gbmt {

using metric::eta;

void DiscretePath::validate() const {
  if (x.size() < 5) {
    throw ConfigurationError("grid too coarse: need at least 5 nodes (M >= 4), got " +
                             std::to_string(x.size()));
  }
  if (xi.size() != x.size() || lambda.size() != x.size()) {
    throw ConfigurationError("path arrays have inconsistent lengths");
  }
  if (!(h > 0.0)) throw ConfigurationError("path spacing must be positive");
}

DiscretePath path_from_trajectory(const SuperTrajectory& traj) {
  if (traj.size() < 2) throw ConfigurationError("trajectory too short for a path");
  DiscretePath path;
  path.s0 = traj.front().state.s;
  path.h = traj[1].state.s - traj[0].state.s;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double expected = path.s0 + static_cast<double>(i) * path.h;
    if (std::abs(traj[i].state.s - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw ConfigurationError("trajectory samples are not uniformly spaced");
    }
    path.x.push_back(traj[i].state.x);
    path.xi.push_back(traj[i].state.xi);
    path.lambda.push_back(traj[i].lambda);
  }
  path.validate();
  return path;
}

void recompute_multiplier(DiscretePath& path, const FieldConfig& cfg, const ModelParams& p,
                          EquationForm form) {
  path.validate();
  const std::size_t n = path.nodes();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    const double span = static_cast<double>(hi - lo) * path.h;
    SuperState st;
    st.x = path.x[i];
    st.xi = path.xi[i];
    for (int mu = 0; mu < 4; ++mu) st.v[mu] = (path.x[hi][mu] - path.x[lo][mu]) * (1.0 / span);
    path.lambda[i] = lambda_solve(st, cfg, p, form);
  }
}

namespace {

GrassmannNumber midpoint_lagrangian(const EvenVector4& xa, const EvenVector4& xb,
                                    const OddVector4& xia, const OddVector4& xib,
                                    const GrassmannNumber& la, const GrassmannNumber& lb, double h,
                                    const FieldConfig& cfg, const ModelParams& p) {
  const int n = xa[0].n_generators();
  EvenVector4 xm = zero_vector(n);
  EvenVector4 vm = zero_vector(n);
  OddVector4 xim = zero_vector(n);
  OddVector4 xid = zero_vector(n);
  for (int mu = 0; mu < 4; ++mu) {
    xm[mu] = 0.5 * (xa[mu] + xb[mu]);
    vm[mu] = (xb[mu] - xa[mu]) * (1.0 / h);
    xim[mu] = 0.5 * (xia[mu] + xib[mu]);
    xid[mu] = (xib[mu] - xia[mu]) * (1.0 / h);
  }
  const GrassmannNumber lm = 0.5 * (la + lb);

  GrassmannNumber l = (0.5 * p.mass) * minkowski_dot(vm, vm);
  l.add_scaled(-0.25, minkowski_dot(xim, xid));

  const GrassmannVector4 a = potential_at(cfg, xm);
  for (int mu = 0; mu < 4; ++mu) l.add_scaled(p.charge, a[mu] * vm[mu]);

  if (p.mu_prime != 0.0) {
    const GrassmannTensor2 f = field_tensor(cfg, xm);
    const GrassmannTensor2 spin = spin_tensor(xim);
    GrassmannNumber fs(n);
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) {
        if (mu != nu) fs += f[mu][nu] * spin[mu][nu];
      }
    }
    l.add_scaled(p.mu_prime / (2.0 * p.mass), fs);
  }

  l += lm * minkowski_dot(xim, vm);
  return l;
}

struct Window {
  std::size_t first = 0;  // first midpoint index
  std::size_t last = 0;   // one past the last midpoint index
  bool empty = true;
};

Window affected_midpoints(const std::vector<std::array<double, 4>>& amp, std::size_t nodes) {
  Window w;
  if (amp.empty()) return w;
  if (amp.size() != nodes) throw ConfigurationError("variation length does not match the path");
  auto nonzero = [](const std::array<double, 4>& a) {
    return std::any_of(a.begin(), a.end(), [](double c) { return c != 0.0; });
  };
  if (nonzero(amp.front()) || nonzero(amp.back())) {
    throw ConfigurationError("variation must vanish at the path endpoints");
  }
  std::size_t lo = nodes;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < nodes; ++i) {
    if (nonzero(amp[i])) {
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  }
  if (lo == nodes) return w;
  w.first = lo - 1;
  w.last = hi + 1;
  w.empty = false;
  return w;
}

EvenVector4 shifted(const EvenVector4& x, const std::array<double, 4>& d, double t) {
  EvenVector4 y = x;
  for (int mu = 0; mu < 4; ++mu) y[mu].coeff(0) += t * d[mu];
  return y;
}

}  // namespace

GrassmannNumber action(const DiscretePath& path, const FieldConfig& cfg, const ModelParams& p) {
  path.validate();
  GrassmannNumber total(path.n_generators());
  for (std::size_t i = 0; i + 1 < path.nodes(); ++i) {
    total.add_scaled(path.h, midpoint_lagrangian(path.x[i], path.x[i + 1], path.xi[i],
                                                 path.xi[i + 1], path.lambda[i],
                                                 path.lambda[i + 1], path.h, cfg, p));
  }
  return total;
}

GrassmannNumber even_difference_quotient(const DiscretePath& path, const FieldConfig& cfg,
                                         const ModelParams& p,
                                         const std::vector<std::array<double, 4>>& dx, double t) {
  path.validate();
  GrassmannNumber q(path.n_generators());
  const Window w = affected_midpoints(dx, path.nodes());
  if (w.empty) return q;
  for (std::size_t i = w.first; i < w.last; ++i) {
    const GrassmannNumber plus = midpoint_lagrangian(
        shifted(path.x[i], dx[i], t), shifted(path.x[i + 1], dx[i + 1], t), path.xi[i],
        path.xi[i + 1], path.lambda[i], path.lambda[i + 1], path.h, cfg, p);
    const GrassmannNumber minus = midpoint_lagrangian(
        shifted(path.x[i], dx[i], -t), shifted(path.x[i + 1], dx[i + 1], -t), path.xi[i],
        path.xi[i + 1], path.lambda[i], path.lambda[i + 1], path.h, cfg, p);
    q.add_scaled(path.h, plus - minus);
  }
  return q * (1.0 / (2.0 * t));
}

DirectionalDerivative directional_derivative(const DiscretePath& path, const FieldConfig& cfg,
                                             const ModelParams& p,
                                             const PathVariation& variation, double h_dir) {
  path.validate();
  const int n = path.n_generators();
  DirectionalDerivative out{GrassmannNumber(n), GrassmannNumber(n), 0.0};

  if (!affected_midpoints(variation.dx, path.nodes()).empty) {
    if (!(h_dir > 0.0)) throw ConfigurationError("h_dir must be positive");
    const GrassmannNumber coarse = even_difference_quotient(path, cfg, p, variation.dx, h_dir);
    const GrassmannNumber fine = even_difference_quotient(path, cfg, p, variation.dx, 0.5 * h_dir);
    out.even = (4.0 * fine - coarse) * (1.0 / 3.0);
  }

  const Window w = affected_midpoints(variation.dxi, path.nodes());
  if (!w.empty) {
    if (n + 1 > kMaxGenerators) {
      throw ConfigurationError("no free generator for an odd variation");
    }
    const int big = n + 1;
    const GrassmannNumber theta = GrassmannNumber::generator(big, n);
    auto embed_vec = [big](const GrassmannVector4& v) {
      GrassmannVector4 e;
      for (int mu = 0; mu < 4; ++mu) e[mu] = v[mu].embed(big);
      return e;
    };
    auto varied_xi = [&](std::size_t i) {
      OddVector4 y = embed_vec(path.xi[i]);
      for (int mu = 0; mu < 4; ++mu) y[mu].add_scaled(variation.dxi[i][mu], theta);
      return y;
    };
    GrassmannNumber sum(big);
    for (std::size_t i = w.first; i < w.last; ++i) {
      sum.add_scaled(path.h,
                     midpoint_lagrangian(embed_vec(path.x[i]), embed_vec(path.x[i + 1]),
                                         varied_xi(i), varied_xi(i + 1),
                                         path.lambda[i].embed(big),
                                         path.lambda[i + 1].embed(big), path.h, cfg, p));
    }
    const Mask bit = Mask{1} << n;
    for (Mask m = 0; m < (Mask{1} << n); ++m) out.odd.coeff(m) = sum.coeff(m | bit);
  }
  out.magnitude = std::max(out.even.max_abs(), out.odd.max_abs());
  return out;
}

double stationarity_residual(const DiscretePath& path, const FieldConfig& cfg,
                             const ModelParams& p, const PathVariation& variation, double h_dir) {
  return directional_derivative(path, cfg, p, variation, h_dir).magnitude;
}

std::vector<double> euler_lagrange_residual(const DiscretePath& path, const FieldConfig& cfg,
                                            const ModelParams& p, EquationForm form) {
  path.validate();
  const double h = path.h;
  std::vector<double> out;
  out.reserve(path.nodes() - 2);
  for (std::size_t i = 1; i + 1 < path.nodes(); ++i) {
    SuperState st;
    st.x = path.x[i];
    st.xi = path.xi[i];
    st.s = path.s0 + static_cast<double>(i) * h;
    for (int mu = 0; mu < 4; ++mu) {
      st.v[mu] = (path.x[i + 1][mu] - path.x[i - 1][mu]) * (1.0 / (2.0 * h));
    }
    double r = 0.0;
    try {
      const SuperDerivative d = eom_rhs(st, cfg, p, form);
      for (int mu = 0; mu < 4; ++mu) {
        GrassmannNumber accel = path.x[i + 1][mu] - 2.0 * path.x[i][mu] + path.x[i - 1][mu];
        accel *= 1.0 / (h * h);
        r = std::max(r, (p.mass * (accel - d.dv[mu])).max_abs());
        GrassmannNumber spin_rate = (path.xi[i + 1][mu] - path.xi[i - 1][mu]) * (1.0 / (2.0 * h));
        r = std::max(r, (spin_rate - d.dxi[mu]).max_abs());
      }
    } catch (const DomainError&) {
      r = std::numeric_limits<double>::infinity();
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace gbmt
