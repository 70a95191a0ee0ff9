#include "gbmt/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace gbmt {

std::string to_string(Parity p) {
  switch (p) {
    case Parity::zero: return "zero";
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::mixed: return "mixed";
  }
  return "?";
}

int reorder_sign(Mask s, Mask t) {
  int swaps = 0;
  s >>= 1;
  while (s != 0) {
    swaps += __builtin_popcount(s & t);
    s >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

GrassmannNumber::GrassmannNumber(int n_generators) : n_(n_generators) {
  if (n_generators < 0 || n_generators > kMaxGenerators) {
    throw ConfigurationError("number of generators must be in [0, " +
                             std::to_string(kMaxGenerators) + "], got " +
                             std::to_string(n_generators));
  }
  coeffs_.assign(std::size_t{1} << n_generators, 0.0);
}

GrassmannNumber GrassmannNumber::scalar(int n_generators, double value) {
  GrassmannNumber g(n_generators);
  g.coeffs_[0] = value;
  return g;
}

GrassmannNumber GrassmannNumber::generator(int n_generators, int index) {
  if (index < 0 || index >= n_generators) {
    throw ConfigurationError("generator index " + std::to_string(index) +
                             " out of range for " + std::to_string(n_generators) +
                             " generators");
  }
  return monomial(n_generators, Mask{1} << index, 1.0);
}

GrassmannNumber GrassmannNumber::monomial(int n_generators, Mask mask, double coeff) {
  GrassmannNumber g(n_generators);
  if (mask >= g.coeffs_.size()) {
    throw ConfigurationError("monomial mask references generators beyond N = " +
                             std::to_string(n_generators));
  }
  g.coeffs_[mask] = coeff;
  return g;
}

void GrassmannNumber::require_same_algebra(const GrassmannNumber& o) const {
  if (n_ != o.n_) {
    throw ConfigurationError("mismatched Grassmann algebras: N = " + std::to_string(n_) +
                             " vs N = " + std::to_string(o.n_));
  }
}

GrassmannNumber GrassmannNumber::soul() const {
  GrassmannNumber s = *this;
  s.coeffs_[0] = 0.0;
  return s;
}

Mask GrassmannNumber::support() const {
  Mask m = 0;
  for (Mask i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0.0) m |= i;
  }
  return m;
}

bool GrassmannNumber::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

double GrassmannNumber::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

GrassmannNumber GrassmannNumber::grade(int k) const {
  GrassmannNumber g(n_);
  if (k < 0 || k > n_) return g;
  for (Mask i = 0; i < coeffs_.size(); ++i) {
    if (degree(i) == k) g.coeffs_[i] = coeffs_[i];
  }
  return g;
}

Parity GrassmannNumber::parity(double tol) const {
  bool has_even = false;
  bool has_odd = false;
  for (Mask i = 0; i < coeffs_.size(); ++i) {
    if (std::abs(coeffs_[i]) > tol) {
      if (degree(i) % 2 == 0) {
        has_even = true;
      } else {
        has_odd = true;
      }
    }
  }
  if (has_even && has_odd) return Parity::mixed;
  if (has_even) return Parity::even;
  if (has_odd) return Parity::odd;
  return Parity::zero;
}

LowestTerm GrassmannNumber::underline(double prune) const {
  for (int k = 0; k <= n_; ++k) {
    GrassmannNumber part(n_);
    bool found = false;
    for (Mask i = 0; i < coeffs_.size(); ++i) {
      if (degree(i) == k && std::abs(coeffs_[i]) > prune) {
        part.coeffs_[i] = coeffs_[i];
        found = true;
      }
    }
    if (found) return {k, std::move(part)};
  }
  throw NoLowestTermError("no lowest term: element is zero");
}

GrassmannNumber GrassmannNumber::inverse_even() const {
  const Parity p = parity();
  if (p == Parity::odd || p == Parity::mixed) {
    throw DomainError("invert_even requires an even element, got parity " + to_string(p));
  }
  const double b = body();
  if (b == 0.0) throw NotInvertibleError("not invertible: body is zero");

  // a = b (1 + q) with q = soul/b nilpotent; a^-1 = b^-1 sum_k (-q)^k.
  const GrassmannNumber minus_q = soul() * (-1.0 / b);
  GrassmannNumber result = scalar(n_, 1.0);
  GrassmannNumber term = scalar(n_, 1.0);
  for (int k = 1; k <= n_ / 2; ++k) {
    term = term * minus_q;
    if (term.is_zero()) break;
    result += term;
  }
  return result * (1.0 / b);
}

GrassmannNumber GrassmannNumber::embed(int n_generators) const {
  if (n_generators < n_) {
    throw ConfigurationError("cannot embed into a smaller algebra");
  }
  GrassmannNumber g(n_generators);
  std::copy(coeffs_.begin(), coeffs_.end(), g.coeffs_.begin());
  return g;
}

GrassmannNumber& GrassmannNumber::operator+=(const GrassmannNumber& o) {
  require_same_algebra(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

GrassmannNumber& GrassmannNumber::operator-=(const GrassmannNumber& o) {
  require_same_algebra(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

GrassmannNumber& GrassmannNumber::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

GrassmannNumber& GrassmannNumber::operator*=(const GrassmannNumber& o) {
  *this = *this * o;
  return *this;
}

GrassmannNumber& GrassmannNumber::add_scaled(double s, const GrassmannNumber& o) {
  require_same_algebra(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
  return *this;
}

GrassmannNumber GrassmannNumber::operator-() const {
  GrassmannNumber g = *this;
  for (double& c : g.coeffs_) c = -c;
  return g;
}

// Each output coefficient U is accumulated over unordered splits {S, U\S},
// visited in ascending order of the smaller mask, and each split's two
// ordered terms are summed before accumulation.  The rounding sequence is
// then independent of operand order, so ab = +-ba holds bit-for-bit for
// pure-parity operands.
GrassmannNumber operator*(const GrassmannNumber& a, const GrassmannNumber& b) {
  a.require_same_algebra(b);
  GrassmannNumber out(a.n_);
  const Mask sa = a.support();
  const Mask sb = b.support();
  const double a0 = a.coeffs_[0];
  const double b0 = b.coeffs_[0];
  if (sa == 0 && sb == 0) {
    out.coeffs_[0] = a0 * b0;
    return out;
  }
  const Mask live = sa | sb;
  const double* ca = a.coeffs_.data();
  const double* cb = b.coeffs_.data();
  Mask u = 0;
  do {
    double acc = 0.0;
    Mask s = 0;
    do {
      const Mask t = u ^ s;
      if (s < t) {
        const double x = ca[s] * cb[t];
        const double y = ca[t] * cb[s];
        if (x != 0.0 || y != 0.0) {
          acc += reorder_sign(s, t) * x + reorder_sign(t, s) * y;
        }
      } else if (s == t) {
        acc += ca[s] * cb[t];
      }
      s = (s - u) & u;
    } while (s != 0);
    out.coeffs_[u] = acc;
    u = (u - live) & live;
  } while (u != 0);
  return out;
}

bool operator==(const GrassmannNumber& a, const GrassmannNumber& b) {
  return a.n_ == b.n_ && a.coeffs_ == b.coeffs_;
}

std::vector<std::pair<Mask, double>> GrassmannNumber::terms() const {
  std::vector<std::pair<Mask, double>> t;
  for (Mask i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0.0) t.emplace_back(i, coeffs_[i]);
  }
  return t;
}

GrassmannNumber add(const GrassmannNumber& a, const GrassmannNumber& b) { return a + b; }

GrassmannNumber multiply(const GrassmannNumber& a, const GrassmannNumber& b) { return a * b; }

LowestTerm underline(const GrassmannNumber& a) { return a.underline(); }

GrassmannNumber grade_project(const GrassmannNumber& a, int k) { return a.grade(k); }

GrassmannNumber invert_even(const GrassmannNumber& a) { return a.inverse_even(); }

Parity parity(const GrassmannNumber& a) { return a.parity(); }

bool approx_equal(const GrassmannNumber& a, const GrassmannNumber& b, double tol) {
  if (a.n_generators() != b.n_generators()) return false;
  const auto& ca = a.coefficients();
  const auto& cb = b.coefficients();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (std::abs(ca[i] - cb[i]) > tol) return false;
  }
  return true;
}

GrassmannNumber power(const GrassmannNumber& a, int k) {
  GrassmannNumber r = GrassmannNumber::scalar(a.n_generators(), 1.0);
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

std::string to_string(const GrassmannNumber& a) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [mask, c] : a.terms()) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const double mag = std::abs(c);
    if (mask == 0) {
      os << mag;
      continue;
    }
    if (mag != 1.0) os << mag << "*";
    for (int i = 0; i < a.n_generators(); ++i) {
      if (mask & (Mask{1} << i)) os << "t" << (i + 1);
    }
  }
  if (first) os << "0";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const GrassmannNumber& a) {
  return os << to_string(a);
}

}  // namespace gbmt
