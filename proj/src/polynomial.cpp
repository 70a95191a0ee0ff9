#include "gbmt/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace gbmt {

Polynomial4 Polynomial4::constant(double c) {
  Polynomial4 p;
  p.add_term({0, 0, 0, 0}, c);
  return p;
}

Polynomial4 Polynomial4::coordinate(int mu, double c) {
  Exponents e{0, 0, 0, 0};
  e.at(mu) = 1;
  Polynomial4 p;
  p.add_term(e, c);
  return p;
}

Polynomial4& Polynomial4::add_term(const Exponents& e, double c) {
  for (int k : e) {
    if (k < 0) throw std::invalid_argument("negative exponent in polynomial term");
  }
  if (c == 0.0) return *this;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
  return *this;
}

int Polynomial4::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
  return d;
}

Polynomial4 Polynomial4::derivative(int mu) const {
  Polynomial4 d;
  for (const auto& [e, c] : terms_) {
    if (e[mu] == 0) continue;
    Exponents f = e;
    f[mu] -= 1;
    d.add_term(f, c * e[mu]);
  }
  return d;
}

double Polynomial4::evaluate(const std::array<double, 4>& x) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int mu = 0; mu < 4; ++mu) {
      for (int k = 0; k < e[mu]; ++k) t *= x[mu];
    }
    sum += t;
  }
  return sum;
}

Polynomial4& Polynomial4::operator+=(const Polynomial4& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial4& Polynomial4::operator-=(const Polynomial4& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial4& Polynomial4::operator*=(double s) {
  for (auto& [e, c] : terms_) c *= s;
  prune();
  return *this;
}

void Polynomial4::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0.0) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace gbmt
