#pragma once

#include <array>
#include <map>

namespace gbmt {

using Exponents = std::array<int, 4>;

// Real polynomial in the four coordinates x^0..x^3.
class Polynomial4 {
 public:
  Polynomial4() = default;

  static Polynomial4 constant(double c);
  // c * x^mu
  static Polynomial4 coordinate(int mu, double c = 1.0);

  // Adds c * prod_mu (x^mu)^{e_mu}; merges with an existing monomial.
  Polynomial4& add_term(const Exponents& e, double c);

  const std::map<Exponents, double>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int total_degree() const;

  Polynomial4 derivative(int mu) const;
  double evaluate(const std::array<double, 4>& x) const;

  Polynomial4& operator+=(const Polynomial4& o);
  Polynomial4& operator-=(const Polynomial4& o);
  Polynomial4& operator*=(double s);

  friend Polynomial4 operator+(Polynomial4 a, const Polynomial4& b) { return a += b; }
  friend Polynomial4 operator-(Polynomial4 a, const Polynomial4& b) { return a -= b; }
  friend Polynomial4 operator*(double s, Polynomial4 a) { return a *= s; }
  friend bool operator==(const Polynomial4& a, const Polynomial4& b) { return a.terms_ == b.terms_; }

 private:
  void prune();

  std::map<Exponents, double> terms_;
};

}  // namespace gbmt
