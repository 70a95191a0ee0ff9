#pragma once

// Real Grassmann (exterior) algebra on a finite number of anticommuting
// generators.  Elements are stored densely: coefficient index = bitmask of
// the generator subset, generators within a monomial in ascending order.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gbmt {

using Mask = std::uint32_t;

inline constexpr int kMaxGenerators = 16;
inline constexpr int kDefaultGenerators = 4;
inline constexpr double kCoefficientTolerance = 1e-12;
inline constexpr double kPruneThreshold = 1e-14;

class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotInvertibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoLowestTermError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class Parity { zero, even, odd, mixed };

std::string to_string(Parity p);

// Sign of theta_S * theta_T when both are written in ascending order:
// (-1)^(number of pairs s in S, t in T with s > t).  Caller guarantees S & T == 0.
int reorder_sign(Mask s, Mask t);

inline int degree(Mask m) { return __builtin_popcount(m); }

struct LowestTerm;

class GrassmannNumber {
 public:
  GrassmannNumber() : GrassmannNumber(kDefaultGenerators) {}
  explicit GrassmannNumber(int n_generators);

  static GrassmannNumber scalar(int n_generators, double value);
  // theta_{index+1} in one-based notation; index is zero-based.
  static GrassmannNumber generator(int n_generators, int index);
  static GrassmannNumber monomial(int n_generators, Mask mask, double coeff);

  int n_generators() const { return n_; }
  std::size_t size() const { return coeffs_.size(); }

  double coeff(Mask m) const { return coeffs_.at(m); }
  double& coeff(Mask m) { return coeffs_.at(m); }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double body() const { return coeffs_[0]; }
  GrassmannNumber soul() const;

  // Union of all generator masks carrying a nonzero coefficient.
  Mask support() const;
  bool is_zero() const;
  double max_abs() const;

  GrassmannNumber grade(int k) const;
  Parity parity(double tol = 0.0) const;
  LowestTerm underline(double prune = kPruneThreshold) const;
  GrassmannNumber inverse_even() const;

  // Same element viewed in an algebra with more generators.
  GrassmannNumber embed(int n_generators) const;

  GrassmannNumber& operator+=(const GrassmannNumber& o);
  GrassmannNumber& operator-=(const GrassmannNumber& o);
  GrassmannNumber& operator*=(double s);
  GrassmannNumber& operator*=(const GrassmannNumber& o);
  // this += s * o
  GrassmannNumber& add_scaled(double s, const GrassmannNumber& o);

  GrassmannNumber operator-() const;

  friend GrassmannNumber operator+(GrassmannNumber a, const GrassmannNumber& b) { return a += b; }
  friend GrassmannNumber operator-(GrassmannNumber a, const GrassmannNumber& b) { return a -= b; }
  friend GrassmannNumber operator*(GrassmannNumber a, double s) { return a *= s; }
  friend GrassmannNumber operator*(double s, GrassmannNumber a) { return a *= s; }
  friend GrassmannNumber operator*(const GrassmannNumber& a, const GrassmannNumber& b);

  friend bool operator==(const GrassmannNumber& a, const GrassmannNumber& b);

  // Nonzero (mask, coefficient) pairs in ascending mask order.
  std::vector<std::pair<Mask, double>> terms() const;

 private:
  void require_same_algebra(const GrassmannNumber& o) const;

  int n_;
  std::vector<double> coeffs_;
};

struct LowestTerm {
  int degree;
  GrassmannNumber part;
};

GrassmannNumber add(const GrassmannNumber& a, const GrassmannNumber& b);
GrassmannNumber multiply(const GrassmannNumber& a, const GrassmannNumber& b);
LowestTerm underline(const GrassmannNumber& a);
GrassmannNumber grade_project(const GrassmannNumber& a, int k);
GrassmannNumber invert_even(const GrassmannNumber& a);
Parity parity(const GrassmannNumber& a);

bool approx_equal(const GrassmannNumber& a, const GrassmannNumber& b,
                  double tol = kCoefficientTolerance);

GrassmannNumber power(const GrassmannNumber& a, int k);

// "3 + 2*t1t2 - t1t3"; generators printed one-based.
std::string to_string(const GrassmannNumber& a);
std::ostream& operator<<(std::ostream& os, const GrassmannNumber& a);

}  // namespace gbmt
