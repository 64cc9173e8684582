#pragma once

#include <gmpxx.h>

#include <string>

namespace riesz {

/// Exact element p + q*sqrt(D) of the real quadratic field Q(sqrt(D)).
///
/// D must be a positive, square-free, non-square integer. Arithmetic between
/// numbers with different radicands throws std::invalid_argument. Because
/// sqrt(D) is irrational, (p, q) is a canonical representation and equality
/// is structural.
class QuadNum {
 public:
  static constexpr long kDefaultRadicand = 2;

  QuadNum() : QuadNum(0, 0, kDefaultRadicand) {}
  QuadNum(mpq_class p, mpq_class q, long radicand);

  static QuadNum rational(const mpq_class& p, long radicand = kDefaultRadicand) {
    return QuadNum(p, 0, radicand);
  }
  /// sqrt(D) itself.
  static QuadNum root(long radicand = kDefaultRadicand) { return QuadNum(0, 1, radicand); }

  const mpq_class& p() const noexcept { return p_; }
  const mpq_class& q() const noexcept { return q_; }
  long radicand() const noexcept { return radicand_; }

  bool is_rational() const { return sgn(q_) == 0; }
  bool is_integer() const { return is_rational() && p_.get_den() == 1; }

  /// Double-precision approximation, for display and bracketing only.
  double approx() const;

  QuadNum conjugate() const { return QuadNum(p_, -q_, radicand_); }
  /// Field norm p^2 - q^2 D (rational).
  mpq_class norm() const;

  QuadNum operator-() const { return QuadNum(-p_, -q_, radicand_); }

  friend QuadNum operator+(const QuadNum& x, const QuadNum& y);
  friend QuadNum operator-(const QuadNum& x, const QuadNum& y);
  friend QuadNum operator*(const QuadNum& x, const QuadNum& y);
  friend QuadNum operator/(const QuadNum& x, const QuadNum& y);

  friend QuadNum operator*(const mpq_class& s, const QuadNum& x) {
    return QuadNum(s * x.p_, s * x.q_, x.radicand_);
  }
  friend QuadNum operator+(const QuadNum& x, const mpq_class& s) {
    return QuadNum(x.p_ + s, x.q_, x.radicand_);
  }
  friend QuadNum operator-(const QuadNum& x, const mpq_class& s) {
    return QuadNum(x.p_ - s, x.q_, x.radicand_);
  }

  friend bool operator==(const QuadNum& x, const QuadNum& y) {
    return x.radicand_ == y.radicand_ && x.p_ == y.p_ && x.q_ == y.q_;
  }

  /// "p + q*sqrt(D)" with p and q written as num/den.
  std::string to_string() const;

 private:
  mpq_class p_;
  mpq_class q_;
  long radicand_;
};

/// True when d > 1 has no repeated prime factor (hence is not a square).
bool is_squarefree_radicand(long d);

/// Exact sign of p + q*sqrt(D): -1, 0 or +1.
int qsign(const QuadNum& x);

/// Exact three-way comparison.
int qcompare(const QuadNum& x, const QuadNum& y);

/// Largest integer m with m <= x.
mpz_class qfloor(const QuadNum& x);

/// x - floor(x); always in [0, 1).
QuadNum frac_mod1(const QuadNum& x);

/// Parses "n" or "n/d" into a canonical rational.
mpq_class parse_rational(const std::string& text);
/// Writes a rational as "num/den", with den > 0 always present.
std::string format_rational(const mpq_class& r);

}  // namespace riesz
