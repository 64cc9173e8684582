#include "riesz/quadfield.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace riesz {

namespace {

void require_same_radicand(const QuadNum& x, const QuadNum& y) {
  if (x.radicand() != y.radicand()) {
    throw std::invalid_argument("QuadNum: mixed radicands " + std::to_string(x.radicand()) +
                                " and " + std::to_string(y.radicand()));
  }
}

}  // namespace

bool is_squarefree_radicand(long d) {
  if (d < 2) return false;
  for (long f = 2; f * f <= d; ++f) {
    if (d % (f * f) == 0) return false;
  }
  return true;
}

QuadNum::QuadNum(mpq_class p, mpq_class q, long radicand)
    : p_(std::move(p)), q_(std::move(q)), radicand_(radicand) {
  if (!is_squarefree_radicand(radicand_)) {
    throw std::invalid_argument("QuadNum: radicand " + std::to_string(radicand_) +
                                " is not a square-free integer > 1");
  }
  p_.canonicalize();
  q_.canonicalize();
}

double QuadNum::approx() const {
  return p_.get_d() + q_.get_d() * std::sqrt(static_cast<double>(radicand_));
}

mpq_class QuadNum::norm() const {
  mpq_class n = p_ * p_ - q_ * q_ * radicand_;
  return n;
}

QuadNum operator+(const QuadNum& x, const QuadNum& y) {
  require_same_radicand(x, y);
  return QuadNum(x.p_ + y.p_, x.q_ + y.q_, x.radicand_);
}

QuadNum operator-(const QuadNum& x, const QuadNum& y) {
  require_same_radicand(x, y);
  return QuadNum(x.p_ - y.p_, x.q_ - y.q_, x.radicand_);
}

QuadNum operator*(const QuadNum& x, const QuadNum& y) {
  require_same_radicand(x, y);
  mpq_class p = x.p_ * y.p_ + x.q_ * y.q_ * x.radicand_;
  mpq_class q = x.p_ * y.q_ + x.q_ * y.p_;
  return QuadNum(std::move(p), std::move(q), x.radicand_);
}

QuadNum operator/(const QuadNum& x, const QuadNum& y) {
  require_same_radicand(x, y);
  // y * conj(y) = norm(y), which is zero only for y == 0.
  mpq_class n = y.norm();
  if (sgn(n) == 0) throw std::domain_error("QuadNum: division by zero");
  QuadNum num = x * y.conjugate();
  return QuadNum(num.p_ / n, num.q_ / n, x.radicand_);
}

std::string QuadNum::to_string() const {
  std::ostringstream out;
  out << format_rational(p_) << " + " << format_rational(q_) << "*sqrt(" << radicand_ << ")";
  return out.str();
}

int qsign(const QuadNum& x) {
  const int sp = sgn(x.p());
  const int sq = sgn(x.q());
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  // Opposite signs: the term with larger square wins.
  mpq_class p2 = x.p() * x.p();
  mpq_class q2d = x.q() * x.q() * x.radicand();
  const int c = cmp(p2, q2d);
  if (c == 0) return 0;  // unreachable for square-free D unless p = q = 0
  return c > 0 ? sp : sq;
}

int qcompare(const QuadNum& x, const QuadNum& y) { return qsign(x - y); }

mpz_class qfloor(const QuadNum& x) {
  if (x.is_rational()) {
    mpz_class m;
    mpz_fdiv_q(m.get_mpz_t(), x.p().get_num_mpz_t(), x.p().get_den_mpz_t());
    return m;
  }
  // x - m >= 0 is the test; bracket [lo, hi) with x - lo >= 0 > x - hi.
  auto at_least = [&x](const mpz_class& m) { return qsign(x - mpq_class(m)) >= 0; };

  mpz_class lo;
  const double est = x.approx();
  if (std::isfinite(est) && std::fabs(est) < 1e15) {
    lo = static_cast<long>(std::floor(est));
  } else {
    // Rational bounds floor(sqrt D) <= sqrt D < floor(sqrt D) + 1.
    mpz_class s;
    mpz_class dz(x.radicand());
    mpz_sqrt(s.get_mpz_t(), dz.get_mpz_t());
    const mpq_class root_lo(s);
    const mpq_class root_hi(s + 1);
    const mpq_class bound = sgn(x.q()) > 0 ? x.p() + x.q() * root_lo : x.p() + x.q() * root_hi;
    mpz_fdiv_q(lo.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  }

  mpz_class step = 1;
  while (!at_least(lo)) {
    lo -= step;
    step *= 2;
  }
  mpz_class hi = lo + 1;
  step = 1;
  while (at_least(hi)) {
    lo = hi;
    hi += step;
    step *= 2;
  }
  while (hi - lo > 1) {
    mpz_class mid = (lo + hi) / 2;
    if (at_least(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

QuadNum frac_mod1(const QuadNum& x) { return x - mpq_class(qfloor(x)); }

mpq_class parse_rational(const std::string& text) {
  mpq_class r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

std::string format_rational(const mpq_class& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace riesz
