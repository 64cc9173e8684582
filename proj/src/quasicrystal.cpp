#include "riesz/quasicrystal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace riesz {

UnitInterval::UnitInterval(QuadNum lo, QuadNum hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.radicand() != hi_.radicand()) {
    throw std::invalid_argument("UnitInterval: endpoints use different radicands");
  }
  if (qsign(lo_) < 0 || qcompare(lo_, hi_) >= 0 || qcompare(hi_, QuadNum::rational(1, hi_.radicand())) > 0) {
    throw std::invalid_argument("UnitInterval: need 0 <= lo < hi <= 1");
  }
}

UnitInterval UnitInterval::complement() const {
  const long d = lo_.radicand();
  const QuadNum zero = QuadNum::rational(0, d);
  const QuadNum one = QuadNum::rational(1, d);
  if (lo_ == zero && hi_ != one) return UnitInterval(hi_, one);
  if (hi_ == one && lo_ != zero) return UnitInterval(zero, lo_);
  throw std::invalid_argument("UnitInterval::complement: complement is not a single interval");
}

std::string_view to_string(QcMode mode) { return mode == QcMode::small ? "small" : "large"; }

ModeHint parse_mode_hint(std::string_view text) {
  if (text == "auto") return ModeHint::automatic;
  if (text == "small") return ModeHint::small;
  if (text == "large") return ModeHint::large;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected auto, small or large)");
}

std::string_view to_string(KahaneVerdict v) {
  switch (v) {
    case KahaneVerdict::riesz: return "riesz";
    case KahaneVerdict::not_riesz: return "not_riesz";
    case KahaneVerdict::critical: return "critical";
  }
  return "critical";
}

void PointSet::validate() const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] < window_lo || elements[i] > window_hi) {
      throw std::invalid_argument("PointSet: element " + std::to_string(elements[i]) + " outside window");
    }
    if (i > 0 && elements[i] <= elements[i - 1]) {
      throw std::invalid_argument("PointSet: elements must be strictly increasing");
    }
  }
}

bool PointSet::contains(long x) const { return std::binary_search(elements.begin(), elements.end(), x); }

PointSet integer_window(long lo, long hi) { return progression(1, lo, hi); }

PointSet progression(long step, long lo, long hi, long offset) {
  if (step < 1) throw std::invalid_argument("progression: step must be >= 1");
  if (lo > hi) throw std::invalid_argument("progression: empty window");
  PointSet out;
  out.window_lo = lo;
  out.window_hi = hi;
  for (long x = lo; x <= hi; ++x) {
    if (((x - offset) % step + step) % step == 0) out.elements.push_back(x);
  }
  return out;
}

std::map<long, std::size_t> GapStats::histogram() const {
  std::map<long, std::size_t> h;
  for (long g : gaps) ++h[g];
  return h;
}

PointSet generate(const QuadNum& alpha, const UnitInterval& interval, long lo, long hi) {
  if (lo > hi) throw std::invalid_argument("generate: window with lo > hi");
  if (!(qsign(alpha) > 0 && qcompare(alpha, QuadNum::rational(1, alpha.radicand())) < 0)) {
    throw std::invalid_argument("generate: alpha must lie in (0, 1)");
  }
  const long d = alpha.radicand();
  if (interval.lo().radicand() != d) throw std::invalid_argument("generate: mixed radicands");
  const QuadNum one = QuadNum::rational(1, d);

  PointSet out;
  out.window_lo = lo;
  out.window_hi = hi;
  // frac(alpha (x+1)) = frac(alpha x) + alpha, minus 1 when that reaches 1.
  QuadNum frac = frac_mod1(mpq_class(lo) * alpha);
  for (long x = lo;; ++x) {
    if (interval.contains(frac)) out.elements.push_back(x);
    if (x == hi) break;
    frac = frac + alpha;
    if (qcompare(frac, one) >= 0) frac = frac - one;
  }
  return out;
}

mpq_class shortest_decimal_rational(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::scientific);
  if (res.ec != std::errc()) throw std::invalid_argument("cannot format number");
  std::string text(buf, res.ptr);
  const auto e_pos = text.find('e');
  std::string mantissa = text.substr(0, e_pos);
  long exponent = std::stol(text.substr(e_pos + 1));
  const auto dot = mantissa.find('.');
  if (dot != std::string::npos) {
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
    mantissa.erase(dot, 1);
  }
  mpq_class r(mpz_class(mantissa, 10));
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  if (exponent >= 0) {
    r *= scale;
  } else {
    r /= scale;
  }
  r.canonicalize();
  return r;
}

namespace {

// Midpoint of (lo, hi) plus sqrt(D)/2^k, with k minimal such that the
// perturbation is below a quarter of the interval length.
QuadNum pick_irrational(const mpq_class& lo, const mpq_class& hi, long radicand) {
  if (cmp(lo, hi) >= 0) throw std::invalid_argument("choose_params: admissible interval is empty");
  const mpq_class mid = (lo + hi) / 2;
  const mpq_class quarter = (hi - lo) / 4;
  const mpq_class quarter_sq = quarter * quarter;
  mpz_class q = 1;
  // sqrt(D)/q < quarter  <=>  D < (quarter q)^2
  while (cmp(mpq_class(radicand), quarter_sq * q * q) >= 0) q *= 2;
  QuadNum a(mid, mpq_class(1, 1) / mpq_class(q), radicand);
  const QuadNum qlo = QuadNum::rational(lo, radicand);
  const QuadNum qhi = QuadNum::rational(hi, radicand);
  if (qcompare(a, qlo) <= 0 || qcompare(a, qhi) >= 0) {
    throw std::logic_error("choose_params: perturbed midpoint left the admissible interval");
  }
  return a;
}

mpz_class floor_q(const mpq_class& x) {
  mpz_class m;
  mpz_fdiv_q(m.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return m;
}

mpz_class ceil_q(const mpq_class& x) {
  mpz_class m;
  mpz_cdiv_q(m.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return m;
}

}  // namespace

QcParams choose_params(double s_norm, ModeHint hint, long radicand) {
  if (!(s_norm > 0.0 && s_norm < 1.0)) {
    throw std::invalid_argument("choose_params: s_norm must lie in (0, 1)");
  }
  QcMode mode = QcMode::small;
  if (hint == ModeHint::large) {
    if (s_norm <= 0.5) throw std::invalid_argument("choose_params: large mode needs s_norm > 1/2");
    mode = QcMode::large;
  } else if (hint == ModeHint::automatic && s_norm > 0.5) {
    mode = QcMode::large;
  }

  const mpq_class s = shortest_decimal_rational(s_norm);
  const mpq_class one(1);
  QcParams out;
  out.mode = mode;
  out.s_norm = s_norm;
  out.s_norm_exact = s;

  mpq_class lo;
  mpq_class hi;
  if (mode == QcMode::small) {
    // 1/n < s <= 1/(n-1)
    const mpz_class n = floor_q(one / s) + 1;
    out.n = n.get_si();
    lo = mpq_class(1, out.n);
    hi = s;
    const mpq_class cap(1, out.n - 1);
    if (cmp(cap, hi) < 0) hi = cap;
  } else {
    // 1/(n+1) <= 1 - s < 1/n
    const mpz_class n = ceil_q(one / (one - s)) - 1;
    out.n = n.get_si();
    lo = mpq_class(1, out.n + 1);
    if (cmp(one - s, lo) > 0) lo = one - s;
    hi = mpq_class(1, out.n);
  }
  if (out.n < 2) throw std::logic_error("choose_params: n < 2");

  out.a = pick_irrational(lo, hi, radicand);
  out.alpha = (QuadNum::rational(1, radicand) - out.a) / QuadNum::rational(out.n - 1, radicand);
  out.interval = UnitInterval(QuadNum::rational(0, radicand), out.a);
  return out;
}

PointSet construct_riesz_set(const QcParams& params, long lo, long hi) {
  return generate(params.alpha, params.riesz_interval(), lo, hi);
}

GapStats gap_stats(const PointSet& points) {
  if (points.size() < 2) throw std::invalid_argument("gap_stats: need at least 2 elements");
  GapStats out;
  out.gaps.reserve(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) {
    out.gaps.push_back(points.elements[i] - points.elements[i - 1]);
  }
  const auto [mn, mx] = std::minmax_element(out.gaps.begin(), out.gaps.end());
  out.min_gap = *mn;
  out.gamma = *mx;
  return out;
}

DensityStats density_stats(const PointSet& points, long r) {
  const long len = points.window_length();
  if (r < 1) throw std::invalid_argument("density_stats: r must be >= 1");
  if (len < 1 || r > len) throw std::invalid_argument("density_stats: r exceeds the window");

  // Prefix counts over the window.
  std::vector<long> prefix(static_cast<std::size_t>(len) + 1, 0);
  for (long x : points.elements) ++prefix[static_cast<std::size_t>(x - points.window_lo) + 1];
  for (std::size_t i = 1; i < prefix.size(); ++i) prefix[i] += prefix[i - 1];

  long best = 0;
  long worst = r + 1;
  for (long start = 0; start + r <= len; ++start) {
    const long c = prefix[static_cast<std::size_t>(start + r)] - prefix[static_cast<std::size_t>(start)];
    best = std::max(best, c);
    worst = std::min(worst, c);
  }
  DensityStats out;
  out.window_r = r;
  out.upper_density_est = static_cast<double>(best) / static_cast<double>(r);
  out.lower_density_est = static_cast<double>(worst) / static_cast<double>(r);
  out.asymptotic_density_est = static_cast<double>(points.size()) / static_cast<double>(len);
  return out;
}

bool landau_check(const PointSet& points, const MultibandSet& s, long r, double tol) {
  return density_stats(points, r).upper_density_est <= s.normalized_measure() + tol;
}

KahaneVerdict kahane_classify(long step, double interval_len) {
  if (step < 1) throw std::invalid_argument("kahane_classify: step must be >= 1");
  if (!(interval_len > 0.0 && interval_len <= kTwoPi)) {
    throw std::invalid_argument("kahane_classify: interval length must lie in (0, 2pi]");
  }
  // Compare 1/step with interval_len/2pi, i.e. 2pi with step * interval_len.
  const double lhs = kTwoPi;
  const double rhs = static_cast<double>(step) * interval_len;
  if (std::fabs(lhs - rhs) <= 1e-12 * lhs) return KahaneVerdict::critical;
  return lhs < rhs ? KahaneVerdict::riesz : KahaneVerdict::not_riesz;
}

}  // namespace riesz
