#pragma once

#include <cstddef>
#include <map>
#include <string_view>
#include <vector>

#include "riesz/quadfield.hpp"
#include "riesz/torus.hpp"

namespace riesz {

/// Half-open sub-interval [lo, hi) of [0, 1) with exact endpoints.
class UnitInterval {
 public:
  UnitInterval(QuadNum lo, QuadNum hi);

  const QuadNum& lo() const noexcept { return lo_; }
  const QuadNum& hi() const noexcept { return hi_; }
  QuadNum length() const { return hi_ - lo_; }
  bool contains(const QuadNum& x) const { return qsign(x - lo_) >= 0 && qsign(x - hi_) < 0; }

  /// [0,1) minus this interval. Only defined when one endpoint is 0 or 1.
  UnitInterval complement() const;

 private:
  QuadNum lo_;
  QuadNum hi_;
};

enum class QcMode { small, large };
enum class ModeHint { automatic, small, large };

std::string_view to_string(QcMode mode);
ModeHint parse_mode_hint(std::string_view text);

/// Parameters of the two-gap quasicrystal construction for a spectrum of
/// normalized measure s_norm.
///
/// small: 1/n < a < s_norm <= 1/(n-1), Riesz set Lambda(alpha, [0,a)).
/// large: 1 - 1/n < s_norm <= 1 - 1/(n+1), 1/(n+1) < a < 1/n, 1 - a < s_norm,
///        Riesz set Lambda(alpha, [a,1)).
/// In both modes alpha = (1 - a)/(n - 1) and interval = [0, a).
struct QcParams {
  QcMode mode = QcMode::small;
  long n = 2;
  QuadNum a;
  QuadNum alpha;
  UnitInterval interval{QuadNum::rational(0), QuadNum::rational(1)};
  double s_norm = 0.0;
  mpq_class s_norm_exact;

  /// The interval whose quasicrystal is the Riesz candidate.
  UnitInterval riesz_interval() const {
    return mode == QcMode::small ? interval : interval.complement();
  }
};

/// Sorted set of integers observed inside the inclusive window [lo, hi].
struct PointSet {
  std::vector<long> elements;
  long window_lo = 0;
  long window_hi = -1;

  long window_length() const { return window_hi - window_lo + 1; }
  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }

  /// Throws std::invalid_argument unless elements are strictly increasing
  /// and lie inside the window.
  void validate() const;
  bool contains(long x) const;
};

/// All integers of an inclusive window, or a residue-class subset of it.
PointSet integer_window(long lo, long hi);
PointSet progression(long step, long lo, long hi, long offset = 0);

struct GapStats {
  std::vector<long> gaps;
  long gamma = 0;    ///< largest gap
  long min_gap = 0;  ///< smallest gap
  /// Distinct gap values with multiplicities.
  std::map<long, std::size_t> histogram() const;
};

struct DensityStats {
  double upper_density_est = 0.0;
  double lower_density_est = 0.0;
  double asymptotic_density_est = 0.0;
  long window_r = 0;
};

enum class KahaneVerdict { riesz, not_riesz, critical };
std::string_view to_string(KahaneVerdict v);

/// Lambda(alpha, I) = { n in [lo, hi] : frac(alpha n) in I }, decided exactly.
PointSet generate(const QuadNum& alpha, const UnitInterval& interval, long lo, long hi);

/// Deterministic parameter synthesis. s_norm is read through its shortest
/// round-trip decimal form, so 0.45 means exactly 9/20.
QcParams choose_params(double s_norm, ModeHint hint = ModeHint::automatic,
                       long radicand = QuadNum::kDefaultRadicand);

/// Point set produced by the construction: the Riesz candidate on [lo, hi].
PointSet construct_riesz_set(const QcParams& params, long lo, long hi);

GapStats gap_stats(const PointSet& points);
DensityStats density_stats(const PointSet& points, long r);

/// Upper density estimate is at most |S|/2pi + tol.
bool landau_check(const PointSet& points, const MultibandSet& s, long r, double tol);

/// Riesz property of E(step * Z) on an interval of the given length.
KahaneVerdict kahane_classify(long step, double interval_len);

/// Exact rational read of a double through its shortest decimal representation.
mpq_class shortest_decimal_rational(double x);

}  // namespace riesz
