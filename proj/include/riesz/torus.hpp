#pragma once

#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace riesz {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Shortest arc length accepted by normalize_bands (radians).
inline constexpr double kMinArcLength = 1e-12;

/// Half-open arc [start, end) of the torus R / 2piZ, with 0 <= start < end <= 2pi.
struct Arc {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Finite union of half-open arcs of the torus.
///
/// Arcs are kept sorted, pairwise disjoint and non-adjacent. Instances are
/// only built through normalize_bands / complement / full_torus, so the
/// invariants hold for every value in circulation.
class MultibandSet {
 public:
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  /// Lebesgue measure in radians.
  double measure() const noexcept { return measure_; }
  /// Measure as a fraction of the full torus.
  double normalized_measure() const noexcept { return measure_ / kTwoPi; }
  bool is_full() const;

  friend MultibandSet normalize_bands(const std::vector<std::pair<double, double>>& raw);

 private:
  std::vector<Arc> arcs_;
  double measure_ = 0.0;
};

/// Builds a MultibandSet from raw radian bands (lo, hi), lo < hi, hi - lo <= 2pi.
/// Bands may extend past 2pi or start below 0; they are reduced mod 2pi and
/// split at 0. Throws std::invalid_argument on empty input or degenerate bands.
MultibandSet normalize_bands(const std::vector<std::pair<double, double>>& raw);

/// Same as normalize_bands with endpoints given as fractions of 2pi.
MultibandSet normalize_bands_2pi(const std::vector<std::pair<double, double>>& raw);

MultibandSet full_torus();

/// Single arc [0, fraction * 2pi).
MultibandSet single_arc(double fraction);

/// Torus minus S. Throws std::invalid_argument if S is the whole torus.
MultibandSet complement(const MultibandSet& s);

/// S translated by t0 radians.
MultibandSet rotate(const MultibandSet& s, double t0);

/// c(m) = integral over S of exp(-i m t) dt.
std::complex<double> indicator_fourier(const MultibandSet& s, long m);

/// Same closed form for a single arc [start, end).
std::complex<double> arc_fourier(double start, double end, long m);

}  // namespace riesz
