#include "riesz/torus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riesz {

bool MultibandSet::is_full() const {
  return arcs_.size() == 1 && arcs_.front().start == 0.0 && arcs_.front().end == kTwoPi;
}

MultibandSet normalize_bands(const std::vector<std::pair<double, double>>& raw) {
  if (raw.empty()) throw std::invalid_argument("normalize_bands: no bands given");

  std::vector<Arc> pieces;
  for (const auto& [lo, hi] : raw) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw std::invalid_argument("normalize_bands: non-finite band endpoint");
    }
    const double len = hi - lo;
    if (!(len >= kMinArcLength)) {
      throw std::invalid_argument("normalize_bands: band of zero or negative length");
    }
    if (len > kTwoPi * (1.0 + 1e-15)) {
      throw std::invalid_argument("normalize_bands: band longer than the torus");
    }
    if (len >= kTwoPi) {
      pieces.push_back({0.0, kTwoPi});
      continue;
    }
    double start = std::fmod(lo, kTwoPi);
    if (start < 0.0) start += kTwoPi;
    if (start >= kTwoPi) start = 0.0;
    const double end = start + len;
    if (end <= kTwoPi) {
      pieces.push_back({start, end});
    } else {
      pieces.push_back({start, kTwoPi});
      const double wrapped = end - kTwoPi;
      if (wrapped >= kMinArcLength) pieces.push_back({0.0, wrapped});
    }
  }

  std::sort(pieces.begin(), pieces.end(),
            [](const Arc& a, const Arc& b) { return a.start < b.start; });

  MultibandSet out;
  for (const Arc& a : pieces) {
    if (!out.arcs_.empty() && a.start <= out.arcs_.back().end) {
      out.arcs_.back().end = std::max(out.arcs_.back().end, a.end);
    } else {
      out.arcs_.push_back(a);
    }
  }
  for (const Arc& a : out.arcs_) out.measure_ += a.length();
  if (out.measure_ <= 0.0) throw std::invalid_argument("normalize_bands: total measure is zero");
  return out;
}

MultibandSet normalize_bands_2pi(const std::vector<std::pair<double, double>>& raw) {
  std::vector<std::pair<double, double>> rad;
  rad.reserve(raw.size());
  for (const auto& [lo, hi] : raw) rad.emplace_back(lo * kTwoPi, hi * kTwoPi);
  return normalize_bands(rad);
}

MultibandSet full_torus() { return normalize_bands({{0.0, kTwoPi}}); }

MultibandSet single_arc(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("single_arc: fraction must lie in (0, 1]");
  }
  return normalize_bands({{0.0, fraction * kTwoPi}});
}

MultibandSet complement(const MultibandSet& s) {
  std::vector<std::pair<double, double>> gaps;
  double cursor = 0.0;
  for (const Arc& a : s.arcs()) {
    if (a.start - cursor >= kMinArcLength) gaps.emplace_back(cursor, a.start);
    cursor = a.end;
  }
  if (kTwoPi - cursor >= kMinArcLength) gaps.emplace_back(cursor, kTwoPi);
  if (gaps.empty()) throw std::invalid_argument("complement: set covers the full torus");
  return normalize_bands(gaps);
}

MultibandSet rotate(const MultibandSet& s, double t0) {
  std::vector<std::pair<double, double>> shifted;
  for (const Arc& a : s.arcs()) shifted.emplace_back(a.start + t0, a.end + t0);
  return normalize_bands(shifted);
}

std::complex<double> arc_fourier(double start, double end, long m) {
  if (m == 0) return {end - start, 0.0};
  // (e^{-ims} - e^{-ime}) / (im) written out so that c(-m) == conj(c(m)) bit for bit.
  const double md = static_cast<double>(m);
  const double re = std::cos(md * start) - std::cos(md * end);
  const double im = std::sin(md * end) - std::sin(md * start);
  return {im / md, -re / md};
}

std::complex<double> indicator_fourier(const MultibandSet& s, long m) {
  if (m == 0) return {s.measure(), 0.0};
  std::complex<double> sum = 0.0;
  for (const Arc& a : s.arcs()) sum += arc_fourier(a.start, a.end, m);
  return sum;
}

}  // namespace riesz
