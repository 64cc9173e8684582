#include "riesz/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riesz/rng.hpp"
#include "riesz/torus.hpp"

namespace riesz {

namespace {

long floor_mod(long a, long m) { return ((a % m) + m) % m; }

void require_aligned(const LatticeWindow& w, long side, const char* who) {
  for (int i = 0; i < w.dim(); ++i) {
    if (floor_mod(w.lo[i], side) != 0 || floor_mod(w.hi[i] + 1, side) != 0) {
      throw std::invalid_argument(std::string(who) + ": window is not aligned to the cube side");
    }
  }
}

// Every vector in {0..side-1}^dims, lexicographic.
std::vector<IntVec> offsets(int dims, long side) {
  std::vector<IntVec> out;
  IntVec cur(static_cast<std::size_t>(dims), 0);
  while (true) {
    out.push_back(cur);
    int i = dims - 1;
    while (i >= 0 && ++cur[i] == side) cur[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

// Cube corners of an aligned window, lexicographic.
std::vector<IntVec> cube_bases(const LatticeWindow& w, long side) {
  const int d = w.dim();
  IntVec counts(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) counts[i] = (w.hi[i] + 1 - w.lo[i]) / side;
  std::vector<IntVec> out;
  IntVec idx(static_cast<std::size_t>(d), 0);
  while (true) {
    IntVec base(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) base[i] = w.lo[i] + idx[i] * side;
    out.push_back(std::move(base));
    int i = d - 1;
    while (i >= 0 && ++idx[i] == counts[i]) idx[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace

void LatticeWindow::validate() const {
  if (lo.size() != hi.size() || lo.empty() || lo.size() > kMaxLatticeDim) {
    throw std::invalid_argument("LatticeWindow: dimension must be between 1 and 4");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) throw std::invalid_argument("LatticeWindow: lo > hi");
  }
}

bool LatticeWindow::contains(const IntVec& p) const {
  if (p.size() != lo.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  }
  return true;
}

long LatticeWindow::cell_count() const {
  long n = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) n *= hi[i] - lo[i] + 1;
  return n;
}

std::vector<IntVec> LatticeWindow::points() const {
  validate();
  std::vector<IntVec> out;
  IntVec cur = lo;
  const int d = dim();
  while (true) {
    out.push_back(cur);
    int i = d - 1;
    while (i >= 0 && cur[i] == hi[i]) {
      cur[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

LatticeWindow LatticeWindow::cube(int d, long lo, long hi) {
  LatticeWindow w{IntVec(static_cast<std::size_t>(d), lo), IntVec(static_cast<std::size_t>(d), hi)};
  w.validate();
  return w;
}

double BoxSet::measure() const {
  double total = 0.0;
  for (const auto& box : boxes) {
    double vol = 1.0;
    for (const auto& [a, b] : box) vol *= b - a;
    total += vol;
  }
  return total;
}

void BoxSet::validate() const {
  if (boxes.empty()) throw std::invalid_argument("BoxSet: no boxes");
  const std::size_t d = boxes.front().size();
  if (d < 1 || d > kMaxLatticeDim) throw std::invalid_argument("BoxSet: dimension must be between 1 and 4");
  for (const auto& box : boxes) {
    if (box.size() != d) throw std::invalid_argument("BoxSet: boxes of different dimension");
    for (const auto& [a, b] : box) {
      if (!(a >= 0.0 && b <= kTwoPi && b - a >= kMinArcLength)) {
        throw std::invalid_argument("BoxSet: need 0 <= lo < hi <= 2pi on every axis");
      }
    }
  }
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      bool overlap = true;
      for (std::size_t ax = 0; ax < d; ++ax) {
        const auto& [a1, b1] = boxes[i][ax];
        const auto& [a2, b2] = boxes[j][ax];
        if (b1 <= a2 || b2 <= a1) overlap = false;
      }
      if (overlap) throw std::invalid_argument("BoxSet: boxes overlap");
    }
  }
}

BoxSet BoxSet::from_2pi(const std::vector<std::vector<std::pair<double, double>>>& boxes) {
  BoxSet out;
  for (const auto& box : boxes) {
    std::vector<std::pair<double, double>> rad;
    for (const auto& [a, b] : box) rad.emplace_back(a * kTwoPi, b * kTwoPi);
    out.boxes.push_back(std::move(rad));
  }
  out.validate();
  return out;
}

int cycling_axis(const IntVec& base, long r) {
  const long d = static_cast<long>(base.size());
  long sum = 0;
  for (long k : base) sum += k;
  if (floor_mod(sum, r) != 0) throw std::invalid_argument("cycling_axis: base is not in (rZ)^d");
  const long residue = floor_mod(sum / r, d);
  return residue == 0 ? static_cast<int>(d) : static_cast<int>(residue);
}

std::vector<Segment> cycling_partition(int d, long r, const LatticeWindow& window) {
  if (d < 1 || d > kMaxLatticeDim) throw std::invalid_argument("cycling_partition: d must be between 1 and 4");
  if (r < 2) throw std::invalid_argument("cycling_partition: r must be >= 2");
  window.validate();
  if (window.dim() != d) throw std::invalid_argument("cycling_partition: window dimension mismatch");
  require_aligned(window, r, "cycling_partition");

  std::vector<Segment> out;
  const auto xs = offsets(d - 1, r);
  for (const IntVec& k : cube_bases(window, r)) {
    const int j = cycling_axis(k, r);
    for (const IntVec& x : xs) {
      Segment seg{k, x, j, {}};
      for (long t = 0; t < r; ++t) {
        // Coordinates before axis j take x_1..x_{j-1}, axis j takes t, the rest x_j..x_{d-1}.
        IntVec cell(static_cast<std::size_t>(d));
        for (int i = 0, xi = 0; i < d; ++i) {
          cell[i] = k[i] + (i == j - 1 ? t : x[xi++]);
        }
        seg.cells.push_back(std::move(cell));
      }
      out.push_back(std::move(seg));
    }
  }
  return out;
}

std::vector<Cube> cube_partition(int d, long s, const LatticeWindow& window) {
  if (d < 1 || d > kMaxLatticeDim) throw std::invalid_argument("cube_partition: d must be between 1 and 4");
  if (s < 1) throw std::invalid_argument("cube_partition: s must be >= 1");
  window.validate();
  if (window.dim() != d) throw std::invalid_argument("cube_partition: window dimension mismatch");
  require_aligned(window, s, "cube_partition");

  std::vector<Cube> out;
  const auto xs = offsets(d, s);
  for (const IntVec& k : cube_bases(window, s)) {
    Cube c{k, {}};
    for (const IntVec& x : xs) {
      IntVec cell(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) cell[i] = k[i] + x[i];
      c.cells.push_back(std::move(cell));
    }
    out.push_back(std::move(c));
  }
  return out;
}

double covering_radius(const std::vector<IntVec>& points, const LatticeWindow& window, long margin) {
  if (points.empty()) throw std::invalid_argument("covering_radius: empty point set");
  window.validate();
  LatticeWindow inner = window;
  for (int i = 0; i < window.dim(); ++i) {
    inner.lo[i] += margin;
    inner.hi[i] -= margin;
    if (inner.lo[i] > inner.hi[i]) throw std::invalid_argument("covering_radius: margin leaves no interior");
  }
  double worst_sq = 0.0;
  for (const IntVec& mu : inner.points()) {
    double best_sq = std::numeric_limits<double>::infinity();
    for (const IntVec& p : points) {
      if (p.size() != mu.size()) throw std::invalid_argument("covering_radius: dimension mismatch");
      double sq = 0.0;
      for (std::size_t i = 0; i < mu.size(); ++i) {
        const double diff = static_cast<double>(p[i] - mu[i]);
        sq += diff * diff;
      }
      best_sq = std::min(best_sq, sq);
    }
    worst_sq = std::max(worst_sq, best_sq);
  }
  return std::sqrt(worst_sq);
}

SectionGaps section_gaps(const std::vector<IntVec>& points, int axis, const IntVec& fixed,
                         const LatticeWindow& window) {
  window.validate();
  const int d = window.dim();
  if (axis < 1 || axis > d) throw std::invalid_argument("section_gaps: axis out of range");
  if (static_cast<int>(fixed.size()) != d - 1) throw std::invalid_argument("section_gaps: wrong number of fixed coordinates");
  for (int i = 0, fi = 0; i < d; ++i) {
    if (i == axis - 1) continue;
    if (fixed[fi] < window.lo[i] || fixed[fi] > window.hi[i]) {
      throw std::invalid_argument("section_gaps: section does not meet the window");
    }
    ++fi;
  }

  std::vector<long> coords;
  for (const IntVec& p : points) {
    if (!window.contains(p)) continue;
    bool on_line = true;
    for (int i = 0, fi = 0; i < d && on_line; ++i) {
      if (i == axis - 1) continue;
      on_line = p[i] == fixed[fi++];
    }
    if (on_line) coords.push_back(p[axis - 1]);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  SectionGaps out;
  out.count = coords.size();
  if (coords.size() < 2) {
    out.infinite = true;
    out.stats.gamma = std::numeric_limits<long>::max();
    return out;
  }
  PointSet line;
  line.elements = std::move(coords);
  line.window_lo = window.lo[axis - 1];
  line.window_hi = window.hi[axis - 1];
  out.stats = gap_stats(line);
  return out;
}

SectionSummary all_section_gaps(const std::vector<IntVec>& points, const LatticeWindow& window) {
  window.validate();
  const int d = window.dim();
  SectionSummary out;
  for (int axis = 1; axis <= d; ++axis) {
    // Enumerate the other d-1 coordinates.
    LatticeWindow rest;
    for (int i = 0; i < d; ++i) {
      if (i == axis - 1) continue;
      rest.lo.push_back(window.lo[i]);
      rest.hi.push_back(window.hi[i]);
    }
    const std::vector<IntVec> fixeds = d == 1 ? std::vector<IntVec>{IntVec{}} : rest.points();
    for (const IntVec& fixed : fixeds) {
      const SectionGaps g = section_gaps(points, axis, fixed, window);
      ++out.sections;
      if (g.infinite) {
        ++out.empty_sections;
        out.max_gap = std::numeric_limits<long>::max();
      } else {
        out.max_gap = std::max(out.max_gap, g.stats.gamma);
      }
    }
  }
  return out;
}

std::complex<double> indicator_fourier_d(const BoxSet& s, const IntVec& m) {
  std::complex<double> total = 0.0;
  for (const auto& box : s.boxes) {
    if (box.size() != m.size()) throw std::invalid_argument("indicator_fourier_d: dimension mismatch");
    std::complex<double> prod = 1.0;
    for (std::size_t i = 0; i < box.size(); ++i) prod *= arc_fourier(box[i].first, box[i].second, m[i]);
    total += prod;
  }
  return total;
}

HermitianMatrix build_gram_d(const std::vector<IntVec>& points, const BoxSet& s, bool normalized) {
  if (points.empty()) throw std::invalid_argument("build_gram_d: empty point set");
  const auto n = static_cast<Eigen::Index>(points.size());
  const double scale = normalized ? std::pow(kTwoPi, -static_cast<double>(s.dim())) : 1.0;
  ComplexMatrix g(n, n);
  IntVec diff(points.front().size());
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j; k < n; ++k) {
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = points[k][i] - points[j][i];
      const std::complex<double> c = indicator_fourier_d(s, diff) * scale;
      g(j, k) = c;
      g(k, j) = std::conj(c);
    }
    g(j, j) = g(j, j).real();
  }
  return HermitianMatrix(std::move(g));
}

std::vector<IntVec> random_selection(const std::vector<std::vector<IntVec>>& groups, std::uint64_t seed) {
  std::vector<IntVec> out;
  out.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].empty()) throw std::invalid_argument("random_selection: empty group");
    SplitMix64 rng(derive_seed(seed, i));
    out.push_back(groups[i][rng.below(groups[i].size())]);
  }
  return out;
}

std::vector<std::vector<IntVec>> cells_of(const std::vector<Segment>& segments) {
  std::vector<std::vector<IntVec>> out;
  for (const auto& s : segments) out.push_back(s.cells);
  return out;
}

std::vector<std::vector<IntVec>> cells_of(const std::vector<Cube>& cubes) {
  std::vector<std::vector<IntVec>> out;
  for (const auto& c : cubes) out.push_back(c.cells);
  return out;
}

}  // namespace riesz
