#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "riesz/gram.hpp"
#include "riesz/quasicrystal.hpp"

namespace riesz {

using IntVec = std::vector<long>;

inline constexpr int kMaxLatticeDim = 4;

/// Inclusive box lo..hi of Z^d, 1 <= d <= 4.
struct LatticeWindow {
  IntVec lo;
  IntVec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  void validate() const;
  bool contains(const IntVec& p) const;
  long cell_count() const;
  /// Lattice points in lexicographic order.
  std::vector<IntVec> points() const;

  static LatticeWindow cube(int d, long lo, long hi);
};

/// Line segment of r consecutive cells parallel to `axis` (1-based).
struct Segment {
  IntVec base;    ///< cube corner k in (rZ)^d
  IntVec offset;  ///< x in {0..r-1}^{d-1}
  int axis = 1;
  std::vector<IntVec> cells;
};

/// s-side cube k + {0..s-1}^d.
struct Cube {
  IntVec base;
  std::vector<IntVec> cells;
};

/// Disjoint half-open boxes of [0, 2pi)^d, one (lo, hi) pair per axis.
struct BoxSet {
  std::vector<std::vector<std::pair<double, double>>> boxes;

  int dim() const { return boxes.empty() ? 0 : static_cast<int>(boxes.front().size()); }
  double measure() const;
  void validate() const;
  /// Builds from endpoints given as fractions of 2pi.
  static BoxSet from_2pi(const std::vector<std::vector<std::pair<double, double>>>& boxes);
};

/// Axis of the cube at base k: (k_1 + ... + k_d)/r mod d, residue 0 read as d.
int cycling_axis(const IntVec& base, long r);

/// Partition of an r-aligned window into segments whose direction cycles
/// with the cube index. Cubes are visited in lexicographic order of base,
/// segments in lexicographic order of offset.
std::vector<Segment> cycling_partition(int d, long r, const LatticeWindow& window);

std::vector<Cube> cube_partition(int d, long s, const LatticeWindow& window);

/// max over window points at least `margin` away from every face of the
/// distance to the nearest point of P (Euclidean).
double covering_radius(const std::vector<IntVec>& points, const LatticeWindow& window, long margin = 0);

struct SectionGaps {
  bool infinite = false;  ///< fewer than two section points inside the window
  std::size_t count = 0;
  GapStats stats;
};

/// Gap statistics of the one-dimensional section of P along `axis`
/// (1-based), with the other d-1 coordinates equal to `fixed`.
SectionGaps section_gaps(const std::vector<IntVec>& points, int axis, const IntVec& fixed,
                         const LatticeWindow& window);

/// Largest section gap over every axis and every section of the window;
/// empty sections count as infinite.
struct SectionSummary {
  long max_gap = 0;
  std::size_t sections = 0;
  std::size_t empty_sections = 0;
};
SectionSummary all_section_gaps(const std::vector<IntVec>& points, const LatticeWindow& window);

/// Integral over S of exp(-i <m, t>) dt.
std::complex<double> indicator_fourier_d(const BoxSet& s, const IntVec& m);

/// Exponential Gram on a d-dimensional spectrum; normalized divides by (2pi)^d.
HermitianMatrix build_gram_d(const std::vector<IntVec>& points, const BoxSet& s, bool normalized);

/// One uniformly random cell per group, each group seeded from (seed, index).
std::vector<IntVec> random_selection(const std::vector<std::vector<IntVec>>& groups, std::uint64_t seed);

std::vector<std::vector<IntVec>> cells_of(const std::vector<Segment>& segments);
std::vector<std::vector<IntVec>> cells_of(const std::vector<Cube>& cubes);

}  // namespace riesz
