#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riesz/quasicrystal.hpp"
#include "riesz/torus.hpp"

namespace riesz {

using ComplexMatrix = Eigen::MatrixXcd;

/// Largest supported Gram dimension for dense eigensolves.
inline constexpr Eigen::Index kMaxGramDimension = 4096;

/// Dense Hermitian matrix. Hermiticity is checked by the consumers that rely
/// on it (extreme_eigs, dual_system), not at construction.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(ComplexMatrix entries);

  Eigen::Index dimension() const noexcept { return entries_.rows(); }
  const ComplexMatrix& entries() const noexcept { return entries_; }
  std::complex<double> operator()(Eigen::Index j, Eigen::Index k) const { return entries_(j, k); }

  /// max |H(j,k) - conj(H(k,j))|.
  double symmetry_residual() const;
  /// Principal submatrix on the given rows/columns, in the given order.
  HermitianMatrix principal(const std::vector<Eigen::Index>& idx) const;

 private:
  ComplexMatrix entries_;
};

struct BoundsEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double tol = 0.0;
};

/// Gram matrix of the exponentials e^{i lambda t} restricted to S:
/// entry (j,k) = c(lambda_k - lambda_j); divided by 2pi when normalized.
HermitianMatrix build_gram(const std::vector<long>& frequencies, const MultibandSet& s, bool normalized);
HermitianMatrix build_gram(const PointSet& points, const MultibandSet& s, bool normalized);

/// Smallest and largest eigenvalue. Throws std::invalid_argument for
/// non-Hermitian input (residual > 1e-12) or dimension > 4096, and
/// std::runtime_error when the eigensolver does not converge.
BoundsEstimate extreme_eigs(const HermitianMatrix& h, double tol = 1e-12);

/// Full ascending spectrum.
Eigen::VectorXd eigenvalues(const HermitianMatrix& h);

/// Gram matrix of the biorthogonal system, i.e. the inverse of a positive
/// definite Gram matrix. Throws std::domain_error when G is singular or
/// indefinite.
HermitianMatrix dual_system(const HermitianMatrix& g);

enum class Verdict { supported, refuted, inconclusive };
std::string_view to_string(Verdict v);

struct CertifyOptions {
  std::vector<long> schedule{16, 32, 64, 128, 256};
  double threshold = 1e-3;
  double drop_ratio = 0.05;
  /// Refutation floor in the certificate's units; unset means 1e-6 * 2pi
  /// unnormalized (1e-6 normalized).
  std::optional<double> refute_floor;
  bool normalized = false;
  double eig_tol = 1e-12;
};

/// Finite-section evidence for (or against) the Riesz property of E(Lambda)
/// in L^2(S). Lower bounds from finite sections only ever overestimate the
/// Riesz constant of the infinite system, so "supported" is evidence rather
/// than proof; that caveat travels with the certificate in `note`.
struct GramCertificate {
  std::string source;
  MultibandSet spectrum;
  bool normalized = false;
  std::vector<long> schedule;
  std::vector<BoundsEstimate> spectra;
  Verdict verdict = Verdict::inconclusive;
  double threshold = 0.0;
  double drop_ratio = 0.0;
  double refute_floor = 0.0;
  std::string note;

  /// (lambda_min[i-1] - lambda_min[i]) / lambda_min[i-1] for the last step; 0
  /// when the schedule has a single entry.
  double final_relative_drop() const;
};

/// The n elements of P closest to the origin, as a consecutive run: starts
/// n/2 elements before the first non-negative element.
std::vector<long> centered_section(const PointSet& points, long n);

/// Produces a point set on the inclusive window [lo, hi].
using PointSource = std::function<PointSet(long lo, long hi)>;

GramCertificate certify(const PointSet& points, const MultibandSet& s, const CertifyOptions& opts,
                        std::string source_description);

/// Generator variant: widens a centered window until every schedule entry fits.
GramCertificate certify(const PointSource& source, const MultibandSet& s, const CertifyOptions& opts,
                        std::string source_description);

/// Cross-check for point sets that are not translation invariant: smallest
/// lambda_min over `count` runs of n consecutive elements at random offsets.
double offset_window_min(const PointSet& points, const MultibandSet& s, long n, int count,
                         std::uint64_t seed, bool normalized);

}  // namespace riesz
