#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "riesz/gram.hpp"

namespace riesz {

/// Finite family of vectors in C^ambient_dim, stored as matrix columns.
class VectorSystem {
 public:
  VectorSystem() = default;
  /// Labels default to 0..count-1.
  explicit VectorSystem(ComplexMatrix vectors);
  VectorSystem(ComplexMatrix vectors, std::vector<long> labels);

  Eigen::Index ambient_dim() const noexcept { return vectors_.rows(); }
  Eigen::Index count() const noexcept { return vectors_.cols(); }
  const ComplexMatrix& vectors() const noexcept { return vectors_; }
  const std::vector<long>& labels() const noexcept { return labels_; }

  /// Column position of a label; throws std::out_of_range if absent.
  Eigen::Index position(long label) const;

  /// Synthesis times analysis: sum of u u^*.
  ComplexMatrix frame_operator() const { return vectors_ * vectors_.adjoint(); }
  HermitianMatrix gram() const;

 private:
  ComplexMatrix vectors_;
  std::vector<long> labels_;
};

/// Vectors whose Gram matrix is the exponential Gram of `frequencies` on S
/// (a Hermitian square root), scaled by 1/scale. Labels are the frequencies.
VectorSystem exponential_system(const std::vector<long>& frequencies, const MultibandSet& s, double scale);

/// Disjoint blocks of labels.
struct BlockSystem {
  std::vector<std::vector<long>> blocks;

  std::size_t r_min() const;
  /// Throws std::invalid_argument on empty or overlapping blocks.
  void validate() const;
};

/// J_k = [rk, r(k+1)) over labels first..first+count-1.
BlockSystem consecutive_blocks(long first, long count, long r);

struct SelectorConfig {
  double delta0 = 0.1;
  std::uint64_t master_seed = 0;
  long max_trials = 10000;
  unsigned threads = 1;

  /// 1/2 - sqrt(2 delta0 (1 - 2 delta0)).
  double eps0() const;
  /// 9 ((1 - delta0)/delta0)^2.
  double c_formula() const;
  /// ceil(C / eps): block size the theory asks for at norm level eps.
  long predicted_block_size(double eps) const;
  void validate() const;
};

struct SelectorResult {
  std::vector<long> selector;  ///< one label per block, in block order
  double achieved_lambda_min = 0.0;
  double achieved_lambda_max = 0.0;
  long trials_used = 0;
  long winning_trial = -1;  ///< trial index of the returned selector
  std::uint64_t seed = 0;   ///< master seed
  double target = 0.0;
  bool success = false;
  int stages = 0;  ///< select_tight only
};

/// Adds at most-delta-norm vectors turning a Bessel-1 system with short
/// vectors into a Parseval frame for its span. Returns only the added vectors.
VectorSystem complete_to_parseval_small(const VectorSystem& u, double delta);

/// Naimark complement of a Parseval frame: M vectors in dimension M - rank
/// with Gram(F) + Gram(G) = I.
VectorSystem naimark_complement(const VectorSystem& f, double check_tol = 1e-10);

/// (1/sqrt(r) + sqrt(delta))^2, or 1 - eps0(delta) in pair mode.
double predicted_bessel_bound(long r, double delta, bool pair_mode);

/// Random one-per-block selection until lambda_max of the selected Gram is <= target.
SelectorResult select_bessel(const VectorSystem& v, const BlockSystem& blocks, double target,
                             const SelectorConfig& cfg);
/// Random one-per-block selection until lambda_min of the selected Gram is >= threshold.
SelectorResult select_riesz(const VectorSystem& v, const BlockSystem& blocks, double threshold,
                            const SelectorConfig& cfg);

/// Gram-level variants; labels name the rows of `gram`.
SelectorResult select_bessel(const HermitianMatrix& gram, const std::vector<long>& labels,
                             const BlockSystem& blocks, double target, const SelectorConfig& cfg);
SelectorResult select_riesz(const HermitianMatrix& gram, const std::vector<long>& labels,
                            const BlockSystem& blocks, double threshold, const SelectorConfig& cfg);

/// Three-stage search for a selector with Riesz bounds in [1 - eps, 1 + eps]:
/// Riesz selection on quarter sub-blocks, Bessel selection on pairs of the
/// survivors, then Bessel selection on the dual of what is left.
SelectorResult select_tight(const VectorSystem& v, const BlockSystem& blocks, double eps,
                            const SelectorConfig& cfg);
SelectorResult select_tight(const HermitianMatrix& gram, const std::vector<long>& labels,
                            const BlockSystem& blocks, double eps, const SelectorConfig& cfg);

struct StableSelector {
  long prefix_length = 0;
  std::vector<long> selector;   ///< agreed choices on blocks 1..prefix_length
  std::vector<std::size_t> members;  ///< indices of the agreeing selectors
};

/// Finite diagonal extraction: the longest prefix on which at least
/// `min_support` of the given selectors agree, found by bucketing the
/// survivors on each successive block.
StableSelector stabilize(const std::vector<std::vector<long>>& selectors, std::size_t min_support = 2);

}  // namespace riesz
