#include "riesz/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "riesz/rng.hpp"

namespace riesz {

VectorSystem::VectorSystem(ComplexMatrix vectors) : vectors_(std::move(vectors)) {
  labels_.resize(static_cast<std::size_t>(vectors_.cols()));
  for (std::size_t i = 0; i < labels_.size(); ++i) labels_[i] = static_cast<long>(i);
}

VectorSystem::VectorSystem(ComplexMatrix vectors, std::vector<long> labels)
    : vectors_(std::move(vectors)), labels_(std::move(labels)) {
  if (static_cast<Eigen::Index>(labels_.size()) != vectors_.cols()) {
    throw std::invalid_argument("VectorSystem: one label per vector required");
  }
  std::set<long> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw std::invalid_argument("VectorSystem: labels must be unique");
}

Eigen::Index VectorSystem::position(long label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("VectorSystem: unknown label " + std::to_string(label));
  return it - labels_.begin();
}

HermitianMatrix VectorSystem::gram() const {
  ComplexMatrix g = vectors_.adjoint() * vectors_;
  ComplexMatrix sym = (g + g.adjoint()) * 0.5;
  return HermitianMatrix(std::move(sym));
}

VectorSystem exponential_system(const std::vector<long>& frequencies, const MultibandSet& s, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("exponential_system: scale must be positive");
  const HermitianMatrix g = build_gram(frequencies, s, false);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(g.entries() / scale);
  if (solver.info() != Eigen::Success) throw std::runtime_error("exponential_system: eigensolver failed");
  const Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  ComplexMatrix v = solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().adjoint();
  return VectorSystem(std::move(v), frequencies);
}

std::size_t BlockSystem::r_min() const {
  std::size_t r = std::numeric_limits<std::size_t>::max();
  for (const auto& b : blocks) r = std::min(r, b.size());
  return blocks.empty() ? 0 : r;
}

void BlockSystem::validate() const {
  if (blocks.empty()) throw std::invalid_argument("BlockSystem: no blocks");
  std::set<long> seen;
  for (const auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("BlockSystem: empty block");
    for (long x : b) {
      if (!seen.insert(x).second) throw std::invalid_argument("BlockSystem: blocks overlap");
    }
  }
}

BlockSystem consecutive_blocks(long first, long count, long r) {
  if (r < 1 || count < r) throw std::invalid_argument("consecutive_blocks: need 1 <= r <= count");
  BlockSystem out;
  for (long k = 0; (k + 1) * r <= count; ++k) {
    std::vector<long> block;
    for (long i = 0; i < r; ++i) block.push_back(first + k * r + i);
    out.blocks.push_back(std::move(block));
  }
  return out;
}

double SelectorConfig::eps0() const { return 0.5 - std::sqrt(2.0 * delta0 * (1.0 - 2.0 * delta0)); }

double SelectorConfig::c_formula() const {
  const double ratio = (1.0 - delta0) / delta0;
  return 9.0 * ratio * ratio;
}

long SelectorConfig::predicted_block_size(double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("predicted_block_size: eps must be positive");
  return static_cast<long>(std::ceil(c_formula() / eps));
}

void SelectorConfig::validate() const {
  if (!(delta0 > 0.0 && delta0 < 0.25)) throw std::invalid_argument("SelectorConfig: delta0 must lie in (0, 1/4)");
  if (max_trials < 1) throw std::invalid_argument("SelectorConfig: max_trials must be >= 1");
}

// ---------------------------------------------------------------------------
// Parseval completion and Naimark complement

VectorSystem complete_to_parseval_small(const VectorSystem& u, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("complete_to_parseval_small: delta must lie in (0,1)");
  const Eigen::Index dim = u.ambient_dim();
  for (Eigen::Index i = 0; i < u.count(); ++i) {
    if (u.vectors().col(i).squaredNorm() > delta + 1e-12) {
      throw std::invalid_argument("complete_to_parseval_small: vector with squared norm above delta");
    }
  }
  const ComplexMatrix frame_op = u.frame_operator();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((frame_op + frame_op.adjoint()) * 0.5);
  if (solver.info() != Eigen::Success) throw std::runtime_error("complete_to_parseval_small: eigensolver failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  if (dim > 0 && lambda(dim - 1) > 1.0 + 1e-10) {
    throw std::invalid_argument("complete_to_parseval_small: Bessel bound exceeds 1");
  }

  // Nonzero eigenpairs still short of 1.
  std::vector<Eigen::Index> deficient;
  double smallest = 1.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (lambda(i) <= 1e-10) continue;
    if (1.0 - lambda(i) <= 1e-12) continue;
    deficient.push_back(i);
    smallest = std::min(smallest, lambda(i));
  }

  long next_label = 0;
  for (long l : u.labels()) next_label = std::max(next_label, l + 1);
  if (deficient.empty()) return VectorSystem(ComplexMatrix(dim, 0), {});

  // Smallest m with (1 - lambda_min)/m < delta.
  const long m = static_cast<long>(std::floor((1.0 - smallest) / delta)) + 1;
  ComplexMatrix added(dim, static_cast<Eigen::Index>(deficient.size()) * m);
  std::vector<long> labels;
  Eigen::Index col = 0;
  for (Eigen::Index i : deficient) {
    const double weight = std::sqrt((1.0 - std::min(lambda(i), 1.0)) / static_cast<double>(m));
    for (long c = 0; c < m; ++c) {
      added.col(col++) = weight * solver.eigenvectors().col(i);
      labels.push_back(next_label++);
    }
  }
  return VectorSystem(std::move(added), std::move(labels));
}

VectorSystem naimark_complement(const VectorSystem& f, double check_tol) {
  const Eigen::Index m = f.count();
  if (m < 1) throw std::invalid_argument("naimark_complement: empty system");
  // Parseval for its span <=> Gram is an orthogonal projection.
  const ComplexMatrix g = f.gram().entries();
  if ((g * g - g).cwiseAbs().maxCoeff() > check_tol) {
    throw std::invalid_argument("naimark_complement: system is not a Parseval frame for its span");
  }
  const ComplexMatrix comp = ComplexMatrix::Identity(m, m) - g;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(comp);
  if (solver.info() != Eigen::Success) throw std::runtime_error("naimark_complement: eigensolver failed");

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (solver.eigenvalues()(i) > 0.5) keep.push_back(i);
  }
  ComplexMatrix out(static_cast<Eigen::Index>(keep.size()), m);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = solver.eigenvectors().col(keep[r]).adjoint();
  }
  return VectorSystem(std::move(out), f.labels());
}

double predicted_bessel_bound(long r, double delta, bool pair_mode) {
  if (pair_mode) {
    if (!(delta > 0.0 && delta < 0.25)) throw std::invalid_argument("predicted_bessel_bound: pair mode needs delta in (0, 1/4)");
    return 1.0 - (0.5 - std::sqrt(2.0 * delta * (1.0 - 2.0 * delta)));
  }
  if (r < 2) throw std::invalid_argument("predicted_bessel_bound: r must be >= 2");
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("predicted_bessel_bound: delta must lie in [0, 1)");
  const double root = 1.0 / std::sqrt(static_cast<double>(r)) + std::sqrt(delta);
  return root * root;
}

// ---------------------------------------------------------------------------
// Randomized selectors

namespace {

enum class Objective { bessel, riesz };

struct Candidate {
  long trial = -1;
  std::vector<long> selector;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool hit = false;
};

// a is strictly better than b (quality first, then lexicographic selector).
bool better(const Candidate& a, const Candidate& b, Objective obj) {
  if (b.trial < 0) return a.trial >= 0;
  if (obj == Objective::bessel) {
    if (a.lambda_max != b.lambda_max) return a.lambda_max < b.lambda_max;
  } else {
    if (a.lambda_min != b.lambda_min) return a.lambda_min > b.lambda_min;
  }
  if (a.selector != b.selector) return a.selector < b.selector;
  return a.trial < b.trial;
}

SelectorResult run_selector(const HermitianMatrix& gram, const std::vector<long>& labels,
                            const BlockSystem& blocks, double target, const SelectorConfig& cfg,
                            Objective obj) {
  blocks.validate();
  cfg.validate();
  if (!(target > 0.0)) throw std::invalid_argument("selector: target must be positive");
  if (static_cast<Eigen::Index>(labels.size()) != gram.dimension()) {
    throw std::invalid_argument("selector: label count does not match Gram dimension");
  }
  std::unordered_map<long, Eigen::Index> where;
  for (std::size_t i = 0; i < labels.size(); ++i) where[labels[i]] = static_cast<Eigen::Index>(i);
  std::vector<std::vector<Eigen::Index>> pos(blocks.blocks.size());
  for (std::size_t k = 0; k < blocks.blocks.size(); ++k) {
    for (long l : blocks.blocks[k]) {
      const auto it = where.find(l);
      if (it == where.end()) throw std::invalid_argument("selector: block label " + std::to_string(l) + " not in system");
      pos[k].push_back(it->second);
    }
  }

  const bool forced = blocks.r_min() == 1 &&
                      std::all_of(pos.begin(), pos.end(), [](const auto& b) { return b.size() == 1; });

  auto evaluate = [&](long trial) {
    Candidate c;
    c.trial = trial;
    SplitMix64 rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(trial)));
    std::vector<Eigen::Index> rows;
    rows.reserve(pos.size());
    for (std::size_t k = 0; k < pos.size(); ++k) {
      const auto pick = rng.below(pos[k].size());
      rows.push_back(pos[k][pick]);
      c.selector.push_back(blocks.blocks[k][pick]);
    }
    const BoundsEstimate b = extreme_eigs(gram.principal(rows));
    c.lambda_min = b.lambda_min;
    c.lambda_max = b.lambda_max;
    c.hit = obj == Objective::bessel ? c.lambda_max <= target : c.lambda_min >= target;
    return c;
  };

  const long max_trials = forced ? 1 : cfg.max_trials;
  const unsigned threads = std::max(1u, cfg.threads);
  const long batch = static_cast<long>(threads) * 16;

  Candidate best;
  Candidate first_hit;
  for (long start = 0; start < max_trials && first_hit.trial < 0; start += batch) {
    const long stop = std::min(max_trials, start + batch);
    std::vector<Candidate> results(static_cast<std::size_t>(stop - start));
    auto work = [&](unsigned w) {
      for (long t = start + w; t < stop; t += threads) results[static_cast<std::size_t>(t - start)] = evaluate(t);
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }
    // Results are reduced in trial order regardless of which thread made them.
    for (auto& c : results) {
      if (c.hit) {
        first_hit = std::move(c);
        break;
      }
      if (better(c, best, obj)) best = std::move(c);
    }
  }

  const Candidate& chosen = first_hit.trial >= 0 ? first_hit : best;
  SelectorResult out;
  out.selector = chosen.selector;
  out.achieved_lambda_min = chosen.lambda_min;
  out.achieved_lambda_max = chosen.lambda_max;
  out.trials_used = first_hit.trial >= 0 ? first_hit.trial + 1 : max_trials;
  out.winning_trial = chosen.trial;
  out.seed = cfg.master_seed;
  out.target = target;
  out.success = first_hit.trial >= 0;
  return out;
}

}  // namespace

SelectorResult select_bessel(const HermitianMatrix& gram, const std::vector<long>& labels,
                             const BlockSystem& blocks, double target, const SelectorConfig& cfg) {
  return run_selector(gram, labels, blocks, target, cfg, Objective::bessel);
}

SelectorResult select_riesz(const HermitianMatrix& gram, const std::vector<long>& labels,
                            const BlockSystem& blocks, double threshold, const SelectorConfig& cfg) {
  return run_selector(gram, labels, blocks, threshold, cfg, Objective::riesz);
}

SelectorResult select_bessel(const VectorSystem& v, const BlockSystem& blocks, double target,
                             const SelectorConfig& cfg) {
  return select_bessel(v.gram(), v.labels(), blocks, target, cfg);
}

SelectorResult select_riesz(const VectorSystem& v, const BlockSystem& blocks, double threshold,
                            const SelectorConfig& cfg) {
  return select_riesz(v.gram(), v.labels(), blocks, threshold, cfg);
}

namespace {

// Splits each block into `parts` contiguous chunks whose sizes differ by at most one.
BlockSystem subdivide(const BlockSystem& blocks, std::size_t parts) {
  BlockSystem out;
  for (const auto& b : blocks.blocks) {
    std::size_t offset = 0;
    for (std::size_t p = 0; p < parts; ++p) {
      const std::size_t size = b.size() / parts + (p < b.size() % parts ? 1 : 0);
      out.blocks.emplace_back(b.begin() + static_cast<long>(offset), b.begin() + static_cast<long>(offset + size));
      offset += size;
    }
  }
  return out;
}

// Regroups a flat selector made on `parts` chunks per original block.
BlockSystem regroup(const std::vector<long>& selector, std::size_t blocks, std::size_t parts, std::size_t group) {
  BlockSystem out;
  for (std::size_t k = 0; k < blocks; ++k) {
    for (std::size_t g = 0; g < parts / group; ++g) {
      const auto first = selector.begin() + static_cast<long>(k * parts + g * group);
      out.blocks.emplace_back(first, first + static_cast<long>(group));
    }
  }
  return out;
}

std::vector<Eigen::Index> rows_of(const std::vector<long>& chosen, const std::unordered_map<long, Eigen::Index>& where) {
  std::vector<Eigen::Index> rows;
  for (long l : chosen) rows.push_back(where.at(l));
  return rows;
}

}  // namespace

SelectorResult select_tight(const HermitianMatrix& gram, const std::vector<long>& labels,
                            const BlockSystem& blocks, double eps, const SelectorConfig& cfg) {
  blocks.validate();
  cfg.validate();
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("select_tight: eps must lie in (0, 1)");
  if (blocks.r_min() < 4) throw std::invalid_argument("select_tight: blocks must have at least 4 elements");
  for (Eigen::Index i = 0; i < gram.dimension(); ++i) {
    if (std::abs(gram(i, i).real() - 1.0) > 1e-10) {
      throw std::invalid_argument("select_tight: system is not unit norm");
    }
  }
  std::unordered_map<long, Eigen::Index> where;
  for (std::size_t i = 0; i < labels.size(); ++i) where[labels[i]] = static_cast<Eigen::Index>(i);
  const std::size_t nblocks = blocks.blocks.size();
  const double lo = 1.0 - eps;
  const double hi = 1.0 + eps;

  auto stage_cfg = [&cfg](std::uint64_t stage) {
    SelectorConfig c = cfg;
    c.master_seed = derive_seed(cfg.master_seed, stage);
    return c;
  };
  // If every bound of the surviving system is already within [lo, hi], any
  // one-per-block subfamily is too (interlacing), so the first survivor per
  // block finishes the job.
  auto finish_early = [&](const std::vector<long>& survivors, std::size_t per_block, int stage,
                          const SelectorResult& last) -> std::optional<SelectorResult> {
    const BoundsEstimate b = extreme_eigs(gram.principal(rows_of(survivors, where)));
    if (b.lambda_min < lo || b.lambda_max > hi) return std::nullopt;
    SelectorResult out = last;
    out.selector.clear();
    for (std::size_t k = 0; k < nblocks; ++k) out.selector.push_back(survivors[k * per_block]);
    const BoundsEstimate f = extreme_eigs(gram.principal(rows_of(out.selector, where)));
    out.achieved_lambda_min = f.lambda_min;
    out.achieved_lambda_max = f.lambda_max;
    out.success = true;
    out.stages = stage;
    out.target = eps;
    out.seed = cfg.master_seed;
    return out;
  };

  // Stage 1: lower bound on quarter sub-blocks.
  const SelectorResult s1 = select_riesz(gram, labels, subdivide(blocks, 4), cfg.eps0(), stage_cfg(1));
  if (auto done = finish_early(s1.selector, 4, 1, s1)) return *done;

  // Stage 2: pull the upper bound down, pairs of survivors.
  const BlockSystem pairs1 = regroup(s1.selector, nblocks, 4, 2);
  std::vector<long> rows1_labels = s1.selector;
  const HermitianMatrix g1 = gram.principal(rows_of(rows1_labels, where));
  const SelectorResult s2 = select_bessel(g1, rows1_labels, pairs1, hi, stage_cfg(2));
  if (auto done = finish_early(s2.selector, 2, 2, s2)) return *done;

  // Stage 3: on the dual of the survivors, pull the upper bound down again.
  const HermitianMatrix g2 = gram.principal(rows_of(s2.selector, where));
  SelectorResult out;
  out.seed = cfg.master_seed;
  out.target = eps;
  out.stages = 3;
  HermitianMatrix dual;
  try {
    dual = dual_system(g2);
  } catch (const std::domain_error&) {
    out.selector.clear();
    for (std::size_t k = 0; k < nblocks; ++k) out.selector.push_back(s2.selector[2 * k]);
    const BoundsEstimate f = extreme_eigs(gram.principal(rows_of(out.selector, where)));
    out.achieved_lambda_min = f.lambda_min;
    out.achieved_lambda_max = f.lambda_max;
    out.trials_used = s1.trials_used + s2.trials_used;
    out.success = false;
    return out;
  }
  const BlockSystem pairs2 = regroup(s2.selector, nblocks, 2, 2);
  const SelectorResult s3 = select_bessel(dual, s2.selector, pairs2, hi, stage_cfg(3));
  const BoundsEstimate f = extreme_eigs(gram.principal(rows_of(s3.selector, where)));
  out.selector = s3.selector;
  out.achieved_lambda_min = f.lambda_min;
  out.achieved_lambda_max = f.lambda_max;
  out.trials_used = s1.trials_used + s2.trials_used + s3.trials_used;
  out.winning_trial = s3.winning_trial;
  out.success = f.lambda_min >= lo && f.lambda_max <= hi;
  return out;
}

SelectorResult select_tight(const VectorSystem& v, const BlockSystem& blocks, double eps,
                            const SelectorConfig& cfg) {
  return select_tight(v.gram(), v.labels(), blocks, eps, cfg);
}

// ---------------------------------------------------------------------------

StableSelector stabilize(const std::vector<std::vector<long>>& selectors, std::size_t min_support) {
  if (selectors.empty()) throw std::invalid_argument("stabilize: no selectors given");
  if (min_support < 1) min_support = 1;

  using Group = std::vector<std::size_t>;
  std::vector<Group> level;
  {
    Group all(selectors.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    level.push_back(std::move(all));
  }
  StableSelector best;
  best.members = level.front();

  for (std::size_t depth = 0;; ++depth) {
    // Pigeonhole pass: bucket each surviving group on its choice at this block.
    std::vector<Group> next;
    for (const Group& g : level) {
      std::map<long, Group> buckets;
      for (std::size_t idx : g) {
        if (selectors[idx].size() > depth) buckets[selectors[idx][depth]].push_back(idx);
      }
      for (auto& [choice, members] : buckets) {
        if (members.size() >= min_support) next.push_back(std::move(members));
      }
    }
    if (next.empty()) break;
    // Most supported bucket, then the one whose earliest member comes first.
    const auto pick = std::min_element(next.begin(), next.end(), [](const Group& a, const Group& b) {
      if (a.size() != b.size()) return a.size() > b.size();
      return a.front() < b.front();
    });
    best.prefix_length = static_cast<long>(depth + 1);
    best.members = *pick;
    const auto& witness = selectors[pick->front()];
    best.selector.assign(witness.begin(), witness.begin() + static_cast<long>(depth + 1));
    level = std::move(next);
  }
  return best;
}

}  // namespace riesz
