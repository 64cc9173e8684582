#include <doctest.h>

#include <map>
#include <random>

#include "riesz/frames.hpp"

using namespace riesz;

namespace {

constexpr double pi = std::numbers::pi;

ComplexMatrix random_complex(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = {g(rng), g(rng)};
  }
  return m;
}

// First `dim` rows of a random M x M unitary.
VectorSystem random_parseval(std::mt19937_64& rng, Eigen::Index dim, Eigen::Index m) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(rng, m, m));
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, m);
  return VectorSystem(q.topRows(dim));
}

ComplexMatrix gram_of(const VectorSystem& v, const std::vector<Eigen::Index>& idx) {
  ComplexMatrix cols(v.ambient_dim(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = v.vectors().col(idx[i]);
  return cols.adjoint() * cols;
}

double lambda_min_of(const ComplexMatrix& h) {
  return extreme_eigs(HermitianMatrix((h + h.adjoint()) * 0.5)).lambda_min;
}
double lambda_max_of(const ComplexMatrix& h) {
  return extreme_eigs(HermitianMatrix((h + h.adjoint()) * 0.5)).lambda_max;
}

std::vector<long> range(long lo, long hi) {
  std::vector<long> out;
  for (long x = lo; x <= hi; ++x) out.push_back(x);
  return out;
}

// Projection onto the span of u's vectors.
ComplexMatrix span_projection(const ComplexMatrix& vectors) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(vectors * vectors.adjoint());
  ComplexMatrix p = ComplexMatrix::Zero(vectors.rows(), vectors.rows());
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    if (s.eigenvalues()(i) > 1e-9) p += s.eigenvectors().col(i) * s.eigenvectors().col(i).adjoint();
  }
  return p;
}

// Pairwise longest common prefix oracle for stabilize with min_support = 2.
StableSelector stabilize_oracle(const std::vector<std::vector<long>>& sel) {
  long depth = 0;
  for (std::size_t i = 0; i < sel.size(); ++i) {
    for (std::size_t j = i + 1; j < sel.size(); ++j) {
      long l = 0;
      while (l < static_cast<long>(std::min(sel[i].size(), sel[j].size())) && sel[i][l] == sel[j][l]) ++l;
      depth = std::max(depth, l);
    }
  }
  StableSelector out;
  out.prefix_length = depth;
  if (depth == 0) return out;
  std::map<std::vector<long>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < sel.size(); ++i) {
    if (static_cast<long>(sel[i].size()) >= depth) groups[{sel[i].begin(), sel[i].begin() + depth}].push_back(i);
  }
  for (const auto& [prefix, members] : groups) {
    if (members.size() < 2) continue;
    if (out.members.empty() || members.size() > out.members.size() ||
        (members.size() == out.members.size() && members.front() < out.members.front())) {
      out.members = members;
      out.selector = prefix;
    }
  }
  return out;
}

HermitianMatrix unit_exponential_gram(long count, double fraction) {
  const ComplexMatrix g = build_gram(range(0, count - 1), single_arc(fraction), true).entries() / fraction;
  return HermitianMatrix(g);
}

}  // namespace

TEST_CASE("complete_to_parseval_small examples") {
  ComplexMatrix one = ComplexMatrix::Zero(2, 1);
  one(0, 0) = 0.5;
  const VectorSystem added = complete_to_parseval_small(VectorSystem(one), 0.25);
  REQUIRE(added.count() == 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(std::abs(std::abs(added.vectors()(0, i)) - std::sqrt(0.1875)) < 1e-14);
    CHECK(std::abs(added.vectors()(1, i)) < 1e-14);
  }
  ComplexMatrix total = one * one.adjoint() + added.frame_operator();
  CHECK(std::abs(total(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(total(1, 1)) < 1e-12);

  // (1 - 0.2)/m < 0.2 needs m = 5 copies per axis
  const ComplexMatrix diag = std::sqrt(0.2) * ComplexMatrix::Identity(2, 2);
  const VectorSystem five = complete_to_parseval_small(VectorSystem(diag), 0.2);
  CHECK(five.count() == 10);
  const ComplexMatrix sum = diag * diag.adjoint() + five.frame_operator();
  CHECK((sum - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index i = 0; i < five.count(); ++i) CHECK(five.vectors().col(i).squaredNorm() <= 0.2 + 1e-12);

  ComplexMatrix parseval = ComplexMatrix::Zero(3, 4);
  for (int c = 0; c < 4; ++c) parseval(0, c) = 0.5;
  CHECK(complete_to_parseval_small(VectorSystem(parseval), 0.3).count() == 0);
}

TEST_CASE("complete_to_parseval_small errors") {
  CHECK_THROWS_AS(complete_to_parseval_small(VectorSystem(ComplexMatrix::Identity(2, 2)), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(complete_to_parseval_small(VectorSystem(ComplexMatrix::Identity(2, 2) * 0.1), 0.0), std::invalid_argument);
  ComplexMatrix heavy = ComplexMatrix::Zero(1, 20);
  heavy.setConstant(0.3);
  CHECK_THROWS_AS(complete_to_parseval_small(VectorSystem(heavy), 0.1), std::invalid_argument);
}

TEST_CASE("property: Parseval completion on random Bessel systems") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> dims(2, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const double delta = trial % 2 ? 0.1 : 0.2;
    const int dim = dims(rng);
    const int count = dims(rng);
    ComplexMatrix u = random_complex(rng, dim, count);
    // squared norms <= delta, then Bessel bound <= 1
    for (Eigen::Index c = 0; c < u.cols(); ++c) u.col(c) *= std::sqrt(delta) * 0.99 / u.col(c).norm();
    const double top = lambda_max_of(u * u.adjoint());
    if (top > 1.0) u /= std::sqrt(top) * 1.0001;
    const VectorSystem added = complete_to_parseval_small(VectorSystem(u), delta);
    for (Eigen::Index i = 0; i < added.count(); ++i) CHECK(added.vectors().col(i).squaredNorm() <= delta + 1e-12);
    const ComplexMatrix total = u * u.adjoint() + added.frame_operator();
    CHECK((total - span_projection(u)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("naimark_complement examples") {
  ComplexMatrix f(1, 2);
  f << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const VectorSystem g = naimark_complement(VectorSystem(f));
  REQUIRE(g.ambient_dim() == 1);
  REQUIRE(g.count() == 2);
  CHECK(std::abs(std::abs(g.vectors()(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(g.vectors()(0, 0) + g.vectors()(0, 1)) < 1e-14);
  CHECK(((f.adjoint() * f) + g.vectors().adjoint() * g.vectors() - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  const VectorSystem square = naimark_complement(VectorSystem(ComplexMatrix::Identity(3, 3)));
  CHECK(square.ambient_dim() == 0);
  CHECK(square.count() == 3);

  CHECK_THROWS_AS(naimark_complement(VectorSystem(ComplexMatrix::Identity(2, 2) * 2.0)), std::invalid_argument);
}

TEST_CASE("property: Naimark identity and complement duality on random Parseval frames") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> dims(2, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = dims(rng);
    const int m = dim + 1 + static_cast<int>(rng() % static_cast<unsigned>(12 - dim));
    const VectorSystem f = random_parseval(rng, dim, m);
    const VectorSystem g = naimark_complement(f);
    CHECK(g.ambient_dim() == m - dim);
    std::vector<Eigen::Index> j;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (rng() % 2) j.push_back(i);
    }
    if (j.empty()) j.push_back(0);
    const ComplexMatrix sum = gram_of(f, j) + gram_of(g, j);
    CHECK((sum - ComplexMatrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() < 1e-10);
    const double top = lambda_max_of(gram_of(f, j));
    const double bottom = lambda_min_of(gram_of(g, j));
    CHECK(std::abs(top + bottom - 1.0) < 1e-10);
  }
}

TEST_CASE("predicted_bessel_bound examples") {
  CHECK(predicted_bessel_bound(4, 0.04, false) == doctest::Approx(0.49).epsilon(1e-14));
  CHECK(predicted_bessel_bound(2, 0.125, true) == doctest::Approx(0.5 + std::sqrt(3.0 / 16.0)).epsilon(1e-14));
  CHECK(predicted_bessel_bound(1000000, 0.0, false) == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK_THROWS_AS(predicted_bessel_bound(0, 0.1, false), std::invalid_argument);
}

TEST_CASE("SelectorConfig") {
  SelectorConfig cfg;
  CHECK(cfg.eps0() == doctest::Approx(0.5 - std::sqrt(0.16)));
  CHECK(cfg.c_formula() == doctest::Approx(729.0));
  CHECK(cfg.predicted_block_size(0.5) == 1458);
  cfg.delta0 = 0.3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.delta0 = 0.1;
  cfg.max_trials = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("blocks") {
  const BlockSystem b = consecutive_blocks(10, 7, 2);
  CHECK(b.blocks.size() == 3);
  CHECK(b.blocks[2] == std::vector<long>{14, 15});
  CHECK(b.r_min() == 2);
  CHECK_THROWS_AS((BlockSystem{{{1, 2}, {2, 3}}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((BlockSystem{{{1, 2}, {}}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS(BlockSystem{}.validate(), std::invalid_argument);
}

TEST_CASE("select_bessel: forced and orthogonal cases") {
  const HermitianMatrix g = unit_exponential_gram(16, 0.9);
  std::vector<long> labels = range(0, 15);
  const SelectorResult forced = select_bessel(g, labels, consecutive_blocks(0, 16, 1), 100.0, SelectorConfig{});
  CHECK(forced.success);
  CHECK(forced.trials_used == 1);
  CHECK(forced.selector == labels);
  CHECK(forced.achieved_lambda_max == doctest::Approx(extreme_eigs(g).lambda_max));

  const VectorSystem ortho = exponential_system(range(0, 63), full_torus(), kTwoPi);
  SelectorConfig cfg;
  const SelectorResult r = select_bessel(ortho, consecutive_blocks(0, 64, 4), 1.0 + 1e-9, cfg);
  CHECK(r.success);
  CHECK(r.winning_trial == 0);
  CHECK(r.achieved_lambda_max == doctest::Approx(1.0));
}

TEST_CASE("select_riesz agrees with exhaustive search on 8 pair blocks") {
  const HermitianMatrix g = unit_exponential_gram(16, 0.9);
  const std::vector<long> labels = range(0, 15);
  const BlockSystem blocks = consecutive_blocks(0, 16, 2);
  double best_min = 0.0;
  double best_max = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < 256; ++mask) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index k = 0; k < 8; ++k) rows.push_back(2 * k + ((mask >> k) & 1u));
    const BoundsEstimate b = extreme_eigs(g.principal(rows));
    best_min = std::max(best_min, b.lambda_min);
    best_max = std::min(best_max, b.lambda_max);
  }
  SelectorConfig cfg;
  cfg.max_trials = 4000;
  const SelectorResult feasible = select_riesz(g, labels, blocks, 0.95 * best_min, cfg);
  CHECK(feasible.success);
  CHECK(feasible.achieved_lambda_min >= 0.95 * best_min);

  const SelectorResult impossible = select_riesz(g, labels, blocks, best_min + 1e-9, cfg);
  CHECK_FALSE(impossible.success);
  CHECK(impossible.trials_used == 4000);
  CHECK(impossible.achieved_lambda_min <= best_min + 1e-12);
  CHECK(impossible.achieved_lambda_min == doctest::Approx(best_min).epsilon(1e-12));

  const SelectorResult bessel = select_bessel(g, labels, blocks, best_max * 1.01, cfg);
  CHECK(bessel.success);
  CHECK_FALSE(select_bessel(g, labels, blocks, best_max - 1e-9, cfg).success);
}

TEST_CASE("property: selectors are valid and identical across thread counts") {
  const HermitianMatrix g = unit_exponential_gram(32, 0.7);
  const std::vector<long> labels = range(0, 31);
  const BlockSystem blocks = consecutive_blocks(0, 32, 4);
  for (double threshold : {0.2, 0.9}) {
    SelectorConfig cfg;
    cfg.master_seed = 1234;
    cfg.max_trials = 300;
    const SelectorResult one = select_riesz(g, labels, blocks, threshold, cfg);
    cfg.threads = 3;
    const SelectorResult three = select_riesz(g, labels, blocks, threshold, cfg);
    CHECK(one.selector == three.selector);
    CHECK(one.achieved_lambda_min == three.achieved_lambda_min);
    CHECK(one.trials_used == three.trials_used);
    CHECK(one.winning_trial == three.winning_trial);
    REQUIRE(one.selector.size() == blocks.blocks.size());
    for (std::size_t k = 0; k < blocks.blocks.size(); ++k) {
      const auto& b = blocks.blocks[k];
      CHECK(std::find(b.begin(), b.end(), one.selector[k]) != b.end());
    }
  }
}

TEST_CASE("select_riesz reports failure on a non-Riesz family") {
  const HermitianMatrix g = build_gram(range(0, 63), normalize_bands({{0.0, pi}}), true);
  const SelectorResult r = select_riesz(g, range(0, 63), consecutive_blocks(0, 64, 1), 1e-3, SelectorConfig{});
  CHECK_FALSE(r.success);
  CHECK(r.achieved_lambda_min < 1e-3);
}

TEST_CASE("selector errors") {
  const HermitianMatrix g = unit_exponential_gram(8, 0.9);
  CHECK_THROWS_AS(select_riesz(g, range(0, 7), consecutive_blocks(0, 8, 2), 0.0, SelectorConfig{}), std::invalid_argument);
  CHECK_THROWS_AS(select_riesz(g, range(0, 6), consecutive_blocks(0, 6, 2), 0.1, SelectorConfig{}), std::invalid_argument);
  CHECK_THROWS_AS(select_riesz(g, range(0, 7), consecutive_blocks(4, 8, 2), 0.1, SelectorConfig{}), std::invalid_argument);
}

TEST_CASE("select_tight") {
  SelectorConfig cfg;
  const VectorSystem ortho(ComplexMatrix::Identity(16, 16));
  const SelectorResult exact = select_tight(ortho, consecutive_blocks(0, 16, 4), 0.1, cfg);
  CHECK(exact.success);
  CHECK(exact.stages == 1);

  const HermitianMatrix g = unit_exponential_gram(64, 0.95);
  const SelectorResult tight = select_tight(g, range(0, 63), consecutive_blocks(0, 64, 8), 0.5, cfg);
  CHECK(tight.success);
  CHECK(tight.achieved_lambda_min >= 0.5);
  CHECK(tight.achieved_lambda_max <= 1.5);
  CHECK(tight.selector.size() == 8);
  CHECK(extreme_eigs(g.principal([&] {
          std::vector<Eigen::Index> rows(tight.selector.begin(), tight.selector.end());
          return rows;
        }())).lambda_min == doctest::Approx(tight.achieved_lambda_min));

  cfg.max_trials = 200;
  const SelectorResult fails = select_tight(g, range(0, 63), consecutive_blocks(0, 64, 8), 1e-9, cfg);
  CHECK_FALSE(fails.success);

  CHECK_THROWS_AS(select_tight(g, range(0, 63), consecutive_blocks(0, 64, 2), 0.5, cfg), std::invalid_argument);
  CHECK_THROWS_AS(select_tight(build_gram(range(0, 63), single_arc(0.5), true), range(0, 63),
                               consecutive_blocks(0, 64, 8), 0.5, cfg),
                  std::invalid_argument);
}

TEST_CASE("stabilize examples") {
  const std::vector<std::vector<long>> same(4, std::vector<long>{3, 1, 4, 1, 5});
  const StableSelector s = stabilize(same);
  CHECK(s.prefix_length == 5);
  CHECK(s.selector == same.front());
  CHECK(s.members.size() == 4);

  const StableSelector alt = stabilize({{0, 5}, {1, 6}, {0, 7}, {1, 8}, {0, 9}});
  CHECK(alt.prefix_length >= 1);
  CHECK(alt.selector.front() == 0);
  CHECK(alt.members == std::vector<std::size_t>{0, 2, 4});

  CHECK(stabilize({{1}, {2}}).prefix_length == 0);
  CHECK_THROWS_AS(stabilize({}), std::invalid_argument);
}

TEST_CASE("property: stabilize matches the pairwise prefix oracle") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const long width = 2 + static_cast<long>(rng() % 3);
    const std::size_t count = 2 + rng() % 30;
    std::vector<std::vector<long>> sel(count, std::vector<long>(8));
    for (auto& s : sel) {
      for (long& x : s) x = static_cast<long>(rng() % static_cast<unsigned long>(width));
    }
    const StableSelector got = stabilize(sel);
    const StableSelector want = stabilize_oracle(sel);
    CHECK(got.prefix_length == want.prefix_length);
    if (want.prefix_length > 0) {
      CHECK(got.selector == want.selector);
      CHECK(got.members == want.members);
    }
  }
}

TEST_CASE("stabilize on 30 random selectors over 3-element blocks reaches depth 3 almost surely") {
  // Monte-Carlo oracle: among 30 sequences over 3 letters, some pair shares a
  // length-3 prefix unless all 27 prefixes are hit at most once, which is impossible.
  std::mt19937_64 rng(44);
  int hits = 0;
  for (int run = 0; run < 200; ++run) {
    std::vector<std::vector<long>> sel(30, std::vector<long>(10));
    for (auto& s : sel) {
      for (long& x : s) x = static_cast<long>(rng() % 3);
    }
    if (stabilize(sel).prefix_length >= 3) ++hits;
  }
  CHECK(hits == 200);
}
