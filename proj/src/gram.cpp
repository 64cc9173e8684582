#include "riesz/gram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riesz/rng.hpp"

namespace riesz {

HermitianMatrix::HermitianMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw std::invalid_argument("HermitianMatrix: need a non-empty square matrix");
  }
}

double HermitianMatrix::symmetry_residual() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

HermitianMatrix HermitianMatrix::principal(const std::vector<Eigen::Index>& idx) const {
  const auto n = static_cast<Eigen::Index>(idx.size());
  ComplexMatrix sub(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) sub(a, b) = entries_(idx[a], idx[b]);
  }
  return HermitianMatrix(std::move(sub));
}

HermitianMatrix build_gram(const std::vector<long>& frequencies, const MultibandSet& s, bool normalized) {
  if (frequencies.empty()) throw std::invalid_argument("build_gram: empty point set");
  const auto n = static_cast<Eigen::Index>(frequencies.size());
  const double scale = normalized ? 1.0 / kTwoPi : 1.0;
  ComplexMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    g(j, j) = indicator_fourier(s, 0) * scale;
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const std::complex<double> c = indicator_fourier(s, frequencies[k] - frequencies[j]) * scale;
      g(j, k) = c;
      g(k, j) = std::conj(c);
    }
  }
  return HermitianMatrix(std::move(g));
}

HermitianMatrix build_gram(const PointSet& points, const MultibandSet& s, bool normalized) {
  return build_gram(points.elements, s, normalized);
}

namespace {

void require_hermitian(const HermitianMatrix& h, const char* who) {
  if (h.dimension() < 1) throw std::invalid_argument(std::string(who) + ": empty matrix");
  if (h.dimension() > kMaxGramDimension) {
    throw std::invalid_argument(std::string(who) + ": dimension exceeds 4096");
  }
  if (h.symmetry_residual() > 1e-12) {
    throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
  }
}

}  // namespace

Eigen::VectorXd eigenvalues(const HermitianMatrix& h) {
  require_hermitian(h, "eigenvalues");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.entries(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues: solver did not converge");
  return solver.eigenvalues();
}

BoundsEstimate extreme_eigs(const HermitianMatrix& h, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("extreme_eigs: tol must be positive");
  const Eigen::VectorXd ev = eigenvalues(h);
  return {ev(0), ev(ev.size() - 1), tol};
}

HermitianMatrix dual_system(const HermitianMatrix& g) {
  require_hermitian(g, "dual_system");
  const Eigen::VectorXd ev = eigenvalues(g);
  if (!(ev(0) > 0.0) || ev(0) <= 1e-14 * std::max(1.0, ev(ev.size() - 1))) {
    throw std::domain_error("dual_system: Gram matrix is not positive definite");
  }
  Eigen::LLT<ComplexMatrix> llt(g.entries());
  if (llt.info() != Eigen::Success) throw std::domain_error("dual_system: Cholesky factorization failed");
  const auto n = g.dimension();
  ComplexMatrix inv = llt.solve(ComplexMatrix::Identity(n, n));
  ComplexMatrix sym = (inv + inv.adjoint()) * 0.5;
  return HermitianMatrix(std::move(sym));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::supported: return "supported";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double GramCertificate::final_relative_drop() const {
  if (spectra.size() < 2) return 0.0;
  const double prev = spectra[spectra.size() - 2].lambda_min;
  const double last = spectra.back().lambda_min;
  if (prev <= 0.0) return last < prev ? 1.0 : 0.0;
  return (prev - last) / prev;
}

std::vector<long> centered_section(const PointSet& points, long n) {
  if (n < 1) throw std::invalid_argument("centered_section: n must be >= 1");
  const auto& el = points.elements;
  if (static_cast<long>(el.size()) < n) {
    throw std::invalid_argument("centered_section: point set has fewer than " + std::to_string(n) +
                                " elements");
  }
  const long zero_pos = std::lower_bound(el.begin(), el.end(), 0L) - el.begin();
  long first = zero_pos - n / 2;
  first = std::clamp(first, 0L, static_cast<long>(el.size()) - n);
  return {el.begin() + first, el.begin() + first + n};
}

namespace {

constexpr const char* kFiniteSectionNote =
    "finite-section evidence only: each lambda_min is an upper bound on the lower Riesz bound of the "
    "infinite system; 'supported' is not a proof";

}  // namespace

GramCertificate certify(const PointSet& points, const MultibandSet& s, const CertifyOptions& opts,
                        std::string source_description) {
  if (opts.schedule.empty()) throw std::invalid_argument("certify: empty schedule");
  for (std::size_t i = 0; i < opts.schedule.size(); ++i) {
    if (opts.schedule[i] < 1 || (i > 0 && opts.schedule[i] <= opts.schedule[i - 1])) {
      throw std::invalid_argument("certify: schedule must be positive and strictly increasing");
    }
  }
  if (!(opts.threshold > 0.0)) throw std::invalid_argument("certify: threshold must be positive");
  if (static_cast<long>(points.size()) < opts.schedule.back()) {
    throw std::invalid_argument("certify: source has fewer elements than the largest window");
  }

  GramCertificate cert;
  cert.source = std::move(source_description);
  cert.spectrum = s;
  cert.normalized = opts.normalized;
  cert.schedule = opts.schedule;
  cert.threshold = opts.threshold;
  cert.drop_ratio = opts.drop_ratio;
  cert.refute_floor = opts.refute_floor.value_or(opts.normalized ? 1e-6 : 1e-6 * kTwoPi);
  cert.note = kFiniteSectionNote;

  for (long n : opts.schedule) {
    const HermitianMatrix g = build_gram(centered_section(points, n), s, opts.normalized);
    cert.spectra.push_back(extreme_eigs(g, opts.eig_tol));
  }

  const double final_min = cert.spectra.back().lambda_min;
  if (final_min < cert.refute_floor) {
    cert.verdict = Verdict::refuted;
  } else if (final_min >= cert.threshold && cert.final_relative_drop() <= cert.drop_ratio) {
    cert.verdict = Verdict::supported;
  } else {
    cert.verdict = Verdict::inconclusive;
  }
  return cert;
}

GramCertificate certify(const PointSource& source, const MultibandSet& s, const CertifyOptions& opts,
                        std::string source_description) {
  if (opts.schedule.empty()) throw std::invalid_argument("certify: empty schedule");
  const long need = opts.schedule.back();
  long half = std::max(need, 16L);
  for (int attempt = 0; attempt < 40; ++attempt, half *= 2) {
    PointSet points = source(-half, half);
    const long zero_pos =
        std::lower_bound(points.elements.begin(), points.elements.end(), 0L) - points.elements.begin();
    const long after = static_cast<long>(points.size()) - zero_pos;
    if (zero_pos >= need / 2 + 1 && after >= need - need / 2 + 1) {
      return certify(points, s, opts, std::move(source_description));
    }
  }
  throw std::invalid_argument("certify: source is too sparse for the requested schedule");
}

double offset_window_min(const PointSet& points, const MultibandSet& s, long n, int count,
                         std::uint64_t seed, bool normalized) {
  const long total = static_cast<long>(points.size());
  if (n < 1 || total < n) throw std::invalid_argument("offset_window_min: not enough elements");
  SplitMix64 rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < count; ++t) {
    const long first = static_cast<long>(rng.below(static_cast<std::uint64_t>(total - n + 1)));
    std::vector<long> run(points.elements.begin() + first, points.elements.begin() + first + n);
    worst = std::min(worst, extreme_eigs(build_gram(run, s, normalized)).lambda_min);
  }
  return worst;
}

}  // namespace riesz
