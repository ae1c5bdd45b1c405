// Copyright 2026 dmtlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License.  You may obtain a copy
// of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.  See the
// License for the specific language governing permissions and limitations
// under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dmtlab/covariance.hpp"
#include "dmtlab/rng.hpp"
#include "dmtlab/types.hpp"

namespace dmtlab {

/// A finite set of m_t×N codeword matrices taken from an SNR-indexed family.
struct Codebook {
  SnrPoint snr;
  double rate = 0.0;  // nominal multiplexing rate of the family
  int tx = 0;         // m_t
  int slots = 0;      // N
  std::vector<Eigen::MatrixXcd> codewords;
};

inline void validate_codebook(const Codebook& cb, const char* where) {
  if (cb.tx < 1 || cb.slots < 1) {
    throw validation_error(std::string(where) +
                           ": codebook dimensions must be positive");
  }
  for (const auto& x : cb.codewords) {
    if (x.rows() != cb.tx || x.cols() != cb.slots) {
      throw validation_error(std::string(where) +
                             ": codeword dimensions disagree with the "
                             "codebook header");
    }
  }
}

/// Gram EᴴE (N×N, Hermitian PSD) of the difference E = X − X′.
inline Eigen::MatrixXcd difference_gram(const Eigen::MatrixXcd& x,
                                        const Eigen::MatrixXcd& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw validation_error("difference_gram: codeword dimensions differ");
  }
  const Eigen::MatrixXcd e = x - y;
  return e.adjoint() * e;
}

/// N×N Hadamard criterion matrix R ⊙ EᴴE.
inline Eigen::MatrixXcd criterion_hadamard(const CovarianceSpec& cov,
                                           const Eigen::MatrixXcd& e) {
  if (e.cols() != cov.slots()) {
    throw validation_error("criterion matrix: difference has " +
                           std::to_string(e.cols()) + " slots, covariance " +
                           std::to_string(cov.slots()));
  }
  const Eigen::MatrixXcd gram = e.adjoint() * e;
  return cov.matrix.cwiseProduct(gram);
}

/// (N·m_t)×(N·m_t) criterion matrix in its proof form:
/// Υ = (R^{1/2}⊗I_{m_t})·blockdiag(e_0e_0ᴴ, …, e_{N−1}e_{N−1}ᴴ)·(R^{1/2}⊗I_{m_t})
/// with e_n the per-slot columns of E.  Υ and R ⊙ EᴴE share their nonzero
/// spectrum (congruence/AB-vs-BA argument), which the tests verify.
inline Eigen::MatrixXcd criterion_upsilon(const CovarianceSpec& cov,
                                          const Eigen::MatrixXcd& e) {
  if (e.cols() != cov.slots()) {
    throw validation_error("criterion_upsilon: difference has " +
                           std::to_string(e.cols()) + " slots, covariance " +
                           std::to_string(cov.slots()));
  }
  const Eigen::Index n = cov.slots();
  const Eigen::Index m_t = e.rows();
  const Eigen::Index dim = n * m_t;
  Eigen::MatrixXcd kron(dim, dim);  // R^{1/2} ⊗ I_{m_t}
  kron.setZero();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index a = 0; a < m_t; ++a) {
        kron(i * m_t + a, j * m_t + a) = cov.sqrt_factor(i, j);
      }
    }
  }
  Eigen::MatrixXcd block_diag(dim, dim);
  block_diag.setZero();
  for (Eigen::Index s = 0; s < n; ++s) {
    block_diag.block(s * m_t, s * m_t, m_t, m_t) =
        e.col(s) * e.col(s).adjoint();
  }
  return kron * block_diag * kron;
}

/// One pairwise criterion verdict: the numerical rank of the criterion
/// matrix against the required ρ·m_t, plus the retained-eigenvalue margin.
struct RankCheck {
  int rank = 0;
  int required = 0;
  bool pass = false;
  double lambda_min_nz = 0.0;  // smallest retained eigenvalue
  double lambda_max = 0.0;
  double threshold = 0.0;  // absolute retention threshold used
  double margin = 0.0;     // lambda_min_nz / threshold (0 if degenerate)
};

/// Criterion rank of a codeword difference E (m_t×N): full rank ρ·m_t
/// passes.  Computed on R ⊙ EᴴE for m_t = 1 and on Υ for m_t > 1; the two
/// spectra agree on nonzero eigenvalues, so the verdict is the same either
/// way.
inline RankCheck criterion_rank(const CovarianceSpec& cov,
                                const Eigen::MatrixXcd& e,
                                double rel_tol = -1.0) {
  const Eigen::MatrixXcd m =
      e.rows() == 1 ? criterion_hadamard(cov, e) : criterion_upsilon(cov, e);
  if (rel_tol < 0.0) rel_tol = cov.rank_tolerance;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m,
                                                     Eigen::EigenvaluesOnly);
  const Eigen::VectorXd eigs = es.eigenvalues().cwiseMax(0.0);  // ascending

  RankCheck check;
  check.required = cov.rank * int(e.rows());
  check.lambda_max = eigs[eigs.size() - 1];
  if (check.lambda_max > 0.0) {
    check.threshold = rel_tol * check.lambda_max;
    for (Eigen::Index k = 0; k < eigs.size(); ++k) {
      if (eigs[k] > check.threshold) {
        if (check.rank == 0) check.lambda_min_nz = eigs[k];
        ++check.rank;
      }
    }
    check.margin =
        check.threshold > 0.0 ? check.lambda_min_nz / check.threshold : 0.0;
  }
  check.pass = check.rank == check.required;
  return check;
}

/// λ(SNR): the minimum over all codeword pairs of the smallest nonzero
/// eigenvalue of the criterion matrix.
inline double codebook_lambda(const CovarianceSpec& cov, const Codebook& cb) {
  validate_codebook(cb, "codebook_lambda");
  if (cb.codewords.size() < 2) {
    throw validation_error("codebook_lambda: need at least two codewords");
  }
  double lambda = std::numeric_limits<double>::infinity();
  bool any_nonzero = false;
  for (size_t i = 0; i < cb.codewords.size(); ++i) {
    for (size_t j = i + 1; j < cb.codewords.size(); ++j) {
      const Eigen::MatrixXcd e = cb.codewords[j] - cb.codewords[i];
      const RankCheck check = criterion_rank(cov, e);
      if (check.lambda_max > 0.0) {
        any_nonzero = true;
        lambda = std::min(lambda, check.lambda_min_nz);
      }
    }
  }
  if (!any_nonzero) {
    throw validation_error("codebook_lambda: degenerate codebook, every "
                           "codeword pair has zero difference");
  }
  return lambda;
}

struct PairCheck {
  std::size_t first = 0;
  std::size_t second = 0;
  RankCheck check;
};

/// Whole-codebook criterion report.  pass requires every pair at full rank
/// ρ·m_t and the block-length condition N ≥ ρ·m_t.
struct CriterionReport {
  int required_rank = 0;
  bool block_length_ok = false;
  std::vector<PairCheck> pairs;
  double lambda = 0.0;
  bool pass = false;
};

inline CriterionReport check_codebook(const CovarianceSpec& cov,
                                      const Codebook& cb) {
  validate_codebook(cb, "check_codebook");
  if (cb.codewords.size() < 2) {
    throw validation_error("check_codebook: need at least two codewords");
  }
  if (cb.slots != cov.slots()) {
    throw validation_error("check_codebook: codebook block length " +
                           std::to_string(cb.slots) +
                           " disagrees with covariance size " +
                           std::to_string(cov.slots()));
  }
  CriterionReport report;
  report.required_rank = cov.rank * cb.tx;
  report.block_length_ok = cb.slots >= report.required_rank;
  report.lambda = std::numeric_limits<double>::infinity();
  bool all_pass = true;
  bool any_nonzero = false;
  for (size_t i = 0; i < cb.codewords.size(); ++i) {
    for (size_t j = i + 1; j < cb.codewords.size(); ++j) {
      PairCheck pair;
      pair.first = i;
      pair.second = j;
      pair.check =
          criterion_rank(cov, cb.codewords[j] - cb.codewords[i]);
      all_pass = all_pass && pair.check.pass;
      if (pair.check.lambda_max > 0.0) {
        any_nonzero = true;
        report.lambda = std::min(report.lambda, pair.check.lambda_min_nz);
      }
      report.pairs.push_back(std::move(pair));
    }
  }
  if (!any_nonzero) {
    throw validation_error("check_codebook: degenerate codebook, every "
                           "codeword pair has zero difference");
  }
  report.pass = all_pass && report.block_length_ok;
  return report;
}

/// Regression verdict for the eigenvalue-decay condition
/// λ^{m_min}(SNR) ≥ SNR^{−(r−ε)} (up to the fitted exponent): with
/// λ(SNR) ≈ SNR^{−b}, pass iff m_min·b ≤ r − ε within the fit's standard
/// error.  Also reports the stronger non-vanishing condition b ≤ 0.
struct DecayVerdict {
  double decay = 0.0;      // fitted b in λ(SNR) ≈ SNR^{−b}
  double std_error = 0.0;  // residual-based OLS standard error of b
  std::size_t points = 0;
  bool pass = false;
  bool non_vanishing = false;
};

inline DecayVerdict check_decay(
    const std::vector<std::pair<SnrPoint, double>>& lambda_by_snr,
    const AntennaConfig& ant, double rate, double epsilon) {
  if (lambda_by_snr.size() < 2) {
    throw insufficient_data_error(
        "check_decay: need at least two SNR points, got " +
        std::to_string(lambda_by_snr.size()));
  }
  if (!(epsilon >= 0.0) || !(rate > 0.0)) {
    throw validation_error("check_decay: need rate > 0 and epsilon >= 0");
  }
  const size_t n = lambda_by_snr.size();
  std::vector<double> xs(n), ys(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& [snr, lambda] = lambda_by_snr[i];
    if (!(lambda > 0.0)) {
      throw validation_error("check_decay: lambda must be positive at every "
                             "SNR point");
    }
    xs[i] = std::log(snr.linear);
    ys[i] = std::log(lambda);
  }
  double x_bar = 0.0, y_bar = 0.0;
  for (size_t i = 0; i < n; ++i) {
    x_bar += xs[i];
    y_bar += ys[i];
  }
  x_bar /= double(n);
  y_bar /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - x_bar) * (xs[i] - x_bar);
    sxy += (xs[i] - x_bar) * (ys[i] - y_bar);
  }
  if (!(sxx > 0.0)) {
    throw insufficient_data_error("check_decay: SNR points are not distinct");
  }
  const double slope = sxy / sxx;

  DecayVerdict verdict;
  verdict.decay = -slope;
  verdict.points = n;
  if (n > 2) {
    double rss = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double resid = ys[i] - y_bar - slope * (xs[i] - x_bar);
      rss += resid * resid;
    }
    verdict.std_error = std::sqrt(rss / double(n - 2) / sxx);
  }
  const double m_min = double(ant.min_dim());
  verdict.pass = m_min * verdict.decay <=
                 (rate - epsilon) + m_min * verdict.std_error + 1e-12;
  verdict.non_vanishing = verdict.decay <= verdict.std_error + 1e-9;
  return verdict;
}

/// Convenience overload evaluating λ for each codebook of a family first.
inline DecayVerdict check_decay(const CovarianceSpec& cov,
                                const std::vector<Codebook>& family,
                                const AntennaConfig& ant, double rate,
                                double epsilon) {
  std::vector<std::pair<SnrPoint, double>> lambda_by_snr;
  lambda_by_snr.reserve(family.size());
  for (const auto& cb : family) {
    lambda_by_snr.emplace_back(cb.snr, codebook_lambda(cov, cb));
  }
  return check_decay(lambda_by_snr, ant, rate, epsilon);
}

/// Closed-form pairwise-error-probability upper bound
/// Π_k (1 + (snr/4m_t)·λ_k(Υ))^{−m_r}, the complex-Gaussian average of
/// exp(−(snr/4m_t)·tr(H_w Υ H_wᴴ)).  Zero eigenvalues contribute unit
/// factors.
inline double pep_upper_bound(const CovarianceSpec& cov,
                              const Eigen::MatrixXcd& e,
                              const AntennaConfig& ant, double snr) {
  if (!(snr > 0.0)) {
    throw validation_error("pep_upper_bound: snr must be positive");
  }
  const Eigen::MatrixXcd m =
      e.rows() == 1 ? criterion_hadamard(cov, e) : criterion_upsilon(cov, e);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m,
                                                     Eigen::EigenvaluesOnly);
  const Eigen::VectorXd eigs = es.eigenvalues().cwiseMax(0.0);
  const double scale = snr / (4.0 * double(ant.tx));
  double log_bound = 0.0;
  for (Eigen::Index k = 0; k < eigs.size(); ++k) {
    log_bound -= double(ant.rx) * std::log1p(scale * eigs[k]);
  }
  return std::exp(log_bound);
}

/// Monte Carlo mean and standard error of the exponential PEP bound
/// exp(−(snr/4m_t)·tr(H_w Υ H_wᴴ)) over i.i.d. CN(0,1) draws of the
/// m_r × (N·m_t) matrix H_w.  Validation oracle for pep_upper_bound.
inline std::pair<double, double> pep_mc_mean(const CovarianceSpec& cov,
                                             const Eigen::MatrixXcd& e,
                                             const AntennaConfig& ant,
                                             double snr, std::uint64_t draws,
                                             std::uint64_t seed) {
  if (draws < 2) {
    throw validation_error("pep_mc_mean: need at least two draws");
  }
  const Eigen::MatrixXcd m =
      e.rows() == 1 ? criterion_hadamard(cov, e) : criterion_upsilon(cov, e);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const Eigen::VectorXd eigs = es.eigenvalues().cwiseMax(0.0);
  // tr(H_w Υ H_wᴴ) = Σ_k λ_k·Σ_i |(H_w V)_{ik}|², so only the spectrum and
  // an i.i.d. rotation-invariant Gaussian matrix are needed.
  const double scale = snr / (4.0 * double(ant.tx));
  const Eigen::Index cols = eigs.size();
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t t = 0; t < draws; ++t) {
    TrialRng rng(seed, StreamDomain::whitened, t);
    double quad = 0.0;
    for (int i = 0; i < ant.rx; ++i) {
      for (Eigen::Index k = 0; k < cols; ++k) {
        quad += eigs[k] * std::norm(rng.normal());
      }
    }
    const double value = std::exp(-scale * quad);
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / double(draws);
  const double var =
      (sum_sq - sum * sum / double(draws)) / double(draws - 1);
  return {mean, std::sqrt(std::max(var, 0.0) / double(draws))};
}

/// Union bound over the codebook at multiplexing rate r:
/// SNR^{N·r}·exp(−(λ(SNR)/4m_t)·SNR^{r/m_min}).
inline double union_bound(const CovarianceSpec& cov, const Codebook& cb,
                          const AntennaConfig& ant, double snr, double rate) {
  if (!(snr > 0.0) || !(rate > 0.0)) {
    throw validation_error("union_bound: need snr > 0 and rate > 0");
  }
  const double lambda = codebook_lambda(cov, cb);
  const double log_value =
      double(cb.slots) * rate * std::log(snr) -
      lambda / (4.0 * double(ant.tx)) *
          std::pow(snr, rate / double(ant.min_dim()));
  return std::exp(log_value);
}

/// Deterministic delay-diversity test fixture: alphabet_size unit-modulus
/// symbols s_k = e^{2πik/A}; codeword k places s_k on transmit antenna
/// (n mod m_t) in slot n and zero elsewhere.  Distinct codewords differ in
/// every slot, which is what the criterion rewards.
inline Codebook make_delay_diversity_codebook(const AntennaConfig& ant,
                                              int slots, int alphabet_size,
                                              const SnrPoint& snr) {
  if (slots < 1) {
    throw validation_error("make_delay_diversity_codebook: slots must be "
                           ">= 1");
  }
  if (alphabet_size < 2) {
    throw validation_error("make_delay_diversity_codebook: alphabet must "
                           "have at least two symbols");
  }
  Codebook cb;
  cb.snr = snr;
  cb.tx = ant.tx;
  cb.slots = slots;
  cb.codewords.reserve(size_t(alphabet_size));
  for (int k = 0; k < alphabet_size; ++k) {
    const double phase =
        2.0 * std::numbers::pi * double(k) / double(alphabet_size);
    const std::complex<double> symbol(std::cos(phase), std::sin(phase));
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(ant.tx, slots);
    for (int n = 0; n < slots; ++n) {
      x(n % ant.tx, n) = symbol;
    }
    cb.codewords.push_back(std::move(x));
  }
  return cb;
}

}  // namespace dmtlab
