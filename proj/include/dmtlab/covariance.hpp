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
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dmtlab/errors.hpp"

namespace dmtlab {

/// Per-tap powers σ_l² of a finite power-delay profile; L = variances.size().
struct PowerDelayProfile {
  std::vector<double> variances;
};

/// Default relative eigenvalue tolerance for numerical rank decisions:
/// eigenvalues above tol·λ_max count, with tol = 64·n·ε.  The rank drives
/// the theoretical curve, so the tolerance is exposed as a knob everywhere
/// rank is computed.
inline double default_rank_tolerance(int n) {
  return 64.0 * static_cast<double>(n) *
         std::numeric_limits<double>::epsilon();
}

/// Numerical rank of a Hermitian PSD spectrum: number of eigenvalues
/// strictly above rel_tol·max(eigenvalue).  A zero spectrum has rank 0
/// (callers that need ρ ≥ 1 reject it upstream).
inline int numerical_rank(const Eigen::VectorXd& eigs_any_order,
                          double rel_tol) {
  const double lambda_max = eigs_any_order.size() ? eigs_any_order.maxCoeff()
                                                  : 0.0;
  if (!(lambda_max > 0.0)) return 0;
  const double threshold = rel_tol * lambda_max;
  int rank = 0;
  for (Eigen::Index i = 0; i < eigs_any_order.size(); ++i) {
    if (eigs_any_order[i] > threshold) ++rank;
  }
  return rank;
}

/// Numerical rank of a Hermitian matrix via its eigenvalues.
inline int covariance_rank(const Eigen::MatrixXcd& r_matrix, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r_matrix,
                                                     Eigen::EigenvaluesOnly);
  Eigen::VectorXd eigs = es.eigenvalues().cwiseMax(0.0);
  return numerical_rank(eigs, rel_tol);
}

inline int covariance_rank(const Eigen::MatrixXcd& r_matrix) {
  return covariance_rank(r_matrix,
                         default_rank_tolerance(int(r_matrix.rows())));
}

/// The N×N slot covariance R of one scalar subchannel across the N slots,
/// together with everything downstream consumers need: the eigensystem
/// (ascending, negatives clipped to 0), the numerical rank ρ, the extreme
/// nonzero eigenvalues, and a Hermitian square root for sampling.
/// After construction the diagonal is normalized to 1 (unit subchannel
/// power); any rescaling applied is recorded in normalization_scale.
struct CovarianceSpec {
  Eigen::MatrixXcd matrix;       // N×N Hermitian PSD, diag = 1
  Eigen::VectorXd eigenvalues;   // ascending, clipped at 0, sums to N
  Eigen::MatrixXcd sqrt_factor;  // Hermitian PSD, sqrt_factor² = matrix
  int rank = 0;                  // ρ
  double lambda_min_nz = 0.0;    // smallest nonzero eigenvalue
  double lambda_max = 0.0;       // largest eigenvalue
  double normalization_scale = 1.0;  // input power scale divided out
  double rank_tolerance = 0.0;       // relative tolerance used for ρ

  int slots() const { return static_cast<int>(matrix.rows()); }
};

namespace detail {

inline CovarianceSpec finalize_covariance(Eigen::MatrixXcd r_matrix,
                                          double scale, double rel_tol,
                                          const char* what) {
  const auto n = r_matrix.rows();
  if (n < 1 || r_matrix.cols() != n) {
    throw validation_error(std::string(what) + ": covariance must be square");
  }
  if (rel_tol < 0.0) rel_tol = default_rank_tolerance(int(n));

  const double magnitude = r_matrix.cwiseAbs().maxCoeff();
  const double herm_err = (r_matrix - r_matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > 1e-10 * std::max(magnitude, 1.0)) {
    throw validation_error(std::string(what) + ": matrix is not Hermitian");
  }
  r_matrix = ((r_matrix + r_matrix.adjoint()) / 2.0).eval();

  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw validation_error(std::string(what) + ": nonpositive power scale");
  }
  r_matrix /= scale;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r_matrix);
  if (es.info() != Eigen::Success) {
    throw validation_error(std::string(what) + ": eigendecomposition failed");
  }
  Eigen::VectorXd eigs = es.eigenvalues();  // ascending
  const double lambda_max = eigs[n - 1];
  if (!(lambda_max > 0.0)) {
    throw validation_error(std::string(what) + ": covariance is zero");
  }
  if (eigs[0] < -rel_tol * lambda_max) {
    throw validation_error(std::string(what) +
                           ": matrix is not positive semidefinite (min "
                           "eigenvalue " +
                           std::to_string(eigs[0]) + ")");
  }
  eigs = eigs.cwiseMax(0.0);

  CovarianceSpec cov;
  cov.matrix = std::move(r_matrix);
  cov.eigenvalues = eigs;
  cov.sqrt_factor = es.eigenvectors() *
                    eigs.cwiseSqrt().asDiagonal() *
                    es.eigenvectors().adjoint();
  cov.rank = numerical_rank(eigs, rel_tol);
  cov.lambda_max = lambda_max;
  const double threshold = rel_tol * lambda_max;
  cov.lambda_min_nz = lambda_max;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eigs[i] > threshold) {
      cov.lambda_min_nz = eigs[i];  // ascending scan: first hit is smallest
      break;
    }
  }
  cov.normalization_scale = scale;
  cov.rank_tolerance = rel_tol;
  return cov;
}

}  // namespace detail

/// Covariance from an arbitrary Hermitian PSD matrix.  The matrix is
/// normalized by its mean diagonal entry so that diag ≈ 1.
inline CovarianceSpec build_covariance(const Eigen::MatrixXcd& r_matrix,
                                       double rel_tol = -1.0) {
  if (r_matrix.rows() < 1 || r_matrix.cols() != r_matrix.rows()) {
    throw validation_error("build_covariance: matrix must be square");
  }
  const double scale = r_matrix.diagonal().real().mean();
  return detail::finalize_covariance(r_matrix, scale, rel_tol,
                                     "build_covariance");
}

/// Covariance from a correlation sequence r(0..N−1):
/// R(i, j) = r(i−j) with r(−m) = r(m)*, i.e. Hermitian Toeplitz.
/// r(0) must be real and positive; if r(0) ≠ 1 the matrix is rescaled by
/// 1/r(0) and the scale recorded.
inline CovarianceSpec build_covariance_from_correlation(
    const std::vector<std::complex<double>>& r, double rel_tol = -1.0) {
  const auto n = static_cast<Eigen::Index>(r.size());
  if (n < 1) {
    throw validation_error("correlation vector must be nonempty");
  }
  if (std::abs(r[0].imag()) > 1e-12 * std::max(std::abs(r[0].real()), 1.0) ||
      !(r[0].real() > 0.0)) {
    throw validation_error("correlation at lag 0 must be real and positive");
  }
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = i >= j ? r[size_t(i - j)] : std::conj(r[size_t(j - i)]);
    }
  }
  return detail::finalize_covariance(std::move(m), r[0].real(), rel_tol,
                                     "build_covariance_from_correlation");
}

/// Covariance from a power-delay profile over N slots:
/// r(m) = Σ_l σ_l²·e^{−j2π·l·m/N}, equivalently R = F·diag(N·σ²,0…)·Fᴴ with
/// F the unitary N-point DFT.  σ² is normalized to sum to 1 (the scale is
/// recorded), which keeps each scalar subchannel at unit power.
/// ρ equals the number of strictly positive taps.
inline CovarianceSpec build_covariance_from_pdp(const PowerDelayProfile& pdp,
                                                int slots,
                                                double rel_tol = -1.0) {
  const auto taps = pdp.variances.size();
  if (taps < 1) {
    throw validation_error("power-delay profile must have at least one tap");
  }
  if (slots < static_cast<int>(taps)) {
    throw validation_error("power-delay profile has " + std::to_string(taps) +
                           " taps but only " + std::to_string(slots) +
                           " slots (need L <= N)");
  }
  double total = 0.0;
  for (double v : pdp.variances) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw validation_error("tap powers must be finite and nonnegative");
    }
    total += v;
  }
  if (!(total > 0.0)) {
    throw validation_error("power-delay profile must have positive total power");
  }
  std::vector<std::complex<double>> r(static_cast<std::size_t>(slots));
  for (int m = 0; m < slots; ++m) {
    std::complex<double> acc = 0.0;
    for (size_t l = 0; l < taps; ++l) {
      const double phase = -2.0 * std::numbers::pi *
                           double(l) * double(m) / double(slots);
      acc += pdp.variances[l] *
             std::complex<double>(std::cos(phase), std::sin(phase));
    }
    r[size_t(m)] = acc;
  }
  // r(0) = Σσ² = total, so finalize's 1/r(0) rescale is exactly the Σσ²=1
  // normalization; the scale is recorded for the caller to warn about.
  CovarianceSpec cov;
  {
    const auto n = static_cast<Eigen::Index>(slots);
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        m(i, j) = i >= j ? r[size_t(i - j)] : std::conj(r[size_t(j - i)]);
      }
    }
    cov = detail::finalize_covariance(std::move(m), total, rel_tol,
                                      "build_covariance_from_pdp");
  }
  return cov;
}

}  // namespace dmtlab
