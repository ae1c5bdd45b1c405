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

#include <complex>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "dmtlab/covariance.hpp"

using namespace std::complex_literals;
using Catch::Matchers::WithinAbs;
using dmtlab::build_covariance;
using dmtlab::build_covariance_from_correlation;
using dmtlab::build_covariance_from_pdp;
using dmtlab::CovarianceSpec;
using dmtlab::PowerDelayProfile;

namespace {
double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("uncorrelated slots give the identity covariance", "[covariance]") {
  const CovarianceSpec cov =
      build_covariance_from_correlation({1.0 + 0.0i, 0.0i});
  CHECK(cov.slots() == 2);
  CHECK(cov.rank == 2);
  CHECK(max_abs(cov.matrix - Eigen::MatrixXcd::Identity(2, 2)) < 1e-14);
  CHECK(max_abs(cov.sqrt_factor - Eigen::MatrixXcd::Identity(2, 2)) < 1e-12);
  CHECK_THAT(cov.eigenvalues[0], WithinAbs(1.0, 1e-14));
  CHECK_THAT(cov.eigenvalues[1], WithinAbs(1.0, 1e-14));
  CHECK_THAT(cov.lambda_min_nz, WithinAbs(1.0, 1e-14));
  CHECK_THAT(cov.lambda_max, WithinAbs(1.0, 1e-14));
  CHECK_THAT(cov.normalization_scale, WithinAbs(1.0, 1e-14));
}

TEST_CASE("Toeplitz structure follows the first row with conjugation below",
          "[covariance]") {
  const CovarianceSpec cov =
      build_covariance_from_correlation({1.0 + 0.0i, 0.5i});
  // First row carries r(0), r(1)* pattern: entry (0,1) is conj(r1).
  CHECK_THAT(std::abs(cov.matrix(0, 1) - (-0.5i)), WithinAbs(0.0, 1e-14));
  CHECK_THAT(std::abs(cov.matrix(1, 0) - (0.5i)), WithinAbs(0.0, 1e-14));
  // Hermitian with unit diagonal; eigenvalues 1 -/+ |r1|.
  CHECK_THAT(cov.eigenvalues[0], WithinAbs(0.5, 1e-12));
  CHECK_THAT(cov.eigenvalues[1], WithinAbs(1.5, 1e-12));
  CHECK(cov.rank == 2);

  // The square-root factor reproduces the covariance.
  CHECK(max_abs(cov.sqrt_factor * cov.sqrt_factor.adjoint() - cov.matrix) <
        1e-12);
  CHECK(max_abs(cov.sqrt_factor - cov.sqrt_factor.adjoint()) < 1e-12);
}

TEST_CASE("correlation input is validated", "[covariance]") {
  CHECK_THROWS_AS(build_covariance_from_correlation({}),
                  dmtlab::validation_error);
  // r(0) must be real and positive.
  CHECK_THROWS_AS(build_covariance_from_correlation({1.0 + 0.1i}),
                  dmtlab::validation_error);
  CHECK_THROWS_AS(build_covariance_from_correlation({-1.0 + 0.0i}),
                  dmtlab::validation_error);
  // |r(1)| > r(0) makes the Toeplitz matrix indefinite.
  CHECK_THROWS_AS(build_covariance_from_correlation({1.0 + 0.0i, 2.0 + 0.0i}),
                  dmtlab::validation_error);
}

TEST_CASE("two equal taps over four slots give the rank-2 DFT spectrum",
          "[covariance]") {
  // Cyclic model: eigenvalues of the N-slot correlation are exactly
  // {N * sigma_l^2} plus N-L zeros (DFT diagonalization), so
  // sigma^2 = [0.5, 0.5], N = 4 gives {2, 2, 0, 0}.
  const CovarianceSpec cov =
      build_covariance_from_pdp(PowerDelayProfile{{0.5, 0.5}}, 4);
  CHECK(cov.slots() == 4);
  CHECK(cov.rank == 2);
  CHECK_THAT(cov.eigenvalues[0], WithinAbs(0.0, 1e-12));
  CHECK_THAT(cov.eigenvalues[1], WithinAbs(0.0, 1e-12));
  CHECK_THAT(cov.eigenvalues[2], WithinAbs(2.0, 1e-12));
  CHECK_THAT(cov.eigenvalues[3], WithinAbs(2.0, 1e-12));
  CHECK_THAT(cov.lambda_min_nz, WithinAbs(2.0, 1e-12));
  CHECK_THAT(cov.lambda_max, WithinAbs(2.0, 1e-12));
  CHECK_THAT(cov.normalization_scale, WithinAbs(1.0, 1e-14));
  for (int i = 0; i < 4; ++i) {
    CHECK_THAT(cov.matrix(i, i).real(), WithinAbs(1.0, 1e-14));
    CHECK_THAT(cov.matrix(i, i).imag(), WithinAbs(0.0, 1e-14));
  }
}

TEST_CASE("unequal taps give the scaled DFT spectrum", "[covariance]") {
  const CovarianceSpec cov =
      build_covariance_from_pdp(PowerDelayProfile{{0.7, 0.3}}, 4);
  CHECK(cov.rank == 2);
  CHECK_THAT(cov.eigenvalues[2], WithinAbs(1.2, 1e-12));
  CHECK_THAT(cov.eigenvalues[3], WithinAbs(2.8, 1e-12));
  CHECK_THAT(cov.lambda_min_nz, WithinAbs(1.2, 1e-12));
  CHECK_THAT(cov.lambda_max, WithinAbs(2.8, 1e-12));
  // Eigenvalues sum to N because the diagonal is normalized to 1.
  CHECK_THAT(cov.eigenvalues.sum(), WithinAbs(4.0, 1e-12));
}

TEST_CASE("non-unit total tap power is normalized and recorded",
          "[covariance]") {
  const CovarianceSpec cov =
      build_covariance_from_pdp(PowerDelayProfile{{2.0, 2.0}}, 2);
  CHECK_THAT(cov.normalization_scale, WithinAbs(4.0, 1e-14));
  CHECK(cov.rank == 2);
  CHECK_THAT(cov.eigenvalues[0], WithinAbs(1.0, 1e-12));
  CHECK_THAT(cov.eigenvalues[1], WithinAbs(1.0, 1e-12));
}

TEST_CASE("power delay profile input is validated", "[covariance]") {
  CHECK_THROWS_AS(build_covariance_from_pdp(PowerDelayProfile{{}}, 2),
                  dmtlab::validation_error);
  // More taps than slots.
  CHECK_THROWS_AS(
      build_covariance_from_pdp(PowerDelayProfile{{0.5, 0.3, 0.2}}, 2),
      dmtlab::validation_error);
  CHECK_THROWS_AS(build_covariance_from_pdp(PowerDelayProfile{{0.5, -0.1}}, 4),
                  dmtlab::validation_error);
  CHECK_THROWS_AS(build_covariance_from_pdp(PowerDelayProfile{{0.0, 0.0}}, 4),
                  dmtlab::validation_error);
}

TEST_CASE("explicit covariance matrices are validated", "[covariance]") {
  Eigen::MatrixXcd rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(build_covariance(rect), dmtlab::validation_error);

  Eigen::MatrixXcd non_hermitian(2, 2);
  non_hermitian << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(build_covariance(non_hermitian), dmtlab::validation_error);

  Eigen::MatrixXcd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;  // eigenvalues {-1, 3}
  CHECK_THROWS_AS(build_covariance(indefinite), dmtlab::validation_error);

  CHECK_THROWS_AS(build_covariance(Eigen::MatrixXcd::Zero(3, 3)),
                  dmtlab::validation_error);
}

TEST_CASE("rank-deficient matrices get a zero-clipped spectrum",
          "[covariance]") {
  // The all-ones correlation (fully coherent slots) has rank 1 and a single
  // eigenvalue N.
  const CovarianceSpec cov =
      build_covariance_from_correlation({1.0 + 0.0i, 1.0 + 0.0i, 1.0 + 0.0i});
  CHECK(cov.rank == 1);
  CHECK_THAT(cov.lambda_min_nz, WithinAbs(3.0, 1e-12));
  CHECK_THAT(cov.lambda_max, WithinAbs(3.0, 1e-12));
  for (Eigen::Index k = 0; k < cov.eigenvalues.size(); ++k) {
    CHECK(cov.eigenvalues[k] >= 0.0);
  }
  // The square root still reproduces the covariance.
  CHECK(max_abs(cov.sqrt_factor * cov.sqrt_factor.adjoint() - cov.matrix) <
        1e-12);
}

TEST_CASE("numerical rank helpers", "[covariance]") {
  CHECK(dmtlab::default_rank_tolerance(4) > 0.0);
  Eigen::VectorXd eigs(3);
  eigs << 0.0, 1e-18, 1.0;
  CHECK(dmtlab::numerical_rank(eigs, 1e-12) == 1);
  eigs << 0.5, 0.7, 1.0;
  CHECK(dmtlab::numerical_rank(eigs, 1e-12) == 3);
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(3);
  CHECK(dmtlab::numerical_rank(zeros, 1e-12) == 0);
  CHECK(dmtlab::covariance_rank(Eigen::MatrixXcd::Identity(3, 3)) == 3);
}
