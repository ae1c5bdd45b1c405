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
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "dmtlab/channel.hpp"
#include "dmtlab/covariance.hpp"
#include "dmtlab/types.hpp"

namespace dmtlab {

/// ln det(I + scale·G) for Hermitian PSD G and scale ≥ 0.  The argument is
/// positive definite by construction, so a Cholesky factorization is safe;
/// 1×1 and 2×2 use closed forms.
inline double logdet_identity_plus(double scale, const Eigen::MatrixXcd& g) {
  const Eigen::Index m = g.rows();
  if (m == 1) {
    return std::log1p(scale * g(0, 0).real());
  }
  if (m == 2) {
    const double a = 1.0 + scale * g(0, 0).real();
    const double d = 1.0 + scale * g(1, 1).real();
    const double b2 = scale * scale * std::norm(g(0, 1));
    return std::log(a * d - b2);
  }
  Eigen::MatrixXcd shifted = scale * g;
  shifted.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXcd> llt(shifted);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    acc += 2.0 * std::log(llt.matrixLLT()(i, i).real());
  }
  return acc;
}

namespace detail {

/// Smaller-side Gram of H: HHᴴ if rows ≤ cols, else HᴴH.  Same nonzero
/// spectrum either way (logdet(I+AB) = logdet(I+BA)), but the smaller side
/// keeps the factorizations m_min×m_min.
inline Eigen::MatrixXcd smaller_gram(const Eigen::MatrixXcd& h) {
  if (h.rows() <= h.cols()) return h * h.adjoint();
  return h.adjoint() * h;
}

}  // namespace detail

/// I(snr) = (1/N)·Σ_n ln det(I + (snr/m_t)·H_n H_nᴴ) in nats, with the
/// finite-SNR 1/m_t power normalization kept.
inline double mutual_information(const ChannelRealization& re,
                                 const AntennaConfig& ant, double snr) {
  if (!(snr > 0.0)) {
    throw validation_error("mutual_information: snr must be positive");
  }
  if (re.slots.empty()) {
    throw validation_error("mutual_information: realization has no slots");
  }
  const double scale = snr / double(ant.tx);
  double acc = 0.0;
  for (const auto& h : re.slots) {
    acc += logdet_identity_plus(scale, detail::smaller_gram(h));
  }
  return acc / double(re.slots.size());
}

/// I_J(snr) = ln det(I_{m_min} + (snr/(m_t·N))·H_J H_Jᴴ) in nats.
inline double jensen_mutual_information(const JensenChannel& jc,
                                        const AntennaConfig& ant, int slots,
                                        double snr) {
  if (!(snr > 0.0)) {
    throw validation_error("jensen_mutual_information: snr must be positive");
  }
  if (slots < 1) {
    throw validation_error("jensen_mutual_information: slots must be >= 1");
  }
  const double scale = snr / (double(ant.tx) * double(slots));
  return logdet_identity_plus(scale, jc.matrix * jc.matrix.adjoint());
}

/// Singularity levels of one realization at a given SNR.
///  - per_slot[n][k] = −ln λ_k(H_n H_nᴴ)/ln snr, sorted descending.
///  - jensen[k]      = −ln λ_k(H̄ H̄ᴴ)/ln snr of the reduced i.i.d. matrix,
///                     sorted descending (α_1 ≥ … ≥ α_{m_min}).
/// An exactly singular Gram yields a +infinity level (its outage
/// contribution [1−μ]⁺ is the same 0 as any level ≥ 1).
struct SingularityLevels {
  std::vector<Eigen::VectorXd> per_slot;
  Eigen::VectorXd jensen;
};

namespace detail {

inline Eigen::VectorXd levels_of_gram(const Eigen::MatrixXcd& gram,
                                      double log_snr) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram,
                                                     Eigen::EigenvaluesOnly);
  const Eigen::VectorXd eigs = es.eigenvalues();  // ascending
  Eigen::VectorXd levels(eigs.size());
  for (Eigen::Index k = 0; k < eigs.size(); ++k) {
    // ascending eigenvalues give descending levels
    levels[k] = eigs[k] > 0.0
                    ? -std::log(eigs[k]) / log_snr
                    : std::numeric_limits<double>::infinity();
  }
  return levels;
}

}  // namespace detail

inline SingularityLevels singularity_levels(const ChannelRealization& re,
                                            const Eigen::MatrixXcd& reduced,
                                            const AntennaConfig& ant,
                                            double snr) {
  if (!(snr > 1.0)) {
    throw validation_error("singularity_levels: snr must exceed 1");
  }
  const double log_snr = std::log(snr);
  SingularityLevels out;
  out.per_slot.reserve(re.slots.size());
  for (const auto& h : re.slots) {
    out.per_slot.push_back(
        detail::levels_of_gram(detail::smaller_gram(h), log_snr));
  }
  out.jensen = detail::levels_of_gram(detail::smaller_gram(reduced), log_snr);
  (void)ant;
  return out;
}

/// (1/N)·Σ_n Σ_k [1−μ_k(n)]⁺ — the per-slot level outage sum.
inline double level_outage_sum(const SingularityLevels& levels) {
  if (levels.per_slot.empty()) {
    throw validation_error("level_outage_sum: no per-slot levels");
  }
  double acc = 0.0;
  for (const auto& mu : levels.per_slot) {
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
      if (mu[k] < 1.0) acc += 1.0 - mu[k];
    }
  }
  return acc / double(levels.per_slot.size());
}

/// Σ_k [1−α_k]⁺ over the reduced-channel levels.
inline double jensen_level_sum(const SingularityLevels& levels) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < levels.jensen.size(); ++k) {
    if (levels.jensen[k] < 1.0) acc += 1.0 - levels.jensen[k];
  }
  return acc;
}

/// Outage event at multiplexing rate r (strict inequality; ties count as
/// non-outage).
inline bool outage_indicator(const SingularityLevels& levels, double rate) {
  return level_outage_sum(levels) < rate;
}

/// Jensen outage event at multiplexing rate r over the reduced levels.
inline bool jensen_outage_indicator(const SingularityLevels& levels,
                                    double rate) {
  return jensen_level_sum(levels) < rate;
}

/// The three sandwich mutual-information values built from one whitened
/// draw.  Per realization lower ≤ middle ≤ upper; outage frequencies of the
/// three values are therefore anti-ordered.
struct SandwichValues {
  double lower = 0.0;
  double middle = 0.0;
  double upper = 0.0;
};

namespace detail {

/// ln det(I + scale·Σ_k w(k)·h_k h_kᴴ) over the first `cols` columns of hw,
/// with the per-column weight w(k) supplied by the caller.  All three
/// sandwich values go through this one path, so equal weights produce
/// bitwise-equal results.
template <typename WeightFn>
inline double weighted_logdet(const Eigen::MatrixXcd& hw, Eigen::Index cols,
                              WeightFn weight, double scale) {
  const Eigen::Index m = hw.rows();
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index k = 0; k < cols; ++k) {
    gram.noalias() += weight(k) * (hw.col(k) * hw.col(k).adjoint());
  }
  return logdet_identity_plus(scale, gram);
}

}  // namespace detail

/// Sandwich values for one whitened draw hw (m_min × N·m_max):
///   lower  = ln det(I + λ_min_nz·(snr/(m_t·N))·H̄H̄ᴴ)
///   middle = ln det(I + (snr/(m_t·N))·hw·(Λ⊗I_{m_max})·hwᴴ)
///   upper  = ln det(I + λ_max·(snr/(m_t·N))·H̄H̄ᴴ)
/// with H̄ the first ρ·m_max columns of hw and Λ carrying the nonzero
/// eigenvalues of R (descending) in its first ρ diagonal slots.
inline SandwichValues sandwich_values(const Eigen::MatrixXcd& hw,
                                      const CovarianceSpec& cov,
                                      const AntennaConfig& ant, double snr) {
  if (!(snr > 0.0)) {
    throw validation_error("sandwich_values: snr must be positive");
  }
  if (cov.rank < 1) {
    throw validation_error("sandwich_values: covariance rank must be >= 1");
  }
  const Eigen::Index m_max = ant.max_dim();
  const Eigen::Index slots = cov.slots();
  if (hw.rows() != ant.min_dim() || hw.cols() != slots * m_max) {
    throw validation_error("sandwich_values: whitened matrix must be "
                           "m_min x (N*m_max)");
  }
  const Eigen::Index active = Eigen::Index(cov.rank) * m_max;
  const double scale = snr / (double(ant.tx) * double(slots));
  const Eigen::Index n = cov.eigenvalues.size();

  SandwichValues values;
  values.lower = detail::weighted_logdet(
      hw, active, [&](Eigen::Index) { return cov.lambda_min_nz; }, scale);
  values.middle = detail::weighted_logdet(
      hw, active,
      [&](Eigen::Index k) {
        // block b takes the b-th largest (nonzero) eigenvalue
        return cov.eigenvalues[n - 1 - k / m_max];
      },
      scale);
  values.upper = detail::weighted_logdet(
      hw, active, [&](Eigen::Index) { return cov.lambda_max; }, scale);
  return values;
}

}  // namespace dmtlab
