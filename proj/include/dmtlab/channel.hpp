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

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dmtlab/covariance.hpp"
#include "dmtlab/rng.hpp"
#include "dmtlab/types.hpp"

namespace dmtlab {

/// One draw of the N per-slot channel matrices H_0..H_{N−1}, each m_r×m_t.
struct ChannelRealization {
  std::vector<Eigen::MatrixXcd> slots;
};

/// The stacked m_min × (N·m_max) matrix H_J = [H_0 … H_{N−1}] when
/// m_r ≤ m_t, else [H_0ᴴ … H_{N−1}ᴴ].
struct JensenChannel {
  Eigen::MatrixXcd matrix;
};

/// Scratch buffers for allocation-free repeated sampling.  One instance per
/// worker thread; the sampled values are a pure function of
/// (covariance, antennas, seed, trial), never of the workspace identity.
struct SampleScratch {
  Eigen::VectorXcd white;       // i.i.d. input vector, length N
  Eigen::VectorXcd correlated;  // R^{1/2}·white, length N
};

/// Draws one correlated realization into `out`.
///
/// Drawing order (fixed; part of the determinism contract): scalar
/// subchannels in column-major antenna order (j = 0..m_t−1, i = 0..m_r−1);
/// for each subchannel a length-N i.i.d. CN(0,1) vector w is drawn slot by
/// slot and colored as v = R^{1/2}·w, so (H_0(i,j),…,H_{N−1}(i,j)) = v.
/// Subchannels are independent.  Stream: StreamDomain::channel.
inline void sample_channel(const CovarianceSpec& cov, const AntennaConfig& ant,
                           std::uint64_t seed, std::uint64_t trial,
                           ChannelRealization& out, SampleScratch& scratch) {
  const int slots = cov.slots();
  if (static_cast<int>(out.slots.size()) != slots) {
    out.slots.assign(size_t(slots), Eigen::MatrixXcd(ant.rx, ant.tx));
  }
  for (auto& h : out.slots) {
    if (h.rows() != ant.rx || h.cols() != ant.tx) h.resize(ant.rx, ant.tx);
  }
  scratch.white.resize(slots);
  scratch.correlated.resize(slots);

  TrialRng rng(seed, StreamDomain::channel, trial);
  for (int j = 0; j < ant.tx; ++j) {
    for (int i = 0; i < ant.rx; ++i) {
      for (int n = 0; n < slots; ++n) scratch.white[n] = rng.normal();
      scratch.correlated.noalias() = cov.sqrt_factor * scratch.white;
      for (int n = 0; n < slots; ++n) {
        out.slots[size_t(n)](i, j) = scratch.correlated[n];
      }
    }
  }
}

/// Convenience overload allocating its own buffers.
inline ChannelRealization sample_channel(const CovarianceSpec& cov,
                                         const AntennaConfig& ant,
                                         std::uint64_t seed,
                                         std::uint64_t trial) {
  ChannelRealization out;
  SampleScratch scratch;
  sample_channel(cov, ant, seed, trial, out, scratch);
  return out;
}

/// Stacks a realization into its Jensen form (m_min × N·m_max).
inline JensenChannel jensen_channel(const ChannelRealization& re,
                                    const AntennaConfig& ant) {
  const auto slots = static_cast<Eigen::Index>(re.slots.size());
  if (slots < 1) {
    throw validation_error("jensen_channel: realization has no slots");
  }
  const Eigen::Index m_min = ant.min_dim();
  const Eigen::Index m_max = ant.max_dim();
  JensenChannel jc;
  jc.matrix.resize(m_min, slots * m_max);
  for (Eigen::Index n = 0; n < slots; ++n) {
    const auto& h = re.slots[size_t(n)];
    if (h.rows() != ant.rx || h.cols() != ant.tx) {
      throw validation_error("jensen_channel: slot dimensions disagree with "
                             "the antenna configuration");
    }
    if (ant.rx <= ant.tx) {
      jc.matrix.middleCols(n * m_max, m_max) = h;
    } else {
      jc.matrix.middleCols(n * m_max, m_max) = h.adjoint();
    }
  }
  return jc;
}

/// Draws the i.i.d. reduced matrix H̄ (m_min × rank·m_max), column-major
/// entry order.  Stream: StreamDomain::reduced — independent of the
/// correlated channel stream at the same (seed, trial).
inline void sample_reduced_iid(int rank, const AntennaConfig& ant,
                               std::uint64_t seed, std::uint64_t trial,
                               Eigen::MatrixXcd& out) {
  if (rank < 1) {
    throw validation_error("sample_reduced_iid: rank must be >= 1");
  }
  const Eigen::Index rows = ant.min_dim();
  const Eigen::Index cols = Eigen::Index(rank) * ant.max_dim();
  out.resize(rows, cols);
  TrialRng rng(seed, StreamDomain::reduced, trial);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = rng.normal();
  }
}

inline Eigen::MatrixXcd sample_reduced_iid(int rank, const AntennaConfig& ant,
                                           std::uint64_t seed,
                                           std::uint64_t trial) {
  Eigen::MatrixXcd out;
  sample_reduced_iid(rank, ant, seed, trial, out);
  return out;
}

/// Draws the full whitened i.i.d. matrix H_w (m_min × slots·m_max) used by
/// the sandwich bounds and PEP averages.  Stream: StreamDomain::whitened.
inline void sample_whitened(int slots, const AntennaConfig& ant,
                            std::uint64_t seed, std::uint64_t trial,
                            Eigen::MatrixXcd& out) {
  if (slots < 1) {
    throw validation_error("sample_whitened: slots must be >= 1");
  }
  const Eigen::Index rows = ant.min_dim();
  const Eigen::Index cols = Eigen::Index(slots) * ant.max_dim();
  out.resize(rows, cols);
  TrialRng rng(seed, StreamDomain::whitened, trial);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = rng.normal();
  }
}

inline Eigen::MatrixXcd sample_whitened(int slots, const AntennaConfig& ant,
                                        std::uint64_t seed,
                                        std::uint64_t trial) {
  Eigen::MatrixXcd out;
  sample_whitened(slots, ant, seed, trial, out);
  return out;
}

}  // namespace dmtlab
