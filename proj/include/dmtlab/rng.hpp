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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace dmtlab {

namespace detail {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw,
// "Parallel random numbers: as easy as 1, 2, 3", SC'11).  One invocation
// turns a (128-bit counter, 64-bit key) pair into 128 pseudo-random bits.
// The mapping is stateless, so any (seed, stream, trial) coordinate can be
// generated independently — the property the Monte Carlo engine relies on
// for schedule-independent reproducibility.
inline std::array<std::uint32_t, 4> philox4x32_10(
    std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;  // golden-ratio increment
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;  // sqrt(3)-1 increment
  constexpr std::uint32_t kMult0 = 0xD2511F53u;
  constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kMult0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kMult1) * ctr[2];
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    if (round != 9) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
  }
  return ctr;
}

}  // namespace detail

/// Independent substream families.  Estimators that draw from different
/// domains (e.g. correlated channel vs. reduced i.i.d. channel) never share
/// or perturb each other's streams, so enabling one mode cannot change the
/// draws seen by another.
enum class StreamDomain : std::uint32_t {
  channel = 0,   // correlated channel realizations
  reduced = 1,   // i.i.d. reduced-dimension matrices
  whitened = 2,  // i.i.d. whitened matrices (sandwich/PEP draws)
  generic = 3,   // synthetic/auxiliary draws
};

/// Random stream for one (seed, domain, trial) coordinate.
///
/// Counter layout: [block, domain, trial_lo, trial_hi]; key = split seed.
/// Each Philox call yields two 64-bit words; `block` advances per call.
/// Identical (seed, domain, trial) always reproduces the identical stream,
/// bit for bit, regardless of thread count or call order elsewhere.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, StreamDomain domain, std::uint64_t trial)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        domain_(static_cast<std::uint32_t>(domain)),
        trial_lo_(static_cast<std::uint32_t>(trial)),
        trial_hi_(static_cast<std::uint32_t>(trial >> 32)) {}

  std::uint64_t next_u64() {
    if (avail_ == 0) {
      const auto r =
          detail::philox4x32_10({block_, domain_, trial_lo_, trial_hi_}, key_);
      ++block_;
      buf_[0] = (std::uint64_t(r[1]) << 32) | r[0];
      buf_[1] = (std::uint64_t(r[3]) << 32) | r[2];
      avail_ = 2;
    }
    return buf_[2 - avail_--];
  }

  /// Uniform on (0, 1]: never 0, so it is safe under a logarithm.
  double uniform_open_closed() {
    return (double((next_u64() >> 11)) + 1.0) * 0x1p-53;
  }

  /// Uniform on [0, 1).
  double uniform_half_open() { return double(next_u64() >> 11) * 0x1p-53; }

  /// Standard circularly-symmetric complex Gaussian CN(0, 1):
  /// z = sqrt(-ln u1) · e^{i·2π·u2}, so E|z|² = 1.
  std::complex<double> normal() {
    const double u1 = uniform_open_closed();
    const double u2 = uniform_half_open();
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t domain_, trial_lo_, trial_hi_;
  std::uint32_t block_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int avail_ = 0;
};

}  // namespace dmtlab
