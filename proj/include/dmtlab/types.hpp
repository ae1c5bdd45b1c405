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

#include <algorithm>
#include <cmath>
#include <string>

#include "dmtlab/errors.hpp"

namespace dmtlab {

/// Transmit/receive antenna counts with the derived min/max dimensions.
struct AntennaConfig {
  int tx = 1;  // m_t
  int rx = 1;  // m_r

  AntennaConfig() = default;
  AntennaConfig(int m_t, int m_r) : tx(m_t), rx(m_r) {
    if (tx < 1 || rx < 1) {
      throw validation_error("antenna counts must be positive, got tx=" +
                             std::to_string(tx) + " rx=" + std::to_string(rx));
    }
  }

  int min_dim() const { return std::min(tx, rx); }  // m_min
  int max_dim() const { return std::max(tx, rx); }  // m_max
};

/// One SNR grid point, carried in both linear and dB form.  All interfaces
/// accept dB and convert exactly once here.
struct SnrPoint {
  double linear = 1.0;
  double db = 0.0;

  static SnrPoint from_db(double value_db) {
    SnrPoint p;
    p.db = value_db;
    p.linear = std::pow(10.0, value_db / 10.0);
    return p;
  }

  static SnrPoint from_linear(double value) {
    if (!(value > 0.0)) {
      throw validation_error("SNR must be positive, got " +
                             std::to_string(value));
    }
    SnrPoint p;
    p.linear = value;
    p.db = 10.0 * std::log10(value);
    return p;
  }
};

/// Requires SNR > 1 (log SNR > 0), the domain where singularity levels and
/// rate thresholds R = r·ln(snr) are meaningful.
inline void require_snr_above_one(const SnrPoint& snr, const char* where) {
  if (!(snr.linear > 1.0)) {
    throw validation_error(std::string(where) +
                           ": SNR must exceed 1 in linear scale (0 dB), got " +
                           std::to_string(snr.db) + " dB");
  }
}

}  // namespace dmtlab
