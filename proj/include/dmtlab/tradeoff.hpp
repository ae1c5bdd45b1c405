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
#include <string>
#include <vector>

#include "dmtlab/types.hpp"

namespace dmtlab {

/// Piecewise-linear diversity-multiplexing tradeoff curve on [0, m_min],
/// defined by its values at the integer multiplexing rates.  Between
/// integers the curve is the linear interpolation through the vertices; the
/// closed form (ρ·m_max − r)(m_min − r) holds at the vertices only.
struct TradeoffCurve {
  int min_dim = 0;               // m_min
  std::vector<double> vertices;  // d(r) for r = 0..m_min, size m_min+1

  double evaluate(double r) const {
    if (!(r >= 0.0) || r > double(min_dim)) {
      throw validation_error("tradeoff evaluate: rate " + std::to_string(r) +
                             " outside [0, " + std::to_string(min_dim) + "]");
    }
    const int k = std::min(int(std::floor(r)), min_dim - 1);
    const double t = r - double(k);
    return vertices[size_t(k)] +
           t * (vertices[size_t(k) + 1] - vertices[size_t(k)]);
  }
};

/// Jensen-channel tradeoff curve: d_J(r) = (ρ·m_max − r)(m_min − r) at
/// integer r, linearly interpolated between.
inline TradeoffCurve jensen_curve(int rank, const AntennaConfig& ant) {
  if (rank < 1) {
    throw validation_error("jensen_curve: rank must be >= 1");
  }
  TradeoffCurve curve;
  curve.min_dim = ant.min_dim();
  curve.vertices.resize(size_t(curve.min_dim) + 1);
  for (int r = 0; r <= curve.min_dim; ++r) {
    curve.vertices[size_t(r)] =
        double(rank * ant.max_dim() - r) * double(ant.min_dim() - r);
  }
  return curve;
}

/// Optimal tradeoff curve for an L-tap frequency-selective channel:
/// identical to the Jensen curve with ρ = L.
inline TradeoffCurve frequency_selective_curve(int taps,
                                               const AntennaConfig& ant) {
  if (taps < 1) {
    throw validation_error("frequency_selective_curve: taps must be >= 1");
  }
  return jensen_curve(taps, ant);
}

}  // namespace dmtlab
