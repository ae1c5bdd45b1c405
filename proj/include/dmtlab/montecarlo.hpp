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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dmtlab/channel.hpp"
#include "dmtlab/covariance.hpp"
#include "dmtlab/info_metrics.hpp"
#include "dmtlab/types.hpp"

namespace dmtlab {

/// 95% (by default) Wilson score interval for a binomial proportion.
/// Always contains the point estimate successes/trials.
struct WilsonInterval {
  double lower = 0.0;
  double upper = 0.0;
};

inline WilsonInterval wilson_interval(std::uint64_t successes,
                                      std::uint64_t trials,
                                      double z = 1.959963984540054) {
  if (trials == 0) {
    throw validation_error("wilson_interval: trials must be >= 1");
  }
  if (successes > trials) {
    throw validation_error("wilson_interval: successes exceed trials");
  }
  const double n = double(trials);
  const double p = double(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval ci;
  ci.lower = std::max(0.0, center - half);
  ci.upper = std::min(1.0, center + half);
  return ci;
}

/// One Monte Carlo outage estimate at a single (snr, rate) cell.
struct OutageEstimate {
  SnrPoint snr;
  double rate = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t outages = 0;
  double p_hat = 0.0;
  WilsonInterval ci95;
};

/// Which outage event an estimator counts.
///  - outage:          I(snr) < r·ln snr on correlated draws.
///  - jensen_exact:    I_J(snr) < r·ln snr on the same correlated draws.
///  - jensen_reduced:  ln det(I + snr·H̄H̄ᴴ) < r·ln snr on the i.i.d.
///                     reduced matrix (independent substream).
enum class EstimatorMode { outage, jensen_exact, jensen_reduced };

inline const char* mode_name(EstimatorMode mode) {
  switch (mode) {
    case EstimatorMode::outage: return "outage";
    case EstimatorMode::jensen_exact: return "jensen_exact";
    case EstimatorMode::jensen_reduced: return "jensen_reduced";
  }
  return "?";
}

/// Full sweep configuration: the cross-product of snr_points × rates is
/// estimated for every requested mode.  At a fixed SNR point all rates and
/// the outage/jensen_exact modes share the same realizations (variance
/// reduction and per-realization comparisons); jensen_reduced draws from
/// its own independent substream.  Trial indices are globally distinct
/// across SNR points, so points are statistically independent.
struct SweepConfig {
  std::vector<double> rates;
  std::vector<SnrPoint> snr_points;
  std::vector<std::uint64_t> trials;  // one entry, or one per snr point
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0 = hardware concurrency
  std::vector<EstimatorMode> modes{EstimatorMode::outage};
};

/// Results for one SNR point: estimates in mode-major, then rate order;
/// jensen_violations counts draws with I > I_J + 1e-9 (only filled when
/// both outage and jensen_exact modes run on the shared draws).
struct SweepPoint {
  SnrPoint snr;
  std::uint64_t trials = 0;
  std::vector<OutageEstimate> estimates;
  std::uint64_t jensen_violations = 0;
};

namespace detail {

struct McWorkspace {
  ChannelRealization re;
  SampleScratch scratch;
  Eigen::MatrixXcd slot_gram;
  Eigen::MatrixXcd jensen_gram;
  Eigen::MatrixXcd reduced;
  Eigen::MatrixXcd reduced_gram;
};

constexpr std::uint64_t kChunk = 4096;
constexpr double kJensenTolerance = 1e-9;  // nats, per-realization I vs I_J

inline unsigned resolve_workers(unsigned requested, std::uint64_t trials) {
  unsigned w = requested ? requested : std::thread::hardware_concurrency();
  if (w < 1) w = 1;
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  if (chunks < w) w = static_cast<unsigned>(chunks ? chunks : 1);
  return w;
}

/// Runs `body(trial, workspace, accumulator)` for trial indices
/// [base, base+trials) across `workers` threads in fixed-size chunks.
/// Accumulators are plain per-thread structs merged by integer addition, so
/// the result is identical for any worker count or schedule.
template <typename Accum, typename Body>
inline std::vector<Accum> run_trials(std::uint64_t base, std::uint64_t trials,
                                     unsigned workers, const Body& body) {
  std::vector<Accum> per_thread(workers);
  std::atomic<std::uint64_t> next_chunk{0};
  auto work = [&](unsigned t) {
    McWorkspace ws;
    for (;;) {
      const std::uint64_t chunk = next_chunk.fetch_add(1);
      const std::uint64_t begin = chunk * kChunk;
      if (begin >= trials) break;
      const std::uint64_t end = std::min(begin + kChunk, trials);
      for (std::uint64_t i = begin; i < end; ++i) {
        body(base + i, ws, per_thread[t]);
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  return per_thread;
}

}  // namespace detail

/// Estimates the configured cross-product.  Deterministic for a given
/// (config, seed) regardless of worker count.
inline std::vector<SweepPoint> sweep(const CovarianceSpec& cov,
                                     const AntennaConfig& ant,
                                     const SweepConfig& config) {
  if (config.rates.empty() || config.snr_points.empty() ||
      config.modes.empty()) {
    throw validation_error("sweep: rates, snr points and modes must be "
                           "nonempty");
  }
  if (config.trials.size() != 1 &&
      config.trials.size() != config.snr_points.size()) {
    throw validation_error("sweep: trials must have one entry or one per "
                           "snr point");
  }
  for (double r : config.rates) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw validation_error("sweep: rates must be finite and nonnegative");
    }
  }
  for (const auto& snr : config.snr_points) {
    require_snr_above_one(snr, "sweep");
  }
  for (std::uint64_t t : config.trials) {
    if (t < 1) throw validation_error("sweep: trials must be >= 1");
  }

  bool want_outage = false, want_jexact = false, want_jreduced = false;
  for (EstimatorMode m : config.modes) {
    want_outage |= m == EstimatorMode::outage;
    want_jexact |= m == EstimatorMode::jensen_exact;
    want_jreduced |= m == EstimatorMode::jensen_reduced;
  }
  const bool track_violations = want_outage && want_jexact;
  const bool need_channel = want_outage || want_jexact;

  const size_t n_rates = config.rates.size();
  const size_t n_modes = config.modes.size();

  struct Accum {
    std::vector<std::uint64_t> counts;  // [mode][rate], mode-major
    std::uint64_t violations = 0;
  };

  std::vector<SweepPoint> result;
  result.reserve(config.snr_points.size());
  std::uint64_t trial_base = 0;
  for (size_t p = 0; p < config.snr_points.size(); ++p) {
    const SnrPoint snr = config.snr_points[p];
    const std::uint64_t trials =
        config.trials.size() == 1 ? config.trials[0] : config.trials[p];
    const double log_snr = std::log(snr.linear);
    std::vector<double> thresholds(n_rates);
    for (size_t k = 0; k < n_rates; ++k) {
      thresholds[k] = config.rates[k] * log_snr;
    }
    const double mi_scale = snr.linear / double(ant.tx);
    const double jensen_scale =
        snr.linear / (double(ant.tx) * double(cov.slots()));

    const unsigned workers = detail::resolve_workers(config.workers, trials);
    auto body = [&](std::uint64_t trial, detail::McWorkspace& ws,
                    Accum& acc) {
      if (acc.counts.empty()) acc.counts.assign(n_modes * n_rates, 0);
      double value_outage = 0.0, value_jexact = 0.0, value_jreduced = 0.0;
      if (need_channel) {
        sample_channel(cov, ant, config.seed, trial, ws.re, ws.scratch);
        if (want_jexact) {
          if (ws.jensen_gram.rows() != ant.min_dim()) {
            ws.jensen_gram.resize(ant.min_dim(), ant.min_dim());
          }
          ws.jensen_gram.setZero();
        }
        double acc_mi = 0.0;
        for (const auto& h : ws.re.slots) {
          if (h.rows() <= h.cols()) {
            ws.slot_gram.noalias() = h * h.adjoint();
          } else {
            ws.slot_gram.noalias() = h.adjoint() * h;
          }
          if (want_outage) {
            acc_mi += logdet_identity_plus(mi_scale, ws.slot_gram);
          }
          if (want_jexact) ws.jensen_gram += ws.slot_gram;
        }
        value_outage = acc_mi / double(ws.re.slots.size());
        if (want_jexact) {
          value_jexact = logdet_identity_plus(jensen_scale, ws.jensen_gram);
        }
        if (track_violations &&
            value_outage > value_jexact + detail::kJensenTolerance) {
          ++acc.violations;
        }
      }
      if (want_jreduced) {
        sample_reduced_iid(cov.rank, ant, config.seed, trial, ws.reduced);
        ws.reduced_gram.noalias() = ws.reduced * ws.reduced.adjoint();
        value_jreduced = logdet_identity_plus(snr.linear, ws.reduced_gram);
      }
      for (size_t m = 0; m < n_modes; ++m) {
        double value = 0.0;
        switch (config.modes[m]) {
          case EstimatorMode::outage: value = value_outage; break;
          case EstimatorMode::jensen_exact: value = value_jexact; break;
          case EstimatorMode::jensen_reduced: value = value_jreduced; break;
        }
        for (size_t k = 0; k < n_rates; ++k) {
          if (value < thresholds[k]) ++acc.counts[m * n_rates + k];
        }
      }
    };
    auto partials =
        detail::run_trials<Accum>(trial_base, trials, workers, body);

    SweepPoint point;
    point.snr = snr;
    point.trials = trials;
    point.estimates.resize(n_modes * n_rates);
    for (size_t m = 0; m < n_modes; ++m) {
      for (size_t k = 0; k < n_rates; ++k) {
        std::uint64_t count = 0;
        for (const auto& a : partials) {
          if (!a.counts.empty()) count += a.counts[m * n_rates + k];
        }
        OutageEstimate& est = point.estimates[m * n_rates + k];
        est.snr = snr;
        est.rate = config.rates[k];
        est.trials = trials;
        est.outages = count;
        est.p_hat = double(count) / double(trials);
        est.ci95 = wilson_interval(count, trials);
      }
    }
    for (const auto& a : partials) point.jensen_violations += a.violations;
    result.push_back(std::move(point));
    trial_base += trials;
  }
  return result;
}

/// Single-cell outage estimate (Monte Carlo frequency of the
/// mutual-information outage event I < r·ln snr).
inline OutageEstimate estimate_outage(const CovarianceSpec& cov,
                                      const AntennaConfig& ant, double rate,
                                      const SnrPoint& snr,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned workers = 0) {
  SweepConfig config;
  config.rates = {rate};
  config.snr_points = {snr};
  config.trials = {trials};
  config.seed = seed;
  config.workers = workers;
  config.modes = {EstimatorMode::outage};
  return sweep(cov, ant, config)[0].estimates[0];
}

/// Single-cell Jensen outage estimate, exact (I_J on correlated draws) or
/// reduced (i.i.d. m_min × ρ·m_max matrix with ln det(I + snr·H̄H̄ᴴ)).
inline OutageEstimate estimate_jensen_outage(const CovarianceSpec& cov,
                                             const AntennaConfig& ant,
                                             double rate, const SnrPoint& snr,
                                             std::uint64_t trials,
                                             std::uint64_t seed, bool reduced,
                                             unsigned workers = 0) {
  SweepConfig config;
  config.rates = {rate};
  config.snr_points = {snr};
  config.trials = {trials};
  config.seed = seed;
  config.workers = workers;
  config.modes = {reduced ? EstimatorMode::jensen_reduced
                          : EstimatorMode::jensen_exact};
  return sweep(cov, ant, config)[0].estimates[0];
}

/// Log-log exponent fit over an SNR grid of estimates.
struct ExponentFit {
  std::vector<std::pair<double, double>> points;  // (log10 snr, log10 p_hat)
  double diversity = 0.0;  // −slope of the fit
  double std_error = 0.0;  // binomial (delta-method) propagation
  std::size_t used_points = 0;
  std::vector<double> excluded_snr_db;  // points with too few events
};

/// Ordinary least squares of log10 p_hat against log10 snr over the points
/// with at least min_events outage events; d_hat = −slope.  The standard
/// error propagates per-point binomial noise: σ_i(log10 p̂) ≈
/// sqrt((1−p̂_i)/outages_i)/ln 10.
inline ExponentFit fit_exponent(const std::vector<OutageEstimate>& estimates,
                                std::uint64_t min_events = 50) {
  ExponentFit fit;
  std::vector<double> sigma;
  for (const auto& est : estimates) {
    if (est.trials == 0) {
      throw validation_error("fit_exponent: estimate with zero trials");
    }
    if (est.outages < min_events) {
      fit.excluded_snr_db.push_back(est.snr.db);
      continue;
    }
    fit.points.emplace_back(std::log10(est.snr.linear),
                            std::log10(est.p_hat));
    sigma.push_back(std::sqrt((1.0 - est.p_hat) / double(est.outages)) /
                    std::log(10.0));
  }
  fit.used_points = fit.points.size();
  if (fit.used_points < 2) {
    throw insufficient_data_error(
        "fit_exponent: only " + std::to_string(fit.used_points) +
        " of " + std::to_string(estimates.size()) +
        " grid points have >= " + std::to_string(min_events) +
        " outage events; need at least 2");
  }
  double x_bar = 0.0, y_bar = 0.0;
  for (const auto& [x, y] : fit.points) {
    x_bar += x;
    y_bar += y;
  }
  x_bar /= double(fit.used_points);
  y_bar /= double(fit.used_points);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - x_bar) * (x - x_bar);
    sxy += (x - x_bar) * (y - y_bar);
  }
  if (!(sxx > 0.0)) {
    throw insufficient_data_error(
        "fit_exponent: qualifying points share a single snr value");
  }
  fit.diversity = -sxy / sxx;
  double var = 0.0;
  for (size_t i = 0; i < fit.points.size(); ++i) {
    const double w = (fit.points[i].first - x_bar) / sxx;
    var += w * w * sigma[i] * sigma[i];
  }
  fit.std_error = std::sqrt(var);
  return fit;
}

/// Counts of the three sandwich outage events on shared whitened draws.
/// The per-draw ordering lower ≤ middle ≤ upper forces
/// lower_outages ≥ middle_outages ≥ upper_outages structurally.
struct SandwichEstimate {
  SnrPoint snr;
  double rate = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t lower_outages = 0;   // event: lower value < r·ln snr
  std::uint64_t middle_outages = 0;  // event: middle value < r·ln snr
  std::uint64_t upper_outages = 0;   // event: upper value < r·ln snr
  std::uint64_t value_order_violations = 0;  // lower ≤ middle ≤ upper failures
};

inline SandwichEstimate estimate_sandwich(const CovarianceSpec& cov,
                                          const AntennaConfig& ant,
                                          double rate, const SnrPoint& snr,
                                          std::uint64_t trials,
                                          std::uint64_t seed,
                                          unsigned workers = 0) {
  require_snr_above_one(snr, "estimate_sandwich");
  if (trials < 1) {
    throw validation_error("estimate_sandwich: trials must be >= 1");
  }
  const double threshold = rate * std::log(snr.linear);
  struct Accum {
    std::uint64_t lower = 0, middle = 0, upper = 0, violations = 0;
  };
  auto body = [&](std::uint64_t trial, detail::McWorkspace& ws, Accum& acc) {
    sample_whitened(cov.slots(), ant, seed, trial, ws.reduced);
    const SandwichValues v = sandwich_values(ws.reduced, cov, ant, snr.linear);
    if (v.lower < threshold) ++acc.lower;
    if (v.middle < threshold) ++acc.middle;
    if (v.upper < threshold) ++acc.upper;
    if (v.lower > v.middle + detail::kJensenTolerance ||
        v.middle > v.upper + detail::kJensenTolerance) {
      ++acc.violations;
    }
  };
  const unsigned workers_used = detail::resolve_workers(workers, trials);
  auto partials = detail::run_trials<Accum>(0, trials, workers_used, body);
  SandwichEstimate out;
  out.snr = snr;
  out.rate = rate;
  out.trials = trials;
  for (const auto& a : partials) {
    out.lower_outages += a.lower;
    out.middle_outages += a.middle;
    out.upper_outages += a.upper;
    out.value_order_violations += a.violations;
  }
  return out;
}

}  // namespace dmtlab
