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

// dmtlab command-line front end.
//
// Subcommands: curve | outage | jensen | exponent | criterion | pep.
// Results go to standard output as CSV (UTF-8, '\n' line endings, fixed
// column orders); a human-readable summary goes to standard error.  Every
// command is deterministic given its options and seed, independent of the
// worker count.  Exit codes: 0 success, 2 validation error, 3 insufficient
// data.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dmtlab/dmtlab.hpp"

namespace {

std::string fmt(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

// ---------------------------------------------------------------------------
// Shared option groups
// ---------------------------------------------------------------------------

struct ChannelOptions {
  int mt = 1;
  int mr = 1;
  int slots = 1;
  std::vector<double> pdp;
  std::vector<std::string> corr;
  double rank_tol = -1.0;
  CLI::Option* slots_opt = nullptr;

  bool slots_given() const { return slots_opt && slots_opt->count() > 0; }
  bool explicit_channel() const {
    return slots_given() || !pdp.empty() || !corr.empty();
  }
};

void add_channel_options(CLI::App* cmd, ChannelOptions& o) {
  cmd->add_option("--mt", o.mt, "Transmit antennas m_t")
      ->capture_default_str();
  cmd->add_option("--mr", o.mr, "Receive antennas m_r")
      ->capture_default_str();
  o.slots_opt =
      cmd->add_option("--slots", o.slots, "Time/frequency slots N")
          ->capture_default_str();
  auto* pdp = cmd->add_option(
      "--pdp", o.pdp,
      "Tap variances of a cyclic power delay profile (builds the N-slot "
      "correlation; normalized to unit slot variance)");
  pdp->delimiter(',');
  auto* corr = cmd->add_option(
      "--corr", o.corr,
      "First row of the Hermitian Toeplitz slot correlation; entries are "
      "'re' or 're,im' (default: identity, i.e. uncorrelated slots)");
  pdp->excludes(corr);
  corr->excludes(pdp);
  cmd->add_option("--rank-tol", o.rank_tol,
                  "Relative eigenvalue tolerance for numerical rank "
                  "(default 64*N*eps)");
}

std::complex<double> parse_corr_entry(const std::string& text) {
  const auto comma = text.find(',');
  const std::string re_part =
      comma == std::string::npos ? text : text.substr(0, comma);
  const std::string im_part =
      comma == std::string::npos ? std::string("0") : text.substr(comma + 1);
  try {
    std::size_t used = 0;
    const double re = std::stod(re_part, &used);
    if (used != re_part.size()) throw std::invalid_argument(re_part);
    used = 0;
    const double im = std::stod(im_part, &used);
    if (used != im_part.size()) throw std::invalid_argument(im_part);
    return {re, im};
  } catch (const std::exception&) {
    throw dmtlab::validation_error("--corr entry '" + text +
                                   "' is not 're' or 're,im'");
  }
}

dmtlab::CovarianceSpec build_cov(const ChannelOptions& o,
                                 int default_slots = 0) {
  int slots = o.slots;
  if (!o.slots_given() && default_slots > 0 && o.pdp.empty() &&
      o.corr.empty()) {
    slots = default_slots;
  }
  dmtlab::CovarianceSpec cov;
  if (!o.pdp.empty()) {
    cov = dmtlab::build_covariance_from_pdp(
        dmtlab::PowerDelayProfile{o.pdp}, slots, o.rank_tol);
  } else if (!o.corr.empty()) {
    std::vector<std::complex<double>> row;
    row.reserve(o.corr.size());
    for (const auto& entry : o.corr) row.push_back(parse_corr_entry(entry));
    if (o.slots_given() && int(row.size()) != slots) {
      throw dmtlab::validation_error(
          "--corr has " + std::to_string(row.size()) +
          " entries but --slots is " + std::to_string(slots));
    }
    cov = dmtlab::build_covariance_from_correlation(row, o.rank_tol);
  } else {
    cov = dmtlab::build_covariance(
        Eigen::MatrixXcd::Identity(slots, slots), o.rank_tol);
  }
  if (std::abs(cov.normalization_scale - 1.0) > 1e-12) {
    std::cerr << "note: slot correlation normalized by "
              << fmt(cov.normalization_scale)
              << " so diagonal entries are 1\n";
  }
  return cov;
}

struct McOptions {
  std::vector<double> snr_db;
  std::vector<double> rates;
  std::vector<std::uint64_t> trials{100000};
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::vector<std::string> modes{"outage"};
};

void add_mc_options(CLI::App* cmd, McOptions& o, bool grids_required,
                    bool with_modes) {
  auto* snr = cmd->add_option("--snr-db", o.snr_db, "SNR grid in dB");
  snr->delimiter(',');
  auto* rates = cmd->add_option("--rates", o.rates, "Multiplexing rates r");
  rates->delimiter(',');
  if (grids_required) {
    snr->required();
    rates->required();
  }
  cmd->add_option("--trials", o.trials,
                  "Trials per SNR point (one value, or one per point)")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "RNG seed")
      ->envname("DMTLAB_SEED")
      ->capture_default_str();
  cmd->add_option("--workers", o.workers,
                  "Worker threads (0 = all hardware threads)")
      ->capture_default_str();
  if (with_modes) {
    cmd->add_option("--mode", o.modes,
                    "Estimator modes (outage, jensen_exact, jensen_reduced)")
        ->check(CLI::IsMember(
            {"outage", "jensen_exact", "jensen_reduced"}))
        ->capture_default_str();
  }
}

std::vector<dmtlab::SnrPoint> snr_points_of(const McOptions& o) {
  std::vector<dmtlab::SnrPoint> points;
  points.reserve(o.snr_db.size());
  for (double db : o.snr_db) points.push_back(dmtlab::SnrPoint::from_db(db));
  return points;
}

std::vector<dmtlab::EstimatorMode> modes_of(
    const std::vector<std::string>& names) {
  std::vector<dmtlab::EstimatorMode> modes;
  for (const auto& name : names) {
    dmtlab::EstimatorMode mode;
    if (name == "outage") {
      mode = dmtlab::EstimatorMode::outage;
    } else if (name == "jensen_exact") {
      mode = dmtlab::EstimatorMode::jensen_exact;
    } else if (name == "jensen_reduced") {
      mode = dmtlab::EstimatorMode::jensen_reduced;
    } else {
      throw dmtlab::validation_error("unknown mode '" + name + "'");
    }
    if (std::find(modes.begin(), modes.end(), mode) == modes.end()) {
      modes.push_back(mode);
    }
  }
  return modes;
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

struct CurveOptions {
  int mt = 1;
  int mr = 1;
  int rho = 1;
  int samples = 101;
};

void run_curve(const CurveOptions& o) {
  if (o.samples < 2) {
    throw dmtlab::validation_error("--samples must be at least 2");
  }
  const dmtlab::AntennaConfig ant(o.mt, o.mr);
  const dmtlab::TradeoffCurve curve = dmtlab::jensen_curve(o.rho, ant);

  std::cerr << "tradeoff curve: rho=" << o.rho << " mt=" << o.mt
            << " mr=" << o.mr << "; vertices:";
  for (int r = 0; r <= curve.min_dim; ++r) {
    std::cerr << " (" << r << ", " << fmt(curve.vertices[size_t(r)]) << ")";
  }
  std::cerr << "\n";

  std::vector<double> grid;
  grid.reserve(size_t(o.samples) + size_t(curve.min_dim) + 1);
  for (int k = 0; k < o.samples; ++k) {
    grid.push_back(double(curve.min_dim) * double(k) /
                   double(o.samples - 1));
  }
  for (int r = 0; r <= curve.min_dim; ++r) grid.push_back(double(r));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::cout << "r,d\n";
  for (double r : grid) {
    std::cout << fmt(r) << ',' << fmt(curve.evaluate(r)) << '\n';
  }
}

// ---------------------------------------------------------------------------
// outage
// ---------------------------------------------------------------------------

void run_outage(const ChannelOptions& ch, const McOptions& mc) {
  const dmtlab::AntennaConfig ant(ch.mt, ch.mr);
  const dmtlab::CovarianceSpec cov = build_cov(ch);
  dmtlab::SweepConfig config;
  config.rates = mc.rates;
  config.snr_points = snr_points_of(mc);
  config.trials = mc.trials;
  config.seed = mc.seed;
  config.workers = mc.workers;
  config.modes = modes_of(mc.modes);

  std::cerr << "outage sweep: " << ch.mt << "x" << ch.mr << ", N="
            << cov.slots() << ", rank=" << cov.rank << ", seed=" << mc.seed
            << ", " << config.snr_points.size() << " SNR point(s) x "
            << config.rates.size() << " rate(s) x " << config.modes.size()
            << " mode(s)\n";

  const auto points = dmtlab::sweep(cov, ant, config);
  std::cout << "snr_db,r,mode,trials,outages,p_hat,ci_lo,ci_hi\n";
  for (const auto& point : points) {
    for (size_t m = 0; m < config.modes.size(); ++m) {
      for (size_t k = 0; k < config.rates.size(); ++k) {
        const auto& est = point.estimates[m * config.rates.size() + k];
        std::cout << fmt(est.snr.db) << ',' << fmt(est.rate) << ','
                  << dmtlab::mode_name(config.modes[m]) << ',' << est.trials
                  << ',' << est.outages << ',' << fmt(est.p_hat) << ','
                  << fmt(est.ci95.lower) << ',' << fmt(est.ci95.upper)
                  << '\n';
      }
    }
    std::cerr << "  snr " << fmt(point.snr.db) << " dB: " << point.trials
              << " trials done\n";
  }
}

// ---------------------------------------------------------------------------
// jensen
// ---------------------------------------------------------------------------

void run_jensen(const ChannelOptions& ch, const McOptions& mc,
                bool sandwich) {
  const dmtlab::AntennaConfig ant(ch.mt, ch.mr);
  const dmtlab::CovarianceSpec cov = build_cov(ch);
  const auto snr_points = snr_points_of(mc);

  if (sandwich) {
    std::cerr << "sandwich bounds: " << ch.mt << "x" << ch.mr << ", N="
              << cov.slots() << ", rank=" << cov.rank << ", seed=" << mc.seed
              << "\n";
    std::cout << "snr_db,r,trials,lower_outages,middle_outages,"
                 "upper_outages,order_violations\n";
    for (size_t p = 0; p < snr_points.size(); ++p) {
      const std::uint64_t trials =
          mc.trials.size() == 1 ? mc.trials[0] : mc.trials[p];
      for (double r : mc.rates) {
        const auto est = dmtlab::estimate_sandwich(
            cov, ant, r, snr_points[p], trials, mc.seed, mc.workers);
        std::cout << fmt(est.snr.db) << ',' << fmt(est.rate) << ','
                  << est.trials << ',' << est.lower_outages << ','
                  << est.middle_outages << ',' << est.upper_outages << ','
                  << est.value_order_violations << '\n';
        if (est.value_order_violations != 0) {
          std::cerr << "  warning: " << est.value_order_violations
                    << " draw(s) broke the lower <= middle <= upper "
                       "ordering at snr "
                    << fmt(est.snr.db) << " dB, r " << fmt(est.rate) << "\n";
        }
      }
    }
    return;
  }

  dmtlab::SweepConfig config;
  config.rates = mc.rates;
  config.snr_points = snr_points;
  config.trials = mc.trials;
  config.seed = mc.seed;
  config.workers = mc.workers;
  config.modes = {dmtlab::EstimatorMode::outage,
                  dmtlab::EstimatorMode::jensen_exact};

  std::cerr << "jensen domination check (shared draws): " << ch.mt << "x"
            << ch.mr << ", N=" << cov.slots() << ", rank=" << cov.rank
            << ", seed=" << mc.seed << "\n";
  const auto points = dmtlab::sweep(cov, ant, config);
  std::cout << "snr_db,r,trials,outage_count,jensen_count,dominated,"
               "violations\n";
  for (const auto& point : points) {
    for (size_t k = 0; k < config.rates.size(); ++k) {
      const auto& out = point.estimates[k];
      const auto& jen = point.estimates[config.rates.size() + k];
      const bool dominated = jen.outages <= out.outages;
      std::cout << fmt(point.snr.db) << ',' << fmt(out.rate) << ','
                << point.trials << ',' << out.outages << ',' << jen.outages
                << ',' << (dominated ? 1 : 0) << ','
                << point.jensen_violations << '\n';
    }
    if (point.jensen_violations != 0) {
      std::cerr << "  warning: " << point.jensen_violations
                << " draw(s) broke I <= I_J at snr " << fmt(point.snr.db)
                << " dB\n";
    }
  }
}

// ---------------------------------------------------------------------------
// exponent
// ---------------------------------------------------------------------------

std::vector<dmtlab::OutageEstimate> read_injected(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw dmtlab::validation_error(path + ": cannot open injection file");
  }
  std::vector<dmtlab::OutageEstimate> estimates;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double snr_db = 0.0, p = 0.0;
    if (!(fields >> snr_db)) continue;  // blank line
    if (!(fields >> p)) {
      // permit a "snr_db,p" header line, reject anything else
      if (line_no == 1) continue;
      throw dmtlab::validation_error(path + ":" + std::to_string(line_no) +
                                     ": expected 'snr_db,p'");
    }
    if (!(p >= 0.0) || !(p <= 1.0)) {
      throw dmtlab::validation_error(path + ":" + std::to_string(line_no) +
                                     ": probability outside [0, 1]");
    }
    dmtlab::OutageEstimate est;
    est.snr = dmtlab::SnrPoint::from_db(snr_db);
    est.trials = 1000000;
    est.outages = p > 0.0 ? 1000000 : 0;  // qualify iff p > 0
    est.p_hat = p;
    estimates.push_back(est);
  }
  return estimates;
}

void run_exponent(const ChannelOptions& ch, const McOptions& mc,
                  const std::string& inject, std::uint64_t min_events) {
  const dmtlab::AntennaConfig ant(ch.mt, ch.mr);
  const dmtlab::CovarianceSpec cov = build_cov(ch);
  const dmtlab::TradeoffCurve curve = dmtlab::jensen_curve(cov.rank, ant);

  std::cout << "r,mode,d_hat,std_err,used_points,excluded_snr_db,d_theory,"
               "gap\n";
  auto emit = [&](double rate, const std::string& mode,
                  const dmtlab::ExponentFit& fit) {
    std::string excluded;
    for (size_t i = 0; i < fit.excluded_snr_db.size(); ++i) {
      if (i) excluded += ';';
      excluded += fmt(fit.excluded_snr_db[i]);
    }
    const double d_theory = curve.evaluate(rate);
    const double gap = fit.diversity - d_theory;
    std::cout << fmt(rate) << ',' << mode << ',' << fmt(fit.diversity) << ','
              << fmt(fit.std_error) << ',' << fit.used_points << ','
              << excluded << ',' << fmt(d_theory) << ',' << fmt(gap) << '\n';
    std::cerr << "  r=" << fmt(rate) << " [" << mode
              << "]: d_hat=" << fmt(fit.diversity) << " +- "
              << fmt(fit.std_error) << " over " << fit.used_points
              << " point(s)";
    if (!fit.excluded_snr_db.empty()) {
      std::cerr << " (excluded " << excluded << " dB: fewer than "
                << min_events << " events)";
    }
    std::cerr << "; theory " << fmt(d_theory) << ", gap " << fmt(gap)
              << "\n";
  };

  if (!inject.empty()) {
    const auto estimates = read_injected(inject);
    std::cerr << "exponent fit over " << estimates.size()
              << " injected point(s) from " << inject << "\n";
    const double rate = mc.rates.empty() ? 0.0 : mc.rates.front();
    emit(rate, "inject", dmtlab::fit_exponent(estimates, min_events));
    return;
  }

  if (mc.rates.empty() || mc.snr_db.empty()) {
    throw dmtlab::validation_error(
        "--rates and --snr-db are required unless --inject is given");
  }
  dmtlab::SweepConfig config;
  config.rates = mc.rates;
  config.snr_points = snr_points_of(mc);
  config.trials = mc.trials;
  config.seed = mc.seed;
  config.workers = mc.workers;
  config.modes = modes_of(mc.modes);
  std::cerr << "exponent sweep: " << ch.mt << "x" << ch.mr << ", N="
            << cov.slots() << ", rank=" << cov.rank << ", seed=" << mc.seed
            << ", theory curve rho*mmax=" << cov.rank * ant.max_dim()
            << "\n";
  const auto points = dmtlab::sweep(cov, ant, config);
  for (size_t m = 0; m < config.modes.size(); ++m) {
    for (size_t k = 0; k < config.rates.size(); ++k) {
      std::vector<dmtlab::OutageEstimate> series;
      series.reserve(points.size());
      for (const auto& point : points) {
        series.push_back(point.estimates[m * config.rates.size() + k]);
      }
      emit(config.rates[k], dmtlab::mode_name(config.modes[m]),
           dmtlab::fit_exponent(series, min_events));
    }
  }
}

// ---------------------------------------------------------------------------
// criterion
// ---------------------------------------------------------------------------

void require_block_length(const dmtlab::CovarianceSpec& cov,
                          const dmtlab::Codebook& cb,
                          const std::string& path) {
  const int required = cov.rank * cb.tx;
  if (cb.slots < required) {
    throw dmtlab::validation_error(
        path + ": block length N=" + std::to_string(cb.slots) +
        " violates the requirement N >= rho*m_t = " +
        std::to_string(cov.rank) + "*" + std::to_string(cb.tx) + " = " +
        std::to_string(required) + "; full criterion rank is impossible");
  }
}

void run_criterion(const ChannelOptions& ch,
                   const std::vector<std::string>& paths,
                   const std::vector<double>& snr_db, double rate,
                   double epsilon, bool decay_mode) {
  std::vector<dmtlab::Codebook> books;
  books.reserve(paths.size());
  for (const auto& path : paths) books.push_back(dmtlab::load_codebook(path));

  const dmtlab::CovarianceSpec cov = build_cov(ch, books.front().slots);
  for (size_t i = 0; i < books.size(); ++i) {
    if (books[i].slots != cov.slots()) {
      throw dmtlab::validation_error(
          paths[i] + ": codebook block length " +
          std::to_string(books[i].slots) + " does not match the " +
          std::to_string(cov.slots()) + "-slot channel configuration");
    }
    if (books[i].tx != ch.mt) {
      throw dmtlab::validation_error(
          paths[i] + ": codebook has m_t=" + std::to_string(books[i].tx) +
          " but --mt is " + std::to_string(ch.mt));
    }
    require_block_length(cov, books[i], paths[i]);
  }
  const dmtlab::AntennaConfig ant(ch.mt, ch.mr);

  if (decay_mode) {
    if (snr_db.size() != books.size()) {
      throw dmtlab::validation_error(
          "decay mode needs one --snr-db value per codebook (got " +
          std::to_string(snr_db.size()) + " for " +
          std::to_string(books.size()) + " codebook(s))");
    }
    std::vector<std::pair<dmtlab::SnrPoint, double>> lambda_by_snr;
    std::cout << "snr_db,lambda\n";
    for (size_t i = 0; i < books.size(); ++i) {
      books[i].snr = dmtlab::SnrPoint::from_db(snr_db[i]);
      const double lambda = dmtlab::codebook_lambda(cov, books[i]);
      lambda_by_snr.emplace_back(books[i].snr, lambda);
      std::cout << fmt(snr_db[i]) << ',' << fmt(lambda) << '\n';
    }
    const auto verdict =
        dmtlab::check_decay(lambda_by_snr, ant, rate, epsilon);
    std::cerr << "decay fit over " << verdict.points
              << " point(s): b = " << fmt(verdict.decay) << " (std err "
              << fmt(verdict.std_error) << ")\n";
    std::cerr << "criterion " << (verdict.pass ? "PASS" : "FAIL")
              << ": m_min*b = " << fmt(ant.min_dim() * verdict.decay)
              << (verdict.pass ? " <= " : " > ")
              << "r - epsilon = " << fmt(rate - epsilon) << "\n";
    if (verdict.non_vanishing) {
      std::cerr << "fulfills the non-vanishing determinant criterion "
                   "(b <= 0 within fit error)\n";
    }
    return;
  }

  std::cout << "codebook,first,second,rank,required,pass,lambda_min_nz,"
               "margin\n";
  for (size_t i = 0; i < books.size(); ++i) {
    const auto report = dmtlab::check_codebook(cov, books[i]);
    for (const auto& pair : report.pairs) {
      std::cout << i << ',' << pair.first << ',' << pair.second << ','
                << pair.check.rank << ',' << pair.check.required << ','
                << (pair.check.pass ? 1 : 0) << ','
                << fmt(pair.check.lambda_min_nz) << ','
                << fmt(pair.check.margin) << '\n';
    }
    std::cerr << "codebook " << i << " (" << paths[i]
              << "): required rank " << report.required_rank
              << ", block length ok, lambda = " << fmt(report.lambda) << ", "
              << (report.pass ? "PASS" : "FAIL") << "\n";
  }
}

// ---------------------------------------------------------------------------
// pep
// ---------------------------------------------------------------------------

void run_pep(const ChannelOptions& ch, const std::string& path,
             const std::vector<double>& snr_db, double rate, bool rate_given,
             bool per_pair) {
  dmtlab::Codebook cb = dmtlab::load_codebook(path);
  const dmtlab::CovarianceSpec cov = build_cov(ch, cb.slots);
  if (cb.slots != cov.slots()) {
    throw dmtlab::validation_error(
        path + ": codebook block length " + std::to_string(cb.slots) +
        " does not match the " + std::to_string(cov.slots()) +
        "-slot channel configuration");
  }
  if (cb.tx != ch.mt) {
    throw dmtlab::validation_error(
        path + ": codebook has m_t=" + std::to_string(cb.tx) +
        " but --mt is " + std::to_string(ch.mt));
  }
  const dmtlab::AntennaConfig ant(ch.mt, ch.mr);

  if (per_pair) {
    std::cerr << "per-pair PEP upper bounds for " << path << " ("
              << cb.codewords.size() << " codeword(s))\n";
    std::cout << "snr_db,first,second,pep_bound\n";
    for (double db : snr_db) {
      const auto snr = dmtlab::SnrPoint::from_db(db);
      for (size_t i = 0; i < cb.codewords.size(); ++i) {
        for (size_t j = i + 1; j < cb.codewords.size(); ++j) {
          const Eigen::MatrixXcd e = cb.codewords[j] - cb.codewords[i];
          std::cout << fmt(db) << ',' << i << ',' << j << ','
                    << fmt(dmtlab::pep_upper_bound(cov, e, ant, snr.linear))
                    << '\n';
        }
      }
    }
    return;
  }

  if (!rate_given) {
    throw dmtlab::validation_error(
        "--rate is required for the union bound (or use --per-pair)");
  }
  std::cerr << "union bound vs summed pairwise PEP bounds for " << path
            << " at r = " << fmt(rate) << "\n";
  std::cout << "snr_db,r,lambda,union_bound,pep_sum\n";
  for (double db : snr_db) {
    const auto snr = dmtlab::SnrPoint::from_db(db);
    cb.snr = snr;
    const double lambda = dmtlab::codebook_lambda(cov, cb);
    const double ub = dmtlab::union_bound(cov, cb, ant, snr.linear, rate);
    double pep_sum = 0.0;  // over unordered codeword pairs
    for (size_t i = 0; i < cb.codewords.size(); ++i) {
      for (size_t j = i + 1; j < cb.codewords.size(); ++j) {
        const Eigen::MatrixXcd e = cb.codewords[j] - cb.codewords[i];
        pep_sum += dmtlab::pep_upper_bound(cov, e, ant, snr.linear);
      }
    }
    std::cout << fmt(db) << ',' << fmt(rate) << ',' << fmt(lambda) << ','
              << fmt(ub) << ',' << fmt(pep_sum) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dmtlab: diversity-multiplexing tradeoff laboratory for selective "
      "fading MIMO channels"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Read options from a TOML/INI file (sections per "
                 "subcommand; command-line flags take precedence)");
  app.failure_message(CLI::FailureMessage::help);

  // curve -------------------------------------------------------------------
  CurveOptions curve_opts;
  auto* curve = app.add_subcommand(
      "curve", "Theoretical tradeoff curve d_J(r) = (rho*m_max - r)(m_min - "
               "r), piecewise linear between integer rates");
  curve->add_option("--mt", curve_opts.mt, "Transmit antennas m_t")
      ->capture_default_str();
  curve->add_option("--mr", curve_opts.mr, "Receive antennas m_r")
      ->capture_default_str();
  curve
      ->add_option("--rho", curve_opts.rho,
                   "Covariance rank rho (number of taps L in the "
                   "frequency-selective model)")
      ->capture_default_str();
  curve
      ->add_option("--samples", curve_opts.samples,
                   "Number of uniformly spaced sample rates (integer "
                   "vertices are always included)")
      ->capture_default_str();
  curve->callback([&] { run_curve(curve_opts); });

  // outage ------------------------------------------------------------------
  ChannelOptions outage_ch;
  McOptions outage_mc;
  auto* outage = app.add_subcommand(
      "outage", "Monte Carlo outage probabilities over an SNR grid");
  add_channel_options(outage, outage_ch);
  add_mc_options(outage, outage_mc, /*grids_required=*/true,
                 /*with_modes=*/true);
  outage->callback([&] { run_outage(outage_ch, outage_mc); });

  // jensen ------------------------------------------------------------------
  ChannelOptions jensen_ch;
  McOptions jensen_mc;
  bool jensen_sandwich = false;
  auto* jensen = app.add_subcommand(
      "jensen", "Per-realization Jensen domination diagnostics on shared "
                "draws (or sandwich bounds with --sandwich)");
  add_channel_options(jensen, jensen_ch);
  add_mc_options(jensen, jensen_mc, /*grids_required=*/true,
                 /*with_modes=*/false);
  jensen->add_flag("--sandwich", jensen_sandwich,
                   "Estimate the lower/middle/upper sandwich outage events "
                   "on shared whitened draws");
  jensen->callback(
      [&] { run_jensen(jensen_ch, jensen_mc, jensen_sandwich); });

  // exponent ----------------------------------------------------------------
  ChannelOptions exp_ch;
  McOptions exp_mc;
  std::string exp_inject;
  std::uint64_t exp_min_events = 50;
  auto* exponent = app.add_subcommand(
      "exponent", "Fit the diversity exponent d_hat from a log-log "
                  "regression of outage probability against SNR");
  add_channel_options(exponent, exp_ch);
  add_mc_options(exponent, exp_mc, /*grids_required=*/false,
                 /*with_modes=*/true);
  exponent
      ->add_option("--inject", exp_inject,
                   "Skip simulation; fit probabilities from a CSV file with "
                   "'snr_db,p' rows")
      ->check(CLI::ExistingFile);
  exponent
      ->add_option("--min-events", exp_min_events,
                   "Exclude grid points with fewer outage events")
      ->capture_default_str();
  exponent->callback(
      [&] { run_exponent(exp_ch, exp_mc, exp_inject, exp_min_events); });

  // criterion ---------------------------------------------------------------
  ChannelOptions crit_ch;
  std::vector<std::string> crit_books;
  std::vector<double> crit_snr_db;
  double crit_rate = 0.0;
  double crit_epsilon = 0.0;
  auto* criterion = app.add_subcommand(
      "criterion", "Check the code design criterion: full criterion-matrix "
                   "rank rho*m_t for every codeword pair");
  add_channel_options(criterion, crit_ch);
  criterion
      ->add_option("--codebook", crit_books,
                   "Codebook file(s); several files form an SNR-indexed "
                   "family for the decay check")
      ->required()
      ->check(CLI::ExistingFile);
  criterion
      ->add_option("--snr-db", crit_snr_db,
                   "Nominal SNR of each codebook (decay mode)")
      ->delimiter(',');
  criterion->add_option("--rate", crit_rate,
                        "Multiplexing rate r for the decay check");
  auto* crit_eps_opt = criterion->add_option(
      "--epsilon", crit_epsilon,
      "Slack in the decay condition m_min*b <= r - epsilon; enables decay "
      "mode");
  criterion->callback([&] {
    run_criterion(crit_ch, crit_books, crit_snr_db, crit_rate, crit_epsilon,
                  crit_eps_opt->count() > 0);
  });

  // pep ---------------------------------------------------------------------
  ChannelOptions pep_ch;
  std::string pep_book;
  std::vector<double> pep_snr_db;
  double pep_rate = 0.0;
  bool pep_per_pair = false;
  auto* pep = app.add_subcommand(
      "pep", "Pairwise-error-probability upper bounds and the union bound "
             "for a codebook");
  add_channel_options(pep, pep_ch);
  pep->add_option("--codebook", pep_book, "Codebook file")
      ->required()
      ->check(CLI::ExistingFile);
  pep->add_option("--snr-db", pep_snr_db, "SNR grid in dB")
      ->delimiter(',')
      ->required();
  auto* pep_rate_opt =
      pep->add_option("--rate", pep_rate, "Multiplexing rate r");
  pep->add_flag("--per-pair", pep_per_pair,
                "Emit one closed-form PEP bound per codeword pair instead "
                "of the union bound");
  pep->callback([&] {
    run_pep(pep_ch, pep_book, pep_snr_db, pep_rate,
            pep_rate_opt->count() > 0, pep_per_pair);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const dmtlab::insufficient_data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const dmtlab::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
