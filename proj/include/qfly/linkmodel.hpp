#pragma once

// Entanglement link timing. Attempts succeed with probability
// 10^(-loss_db/10), so the expected attempts per raw ("physical") pair is
// overhead_factor(loss_db) and t_peg = t_attempt * overhead. Distilling one
// high-fidelity ("logical") pair consumes a fixed number of raw pairs
// (purification_factor, default 80): t_leg = factor * t_peg. A connection
// then needs t_gs of switch reconfiguration before the next t_leg window:
// r_leg = 1 / (t_leg + t_gs), duty = t_leg / (t_leg + t_gs).
//
// simulate_link draws geometric attempt counts from a hand-rolled inverse
// CDF over mt19937_64 so traces are bit-identical across platforms.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "qfly/routing.hpp"
#include "qfly/switch_loss.hpp"

namespace qfly {

inline constexpr double kDefaultPurificationFactor = 80.0;
inline constexpr double kDefaultAttemptSeconds = 1e-9;
inline constexpr double kDefaultInfidelity = 0.10;

struct LinkTiming {
  double t_peg_s = 0;   // expected time per raw pair
  double t_leg_s = 0;   // expected time per purified pair
  double r_leg_hz = 0;  // purified pairs per second incl. reconfiguration
  double duty = 0;      // fraction of the cycle spent generating
};

inline double physical_pair_time(double t_attempt_s, double loss_db) {
  if (t_attempt_s <= 0)
    throw std::invalid_argument("physical_pair_time: t_attempt must be > 0");
  return t_attempt_s * overhead_factor(loss_db);
}

inline LinkTiming logical_pair_timing(
    double t_peg_s, double t_gs_s,
    double purification_factor = kDefaultPurificationFactor) {
  if (t_peg_s <= 0)
    throw std::invalid_argument("logical_pair_timing: t_peg must be > 0");
  if (t_gs_s < 0)
    throw std::invalid_argument("logical_pair_timing: t_gs must be >= 0");
  if (purification_factor < 1)
    throw std::invalid_argument(
        "logical_pair_timing: purification factor must be >= 1");
  LinkTiming lt;
  lt.t_peg_s = t_peg_s;
  lt.t_leg_s = purification_factor * t_peg_s;
  lt.r_leg_hz = 1.0 / (lt.t_leg_s + t_gs_s);
  lt.duty = lt.t_leg_s / (lt.t_leg_s + t_gs_s);
  return lt;
}

inline LinkTiming link_timing(
    double t_attempt_s, double loss_db, double t_gs_s,
    double purification_factor = kDefaultPurificationFactor) {
  return logical_pair_timing(physical_pair_time(t_attempt_s, loss_db), t_gs_s,
                             purification_factor);
}

// after purification the residual error is budgeted, not path dependent
inline double infidelity_estimate(const PathSpec&,
                                  double configured = kDefaultInfidelity) {
  return configured;
}

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// failures before the first success, success probability s
inline std::int64_t geometric_failures(std::mt19937_64& rng, double s) {
  if (s >= 1.0) return 0;
  const double u = uniform01(rng);
  return static_cast<std::int64_t>(std::log1p(-u) / std::log1p(-s));
}

struct Welford {
  std::int64_t n = 0;
  double mean = 0;
  double m2 = 0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stderr_mean() const {
    return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
};

}  // namespace detail

struct LinkSimResult {
  double mean_t_peg_s = 0;
  double se_t_peg_s = 0;
  double mean_t_leg_s = 0;
  double se_t_leg_s = 0;
  std::int64_t raw_pairs = 0;
  std::int64_t logical_pairs = 0;
  std::int64_t attempts = 0;
};

inline LinkSimResult simulate_link(double loss_db, double t_attempt_s,
                                   std::int64_t logical_pairs,
                                   std::uint64_t seed,
                                   int purification_factor = 80) {
  if (loss_db < 0)
    throw std::invalid_argument("simulate_link: loss must be >= 0 dB");
  if (t_attempt_s <= 0)
    throw std::invalid_argument("simulate_link: t_attempt must be > 0");
  if (logical_pairs <= 0)
    throw std::invalid_argument("simulate_link: need at least 1 logical pair");
  if (purification_factor < 1)
    throw std::invalid_argument(
        "simulate_link: purification factor must be >= 1");
  const double s = std::pow(10.0, -loss_db / 10.0);
  std::mt19937_64 rng(seed);
  detail::Welford per_raw, per_logical;
  LinkSimResult res;
  for (std::int64_t i = 0; i < logical_pairs; ++i) {
    std::int64_t attempts_this_logical = 0;
    for (int j = 0; j < purification_factor; ++j) {
      const std::int64_t a = detail::geometric_failures(rng, s) + 1;
      per_raw.add(static_cast<double>(a));
      attempts_this_logical += a;
    }
    per_logical.add(static_cast<double>(attempts_this_logical));
    res.attempts += attempts_this_logical;
  }
  res.raw_pairs = logical_pairs * purification_factor;
  res.logical_pairs = logical_pairs;
  res.mean_t_peg_s = per_raw.mean * t_attempt_s;
  res.se_t_peg_s = per_raw.stderr_mean() * t_attempt_s;
  res.mean_t_leg_s = per_logical.mean * t_attempt_s;
  res.se_t_leg_s = per_logical.stderr_mean() * t_attempt_s;
  return res;
}

}  // namespace qfly
