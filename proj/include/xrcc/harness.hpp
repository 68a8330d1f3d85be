#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xrcc/phy.hpp"
#include "xrcc/placement.hpp"

namespace xrcc {

enum class Scheme {
  uniform_unicast,
  nonuniform_unicast,
  baseline_cc,
  nonuniform_cc,
  dynamic
};

const char* to_string(Scheme scheme);
std::optional<Scheme> scheme_from_string(const std::string& name);

/// Monte-Carlo setup for one delivery scheme. The TRP sits in the middle of
/// a square room tiled into STUs; every trial drops the users uniformly,
/// each user asks for the image of its STU, and channels combine distance
/// pathloss, a static per-STU shadowing map and Rayleigh fading.
struct ExperimentConfig {
  Scheme scheme = Scheme::baseline_cc;
  int users = 8;
  Rational cache_fraction{1, 4};
  int multiplexing_gain = 2;
  int antennas = 0;  // 0: one antenna per stream (N_tx = L)
  double env_m = 5.0;
  double stu_m = 0.5;
  double image_bits = 8e8;  // 100 MB
  ChannelParams channel{3.0, 1.0, 7.0, 1e-6, 1.0, 1.0};
  int profiles = 4;  // dynamic scheme only
  int trials = 500;
  std::uint64_t seed = 1;
};

/// Desk-scale default: K=8, gamma=1/4, L=2, 5 m x 5 m of 0.5 m STUs, sigma_s=7.
ExperimentConfig desk_config(Scheme scheme);

/// K=36, gamma=1/3, L=6 (t=12); slow. CC schemes switch to the grouped
/// placement here because the bit-level subpacketization is out of reach.
ExperimentConfig large_config(Scheme scheme);

struct TrialResult {
  int trial = 0;
  bool failed = false;
  std::string error;
  double total_s = 0.0;
  std::vector<double> per_user_s;
  double link_load = 0.0;
  double dof = 0.0;
  int outages = 0;
};

struct MetricReport {
  Scheme scheme = Scheme::baseline_cc;
  std::vector<TrialResult> trials;

  /// Total delivery time of every trial that did not fail, by trial index.
  std::vector<double> total_times() const;
  int failed_count() const;
  double mean_total() const;
  double variance_total() const;  // unbiased
};

/// Per-trial seed: splitmix64(master + golden * (trial + 1)).
std::uint64_t trial_seed(std::uint64_t master_seed, int trial);
std::uint64_t splitmix64(std::uint64_t x);

/// Static shadowing (dB) per STU, derived from the master seed.
std::vector<double> shadowing_map(int stu_count, double sigma_db,
                                  std::uint64_t master_seed);

MetricReport run_experiment(const ExperimentConfig& config);

/// Right-continuous empirical CDF: distinct sorted values with P(X <= v).
std::vector<std::pair<double, double>> empirical_cdf(
    std::span<const double> samples);

/// "scheme,total_time_s,cdf" rows for every report.
std::string cdf_csv(std::span<const MetricReport> reports);

}  // namespace xrcc
