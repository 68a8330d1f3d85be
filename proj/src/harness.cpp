#include "xrcc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <locale>
#include <numeric>
#include <random>
#include <sstream>

#include "xrcc/delivery.hpp"
#include "xrcc/dynamic_cc.hpp"
#include "xrcc/errors.hpp"
#include "xrcc/xr_env.hpp"

namespace xrcc {

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::uniform_unicast: return "uniform_unicast";
    case Scheme::nonuniform_unicast: return "nonuniform_unicast";
    case Scheme::baseline_cc: return "baseline_cc";
    case Scheme::nonuniform_cc: return "nonuniform_cc";
    case Scheme::dynamic: return "dynamic";
  }
  return "unknown";
}

std::optional<Scheme> scheme_from_string(const std::string& name) {
  for (auto s : {Scheme::uniform_unicast, Scheme::nonuniform_unicast,
                 Scheme::baseline_cc, Scheme::nonuniform_cc, Scheme::dynamic}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

ExperimentConfig desk_config(Scheme scheme) {
  ExperimentConfig config;
  config.scheme = scheme;
  return config;
}

ExperimentConfig large_config(Scheme scheme) {
  ExperimentConfig config;
  config.scheme = scheme;
  config.users = 36;
  config.cache_fraction = Rational(1, 3);
  config.multiplexing_gain = 6;
  return config;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial) {
  return splitmix64(master_seed +
                    0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(trial + 1));
}

std::vector<double> shadowing_map(int stu_count, double sigma_db,
                                  std::uint64_t master_seed) {
  std::mt19937_64 rng(splitmix64(master_seed ^ 0x5348414430575321ull));
  std::normal_distribution<double> normal(0.0, sigma_db);
  std::vector<double> out(stu_count, 0.0);
  if (sigma_db > 0.0) {
    for (auto& x : out) x = normal(rng);
  }
  return out;
}

std::vector<double> MetricReport::total_times() const {
  std::vector<double> out;
  for (const auto& t : trials) {
    if (!t.failed) out.push_back(t.total_s);
  }
  return out;
}

int MetricReport::failed_count() const {
  return static_cast<int>(std::count_if(
      trials.begin(), trials.end(), [](const TrialResult& t) { return t.failed; }));
}

double MetricReport::mean_total() const {
  const auto v = total_times();
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double MetricReport::variance_total() const {
  const auto v = total_times();
  if (v.size() < 2) return 0.0;
  const double mean = mean_total();
  double sum = 0.0;
  for (double x : v) sum += (x - mean) * (x - mean);
  return sum / static_cast<double>(v.size() - 1);
}

namespace {

constexpr std::uint64_t kMaxSubpacketization = 100'000;

/// Everything that is fixed across the trials of one experiment.
struct Environment {
  StuGrid grid;
  Point trp;
  std::vector<double> shadow_db;          // per STU
  std::vector<double> file_fraction;      // cached fraction per file
  double gamma = 0.0;
  int coded_gain = 0;
  int antennas = 0;
  std::optional<PlacementSpec> placement;  // CC schemes
  std::optional<FileLibrary> structure;    // 1 byte per subpacket
};

Environment prepare(const ExperimentConfig& config) {
  if (config.trials < 1) throw ArgumentError("experiment: need trials >= 1");
  if (config.multiplexing_gain < 1) throw ArgumentError("experiment: need L >= 1");
  Environment env;
  env.grid = build_grid(config.env_m, config.env_m, config.stu_m);
  env.trp = {config.env_m / 2.0, config.env_m / 2.0};
  env.shadow_db = shadowing_map(env.grid.stu_count(),
                                config.channel.shadowing_std_db, config.seed);
  env.gamma = boost::rational_cast<double>(config.cache_fraction);
  env.coded_gain = coded_caching_gain(config.users, config.cache_fraction);
  env.antennas = config.antennas > 0 ? config.antennas : config.multiplexing_gain;
  const int files = env.grid.stu_count();

  env.file_fraction.assign(files, env.gamma);
  if (config.scheme == Scheme::nonuniform_unicast ||
      config.scheme == Scheme::nonuniform_cc) {
    // large-scale rate at every STU centre with the power shared by the
    // streams of one slot
    const int streams = config.scheme == Scheme::nonuniform_cc
                            ? std::min(env.coded_gain + config.multiplexing_gain, config.users)
                            : config.multiplexing_gain;
    const double share = config.channel.transmit_power / streams;
    std::vector<double> rates(files);
    for (int s = 0; s < files; ++s) {
      const double gain =
          pathloss_gain(distance(env.grid.stu_center(s), env.trp), config.channel) *
          std::pow(10.0, env.shadow_db[s] / 10.0);
      rates[s] = std::log2(1.0 + share * gain / config.channel.noise_power);
    }
    env.file_fraction = location_dependent_allocation(rates, env.gamma).fractions;
  }

  if ((config.scheme == Scheme::baseline_cc ||
       config.scheme == Scheme::nonuniform_cc) &&
      env.coded_gain < config.users) {
    const int L = config.multiplexing_gain;
    const bool grouped = config.users % L == 0 && env.coded_gain % L == 0;
    if (bit_level_subpacketization(config.users, env.coded_gain, L) <=
        kMaxSubpacketization) {
      env.placement = bit_level_placement(config.users, files,
                                          config.cache_fraction, L);
    } else if (grouped) {
      env.placement =
          grouped_placement(config.users, files, config.cache_fraction, L);
    } else {
      throw UnsupportedParameter("experiment: subpacketization too large");
    }
    env.structure = FileLibrary::synthetic(files, env.placement->subpacketization,
                                           config.seed);
  }
  return env;
}

void add_slot(TrialResult& result, const Subset& served, double slot) {
  if (!std::isfinite(slot)) {
    ++result.outages;
    return;
  }
  result.total_s += slot;
  for (int k : served) result.per_user_s[k] += slot;
}

void run_unicast(const ExperimentConfig& config, const Environment& env,
                 const ChannelMatrix& h, const Demand& demand,
                 TrialResult& result) {
  const int K = config.users;
  const int L = config.multiplexing_gain;
  int slots = 0;
  for (int first = 0; first < K; first += L) {
    Transmission tx;
    for (int k = first; k < std::min(first + L, K); ++k) tx.served.push_back(k);
    std::vector<double> bits;
    for (int k : tx.served) {
      Subset others;
      for (int j : tx.served) {
        if (j != k) others.push_back(j);
      }
      tx.codewords.push_back({{k}, others, {}, {}});
      const double missing = 1.0 - env.file_fraction[demand[k]];
      bits.push_back(missing * config.image_bits);
      result.link_load += missing;
    }
    const auto beams = min_time_beamformers(h, tx, bits, config.channel);
    add_slot(result, tx.served,
             slot_time(h, tx, DeliveryMode::bit_level, beams, bits, config.channel));
    ++slots;
  }
  result.dof = static_cast<double>(K) / slots / L;
}

/// Non-uniform sizes on a bit-level codeword: the terms are XORed over their
/// common length and each longer term sends its tail as a separate entry on
/// the same beam. The other targets hold that tail in cache.
Transmission split_unequal_terms(const Transmission& tx,
                                 const std::vector<double>& user_bits,
                                 std::vector<double>& bits) {
  Transmission out{tx.served, {}};
  bits.clear();
  for (const auto& cw : tx.codewords) {
    double common = std::numeric_limits<double>::infinity();
    for (int k : cw.target_set) common = std::min(common, user_bits[k]);
    out.codewords.push_back({cw.target_set, cw.null_set, cw.composition, {}});
    bits.push_back(common);
    for (int k : cw.target_set) {
      if (user_bits[k] > common) {
        out.codewords.push_back({{k}, cw.null_set, {}, {}});
        bits.push_back(user_bits[k] - common);
      }
    }
  }
  return out;
}

void run_coded(const ExperimentConfig& config, const Environment& env,
               const ChannelMatrix& h, const Demand& demand,
               TrialResult& result) {
  const PlacementSpec& placement = *env.placement;
  const bool nonuniform = config.scheme == Scheme::nonuniform_cc;
  const int L = config.multiplexing_gain;
  const auto schedule =
      placement.scheme == SchemeTag::grouped_signal_level
          ? build_schedule_signal_level(placement, demand, *env.structure, L)
          : build_schedule_bit_level(placement, demand, *env.structure, L);
  const double subpacket_bits =
      config.image_bits / static_cast<double>(placement.subpacketization);
  // per-user term size, scaled by how much of the requested file the user
  // is still missing
  std::vector<double> user_bits(config.users, subpacket_bits);
  if (nonuniform) {
    for (int k = 0; k < config.users; ++k) {
      user_bits[k] *= (1.0 - env.file_fraction[demand[k]]) / (1.0 - env.gamma);
    }
  }

  int served = 0;
  std::vector<double> bits;
  for (const auto& scheduled : schedule.transmissions) {
    Transmission tx;
    DeliveryMode mode = schedule.mode;
    if (nonuniform && schedule.mode == DeliveryMode::bit_level) {
      tx = split_unequal_terms(scheduled, user_bits, bits);
      mode = DeliveryMode::signal_level;
    } else {
      tx = scheduled;
      bits.clear();
      for (const auto& cw : tx.codewords) {
        double size = 0.0;
        for (int k : cw.target_set) size = std::max(size, user_bits[k]);
        bits.push_back(size);
      }
    }
    const auto beams = min_time_beamformers(h, tx, bits, config.channel);
    add_slot(result, tx.served, slot_time(h, tx, mode, beams, bits, config.channel));
    served += static_cast<int>(tx.served.size());
  }
  result.link_load = boost::rational_cast<double>(link_load(schedule));
  const int capacity = std::min(env.coded_gain + L, config.users);
  result.dof = schedule.transmissions.empty()
                   ? 1.0
                   : static_cast<double>(served) /
                         schedule.transmissions.size() / capacity;
}

void run_dynamic(const ExperimentConfig& config, const Environment& env,
                 const ChannelMatrix& h, std::mt19937_64& rng,
                 TrialResult& result) {
  const int K = config.users;
  std::vector<int> occupancy(config.profiles, 0);
  std::uniform_int_distribution<int> pick(0, config.profiles - 1);
  for (int k = 0; k < K; ++k) ++occupancy[pick(rng)];
  const auto assignment = assignment_from_occupancy(occupancy);
  const auto schedule =
      schedule_dynamic(assignment, env.coded_gain, config.multiplexing_gain);
  const double bits = (1.0 - env.gamma) * config.image_bits;
  for (const auto& users : schedule.transmissions) {
    // idealised: each served user sees its own matched-filter gain at an
    // equal share of the power
    std::vector<double> rates;
    Subset served;
    for (int k : users) {
      served.push_back(k);
      const double gain = h.row(k).squaredNorm();
      rates.push_back(std::log2(1.0 + config.channel.transmit_power /
                                          users.size() * gain /
                                          config.channel.noise_power));
    }
    const std::vector<double> per(rates.size(), bits);
    add_slot(result, served,
             transmission_time(rates, per, config.channel.bandwidth_hz));
  }
  result.dof = normalized_dof(schedule);
  result.link_load = (1.0 - env.gamma) * K;
}

TrialResult run_trial(const ExperimentConfig& config, const Environment& env,
                      int trial) {
  TrialResult result;
  result.trial = trial;
  result.per_user_s.assign(config.users, 0.0);
  std::mt19937_64 rng(trial_seed(config.seed, trial));

  std::vector<Point> positions(config.users);
  std::uniform_real_distribution<double> coord(0.0, config.env_m);
  for (auto& p : positions) {
    const double x = coord(rng);
    p = {x, coord(rng)};
  }
  Demand demand(config.users);
  std::vector<double> user_shadow(config.users);
  for (int k = 0; k < config.users; ++k) {
    const int stu = env.grid.stu_at(positions[k]);
    demand[k] = env.grid.file_of_stu[stu];
    user_shadow[k] = env.shadow_db[stu];
  }
  const std::uint64_t channel_seed = rng();
  const Point trps[] = {env.trp};
  const ChannelMatrix h = sample_channel(config.users, env.antennas, positions,
                                         trps, config.channel, channel_seed,
                                         user_shadow);

  if (env.coded_gain >= config.users) {
    result.dof = 1.0;
    return result;  // everything is cached
  }
  switch (config.scheme) {
    case Scheme::uniform_unicast:
    case Scheme::nonuniform_unicast:
      run_unicast(config, env, h, demand, result);
      break;
    case Scheme::baseline_cc:
    case Scheme::nonuniform_cc:
      run_coded(config, env, h, demand, result);
      break;
    case Scheme::dynamic:
      run_dynamic(config, env, h, rng, result);
      break;
  }
  return result;
}

}  // namespace

MetricReport run_experiment(const ExperimentConfig& config) {
  const Environment env = prepare(config);
  MetricReport report;
  report.scheme = config.scheme;
  report.trials.reserve(config.trials);
  for (int i = 0; i < config.trials; ++i) {
    try {
      report.trials.push_back(run_trial(config, env, i));
      if (report.trials.back().outages > 0) {
        report.trials.back().failed = true;
        report.trials.back().error = "outage";
      }
    } catch (const std::exception& e) {
      TrialResult failed;
      failed.trial = i;
      failed.failed = true;
      failed.error = e.what();
      report.trials.push_back(std::move(failed));
    }
  }
  return report;
}

std::vector<std::pair<double, double>> empirical_cdf(
    std::span<const double> samples) {
  if (samples.empty()) throw ArgumentError("empirical_cdf: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    out.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

std::string cdf_csv(std::span<const MetricReport> reports) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "scheme,total_time_s,cdf\n";
  out << std::setprecision(17);
  for (const auto& report : reports) {
    const auto times = report.total_times();
    if (times.empty()) continue;
    for (const auto& [value, p] : empirical_cdf(times)) {
      out << to_string(report.scheme) << ',' << value << ',' << p << '\n';
    }
  }
  return out.str();
}

}  // namespace xrcc
