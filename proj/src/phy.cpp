#include "xrcc/phy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "xrcc/errors.hpp"

namespace xrcc {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double pathloss_gain(double distance_m, const ChannelParams& params) {
  const double d = std::max(distance_m, params.reference_distance_m);
  return std::pow(d / params.reference_distance_m, -params.pathloss_exponent);
}

ChannelMatrix sample_channel(int users, int antennas,
                             std::span<const Point> user_positions,
                             std::span<const Point> trp_positions,
                             const ChannelParams& params, std::uint64_t seed,
                             std::span<const double> shadowing_db) {
  if (users < 1 || antennas < 1) {
    throw ArgumentError("sample_channel: need K >= 1 and N_tx >= 1");
  }
  if (static_cast<int>(user_positions.size()) != users ||
      trp_positions.empty()) {
    throw ArgumentError("sample_channel: need K user positions and a TRP");
  }
  if (!shadowing_db.empty() && static_cast<int>(shadowing_db.size()) != users) {
    throw ArgumentError("sample_channel: shadowing map size must equal K");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> shadow(0.0, params.shadowing_std_db);
  std::normal_distribution<double> fading(0.0, std::sqrt(0.5));

  ChannelMatrix h(users, antennas);
  for (int k = 0; k < users; ++k) {
    double d = std::numeric_limits<double>::infinity();
    for (const Point& trp : trp_positions) {
      d = std::min(d, distance(user_positions[k], trp));
    }
    double x_db = 0.0;
    if (!shadowing_db.empty()) {
      x_db = shadowing_db[k];
    } else if (params.shadowing_std_db > 0.0) {
      x_db = shadow(rng);
    }
    const double scale =
        std::sqrt(pathloss_gain(d, params) * std::pow(10.0, x_db / 10.0));
    for (int a = 0; a < antennas; ++a) {
      const double re = fading(rng);
      const double im = fading(rng);
      h(k, a) = scale * Complex(re, im);
    }
  }
  return h;
}

Beamformer null_space_beamformer(const ChannelMatrix& channels,
                                 const Subset& serve_set,
                                 const Subset& null_set) {
  const Eigen::Index n = channels.cols();
  const auto m = static_cast<Eigen::Index>(null_set.size());
  if (m >= n) {
    throw BeamformingError("null set of size " + std::to_string(m) +
                           " leaves no null space with " + std::to_string(n) +
                           " antennas");
  }

  Eigen::MatrixXcd basis;
  if (m == 0) {
    basis = Eigen::MatrixXcd::Identity(n, n);
  } else {
    // null(A) is the orthogonal complement of range(A^H)
    Eigen::MatrixXcd a_h(n, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      a_h.col(i) = channels.row(null_set[i]).adjoint();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a_h);
    if (qr.rank() < m) {
      throw BeamformingError("null-set channels are linearly dependent");
    }
    const Eigen::MatrixXcd q = qr.householderQ();
    basis = q.rightCols(n - m);
  }

  Beamformer v;
  if (serve_set.empty()) {
    v = basis.col(0);
  } else {
    Eigen::MatrixXcd served(serve_set.size(), n);
    for (std::size_t i = 0; i < serve_set.size(); ++i) {
      served.row(i) = channels.row(serve_set[i]);
    }
    const Eigen::MatrixXcd projected = served * basis;
    const Eigen::MatrixXcd gram = projected.adjoint() * projected;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
    // eigenvalues come sorted ascending
    v = basis * eig.eigenvectors().col(gram.cols() - 1);
  }
  v.normalize();
  if (!serve_set.empty()) {
    const Complex g = (channels.row(serve_set.front()) * v).value();
    if (std::abs(g) > 0.0) v *= std::conj(g) / std::abs(g);
  }
  return v;
}

BeamformerSet design_beamformers(const ChannelMatrix& channels,
                                 const Transmission& transmission,
                                 const ChannelParams& params) {
  BeamformerSet out;
  const auto count = transmission.codewords.size();
  for (const auto& cw : transmission.codewords) {
    out.vectors.push_back(
        null_space_beamformer(channels, cw.target_set, cw.null_set));
    out.powers.push_back(params.transmit_power / static_cast<double>(count));
  }
  return out;
}

EffectiveChannels effective_channels(const ChannelMatrix& channels,
                                     const TransmissionSchedule& schedule,
                                     const std::vector<BeamformerSet>& beams) {
  if (beams.size() != schedule.transmissions.size()) {
    throw ArgumentError("effective_channels: one beamformer set per slot");
  }
  EffectiveChannels out;
  for (std::size_t i = 0; i < beams.size(); ++i) {
    auto& per_tx = out.gain.emplace_back();
    for (const auto& v : beams[i].vectors) {
      auto& per_cw = per_tx.emplace_back(channels.rows());
      const Eigen::VectorXcd g = channels * v;
      for (Eigen::Index k = 0; k < channels.rows(); ++k) per_cw[k] = g(k);
    }
  }
  return out;
}

double RateReport::bottleneck() const {
  if (codeword_rate.empty()) return 0.0;
  return *std::min_element(codeword_rate.begin(), codeword_rate.end());
}

namespace {

bool contains(const Subset& set, int value) {
  return std::binary_search(set.begin(), set.end(), value);
}

/// Received power of every codeword at every user.
Eigen::MatrixXd received_power(const ChannelMatrix& channels,
                               const BeamformerSet& beams) {
  Eigen::MatrixXd power(static_cast<Eigen::Index>(beams.vectors.size()),
                        channels.rows());
  for (std::size_t c = 0; c < beams.vectors.size(); ++c) {
    power.row(c) = (channels * beams.vectors[c]).cwiseAbs2().transpose() *
                   beams.powers[c];
  }
  return power;
}

/// Power at user k from codewords it neither wants nor can cancel.
double interference_at(const Transmission& transmission, DeliveryMode mode,
                       const Eigen::MatrixXd& power, int k) {
  const auto& cws = transmission.codewords;
  double sum = 0.0;
  for (std::size_t o = 0; o < cws.size(); ++o) {
    if (contains(cws[o].target_set, k)) continue;
    const bool cancelled = mode == DeliveryMode::signal_level &&
                           contains(transmission.served, k) &&
                           !contains(cws[o].null_set, k);
    if (!cancelled) sum += power(o, k);
  }
  return sum;
}

void check_beams(const Transmission& transmission, const BeamformerSet& beams) {
  const auto n = transmission.codewords.size();
  if (beams.vectors.size() != n || beams.powers.size() != n) {
    throw ArgumentError("phy: one beamformer and power per codeword");
  }
}

}  // namespace

BeamformerSet min_time_beamformers(const ChannelMatrix& channels,
                                   const Transmission& transmission,
                                   std::span<const double> codeword_bits,
                                   const ChannelParams& params) {
  const auto& cws = transmission.codewords;
  if (codeword_bits.size() != cws.size()) {
    throw ArgumentError("min_time_beamformers: one size per codeword");
  }
  BeamformerSet out = design_beamformers(channels, transmission, params);
  std::vector<double> gain(cws.size(), 0.0);
  bool any = false;
  for (std::size_t c = 0; c < cws.size(); ++c) {
    if (codeword_bits[c] <= 0.0) continue;
    double g = std::numeric_limits<double>::infinity();
    for (int k : cws[c].target_set) {
      g = std::min(g, std::norm((channels.row(k) * out.vectors[c]).value()));
    }
    if (!(g > 0.0) || !std::isfinite(g)) return out;  // keep the equal split
    gain[c] = g;
    any = true;
  }
  if (!any) return out;

  auto power_for = [&](double slot, std::size_t c) {
    if (codeword_bits[c] <= 0.0) return 0.0;
    return std::expm1(codeword_bits[c] / (params.bandwidth_hz * slot) *
                      std::log(2.0)) *
           params.noise_power / gain[c];
  };
  auto needed = [&](double slot) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cws.size(); ++c) sum += power_for(slot, c);
    return sum;
  };
  const double budget = params.transmit_power;
  double hi = 1.0;
  while (needed(hi) > budget) hi *= 2.0;
  double lo = hi;
  while (needed(lo) <= budget) lo /= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (needed(mid) > budget ? lo : hi) = mid;
  }
  for (std::size_t c = 0; c < cws.size(); ++c) out.powers[c] = power_for(hi, c);
  return out;
}

RateReport sinr_and_rates(const ChannelMatrix& channels,
                          const Transmission& transmission, DeliveryMode mode,
                          const BeamformerSet& beams,
                          const ChannelParams& params) {
  check_beams(transmission, beams);
  const auto& cws = transmission.codewords;
  const auto power = received_power(channels, beams);
  RateReport report;
  for (std::size_t c = 0; c < cws.size(); ++c) {
    auto& per_target = report.sinr.emplace_back();
    double rate = std::numeric_limits<double>::infinity();
    for (int k : cws[c].target_set) {
      const double sinr =
          power(c, k) / (interference_at(transmission, mode, power, k) +
                         params.noise_power);
      per_target.push_back({k, sinr});
      rate = std::min(rate, std::log2(1.0 + sinr));
    }
    report.codeword_rate.push_back(cws[c].target_set.empty() ? 0.0 : rate);
  }
  return report;
}

double slot_time(const ChannelMatrix& channels, const Transmission& transmission,
                 DeliveryMode mode, const BeamformerSet& beams,
                 std::span<const double> codeword_bits,
                 const ChannelParams& params) {
  check_beams(transmission, beams);
  const auto& cws = transmission.codewords;
  if (codeword_bits.size() != cws.size()) {
    throw ArgumentError("slot_time: one size per codeword");
  }
  const auto power = received_power(channels, beams);
  std::vector<int> users;
  for (const auto& cw : cws) users.insert(users.end(), cw.target_set.begin(), cw.target_set.end());
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());

  double slot = 0.0;
  for (int k : users) {
    std::vector<std::size_t> wanted;
    for (std::size_t c = 0; c < cws.size(); ++c) {
      if (codeword_bits[c] > 0.0 && contains(cws[c].target_set, k)) wanted.push_back(c);
    }
    if (wanted.size() > 20) {
      throw UnsupportedParameter("slot_time: more than 20 codewords for one user");
    }
    const double floor_power =
        interference_at(transmission, mode, power, k) + params.noise_power;
    const std::uint32_t subsets = 1u << wanted.size();
    for (std::uint32_t mask = 1; mask < subsets; ++mask) {
      double bits = 0.0, snr = 0.0;
      for (std::size_t i = 0; i < wanted.size(); ++i) {
        if (mask >> i & 1u) {
          bits += codeword_bits[wanted[i]];
          snr += power(wanted[i], k) / floor_power;
        }
      }
      const double rate = std::log2(1.0 + snr);
      if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
      slot = std::max(slot, bits / (params.bandwidth_hz * rate));
    }
  }
  return slot;
}

double transmission_time(std::span<const double> codeword_rates,
                         std::span<const double> codeword_bits,
                         double bandwidth_hz) {
  if (codeword_rates.size() != codeword_bits.size()) {
    throw ArgumentError("transmission_time: rates and sizes differ in length");
  }
  double slot = 0.0;
  for (std::size_t c = 0; c < codeword_rates.size(); ++c) {
    if (codeword_bits[c] <= 0.0) continue;
    if (!(codeword_rates[c] > 0.0)) {
      return std::numeric_limits<double>::infinity();
    }
    slot = std::max(slot, codeword_bits[c] / (bandwidth_hz * codeword_rates[c]));
  }
  return slot;
}

DeliveryTime delivery_time(const TransmissionSchedule& schedule,
                           const std::vector<RateReport>& rates,
                           double subpacket_bits, const ChannelParams& params) {
  if (rates.size() != schedule.transmissions.size()) {
    throw ArgumentError("delivery_time: one rate report per slot");
  }
  DeliveryTime out;
  out.per_user_s.assign(schedule.user_count, 0.0);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const std::vector<double> bits(rates[i].codeword_rate.size(),
                                   subpacket_bits);
    const double slot =
        transmission_time(rates[i].codeword_rate, bits, params.bandwidth_hz);
    if (!std::isfinite(slot)) {
      ++out.outages;
      continue;
    }
    out.total_s += slot;
    for (int k : schedule.transmissions[i].served) out.per_user_s[k] += slot;
  }
  return out;
}

}  // namespace xrcc
