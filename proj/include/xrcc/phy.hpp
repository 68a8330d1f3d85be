#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "xrcc/delivery.hpp"

namespace xrcc {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

struct ChannelParams {
  double pathloss_exponent = 3.0;
  double reference_distance_m = 1.0;
  double shadowing_std_db = 7.0;
  double noise_power = 1e-2;
  double transmit_power = 1.0;
  double bandwidth_hz = 1.0;
};

/// K x N_tx; row k holds h_k^T, so user k receives y_k = H.row(k) * x + z_k.
using ChannelMatrix = Eigen::MatrixXcd;
using Beamformer = Eigen::VectorXcd;

/// Large-scale power gain (d / d0)^-alpha, flat inside the reference distance.
double pathloss_gain(double distance_m, const ChannelParams& params);

/// h_k = sqrt(pl(d_k) 10^(X_k/10)) g_k with g_k i.i.d. CN(0, I) and d_k the
/// distance to the nearest TRP. X_k ~ N(0, sigma_s^2) dB is drawn per user
/// unless `shadowing_db` supplies it (a static, location-dependent map).
ChannelMatrix sample_channel(int users, int antennas,
                             std::span<const Point> user_positions,
                             std::span<const Point> trp_positions,
                             const ChannelParams& params, std::uint64_t seed,
                             std::span<const double> shadowing_db = {});

/// Unit-norm precoder with H.row(k) * v = 0 for every k in `null_set`. Inside
/// that null space it points along the principal eigenvector of
/// sum_{k in serve} conj(h_k) h_k^T, phased so the first served user sees a
/// real positive gain.
Beamformer null_space_beamformer(const ChannelMatrix& channels,
                                 const Subset& serve_set,
                                 const Subset& null_set);

struct BeamformerSet {
  std::vector<Beamformer> vectors;
  std::vector<double> powers;
};

/// One precoder per codeword with equal power split.
BeamformerSet design_beamformers(const ChannelMatrix& channels,
                                 const Transmission& transmission,
                                 const ChannelParams& params);

/// Same directions as design_beamformers, with the power split that would
/// make every codeword finish together if each were received alone:
/// p_c = (2^(bits_c / (B T)) - 1) N0 / g_c, g_c the weakest target gain, and
/// T bisected so that sum p_c = P. Codewords with no bits get no power.
BeamformerSet min_time_beamformers(const ChannelMatrix& channels,
                                   const Transmission& transmission,
                                   std::span<const double> codeword_bits,
                                   const ChannelParams& params);

/// h_k^T v_e for every codeword and user, in the layout delivery expects.
EffectiveChannels effective_channels(const ChannelMatrix& channels,
                                     const TransmissionSchedule& schedule,
                                     const std::vector<BeamformerSet>& beams);

struct TargetSinr {
  int user = 0;
  double sinr = 0.0;
};

struct RateReport {
  std::vector<std::vector<TargetSinr>> sinr;  // per codeword, per target
  std::vector<double> codeword_rate;          // bits/s/Hz

  double bottleneck() const;
};

/// SINR of every codeword at each of its targets and the multicast rate
/// min_k log2(1 + SINR_k). Codewords a target also wants are decoded jointly
/// with this one and are not interference. In signal-level mode, entries
/// reaching a served user that is neither their target nor in their null set
/// are regenerated from cache and cancelled. Everything else counts as
/// interference. These are single-stream rates: the sum-rate limits of joint
/// decoding are applied by slot_time.
RateReport sinr_and_rates(const ChannelMatrix& channels,
                          const Transmission& transmission, DeliveryMode mode,
                          const BeamformerSet& beams,
                          const ChannelParams& params);

/// Slot length when every target jointly decodes all codewords it wants:
/// max over users k and subsets A of k's codewords of
/// sum_A bits / (B log2(1 + sum_A SINR)). +inf if some rate is zero.
double slot_time(const ChannelMatrix& channels, const Transmission& transmission,
                 DeliveryMode mode, const BeamformerSet& beams,
                 std::span<const double> codeword_bits,
                 const ChannelParams& params);

struct DeliveryTime {
  double total_s = 0.0;
  std::vector<double> per_user_s;
  int outages = 0;
};

/// Slot length for simultaneous codewords of possibly different sizes:
/// max_c bits_c / (B * rate_c). Returns +inf if a rate is not positive.
double transmission_time(std::span<const double> codeword_rates,
                         std::span<const double> codeword_bits,
                         double bandwidth_hz);

/// Each slot lasts subpacket_bits / (B * bottleneck rate). Slots with a
/// zero-rate codeword are counted as outages and left out of the sums.
DeliveryTime delivery_time(const TransmissionSchedule& schedule,
                           const std::vector<RateReport>& rates,
                           double subpacket_bits, const ChannelParams& params);

}  // namespace xrcc
