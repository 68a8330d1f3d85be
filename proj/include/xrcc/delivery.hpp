#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xrcc/codec.hpp"
#include "xrcc/placement.hpp"

namespace xrcc {

/// Requested file id per user.
using Demand = std::vector<int>;

/// One operand of a codeword: user `user` wants part `part` of `file`.
struct Term {
  int user = 0;
  int file = 0;
  std::uint64_t part = 0;
  bool operator==(const Term&) const = default;
};

/// XOR codeword (bit level) or a single unicast entry (signal level, one
/// term and a singleton target). `null_set` lists the users the precoder of
/// this codeword must not reach.
struct Codeword {
  Subset target_set;
  Subset null_set;
  std::vector<Term> composition;
  Bytes payload;
};

/// Codewords sent together in one subpacket-duration slot.
struct Transmission {
  Subset served;
  std::vector<Codeword> codewords;
};

enum class DeliveryMode { bit_level, signal_level };

struct TransmissionSchedule {
  SchemeTag scheme = SchemeTag::single_antenna_mn;
  DeliveryMode mode = DeliveryMode::bit_level;
  int user_count = 0;
  int multiplexing_gain = 1;
  std::uint64_t subpacketization = 1;
  std::size_t subpacket_bytes = 0;
  std::vector<Transmission> transmissions;

  /// Text form, one codeword per line, e.g.
  ///   tx 1 serve={1,2,3}
  ///     target={1,2} null={3} : A_{2} ^ B_{1}
  /// Users and label entities are 1-based; files are lettered A..Z when
  /// N <= 26 and written F<id> otherwise.
  std::string dump(const PlacementSpec& placement) const;
};

/// Link load when each user stores whole files; the number of distinct
/// requested files that at least one requester lacks.
Rational classic_baseline_load(const std::vector<std::vector<int>>& user_files,
                               const Demand& demand);

/// One XOR per (t+1)-subset of users; each codeword is its own transmission.
TransmissionSchedule build_schedule_single_antenna(
    const PlacementSpec& placement, const Demand& demand,
    const FileLibrary& library);

/// Multi-antenna bit-level delivery: for each (t+L)-group in lexicographic
/// order, one XOR per (t+1)-subset U of the group, zero-forced at group \ U.
TransmissionSchedule build_schedule_bit_level(const PlacementSpec& placement,
                                              const Demand& demand,
                                              const FileLibrary& library,
                                              int multiplexing_gain);

/// Signal-level delivery. For MN-style placements this splits every XOR of
/// the bit-level schedule into its operands; for grouped placements it
/// serves t+L users of (t/L + 1) profiles per slot.
TransmissionSchedule build_schedule_signal_level(const PlacementSpec& placement,
                                                 const Demand& demand,
                                                 const FileLibrary& library,
                                                 int multiplexing_gain);

/// Load in file units: every transmission occupies one slot of F / S.
Rational link_load(const TransmissionSchedule& schedule);

/// Parts of the library a user stores, keyed by (file, part).
class UserCache {
 public:
  UserCache(const PlacementSpec& placement, const FileLibrary& library,
            int user);

  int user() const { return user_; }
  bool has(int file, std::uint64_t part) const {
    return parts_.contains({file, part});
  }
  const Bytes& get(int file, std::uint64_t part) const;
  std::size_t size() const { return parts_.size(); }

 private:
  int user_;
  std::map<std::pair<int, std::uint64_t>, Bytes> parts_;
};

/// Subpackets a user recovered from delivery, keyed by part index.
using RecoveredParts = std::map<std::uint64_t, Bytes>;

/// XORs cached operands out of every codeword that targets `user`.
RecoveredParts recover_bit_level(int user, const TransmissionSchedule& schedule,
                                 const UserCache& cache, const Demand& demand);

/// Combines recovered and cached parts into the requested file.
Bytes assemble_file(int user, const PlacementSpec& placement,
                    const RecoveredParts& recovered, const UserCache& cache,
                    const Demand& demand, std::size_t file_size);

/// recover_bit_level followed by assemble_file.
Bytes decode_bit_level(int user, const TransmissionSchedule& schedule,
                       const PlacementSpec& placement, const UserCache& cache,
                       const Demand& demand, std::size_t file_size);

using Complex = std::complex<double>;

/// Scalar gain h_k^T v_e seen by every user for every codeword:
/// gain[transmission][codeword][user].
struct EffectiveChannels {
  std::vector<std::vector<std::vector<Complex>>> gain;
};

/// Nulled users see exactly zero; everyone else a seeded complex Gaussian.
EffectiveChannels ideal_effective_channels(const TransmissionSchedule& schedule,
                                           std::uint64_t seed);

/// Baseband samples one user observes during one transmission. Each payload
/// bit is one BPSK symbol, so there are 8 * subpacket_bytes samples.
struct ReceivedTransmission {
  std::size_t transmission = 0;
  std::vector<Complex> samples;
};

/// y = sum_e g_e s_e + z for every transmission that serves `user`.
std::vector<ReceivedTransmission> receive(const TransmissionSchedule& schedule,
                                          const EffectiveChannels& channels,
                                          int user, double noise_std = 0.0,
                                          std::uint64_t seed = 0);

/// Regenerates cached entries from memory, subtracts them from the received
/// samples, then detects the wanted entries jointly.
RecoveredParts decode_signal_level(int user,
                                   const TransmissionSchedule& schedule,
                                   std::span<const ReceivedTransmission> received,
                                   const EffectiveChannels& channels,
                                   const UserCache& cache);

}  // namespace xrcc
