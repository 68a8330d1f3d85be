#include "xrcc/delivery.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "xrcc/errors.hpp"

namespace xrcc {

namespace {

bool contains(const Subset& set, int value) {
  return std::binary_search(set.begin(), set.end(), value);
}

Subset difference(const Subset& a, const Subset& b) {
  Subset out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

Subset without(const Subset& set, int value) {
  Subset out;
  for (int v : set) {
    if (v != value) out.push_back(v);
  }
  return out;
}

Subset pick(const Subset& users, const Subset& indices) {
  Subset out;
  for (int i : indices) out.push_back(users[i]);
  return out;
}

std::string format_set(const Subset& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(set[i] + 1);
  }
  return out + "}";
}

std::string file_label(int file, int file_count) {
  if (file_count <= 26) return std::string(1, static_cast<char>('A' + file));
  return "F" + std::to_string(file);
}

void check_demand(const PlacementSpec& placement, const Demand& demand,
                  const FileLibrary& library) {
  if (static_cast<int>(demand.size()) != placement.user_count) {
    throw ArgumentError("demand length " + std::to_string(demand.size()) +
                        " does not match K=" +
                        std::to_string(placement.user_count));
  }
  if (library.file_count() != placement.file_count) {
    throw ArgumentError("library size does not match the placement");
  }
  for (int d : demand) {
    if (d < 0 || d >= placement.file_count) {
      throw ArgumentError("demand refers to unknown file " + std::to_string(d));
    }
  }
}

/// Splits every requested file once.
class PartStore {
 public:
  PartStore(const FileLibrary& library, std::uint64_t parts)
      : library_(library), parts_(parts) {}

  const Bytes& get(int file, std::uint64_t part) {
    auto it = split_.find(file);
    if (it == split_.end()) {
      it = split_.emplace(file, split_file(library_, file, parts_)).first;
    }
    return it->second.at(part);
  }

 private:
  const FileLibrary& library_;
  std::uint64_t parts_;
  std::map<int, std::vector<Bytes>> split_;
};

/// Shared construction for MN-labelled placements (single antenna and
/// multi-antenna bit level, and the signal-level split of the latter).
TransmissionSchedule build_mn_groups(const PlacementSpec& placement,
                                     const Demand& demand,
                                     const FileLibrary& library,
                                     int multiplexing_gain, DeliveryMode mode) {
  check_demand(placement, demand, library);
  const int K = placement.user_count;
  const int t = placement.coded_gain;

  TransmissionSchedule schedule;
  schedule.scheme = placement.scheme;
  schedule.mode = mode;
  schedule.user_count = K;
  schedule.multiplexing_gain = multiplexing_gain;
  schedule.subpacketization = placement.subpacketization;
  schedule.subpacket_bytes =
      (library.file_size() + placement.subpacketization - 1) /
      placement.subpacketization;
  if (t >= K) return schedule;

  PartStore store(library, placement.subpacketization);
  const int group_size = std::min(t + multiplexing_gain, K);
  Subset all(K);
  for (int k = 0; k < K; ++k) all[k] = k;

  for (const Subset& group : enumerate_subsets(K, group_size)) {
    Transmission tx;
    tx.served = group;
    for (const Subset& local : enumerate_subsets(group_size, t + 1)) {
      const Subset targets = pick(group, local);
      const Subset nulls = difference(group, targets);
      // every term of this codeword uses the same piece: the rank of the
      // null set among the (|group|-t-1)-subsets of users outside targets
      const std::uint64_t piece =
          subset_rank_within(difference(all, targets), nulls);

      std::vector<Term> terms;
      for (int k : targets) {
        terms.push_back(
            {k, demand[k], placement.part_index(without(targets, k), piece)});
      }
      if (mode == DeliveryMode::bit_level) {
        Codeword cw{targets, nulls, terms, {}};
        cw.payload = store.get(terms[0].file, terms[0].part);
        for (std::size_t i = 1; i < terms.size(); ++i) {
          xor_into(cw.payload, store.get(terms[i].file, terms[i].part));
        }
        tx.codewords.push_back(std::move(cw));
      } else {
        for (const Term& term : terms) {
          tx.codewords.push_back({{term.user}, nulls, {term},
                                  store.get(term.file, term.part)});
        }
      }
    }
    schedule.transmissions.push_back(std::move(tx));
  }
  return schedule;
}

TransmissionSchedule build_grouped(const PlacementSpec& placement,
                                   const Demand& demand,
                                   const FileLibrary& library) {
  check_demand(placement, demand, library);
  const int P = placement.entity_count;
  const int tp = placement.entity_gain;
  const int L = placement.multiplexing_gain;

  TransmissionSchedule schedule;
  schedule.scheme = placement.scheme;
  schedule.mode = DeliveryMode::signal_level;
  schedule.user_count = placement.user_count;
  schedule.multiplexing_gain = L;
  schedule.subpacketization = placement.subpacketization;
  schedule.subpacket_bytes =
      (library.file_size() + placement.subpacketization - 1) /
      placement.subpacketization;
  if (tp >= P) return schedule;

  std::vector<Subset> members(P);
  for (int k = 0; k < placement.user_count; ++k) {
    members[placement.entity_of_user[k]].push_back(k);
  }

  PartStore store(library, placement.subpacketization);
  for (const Subset& profiles : enumerate_subsets(P, tp + 1)) {
    Transmission tx;
    for (int p : profiles) {
      tx.served.insert(tx.served.end(), members[p].begin(), members[p].end());
    }
    std::sort(tx.served.begin(), tx.served.end());
    for (int p : profiles) {
      const std::uint64_t part = placement.part_index(without(profiles, p), 0);
      for (int k : members[p]) {
        Term term{k, demand[k], part};
        tx.codewords.push_back({{k}, without(members[p], k), {term},
                                store.get(term.file, term.part)});
      }
    }
    schedule.transmissions.push_back(std::move(tx));
  }
  return schedule;
}

}  // namespace

std::string TransmissionSchedule::dump(const PlacementSpec& placement) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < transmissions.size(); ++i) {
    const auto& tx = transmissions[i];
    out << "tx " << (i + 1) << " serve=" << format_set(tx.served) << '\n';
    for (const auto& cw : tx.codewords) {
      out << "  target=" << format_set(cw.target_set)
          << " null=" << format_set(cw.null_set) << " :";
      for (std::size_t j = 0; j < cw.composition.size(); ++j) {
        const Term& term = cw.composition[j];
        out << (j ? " ^ " : " ") << file_label(term.file, placement.file_count)
            << '_' << format_set(placement.part_label(term.part));
        if (placement.pieces_per_part > 1) {
          out << '.' << (placement.piece_of(term.part) + 1);
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

Rational classic_baseline_load(const std::vector<std::vector<int>>& user_files,
                               const Demand& demand) {
  if (user_files.size() != demand.size()) {
    throw ArgumentError("classic_baseline_load: cache and demand sizes differ");
  }
  std::set<int> to_send;
  for (std::size_t k = 0; k < demand.size(); ++k) {
    const auto& cached = user_files[k];
    if (std::find(cached.begin(), cached.end(), demand[k]) == cached.end()) {
      to_send.insert(demand[k]);
    }
  }
  return Rational(static_cast<std::int64_t>(to_send.size()));
}

TransmissionSchedule build_schedule_single_antenna(
    const PlacementSpec& placement, const Demand& demand,
    const FileLibrary& library) {
  if (placement.scheme != SchemeTag::single_antenna_mn) {
    throw ArgumentError("single-antenna delivery needs an MN placement");
  }
  // with L = 1 every group is a single (t+1)-subset, i.e. one XOR per slot
  return build_mn_groups(placement, demand, library, 1,
                         DeliveryMode::bit_level);
}

TransmissionSchedule build_schedule_bit_level(const PlacementSpec& placement,
                                              const Demand& demand,
                                              const FileLibrary& library,
                                              int multiplexing_gain) {
  if (multiplexing_gain < 1) throw ArgumentError("bit-level: need L >= 1");
  const bool mn_single = placement.scheme == SchemeTag::single_antenna_mn &&
                         multiplexing_gain == 1;
  if (!mn_single && (placement.scheme != SchemeTag::bit_level_multi ||
                     placement.multiplexing_gain != multiplexing_gain)) {
    throw ArgumentError(
        "bit-level delivery needs a bit-level placement built for the same L");
  }
  return build_mn_groups(placement, demand, library, multiplexing_gain,
                         DeliveryMode::bit_level);
}

TransmissionSchedule build_schedule_signal_level(const PlacementSpec& placement,
                                                 const Demand& demand,
                                                 const FileLibrary& library,
                                                 int multiplexing_gain) {
  if (multiplexing_gain < 1) throw ArgumentError("signal-level: need L >= 1");
  if (placement.scheme == SchemeTag::grouped_signal_level) {
    if (placement.multiplexing_gain != multiplexing_gain) {
      throw ArgumentError("grouped placement was built for a different L");
    }
    return build_grouped(placement, demand, library);
  }
  const bool mn_single = placement.scheme == SchemeTag::single_antenna_mn &&
                         multiplexing_gain == 1;
  if (!mn_single && placement.multiplexing_gain != multiplexing_gain) {
    throw ArgumentError("placement was built for a different L");
  }
  return build_mn_groups(placement, demand, library, multiplexing_gain,
                         DeliveryMode::signal_level);
}

Rational link_load(const TransmissionSchedule& schedule) {
  return Rational(static_cast<std::int64_t>(schedule.transmissions.size()),
                  static_cast<std::int64_t>(schedule.subpacketization));
}

UserCache::UserCache(const PlacementSpec& placement, const FileLibrary& library,
                     int user)
    : user_(user) {
  if (user < 0 || user >= placement.user_count) {
    throw ArgumentError("UserCache: unknown user");
  }
  for (int f = 0; f < placement.file_count; ++f) {
    auto parts = split_file(library, f, placement.subpacketization);
    for (auto p : placement.cache_of_user(user)) {
      parts_.emplace(std::make_pair(f, p), std::move(parts[p]));
    }
  }
}

const Bytes& UserCache::get(int file, std::uint64_t part) const {
  auto it = parts_.find({file, part});
  if (it == parts_.end()) {
    throw DecodeError("user " + std::to_string(user_ + 1) +
                      " does not cache part " + std::to_string(part) +
                      " of file " + std::to_string(file));
  }
  return it->second;
}

RecoveredParts recover_bit_level(int user, const TransmissionSchedule& schedule,
                                 const UserCache& cache, const Demand& demand) {
  RecoveredParts recovered;
  for (const auto& tx : schedule.transmissions) {
    for (const auto& cw : tx.codewords) {
      if (!contains(cw.target_set, user)) continue;
      Bytes value = cw.payload;
      const Term* wanted = nullptr;
      for (const Term& term : cw.composition) {
        if (term.user == user) {
          wanted = &term;
          continue;
        }
        xor_into(value, cache.get(term.file, term.part));
      }
      if (wanted == nullptr || wanted->file != demand.at(user)) {
        throw DecodeError("codeword targets user " + std::to_string(user + 1) +
                          " without carrying its request");
      }
      recovered[wanted->part] = std::move(value);
    }
  }
  return recovered;
}

Bytes assemble_file(int user, const PlacementSpec& placement,
                    const RecoveredParts& recovered, const UserCache& cache,
                    const Demand& demand, std::size_t file_size) {
  const int file = demand.at(user);
  std::vector<Bytes> parts;
  parts.reserve(placement.subpacketization);
  for (std::uint64_t p = 0; p < placement.subpacketization; ++p) {
    if (cache.has(file, p)) {
      parts.push_back(cache.get(file, p));
    } else if (auto it = recovered.find(p); it != recovered.end()) {
      parts.push_back(it->second);
    } else {
      throw DecodeError("user " + std::to_string(user + 1) + " is missing part " +
                        std::to_string(p));
    }
  }
  return join_parts(parts, file_size);
}

Bytes decode_bit_level(int user, const TransmissionSchedule& schedule,
                       const PlacementSpec& placement, const UserCache& cache,
                       const Demand& demand, std::size_t file_size) {
  return assemble_file(user, placement,
                       recover_bit_level(user, schedule, cache, demand), cache,
                       demand, file_size);
}

EffectiveChannels ideal_effective_channels(const TransmissionSchedule& schedule,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  EffectiveChannels out;
  for (const auto& tx : schedule.transmissions) {
    auto& per_tx = out.gain.emplace_back();
    for (const auto& cw : tx.codewords) {
      auto& per_cw = per_tx.emplace_back(schedule.user_count);
      for (int k = 0; k < schedule.user_count; ++k) {
        const Complex g(normal(rng), normal(rng));
        per_cw[k] = contains(cw.null_set, k) ? Complex(0.0) : g;
      }
    }
  }
  return out;
}

namespace {

double bpsk(const Bytes& payload, std::size_t sample) {
  const int bit = (payload[sample / 8] >> (7 - sample % 8)) & 1;
  return bit ? 1.0 : -1.0;
}

constexpr std::size_t kMaxJointEntries = 20;

}  // namespace

std::vector<ReceivedTransmission> receive(const TransmissionSchedule& schedule,
                                          const EffectiveChannels& channels,
                                          int user, double noise_std,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, noise_std / std::sqrt(2.0));
  std::vector<ReceivedTransmission> out;
  const std::size_t samples = schedule.subpacket_bytes * 8;
  for (std::size_t i = 0; i < schedule.transmissions.size(); ++i) {
    const auto& tx = schedule.transmissions[i];
    if (!contains(tx.served, user)) continue;
    ReceivedTransmission rx{i, std::vector<Complex>(samples)};
    for (std::size_t c = 0; c < tx.codewords.size(); ++c) {
      const Complex g = channels.gain.at(i).at(c).at(user);
      for (std::size_t s = 0; s < samples; ++s) {
        rx.samples[s] += g * bpsk(tx.codewords[c].payload, s);
      }
    }
    if (noise_std > 0.0) {
      for (auto& y : rx.samples) y += Complex(normal(rng), normal(rng));
    }
    out.push_back(std::move(rx));
  }
  return out;
}

RecoveredParts decode_signal_level(int user,
                                   const TransmissionSchedule& schedule,
                                   std::span<const ReceivedTransmission> received,
                                   const EffectiveChannels& channels,
                                   const UserCache& cache) {
  if (schedule.mode != DeliveryMode::signal_level) {
    throw ArgumentError("decode_signal_level needs a signal-level schedule");
  }
  RecoveredParts recovered;
  for (const auto& rx : received) {
    const auto& tx = schedule.transmissions.at(rx.transmission);
    std::vector<Complex> y = rx.samples;
    std::vector<std::size_t> wanted;
    for (std::size_t c = 0; c < tx.codewords.size(); ++c) {
      const auto& cw = tx.codewords[c];
      const Term& term = cw.composition.front();
      if (term.user == user) {
        wanted.push_back(c);
      } else if (cache.has(term.file, term.part)) {
        const Complex g = channels.gain.at(rx.transmission).at(c).at(user);
        const Bytes& regenerated = cache.get(term.file, term.part);
        for (std::size_t s = 0; s < y.size(); ++s) {
          y[s] -= g * bpsk(regenerated, s);
        }
      } else if (!contains(cw.null_set, user)) {
        throw ResidualInterference(
            "user " + std::to_string(user + 1) + " can neither cancel nor "
            "null an entry of transmission " +
            std::to_string(rx.transmission + 1));
      }
    }
    if (wanted.empty()) continue;
    if (wanted.size() > kMaxJointEntries) {
      throw DecodeError("too many simultaneous entries for joint detection");
    }

    // Joint ML detection over the 2^n sign patterns of the wanted layers.
    const std::size_t patterns = std::size_t{1} << wanted.size();
    std::vector<Complex> hypothesis(patterns);
    for (std::size_t m = 0; m < patterns; ++m) {
      for (std::size_t i = 0; i < wanted.size(); ++i) {
        const Complex g =
            channels.gain.at(rx.transmission).at(wanted[i]).at(user);
        hypothesis[m] += ((m >> i) & 1u) ? g : -g;
      }
    }
    std::vector<Bytes> out(wanted.size(), Bytes(schedule.subpacket_bytes, 0));
    for (std::size_t s = 0; s < y.size(); ++s) {
      std::size_t best = 0;
      double best_distance = std::norm(y[s] - hypothesis[0]);
      for (std::size_t m = 1; m < patterns; ++m) {
        const double d = std::norm(y[s] - hypothesis[m]);
        if (d < best_distance) {
          best_distance = d;
          best = m;
        }
      }
      for (std::size_t i = 0; i < wanted.size(); ++i) {
        if ((best >> i) & 1u) {
          out[i][s / 8] |= static_cast<std::uint8_t>(1u << (7 - s % 8));
        }
      }
    }
    for (std::size_t i = 0; i < wanted.size(); ++i) {
      recovered[tx.codewords[wanted[i]].composition.front().part] =
          std::move(out[i]);
    }
  }
  return recovered;
}

}  // namespace xrcc
