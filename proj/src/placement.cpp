#include "xrcc/placement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xrcc/errors.hpp"

namespace xrcc {

const char* to_string(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::single_antenna_mn: return "single_antenna_mn";
    case SchemeTag::bit_level_multi: return "bit_level_multi";
    case SchemeTag::grouped_signal_level: return "grouped_signal_level";
  }
  return "unknown";
}

Subset PlacementSpec::part_label(std::uint64_t part) const {
  return flat_to_subset(entity_count, entity_gain, part / pieces_per_part);
}

std::uint64_t PlacementSpec::part_index(const Subset& label,
                                        std::uint64_t piece) const {
  return subset_to_flat(entity_count, label) * pieces_per_part + piece;
}

bool PlacementSpec::caches(int user, std::uint64_t part) const {
  const auto& stored = cache_of_user(user);
  return std::binary_search(stored.begin(), stored.end(), part);
}

std::string PlacementSpec::dump() const {
  std::ostringstream out;
  for (int k = 0; k < user_count; ++k) {
    out << "user " << (k + 1) << ":";
    for (auto p : cache_of_user(k)) out << ' ' << p;
    out << '\n';
  }
  return out.str();
}

int coded_caching_gain(int users, Rational gamma) {
  if (users < 1) throw ArgumentError("coded_caching_gain: need K >= 1");
  if (gamma < 0 || gamma > 1) {
    throw ArgumentError("coded_caching_gain: gamma must lie in [0, 1]");
  }
  const Rational t = gamma * users;
  if (t.denominator() != 1) {
    std::ostringstream msg;
    msg << "K*gamma = " << t
        << " is not an integer; memory sharing between integer t is not "
           "supported";
    throw UnsupportedParameter(msg.str());
  }
  return static_cast<int>(t.numerator());
}

std::uint64_t bit_level_subpacketization(int users, int coded_gain,
                                         int multiplexing_gain) {
  if (users < 1 || multiplexing_gain < 1 || coded_gain < 0 ||
      coded_gain > users) {
    throw ArgumentError("bit_level_subpacketization: need K >= 1, L >= 1, "
                        "0 <= t <= K");
  }
  const int effective_l = std::min(multiplexing_gain, users - coded_gain);
  const std::uint64_t base = binomial(users, coded_gain);
  if (effective_l < 1) return base;
  return base * binomial(users - coded_gain - 1, effective_l - 1);
}

namespace {

PlacementSpec build(SchemeTag scheme, int users, int files, Rational gamma,
                    int multiplexing_gain, int entity_count, int entity_gain,
                    std::uint64_t pieces) {
  PlacementSpec spec;
  spec.scheme = scheme;
  spec.user_count = users;
  spec.file_count = files;
  spec.cache_fraction = gamma;
  spec.coded_gain = static_cast<int>((gamma * users).numerator());
  spec.multiplexing_gain = multiplexing_gain;
  spec.entity_count = entity_count;
  spec.entity_gain = entity_gain;
  spec.pieces_per_part = pieces;
  spec.subpacketization = binomial(entity_count, entity_gain) * pieces;

  const int users_per_entity = users / entity_count;
  spec.entity_of_user.resize(users);
  for (int k = 0; k < users; ++k) spec.entity_of_user[k] = k / users_per_entity;

  spec.cache_map.assign(entity_count, {});
  const auto labels = enumerate_subsets(entity_count, entity_gain);
  for (std::uint64_t label = 0; label < labels.size(); ++label) {
    for (int e : labels[label]) {
      for (std::uint64_t j = 0; j < pieces; ++j) {
        spec.cache_map[e].push_back(label * pieces + j);
      }
    }
  }
  return spec;
}

void check_counts(int users, int files) {
  if (users < 1) throw ArgumentError("placement: need K >= 1");
  if (files < 1) throw ArgumentError("placement: need N >= 1");
}

}  // namespace

PlacementSpec mn_placement(int users, int files, Rational gamma) {
  check_counts(users, files);
  const int t = coded_caching_gain(users, gamma);
  return build(SchemeTag::single_antenna_mn, users, files, gamma, 1, users, t,
               1);
}

PlacementSpec bit_level_placement(int users, int files, Rational gamma,
                                  int multiplexing_gain) {
  check_counts(users, files);
  if (multiplexing_gain < 1) throw ArgumentError("placement: need L >= 1");
  const int t = coded_caching_gain(users, gamma);
  const std::uint64_t pieces =
      bit_level_subpacketization(users, t, multiplexing_gain) /
      binomial(users, t);
  return build(SchemeTag::bit_level_multi, users, files, gamma,
               multiplexing_gain, users, t, pieces);
}

PlacementSpec grouped_placement(int users, int files, Rational gamma,
                                int multiplexing_gain) {
  check_counts(users, files);
  if (multiplexing_gain < 1) throw ArgumentError("placement: need L >= 1");
  const int t = coded_caching_gain(users, gamma);
  if (users % multiplexing_gain != 0 || t % multiplexing_gain != 0) {
    throw UnsupportedParameter(
        "grouped placement needs L to divide both K and t (K=" +
        std::to_string(users) + ", t=" + std::to_string(t) +
        ", L=" + std::to_string(multiplexing_gain) + ")");
  }
  return build(SchemeTag::grouped_signal_level, users, files, gamma,
               multiplexing_gain, users / multiplexing_gain,
               t / multiplexing_gain, 1);
}

StuAllocation location_dependent_allocation(std::span<const double> stu_rates,
                                            double gamma) {
  if (stu_rates.empty()) throw ArgumentError("allocation: no STUs");
  if (gamma < 0.0 || gamma > 1.0) {
    throw ArgumentError("allocation: gamma must lie in [0, 1]");
  }
  for (double r : stu_rates) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ArgumentError("allocation: STU rates must be positive and finite");
    }
  }
  const std::size_t n = stu_rates.size();
  StuAllocation out;
  out.budget = gamma * static_cast<double>(n);
  out.fractions.assign(n, 0.0);

  // Water-filling: STUs that would exceed a whole file are pinned at 1 and
  // the rest of the budget is re-spread over the others.
  std::vector<bool> pinned(n, false);
  double remaining = out.budget;
  while (true) {
    double weight_sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (!pinned[s]) weight_sum += 1.0 / stu_rates[s];
    }
    if (weight_sum == 0.0) break;
    bool changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (pinned[s]) continue;
      const double share = remaining * (1.0 / stu_rates[s]) / weight_sum;
      if (share > 1.0) {
        pinned[s] = true;
        out.fractions[s] = 1.0;
        changed = true;
      }
    }
    if (!changed) {
      for (std::size_t s = 0; s < n; ++s) {
        if (!pinned[s]) {
          out.fractions[s] = remaining * (1.0 / stu_rates[s]) / weight_sum;
        }
      }
      break;
    }
    remaining = out.budget;
    for (std::size_t s = 0; s < n; ++s) {
      if (pinned[s]) remaining -= 1.0;
    }
  }
  return out;
}

}  // namespace xrcc
