#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xrcc/codec.hpp"

namespace xrcc {

using Rational = boost::rational<std::int64_t>;

enum class SchemeTag { single_antenna_mn, bit_level_multi, grouped_signal_level };

const char* to_string(SchemeTag tag);

/// Uncoded cache placement shared by every scheme in the library.
///
/// Each file is split into `subpacketization` parts. A part's flat index
/// `p` decomposes as `label * pieces_per_part + piece`, where `label` is the
/// lexicographic rank of an `entity_gain`-subset of cache entities (users,
/// or profiles under grouping) and `piece` is an extra split used by the
/// multi-antenna bit-level scheme. Entity `e` stores every piece of a part
/// whose label contains `e`, for every file.
struct PlacementSpec {
  SchemeTag scheme = SchemeTag::single_antenna_mn;
  int user_count = 0;
  int file_count = 0;
  Rational cache_fraction{0};
  int coded_gain = 0;        // t = K * gamma
  int multiplexing_gain = 1; // L
  int entity_count = 0;      // users, or K / L profiles when grouped
  int entity_gain = 0;       // t, or t / L when grouped
  std::uint64_t pieces_per_part = 1;
  std::uint64_t subpacketization = 1;
  std::vector<int> entity_of_user;
  /// Per entity, sorted flat part indices it stores (same for every file).
  std::vector<std::vector<std::uint64_t>> cache_map;

  Subset part_label(std::uint64_t part) const;
  std::uint64_t piece_of(std::uint64_t part) const {
    return part % pieces_per_part;
  }
  std::uint64_t part_index(const Subset& label, std::uint64_t piece) const;

  bool caches(int user, std::uint64_t part) const;
  const std::vector<std::uint64_t>& cache_of_user(int user) const {
    return cache_map.at(entity_of_user.at(user));
  }

  /// One line per user: "user <k>: <sorted part indices>", 1-based users.
  std::string dump() const;
};

/// t = K * gamma; throws UnsupportedParameter when it is not an integer.
int coded_caching_gain(int users, Rational gamma);

/// Subpacketization of the multi-antenna bit-level scheme:
/// C(K,t) * C(K-t-1, L-1), with L clipped to K - t.
std::uint64_t bit_level_subpacketization(int users, int coded_gain,
                                         int multiplexing_gain);

PlacementSpec mn_placement(int users, int files, Rational gamma);
PlacementSpec bit_level_placement(int users, int files, Rational gamma,
                                  int multiplexing_gain);

/// K / L cache profiles of L consecutive users, MN over profiles with t / L.
PlacementSpec grouped_placement(int users, int files, Rational gamma,
                                int multiplexing_gain);

/// Fraction of each STU's file kept in every cache.
struct StuAllocation {
  std::vector<double> fractions;
  double budget = 0.0;  // gamma * N file-equivalents
};

/// Inverse-rate proportional split of gamma * N file-equivalents across STU
/// files, capped at one whole file each with the excess redistributed.
StuAllocation location_dependent_allocation(std::span<const double> stu_rates,
                                            double gamma);

}  // namespace xrcc
