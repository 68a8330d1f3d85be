#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xrcc {

/// Outcome of decoding every demand vector for one parameter point.
struct DecodabilityRow {
  std::string scheme;  // single_antenna | bit_level | signal_level | grouped
  int users = 0;
  int files = 0;
  int coded_gain = 0;
  int multiplexing_gain = 1;
  std::uint64_t demands = 0;
  std::uint64_t decodes = 0;
  std::uint64_t failures = 0;
};

/// Places, delivers and decodes every demand vector in [0,N)^K for all
/// K <= max_users, N <= max_files, t in 0..K and L in 1..max_l, comparing
/// each user's reconstruction byte for byte with the requested file.
/// Signal-level decoding runs on the noiseless linear model with generic
/// effective channels.
std::vector<DecodabilityRow> verify_decodability(int max_users, int max_files,
                                                 int max_l,
                                                 std::size_t file_size,
                                                 std::uint64_t seed);

std::string decodability_csv(const std::vector<DecodabilityRow>& rows);

}  // namespace xrcc
