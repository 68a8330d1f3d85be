#include "xrcc/verify.hpp"

#include <locale>
#include <sstream>

#include "xrcc/delivery.hpp"
#include "xrcc/errors.hpp"

namespace xrcc {

namespace {

bool next_demand(Demand& demand, int files) {
  for (auto& d : demand) {
    if (++d < files) return true;
    d = 0;
  }
  return false;
}

template <typename Decode>
void check_all_users(const PlacementSpec& placement, const FileLibrary& library,
                     const std::vector<UserCache>& caches, const Demand& demand,
                     DecodabilityRow& row, Decode&& decode) {
  for (int k = 0; k < placement.user_count; ++k) {
    ++row.decodes;
    try {
      if (decode(k, caches[k]) != library.file(demand[k])) ++row.failures;
    } catch (const DecodeError&) {
      ++row.failures;
    }
  }
}

DecodabilityRow run_point(const std::string& scheme,
                          const PlacementSpec& placement,
                          const FileLibrary& library, int L,
                          std::uint64_t seed) {
  DecodabilityRow row{scheme, placement.user_count, placement.file_count,
                      placement.coded_gain, L};
  std::vector<UserCache> caches;
  for (int k = 0; k < placement.user_count; ++k) {
    caches.emplace_back(placement, library, k);
  }
  const std::size_t F = library.file_size();
  Demand demand(placement.user_count, 0);
  do {
    ++row.demands;
    if (scheme == "single_antenna") {
      const auto s = build_schedule_single_antenna(placement, demand, library);
      check_all_users(placement, library, caches, demand, row,
                      [&](int k, const UserCache& c) {
                        return decode_bit_level(k, s, placement, c, demand, F);
                      });
    } else if (scheme == "bit_level") {
      const auto s = build_schedule_bit_level(placement, demand, library, L);
      check_all_users(placement, library, caches, demand, row,
                      [&](int k, const UserCache& c) {
                        return decode_bit_level(k, s, placement, c, demand, F);
                      });
    } else {
      const auto s = build_schedule_signal_level(placement, demand, library, L);
      const auto channels = ideal_effective_channels(s, seed + row.demands);
      check_all_users(placement, library, caches, demand, row,
                      [&](int k, const UserCache& c) {
                        const auto rx = receive(s, channels, k);
                        const auto parts =
                            decode_signal_level(k, s, rx, channels, c);
                        return assemble_file(k, placement, parts, c, demand, F);
                      });
    }
  } while (next_demand(demand, placement.file_count));
  return row;
}

}  // namespace

std::vector<DecodabilityRow> verify_decodability(int max_users, int max_files,
                                                 int max_l,
                                                 std::size_t file_size,
                                                 std::uint64_t seed) {
  std::vector<DecodabilityRow> rows;
  for (int K = 1; K <= max_users; ++K) {
    for (int N = 1; N <= max_files; ++N) {
      const auto library = FileLibrary::synthetic(N, file_size, seed + 97 * K + N);
      for (int t = 0; t <= K; ++t) {
        const Rational gamma(t, K);
        rows.push_back(run_point("single_antenna", mn_placement(K, N, gamma),
                                 library, 1, seed));
        for (int L = 1; L <= max_l; ++L) {
          const auto placement = bit_level_placement(K, N, gamma, L);
          rows.push_back(run_point("bit_level", placement, library, L, seed));
          rows.push_back(run_point("signal_level", placement, library, L, seed));
          if (K % L == 0 && t % L == 0) {
            rows.push_back(run_point("grouped", grouped_placement(K, N, gamma, L),
                                     library, L, seed));
          }
        }
      }
    }
  }
  return rows;
}

std::string decodability_csv(const std::vector<DecodabilityRow>& rows) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "scheme,users,files,t,L,demands,decodes,failures\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.users << ',' << r.files << ',' << r.coded_gain
        << ',' << r.multiplexing_gain << ',' << r.demands << ',' << r.decodes
        << ',' << r.failures << '\n';
  }
  return out.str();
}

}  // namespace xrcc
