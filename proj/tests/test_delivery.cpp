#include <random>
#include <set>

#include "doctest.h"
#include "xrcc/delivery.hpp"
#include "xrcc/errors.hpp"
#include "xrcc/verify.hpp"

using namespace xrcc;

namespace {

constexpr int A = 0, B = 1, C = 2;

/// Every (user, part) the schedule delivers, by brute force over codewords.
std::multiset<std::pair<int, std::uint64_t>> delivered(
    const TransmissionSchedule& s) {
  std::multiset<std::pair<int, std::uint64_t>> out;
  for (const auto& tx : s.transmissions) {
    for (const auto& cw : tx.codewords) {
      for (const auto& term : cw.composition) out.insert({term.user, term.part});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("classic caching loads for the two-user example") {
  const std::vector<std::vector<int>> caches{{A}, {B}};
  CHECK(classic_baseline_load(caches, {A, B}) == Rational(0));
  CHECK(classic_baseline_load(caches, {B, A}) == Rational(2));
  CHECK(classic_baseline_load(caches, {A, A}) == Rational(1));
  CHECK(classic_baseline_load(caches, {B, B}) == Rational(1));
}

TEST_CASE("single-antenna CC for the two-user example") {
  const auto lib = FileLibrary::synthetic(2, 10, 5);
  const auto p = mn_placement(2, 2, Rational(1, 2));

  const auto ab = build_schedule_single_antenna(p, {A, B}, lib);
  CHECK(ab.dump(p) == "tx 1 serve={1,2}\n  target={1,2} null={} : A_{2} ^ B_{1}\n");
  CHECK(link_load(ab) == Rational(1, 2));

  const auto ba = build_schedule_single_antenna(p, {B, A}, lib);
  CHECK(ba.dump(p) == "tx 1 serve={1,2}\n  target={1,2} null={} : B_{2} ^ A_{1}\n");

  const auto aa = build_schedule_single_antenna(p, {A, A}, lib);
  CHECK(aa.dump(p) == "tx 1 serve={1,2}\n  target={1,2} null={} : A_{2} ^ A_{1}\n");
  CHECK(link_load(aa) == Rational(1, 2));

  CHECK_THROWS_AS(build_schedule_single_antenna(p, {A}, lib), ArgumentError);
}

TEST_CASE("single-antenna CC with three users") {
  const auto lib = FileLibrary::synthetic(3, 9, 5);
  const auto p = mn_placement(3, 3, Rational(1, 3));
  const auto s = build_schedule_single_antenna(p, {A, B, C}, lib);
  REQUIRE(s.transmissions.size() == 3);
  CHECK(s.dump(p) ==
        "tx 1 serve={1,2}\n  target={1,2} null={} : A_{2} ^ B_{1}\n"
        "tx 2 serve={1,3}\n  target={1,3} null={} : A_{3} ^ C_{1}\n"
        "tx 3 serve={2,3}\n  target={2,3} null={} : B_{3} ^ C_{2}\n");
  CHECK(link_load(s) == Rational(1));
  // payload is the XOR of the two operands
  const auto a = split_file(lib, A, 3), b = split_file(lib, B, 3);
  CHECK(s.transmissions[0].codewords[0].payload ==
        xor_combine(std::vector<Bytes>{a[1], b[0]}));
}

TEST_CASE("multi-antenna bit-level schedule for K=3, t=1, L=2") {
  const auto lib = FileLibrary::synthetic(3, 12, 8);
  const auto p = bit_level_placement(3, 3, Rational(1, 3), 2);
  const auto s = build_schedule_bit_level(p, {A, B, C}, lib, 2);
  CHECK(s.dump(p) ==
        "tx 1 serve={1,2,3}\n"
        "  target={1,2} null={3} : A_{2} ^ B_{1}\n"
        "  target={1,3} null={2} : A_{3} ^ C_{1}\n"
        "  target={2,3} null={1} : B_{3} ^ C_{2}\n");
  CHECK(link_load(s) == Rational(1, 3));

  SUBCASE("user 1 extracts A2 and A3 and rebuilds A") {
    const UserCache cache(p, lib, 0);
    const auto parts = recover_bit_level(0, s, cache, {A, B, C});
    const auto a = split_file(lib, A, 3);
    CHECK(parts.size() == 2);
    CHECK(parts.at(1) == a[1]);
    CHECK(parts.at(2) == a[2]);
    CHECK(decode_bit_level(0, s, p, cache, {A, B, C}, 12) == lib.file(A));
  }
  SUBCASE("same request from everyone keeps the structure") {
    const auto same = build_schedule_bit_level(p, {A, A, A}, lib, 2);
    CHECK(same.dump(p) ==
          "tx 1 serve={1,2,3}\n"
          "  target={1,2} null={3} : A_{2} ^ A_{1}\n"
          "  target={1,3} null={2} : A_{3} ^ A_{1}\n"
          "  target={2,3} null={1} : A_{3} ^ A_{2}\n");
    for (int k = 0; k < 3; ++k) {
      const UserCache cache(p, lib, k);
      CHECK(decode_bit_level(k, same, p, cache, {A, A, A}, 12) == lib.file(A));
    }
  }
}

TEST_CASE("t = K - 1 with t + L = K gives one codeword and empty null set") {
  const auto lib = FileLibrary::synthetic(2, 8, 1);
  const auto p = bit_level_placement(4, 2, Rational(3, 4), 1);
  const auto s = build_schedule_bit_level(p, {0, 1, 1, 0}, lib, 1);
  REQUIRE(s.transmissions.size() == 1);
  REQUIRE(s.transmissions[0].codewords.size() == 1);
  CHECK(s.transmissions[0].codewords[0].null_set.empty());
  CHECK(s.transmissions[0].codewords[0].target_set == Subset{0, 1, 2, 3});
}

TEST_CASE("no cache: codewords are unicasts") {
  const auto lib = FileLibrary::synthetic(3, 6, 2);
  const auto p = mn_placement(3, 3, Rational(0));
  const auto s = build_schedule_single_antenna(p, {2, 0, 1}, lib);
  REQUIRE(s.transmissions.size() == 3);
  for (int k = 0; k < 3; ++k) {
    const UserCache cache(p, lib, k);
    CHECK(cache.size() == 0);
    CHECK(decode_bit_level(k, s, p, cache, {2, 0, 1}, 6) ==
          lib.file(std::vector{2, 0, 1}[k]));
  }
  CHECK(link_load(s) == Rational(3));
}

TEST_CASE("full cache: nothing to send") {
  const auto lib = FileLibrary::synthetic(2, 6, 2);
  const auto p = bit_level_placement(3, 2, Rational(1), 2);
  const auto s = build_schedule_bit_level(p, {0, 1, 0}, lib, 2);
  CHECK(s.transmissions.empty());
  CHECK(link_load(s) == Rational(0));
  const UserCache cache(p, lib, 1);
  CHECK(decode_bit_level(1, s, p, cache, {0, 1, 0}, 6) == lib.file(1));

  const auto sig = build_schedule_signal_level(p, {0, 1, 0}, lib, 2);
  CHECK(sig.transmissions.empty());
  const auto parts = decode_signal_level(1, sig, {}, {}, cache);
  CHECK(assemble_file(1, p, parts, cache, {0, 1, 0}, 6) == lib.file(1));
}

TEST_CASE("signal-level entries for K=3, t=1, L=2") {
  const auto lib = FileLibrary::synthetic(3, 12, 8);
  const auto p = bit_level_placement(3, 3, Rational(1, 3), 2);
  const auto s = build_schedule_signal_level(p, {A, B, C}, lib, 2);
  CHECK(s.dump(p) ==
        "tx 1 serve={1,2,3}\n"
        "  target={1} null={3} : A_{2}\n"
        "  target={2} null={3} : B_{1}\n"
        "  target={1} null={2} : A_{3}\n"
        "  target={3} null={2} : C_{1}\n"
        "  target={2} null={1} : B_{3}\n"
        "  target={3} null={1} : C_{2}\n");

  const UserCache cache(p, lib, 0);
  const auto channels = ideal_effective_channels(s, 77);
  const auto rx = receive(s, channels, 0);
  const auto parts = decode_signal_level(0, s, rx, channels, cache);
  const auto a = split_file(lib, A, 3);
  CHECK(parts.size() == 2);
  CHECK(parts.at(1) == a[1]);
  CHECK(parts.at(2) == a[2]);
}

TEST_CASE("decode_signal_level flags energy it cannot remove") {
  const auto lib = FileLibrary::synthetic(3, 6, 8);
  const auto p = bit_level_placement(3, 3, Rational(1, 3), 2);
  auto s = build_schedule_signal_level(p, {A, B, C}, lib, 2);
  // drop user 1 from the null set of B_3, which user 1 does not cache
  s.transmissions[0].codewords[4].null_set.clear();
  const auto channels = ideal_effective_channels(s, 1);
  const UserCache cache(p, lib, 0);
  const auto rx = receive(s, channels, 0);
  CHECK_THROWS_AS(decode_signal_level(0, s, rx, channels, cache),
                  ResidualInterference);
}

TEST_CASE("grouped signal-level serves t+L users per slot") {
  const auto lib = FileLibrary::synthetic(100, 20, 4);
  const auto p = grouped_placement(10, 100, Rational(2, 5), 2);
  Demand demand(10);
  for (int k = 0; k < 10; ++k) demand[k] = 7 * k;
  const auto s = build_schedule_signal_level(p, demand, lib, 2);
  CHECK(s.transmissions.size() == binomial(5, 3));
  for (const auto& tx : s.transmissions) {
    CHECK(tx.served.size() == 6);
    CHECK(tx.codewords.size() == 6);
    for (const auto& cw : tx.codewords) CHECK(cw.null_set.size() == 1);
  }
  CHECK_THROWS_AS(build_schedule_signal_level(p, demand, lib, 1), ArgumentError);
}

TEST_CASE("L = 1 signal level splits the MN codewords into operands") {
  const auto lib = FileLibrary::synthetic(3, 6, 2);
  const auto p = mn_placement(3, 3, Rational(1, 3));
  const auto bit = build_schedule_single_antenna(p, {A, B, C}, lib);
  const auto sig = build_schedule_signal_level(p, {A, B, C}, lib, 1);
  REQUIRE(sig.transmissions.size() == bit.transmissions.size());
  for (std::size_t i = 0; i < bit.transmissions.size(); ++i) {
    const auto& cw = bit.transmissions[i].codewords.at(0);
    const auto& entries = sig.transmissions[i].codewords;
    REQUIRE(entries.size() == cw.composition.size());
    for (std::size_t j = 0; j < entries.size(); ++j) {
      CHECK(entries[j].composition.at(0) == cw.composition[j]);
      CHECK(entries[j].null_set.empty());
    }
  }
}

TEST_CASE("single-antenna load is C(K,t+1)/C(K,t) for K <= 8") {
  for (int K = 1; K <= 8; ++K) {
    const auto lib = FileLibrary::synthetic(K, 4, K);
    Demand demand(K);
    for (int k = 0; k < K; ++k) demand[k] = k;
    for (int t = 0; t <= K; ++t) {
      const auto p = mn_placement(K, K, Rational(t, K));
      const auto s = build_schedule_single_antenna(p, demand, lib);
      REQUIRE(link_load(s) ==
              Rational(static_cast<std::int64_t>(binomial(K, t + 1)),
                       static_cast<std::int64_t>(binomial(K, t))));
    }
  }
  const auto p = mn_placement(4, 4, Rational(1, 4));
  const auto s = build_schedule_single_antenna(p, {0, 1, 2, 3},
                                               FileLibrary::synthetic(4, 4, 1));
  CHECK(link_load(s) == Rational(3, 2));
}

TEST_CASE("completeness and served-group size across schemes") {
  std::mt19937_64 rng(19);
  for (int K = 1; K <= 6; ++K) {
    for (int t = 0; t <= K; ++t) {
      for (int L = 1; L <= 3; ++L) {
        const int N = 3;
        const auto lib = FileLibrary::synthetic(N, 5, 3);
        Demand demand(K);
        for (auto& d : demand) d = static_cast<int>(rng() % N);
        const auto p = bit_level_placement(K, N, Rational(t, K), L);
        const auto bit = build_schedule_bit_level(p, demand, lib, L);
        const auto sig = build_schedule_signal_level(p, demand, lib, L);

        // every missing part of every user exactly once
        std::multiset<std::pair<int, std::uint64_t>> wanted;
        for (int k = 0; k < K; ++k) {
          for (std::uint64_t part = 0; part < p.subpacketization; ++part) {
            if (!p.caches(k, part)) wanted.insert({k, part});
          }
        }
        REQUIRE(delivered(bit) == wanted);
        REQUIRE(delivered(sig) == wanted);

        for (const auto& tx : bit.transmissions) {
          REQUIRE(static_cast<int>(tx.served.size()) == std::min(t + L, K));
          REQUIRE(tx.codewords.size() ==
                  binomial(static_cast<int>(tx.served.size()), t + 1));
          for (const auto& cw : tx.codewords) {
            Subset both;
            std::set_intersection(cw.target_set.begin(), cw.target_set.end(),
                                  cw.null_set.begin(), cw.null_set.end(),
                                  std::back_inserter(both));
            REQUIRE(both.empty());
          }
        }
      }
    }
  }
}

TEST_CASE("exhaustive decodability for K <= 3, N <= 3") {
  const auto rows = verify_decodability(3, 3, 2, 7, 5);
  std::uint64_t decodes = 0;
  for (const auto& r : rows) {
    INFO(r.scheme << " K=" << r.users << " N=" << r.files << " t="
                  << r.coded_gain << " L=" << r.multiplexing_gain);
    CHECK(r.failures == 0);
    decodes += r.decodes;
  }
  CHECK(decodes > 0);
}
