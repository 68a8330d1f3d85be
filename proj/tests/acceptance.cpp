// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. argv[1] is the path of the xrcc command-line tool.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "xrcc/codec.hpp"
#include "xrcc/delivery.hpp"
#include "xrcc/dynamic_cc.hpp"
#include "xrcc/harness.hpp"
#include "xrcc/phy.hpp"
#include "xrcc/placement.hpp"
#include "xrcc/verify.hpp"
#include "xrcc/xr_env.hpp"

using namespace xrcc;

namespace {

std::string g_cli;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void criterion(const std::string& name, double limit_s,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome result;
  try {
    result = body();
  } catch (const std::exception& e) {
    result = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << result.detail << (result.detail.empty() ? "" : "; ") << "time "
         << elapsed << " s";
  if (limit_s > 0.0) detail << " (limit " << limit_s << " s)";
  const bool pass = result.pass && (limit_s <= 0.0 || elapsed < limit_s);
  if (!pass) ++g_failures;
  std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  [" << detail.str()
            << "]" << std::endl;
}

/// Runs the tool and returns its stdout; throws on a non-zero exit.
std::string run_cli(const std::string& args) {
  const std::string command = "\"" + g_cli + "\" " + args;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot start " + command);
  std::string out;
  std::array<char, 4096> buffer{};
  while (const auto n = std::fread(buffer.data(), 1, buffer.size(), pipe)) {
    out.append(buffer.data(), n);
  }
  const int status = pclose(pipe);
  if (status != 0) throw std::runtime_error(command + " exited with " + std::to_string(status));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

/// CSV row label -> cells.
std::map<std::string, std::vector<std::string>> table_rows(const std::string& csv) {
  std::map<std::string, std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    auto cells = split(line, ',');
    if (cells.empty()) continue;
    const std::string label = cells.front();
    cells.erase(cells.begin());
    out[label] = cells;
  }
  return out;
}

// 1 --------------------------------------------------------------------------
Outcome link_loads_two_users() {
  constexpr int A = 0, B = 1;
  const std::vector<Demand> demands{{A, B}, {B, A}, {A, A}, {B, B}};
  const std::vector<std::vector<int>> classic_cache{{A}, {B}};
  const auto lib = FileLibrary::synthetic(2, 64, 3);
  const auto placement = mn_placement(2, 2, Rational(1, 2));
  const Rational classic_expected[] = {0, 2, 1, 1};
  Rational classic_sum = 0, cc_sum = 0;
  std::ostringstream detail;
  bool ok = true;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const Rational classic = classic_baseline_load(classic_cache, demands[i]);
    const Rational cc =
        link_load(build_schedule_single_antenna(placement, demands[i], lib));
    ok = ok && classic == classic_expected[i] && cc == Rational(1, 2);
    classic_sum += classic;
    cc_sum += cc;
    detail << classic << '/' << cc << ' ';
  }
  const Rational classic_avg = classic_sum / 4, cc_avg = cc_sum / 4;
  ok = ok && classic_avg == Rational(1) && cc_avg == Rational(1, 2);
  detail << "avg " << classic_avg << '/' << cc_avg;
  return {ok, "classic/CC " + detail.str()};
}

// 2 --------------------------------------------------------------------------
Outcome scenario_table() {
  const int t[] = {2, 4, 8, 2, 8};
  const Rational packet[] = {5'000'000, 10'000'000, 20'000'000, 20'000'000,
                             Rational(100'000'000, 4845)};
  const int streams[] = {4, 6, 10, 4, 10};
  const int improvement[] = {100, 200, 400, 100, 400};
  bool ok = true;
  const auto specs = reference_scenarios();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto row = scenario_metrics(specs[i]);
    ok = ok && row.coded_gain == t[i] && row.packet_bytes == packet[i] &&
         row.parallel_streams == streams[i] &&
         row.improvement_percent == Rational(improvement[i]);
  }
  const auto rows = table_rows(run_cli("scenario-table"));
  auto row_is = [&](const std::string& label, std::vector<std::string> expect) {
    const auto it = rows.find(label);
    return it != rows.end() && it->second == expect;
  };
  ok = ok && row_is("The coded caching gain (t)", {"2", "4", "8", "2", "8"});
  ok = ok && row_is("CC packet size", {"5 MB", "10 MB", "20 MB", "20 MB", "20.64 KB"});
  ok = ok && row_is("CC packet size (bytes)",
                    {"5000000", "10000000", "20000000", "20000000", "20640"});
  ok = ok && row_is("Parallel streams w/ CC (t+L)", {"4", "6", "10", "4", "10"});
  ok = ok && row_is("Improvement by CC", {"100%", "200%", "400%", "100%", "400%"});
  return {ok, "scenario V packet 100e6/4845 = " +
                  std::to_string(100e6 / 4845.0) + " bytes"};
}

// 3 --------------------------------------------------------------------------
Outcome exhaustive_decodability() {
  const auto rows = verify_decodability(4, 4, 2, 24, 11);
  std::uint64_t demands = 0, failures = 0;
  std::set<std::string> schemes;
  std::set<int> gains;
  for (const auto& row : rows) {
    demands += row.demands;
    failures += row.failures;
    schemes.insert(row.scheme);
    if (row.users == 4) gains.insert(row.coded_gain);
  }
  const bool ok = failures == 0 && schemes.contains("single_antenna") &&
                  schemes.contains("bit_level") && schemes.contains("signal_level") &&
                  gains.size() == 5;
  return {ok, std::to_string(demands) + " demand vectors over " +
                  std::to_string(rows.size()) + " parameter points, " +
                  std::to_string(failures) + " failures"};
}

// 4 --------------------------------------------------------------------------
Outcome structural_goldens() {
  const auto lib = FileLibrary::synthetic(3, 12, 8);
  const auto p = bit_level_placement(3, 3, Rational(1, 3), 2);
  const Demand abc{0, 1, 2};
  const std::string bit =
      "tx 1 serve={1,2,3}\n"
      "  target={1,2} null={3} : A_{2} ^ B_{1}\n"
      "  target={1,3} null={2} : A_{3} ^ C_{1}\n"
      "  target={2,3} null={1} : B_{3} ^ C_{2}\n";
  const std::string signal =
      "tx 1 serve={1,2,3}\n"
      "  target={1} null={3} : A_{2}\n"
      "  target={2} null={3} : B_{1}\n"
      "  target={1} null={2} : A_{3}\n"
      "  target={3} null={2} : C_{1}\n"
      "  target={2} null={1} : B_{3}\n"
      "  target={3} null={1} : C_{2}\n";
  const bool bit_ok = build_schedule_bit_level(p, abc, lib, 2).dump(p) == bit;
  const bool signal_ok = build_schedule_signal_level(p, abc, lib, 2).dump(p) == signal;
  return {bit_ok && signal_ok, std::string("three XOR codewords ") +
                                   (bit_ok ? "match" : "differ") + ", six entries " +
                                   (signal_ok ? "match" : "differ")};
}

// 5 --------------------------------------------------------------------------
Outcome beamformer_nulls() {
  std::mt19937_64 rng(2024);
  ChannelParams params;
  params.shadowing_std_db = 0.0;
  const Point trp[] = {{0.0, 0.0}};
  double worst = 0.0;
  int checked = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    const int users = 2 + static_cast<int>(rng() % 7);
    const int antennas = 1 + static_cast<int>(rng() % 8);
    std::vector<Point> pos(users);
    std::uniform_real_distribution<double> coord(0.5, 5.0);
    for (auto& q : pos) q = {coord(rng), coord(rng)};
    const auto h = sample_channel(users, antennas, pos, trp, params, rng());
    // random null set smaller than the antenna count, serve the rest
    std::vector<int> order(users);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int nulls = static_cast<int>(rng() % std::min(users, antennas));
    Subset null_set(order.begin(), order.begin() + nulls);
    Subset serve(order.begin() + nulls, order.end());
    std::sort(null_set.begin(), null_set.end());
    std::sort(serve.begin(), serve.end());
    const auto v = null_space_beamformer(h, serve, null_set);
    for (int k : null_set) {
      worst = std::max(worst, std::abs((h.row(k) * v).value()) / h.row(k).norm());
      ++checked;
    }
  }
  std::ostringstream d;
  d << checked << " nulls, worst residual " << worst;
  return {worst <= 1e-9, d.str()};
}

// 6 --------------------------------------------------------------------------
Outcome signal_bit_equivalence() {
  std::mt19937_64 rng(99);
  int matched = 0, instances = 0;
  while (instances < 100) {
    const int users = 2 + static_cast<int>(rng() % 4);       // 2..5
    const int files = 1 + static_cast<int>(rng() % 4);       // 1..4
    const int t = static_cast<int>(rng() % users);           // 0..K-1
    const int l = 1 + static_cast<int>(rng() % 3);           // 1..3
    const std::size_t size = 4 + rng() % 29;
    const auto lib = FileLibrary::synthetic(files, size, rng());
    const auto p = bit_level_placement(users, files, Rational(t, users), l);
    Demand demand(users);
    for (auto& d : demand) d = static_cast<int>(rng() % files);
    const auto bit = build_schedule_bit_level(p, demand, lib, l);
    const auto sig = build_schedule_signal_level(p, demand, lib, l);
    const auto channels = ideal_effective_channels(sig, rng());
    bool same = true;
    for (int k = 0; k < users; ++k) {
      const UserCache cache(p, lib, k);
      const auto from_bits = recover_bit_level(k, bit, cache, demand);
      const auto rx = receive(sig, channels, k);
      const auto from_signal = decode_signal_level(k, sig, rx, channels, cache);
      same = same && from_bits == from_signal &&
             assemble_file(k, p, from_signal, cache, demand, size) ==
                 lib.file(demand[k]);
    }
    matched += same;
    ++instances;
  }
  return {matched == instances,
          std::to_string(matched) + "/" + std::to_string(instances) + " identical"};
}

// 7 --------------------------------------------------------------------------
Outcome delivery_time_ordering() {
  constexpr int kBatches = 20;
  int ordered = 0, narrower = 0;
  double ratio_sum = 0.0;
  for (int b = 0; b < kBatches; ++b) {
    auto run = [&](Scheme scheme) {
      auto config = desk_config(scheme);
      config.trials = 500;
      config.seed = 1000 + static_cast<std::uint64_t>(b);
      const auto report = run_experiment(config);
      if (report.failed_count() > 0) {
        throw std::runtime_error(std::string(to_string(scheme)) + " had failed trials");
      }
      return report;
    };
    const auto unicast = run(Scheme::uniform_unicast);
    const auto base = run(Scheme::baseline_cc);
    const auto tuned = run(Scheme::nonuniform_cc);
    ordered += tuned.mean_total() <= base.mean_total() &&
               base.mean_total() <= unicast.mean_total();
    narrower += tuned.variance_total() < base.variance_total();
    ratio_sum += unicast.mean_total() / base.mean_total();
  }
  const int need = (95 * kBatches + 99) / 100;
  std::ostringstream d;
  d << "ordering " << ordered << "/" << kBatches << ", variance " << narrower << "/"
    << kBatches << " (need " << need << "), mean unicast/CC ratio "
    << ratio_sum / kBatches;
  return {ordered >= need && narrower >= need, d.str()};
}

// 8 --------------------------------------------------------------------------
Outcome dof_envelope() {
  constexpr int K = 50, P = 10, t = 5, L = 9, kSeeds = 200;
  constexpr int units = (t + L) * L;
  const double sigma_max = max_assignment_std(K, P);
  const double grid[] = {0.0, 10.0, 12.0, 14.0, sigma_max};
  std::vector<double> means;
  for (double sigma : grid) {
    double sum = 0.0;
    for (int s = 0; s < kSeeds; ++s) {
      const auto a = assign_users(K, P, sigma, trial_seed(1, s));
      sum += normalized_dof(schedule_dynamic(a, t, L, units));
    }
    means.push_back(sum / kSeeds);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < means.size(); ++i) monotone = monotone && means[i] <= means[i - 1];
  const double uniform = normalized_dof(schedule_dynamic(assign_users(K, P, 0.0, 5), t, L, units));
  std::vector<int> all_in_one(P, 0);
  all_in_one[0] = K;
  const double skewed = normalized_dof(
      schedule_dynamic(assignment_from_occupancy(all_in_one), t, L, units));
  std::ostringstream d;
  d << "DoF(0)=" << uniform << ", DoF(max)=" << skewed << " vs 9/14, means";
  for (double m : means) d << ' ' << m;
  const bool ok = std::abs(uniform - 1.0) <= 1e-12 &&
                  std::abs(skewed - 9.0 / 14.0) <= 1e-9 &&
                  std::abs(means.back() - 9.0 / 14.0) <= 1e-9 && monotone;
  return {ok, d.str()};
}

// 9 --------------------------------------------------------------------------
Outcome determinism() {
  const std::string dir = "acceptance_determinism_";
  const std::vector<std::string> commands{
      "simulate --seed 7 --trials 40",
      "simulate --seed 7 --trials 10 --schemes dynamic,nonuniform_unicast",
      "dynamic-dof --seeds 20 --seed 3",
      "codec-verify --max-users 3 --max-files 3",
      "scenario-table"};
  int identical = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::size_t hashes[2];
    for (int run = 0; run < 2; ++run) {
      const std::string path = dir + std::to_string(i) + "_" + std::to_string(run) + ".csv";
      run_cli(commands[i] + " --out " + path + " 2>/dev/null");
      const std::string content = read_file(path);
      if (content.empty()) throw std::runtime_error("empty output from " + commands[i]);
      hashes[run] = std::hash<std::string>{}(content);
      std::remove(path.c_str());
    }
    identical += hashes[0] == hashes[1];
  }
  return {identical == static_cast<int>(commands.size()),
          std::to_string(identical) + "/" + std::to_string(commands.size()) +
              " commands hash-identical across runs"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path to xrcc>\n";
    return 2;
  }
  g_cli = argv[1];
  criterion("1 two-user link loads (classic vs coded)", 1.0, link_loads_two_users);
  criterion("2 XR scenario table via scenario-table", 1.0, scenario_table);
  criterion("3 exhaustive decodability K,N<=4, L in {1,2}", 60.0, exhaustive_decodability);
  criterion("4 K=3 t=1 L=2 codeword and entry dumps", 0.0, structural_goldens);
  criterion("5 beamformer null residuals <= 1e-9", 0.0, beamformer_nulls);
  criterion("6 noiseless signal-level equals bit-level", 0.0, signal_bit_equivalence);
  criterion("7 desk-scale delivery time ordering and spread", 300.0, delivery_time_ordering);
  criterion("8 shared-cache DoF envelope K=50 P=10 t=5 L=9", 60.0, dof_envelope);
  criterion("9 CSV determinism", 0.0, determinism);
  std::cout << (g_failures == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(g_failures))
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
