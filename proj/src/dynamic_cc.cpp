#include "xrcc/dynamic_cc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "xrcc/errors.hpp"

namespace xrcc {

double occupancy_std(std::span<const int> occupancy) {
  if (occupancy.empty()) return 0.0;
  const double n = static_cast<double>(occupancy.size());
  const double mean = std::accumulate(occupancy.begin(), occupancy.end(), 0.0) / n;
  double sum_sq = 0.0;
  for (int o : occupancy) sum_sq += (o - mean) * (o - mean);
  return std::sqrt(sum_sq / n);
}

double max_assignment_std(int users, int profiles) {
  std::vector<int> occupancy(profiles, 0);
  occupancy.at(0) = users;
  return occupancy_std(occupancy);
}

ProfileAssignment assignment_from_occupancy(std::span<const int> occupancy) {
  ProfileAssignment out;
  out.profile_count = static_cast<int>(occupancy.size());
  out.occupancy.assign(occupancy.begin(), occupancy.end());
  for (int p = 0; p < out.profile_count; ++p) {
    if (occupancy[p] < 0) throw ArgumentError("negative profile occupancy");
    out.profile_of_user.insert(out.profile_of_user.end(), occupancy[p], p);
  }
  out.sigma = occupancy_std(out.occupancy);
  return out;
}

ProfileAssignment assign_users(int users, int profiles, double target_sigma,
                               std::uint64_t seed, double tolerance) {
  if (users < 1 || profiles < 1) {
    throw ArgumentError("assign_users: need K >= 1 and P >= 1");
  }
  if (target_sigma < 0.0) throw ArgumentError("assign_users: sigma < 0");
  const double sigma_max = max_assignment_std(users, profiles);
  if (target_sigma > sigma_max + 1e-9) {
    throw UnsupportedParameter("assign_users: sigma above the all-in-one-profile "
                               "maximum " + std::to_string(sigma_max));
  }

  std::mt19937_64 rng(seed);
  std::vector<int> occupancy(profiles, users / profiles);
  {
    std::vector<int> order(profiles);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < users % profiles; ++i) ++occupancy[order[i]];
  }

  auto within = [&](double sigma) {
    return std::abs(sigma - target_sigma) <= tolerance * target_sigma;
  };
  if (target_sigma >= sigma_max - 1e-9) {
    // only the all-in-one occupancy reaches the maximum
    std::uniform_int_distribution<int> pick(0, profiles - 1);
    std::fill(occupancy.begin(), occupancy.end(), 0);
    occupancy[pick(rng)] = users;
  } else if (target_sigma > 0.0) {
    constexpr int kMaxMoves = 200'000;
    double sigma = occupancy_std(occupancy);
    int moves = 0;
    std::vector<std::pair<int, int>> candidates;
    while (!within(sigma)) {
      if (++moves > kMaxMoves) {
        throw UnsupportedParameter("assign_users: no occupancy with sigma near " +
                                   std::to_string(target_sigma));
      }
      const bool raise = sigma < target_sigma;
      candidates.clear();
      for (int a = 0; a < profiles; ++a) {
        if (occupancy[a] == 0) continue;
        for (int b = 0; b < profiles; ++b) {
          if (a == b) continue;
          // moving one user a -> b changes the sum of squares by
          // 2 (o_b - o_a + 1)
          const int delta = occupancy[b] - occupancy[a] + 1;
          if (raise ? delta > 0 : delta < 0) candidates.emplace_back(a, b);
        }
      }
      if (candidates.empty()) {
        throw UnsupportedParameter("assign_users: sigma unreachable");
      }
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      const auto [a, b] = candidates[pick(rng)];
      --occupancy[a];
      ++occupancy[b];
      sigma = occupancy_std(occupancy);
    }
  }

  ProfileAssignment out;
  out.profile_count = profiles;
  out.occupancy = occupancy;
  for (int p = 0; p < profiles; ++p) {
    out.profile_of_user.insert(out.profile_of_user.end(), occupancy[p], p);
  }
  std::shuffle(out.profile_of_user.begin(), out.profile_of_user.end(), rng);
  out.sigma = occupancy_std(out.occupancy);
  return out;
}

int DynamicSchedule::served_total() const {
  int total = 0;
  for (const auto& tx : transmissions) total += static_cast<int>(tx.size());
  return total;
}

DynamicSchedule schedule_dynamic(const ProfileAssignment& assignment,
                                 int coded_gain, int multiplexing_gain,
                                 int units_per_user) {
  if (coded_gain < 0 || multiplexing_gain < 1 || units_per_user < 1) {
    throw ArgumentError("schedule_dynamic: need t >= 0, L >= 1, units >= 1");
  }
  const int users = assignment.user_count();
  const int P = assignment.profile_count;
  const int capacity = coded_gain + multiplexing_gain;

  DynamicSchedule schedule;
  schedule.coded_gain = coded_gain;
  schedule.multiplexing_gain = multiplexing_gain;
  schedule.units_per_user = units_per_user;

  std::vector<int> remaining(users, units_per_user);
  std::vector<long> profile_remaining(P, 0);
  for (int k = 0; k < users; ++k) {
    profile_remaining.at(assignment.profile_of_user[k]) += units_per_user;
  }
  long total = static_cast<long>(users) * units_per_user;

  std::vector<int> order(users);
  std::vector<int> taken(P);
  while (total > 0) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (remaining[a] != remaining[b]) return remaining[a] > remaining[b];
      const long pa = profile_remaining[assignment.profile_of_user[a]];
      const long pb = profile_remaining[assignment.profile_of_user[b]];
      if (pa != pb) return pa > pb;
      return a < b;
    });
    std::fill(taken.begin(), taken.end(), 0);
    std::vector<int> served;
    for (int k : order) {
      if (static_cast<int>(served.size()) == capacity || remaining[k] == 0) break;
      const int p = assignment.profile_of_user[k];
      if (taken[p] == multiplexing_gain) continue;
      ++taken[p];
      served.push_back(k);
    }
    for (int k : served) {
      --remaining[k];
      --profile_remaining[assignment.profile_of_user[k]];
      --total;
    }
    std::sort(served.begin(), served.end());
    schedule.transmissions.push_back(std::move(served));
  }
  return schedule;
}

double normalized_dof(const DynamicSchedule& schedule) {
  if (schedule.transmissions.empty()) {
    throw ArgumentError("normalized_dof: empty schedule");
  }
  const double per_tx = static_cast<double>(schedule.served_total()) /
                        static_cast<double>(schedule.transmissions.size());
  return per_tx / (schedule.coded_gain + schedule.multiplexing_gain);
}

}  // namespace xrcc
