#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace xrcc {

/// Users mapped onto a fixed set of shared cache profiles.
struct ProfileAssignment {
  int profile_count = 0;
  std::vector<int> profile_of_user;
  std::vector<int> occupancy;
  double sigma = 0.0;  // population std-dev of `occupancy`

  int user_count() const { return static_cast<int>(profile_of_user.size()); }
};

/// Population standard deviation of raw occupancy counts.
double occupancy_std(std::span<const int> occupancy);

/// sigma with every user on one profile.
double max_assignment_std(int users, int profiles);

/// Draws an occupancy vector whose sigma is within `tolerance` (relative) of
/// the target, by a seeded random walk of single-user moves that raise or
/// lower sigma, then shuffles users into the slots. sigma = 0 yields the
/// balanced assignment and the maximum puts everyone on one random profile.
ProfileAssignment assign_users(int users, int profiles, double target_sigma,
                               std::uint64_t seed, double tolerance = 0.05);

/// Builds an assignment from explicit per-profile counts (users in order).
ProfileAssignment assignment_from_occupancy(std::span<const int> occupancy);

struct DynamicSchedule {
  int coded_gain = 0;
  int multiplexing_gain = 1;
  int units_per_user = 1;
  /// Users served in each transmission, one data unit each.
  std::vector<std::vector<int>> transmissions;

  int served_total() const;
};

/// Greedy shared-cache delivery. Every user needs `units_per_user` equal
/// units. A transmission serves at most t + L distinct users and at most L
/// users of any one profile (users sharing a cache cannot cancel each other,
/// so they are separated spatially). Users are taken by most remaining units,
/// then by most loaded profile, then by id.
DynamicSchedule schedule_dynamic(const ProfileAssignment& assignment,
                                 int coded_gain, int multiplexing_gain,
                                 int units_per_user = 1);

/// Users served per transmission over t + L.
double normalized_dof(const DynamicSchedule& schedule);

}  // namespace xrcc
