#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "xrcc/phy.hpp"
#include "xrcc/placement.hpp"

namespace xrcc {

/// Square tiles (single transmission units), row-major ids from the origin
/// corner. Each STU shows one static 3D image, i.e. one library file.
struct StuGrid {
  double width_m = 0.0;
  double height_m = 0.0;
  double stu_m = 0.0;
  int cols = 0;
  int rows = 0;
  std::vector<int> file_of_stu;

  int stu_count() const { return cols * rows; }
  bool contains(Point p) const;
  /// Tiles are closed on their low edges: x = 0.5 with 0.5 m tiles lies in
  /// column 1. Points on the far outer edge belong to the last tile.
  int stu_at(Point p) const;
  Point stu_center(int stu) const;
};

StuGrid build_grid(double width_m, double height_m, double stu_m);

/// File requested by a user standing at `position`.
int demand_from_position(const StuGrid& grid, Point position);

/// Zone id per STU plus one TRP per zone.
struct ZonePartition {
  int zone_count = 0;
  std::vector<int> zone_of_stu;
  std::vector<Point> trp_positions;

  int zone_at(const StuGrid& grid, Point p) const {
    return zone_of_stu.at(grid.stu_at(p));
  }
};

/// zones_x * zones_y axis-aligned blocks of whole STUs, TRP at each centre.
ZonePartition block_zones(const StuGrid& grid, int zones_x, int zones_y);

struct UserState {
  Point position;
  Point waypoint;
  double speed_mps = 0.0;
  int zone = 0;
  int profile = 0;
};

struct SpeedRange {
  double min_mps = 0.5;
  double max_mps = 1.5;
};

UserState spawn_user(const StuGrid& grid, SpeedRange speeds,
                     std::mt19937_64& rng);

/// Random waypoint mobility: walk toward the waypoint, and on arrival stop
/// there and draw a fresh waypoint and speed.
UserState random_waypoint_step(const UserState& user, double dt_s,
                               SpeedRange speeds, const StuGrid& grid,
                               std::mt19937_64& rng);

struct CacheUpdateCost {
  int transitions = 0;
  std::uint64_t bytes_refreshed = 0;
};

/// Zone changes along a sampled trajectory; every change refreshes the whole
/// per-zone cache.
CacheUpdateCost cache_update_cost(std::span<const Point> trajectory,
                                  const StuGrid& grid,
                                  const ZonePartition& zones,
                                  std::uint64_t zone_cache_bytes);

/// XR dimensioning inputs, one column of the scenario table.
struct ScenarioSpec {
  std::string name;
  double env_width_m = 0.0;
  double env_height_m = 0.0;
  double stu_m = 0.5;
  int users = 0;
  int files = 0;
  std::uint64_t cache_bytes = 0;
  std::uint64_t image_bytes = 0;
  int multiplexing_gain = 1;
};

struct ScenarioRow {
  ScenarioSpec spec;
  Rational cache_fraction{0};
  int coded_gain = 0;
  SchemeTag scheme = SchemeTag::bit_level_multi;
  std::uint64_t subpacketization = 1;
  Rational packet_bytes{0};
  int parallel_streams = 0;
  Rational improvement_percent{0};
};

/// t = K gamma, grouped scheme when L divides K and t (bit-level otherwise),
/// packet = F / S, streams = t + L, improvement = 100 t / L percent.
ScenarioRow scenario_metrics(const ScenarioSpec& spec);

/// The five published XR setups (50 cm STUs, 100 MB images, L = 2).
std::vector<ScenarioSpec> reference_scenarios();

/// Parses one spec object or an array of them. Keys: env_m (number or
/// [w, h]), stu_m, users, files (defaults to the STU count), cache_bytes,
/// image_bytes, L, and optional name.
std::vector<ScenarioSpec> scenarios_from_json(const std::string& text);

/// Decimal units: "5 MB", "4 GB", "20.64 KB".
std::string format_bytes(Rational bytes);

/// Row labels down, one column per scenario.
std::string scenario_table_csv(std::span<const ScenarioRow> rows);

}  // namespace xrcc
