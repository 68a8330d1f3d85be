#include "xrcc/xr_env.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <locale>
#include <sstream>

#include "json.hpp"
#include "xrcc/errors.hpp"

namespace xrcc {

namespace {

int tile_count(double length, double tile) {
  const double n = length / tile;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
    throw ArgumentError("grid: " + std::to_string(length) +
                        " m is not a whole number of " + std::to_string(tile) +
                        " m tiles");
  }
  return static_cast<int>(rounded);
}

int tile_index(double coordinate, double tile, int count) {
  const int i = static_cast<int>(std::floor(coordinate / tile));
  return std::clamp(i, 0, count - 1);
}

}  // namespace

bool StuGrid::contains(Point p) const {
  return p.x >= 0.0 && p.y >= 0.0 && p.x <= width_m && p.y <= height_m;
}

int StuGrid::stu_at(Point p) const {
  if (!contains(p)) throw ArgumentError("position outside the environment");
  return tile_index(p.y, stu_m, rows) * cols + tile_index(p.x, stu_m, cols);
}

Point StuGrid::stu_center(int stu) const {
  return {(stu % cols + 0.5) * stu_m, (stu / cols + 0.5) * stu_m};
}

StuGrid build_grid(double width_m, double height_m, double stu_m) {
  if (!(stu_m > 0.0) || !(width_m > 0.0) || !(height_m > 0.0)) {
    throw ArgumentError("grid: dimensions must be positive");
  }
  StuGrid grid;
  grid.width_m = width_m;
  grid.height_m = height_m;
  grid.stu_m = stu_m;
  grid.cols = tile_count(width_m, stu_m);
  grid.rows = tile_count(height_m, stu_m);
  grid.file_of_stu.resize(grid.stu_count());
  for (int s = 0; s < grid.stu_count(); ++s) grid.file_of_stu[s] = s;
  return grid;
}

int demand_from_position(const StuGrid& grid, Point position) {
  return grid.file_of_stu.at(grid.stu_at(position));
}

ZonePartition block_zones(const StuGrid& grid, int zones_x, int zones_y) {
  if (zones_x < 1 || zones_y < 1 || zones_x > grid.cols ||
      zones_y > grid.rows) {
    throw ArgumentError("zones: need between 1 and one zone per STU per axis");
  }
  ZonePartition zones;
  zones.zone_count = zones_x * zones_y;
  zones.zone_of_stu.resize(grid.stu_count());
  std::vector<double> min_x(zones.zone_count, 1e300), max_x(zones.zone_count, -1e300);
  std::vector<double> min_y(zones.zone_count, 1e300), max_y(zones.zone_count, -1e300);
  for (int s = 0; s < grid.stu_count(); ++s) {
    const int col = s % grid.cols;
    const int row = s / grid.cols;
    const int z = (row * zones_y / grid.rows) * zones_x + col * zones_x / grid.cols;
    zones.zone_of_stu[s] = z;
    min_x[z] = std::min(min_x[z], col * grid.stu_m);
    max_x[z] = std::max(max_x[z], (col + 1) * grid.stu_m);
    min_y[z] = std::min(min_y[z], row * grid.stu_m);
    max_y[z] = std::max(max_y[z], (row + 1) * grid.stu_m);
  }
  for (int z = 0; z < zones.zone_count; ++z) {
    zones.trp_positions.push_back({(min_x[z] + max_x[z]) / 2.0,
                                   (min_y[z] + max_y[z]) / 2.0});
  }
  return zones;
}

namespace {

Point random_point(const StuGrid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0.0, grid.width_m);
  std::uniform_real_distribution<double> uy(0.0, grid.height_m);
  const double x = ux(rng);
  return {x, uy(rng)};
}

double random_speed(SpeedRange speeds, std::mt19937_64& rng) {
  if (speeds.max_mps <= speeds.min_mps) return speeds.min_mps;
  std::uniform_real_distribution<double> u(speeds.min_mps, speeds.max_mps);
  return u(rng);
}

}  // namespace

UserState spawn_user(const StuGrid& grid, SpeedRange speeds,
                     std::mt19937_64& rng) {
  UserState user;
  user.position = random_point(grid, rng);
  user.waypoint = random_point(grid, rng);
  user.speed_mps = random_speed(speeds, rng);
  return user;
}

UserState random_waypoint_step(const UserState& user, double dt_s,
                               SpeedRange speeds, const StuGrid& grid,
                               std::mt19937_64& rng) {
  if (!(dt_s > 0.0)) throw ArgumentError("random_waypoint_step: need dt > 0");
  UserState next = user;
  const double step = user.speed_mps * dt_s;
  if (step <= 0.0) return next;
  const double dx = user.waypoint.x - user.position.x;
  const double dy = user.waypoint.y - user.position.y;
  const double remaining = std::hypot(dx, dy);
  if (step >= remaining) {
    next.position = user.waypoint;
    next.waypoint = random_point(grid, rng);
    next.speed_mps = random_speed(speeds, rng);
  } else {
    next.position.x += dx / remaining * step;
    next.position.y += dy / remaining * step;
  }
  next.position.x = std::clamp(next.position.x, 0.0, grid.width_m);
  next.position.y = std::clamp(next.position.y, 0.0, grid.height_m);
  return next;
}

CacheUpdateCost cache_update_cost(std::span<const Point> trajectory,
                                  const StuGrid& grid,
                                  const ZonePartition& zones,
                                  std::uint64_t zone_cache_bytes) {
  CacheUpdateCost cost;
  if (trajectory.empty()) return cost;
  int zone = zones.zone_at(grid, trajectory.front());
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    const int z = zones.zone_at(grid, trajectory[i]);
    if (z != zone) {
      ++cost.transitions;
      zone = z;
    }
  }
  cost.bytes_refreshed =
      static_cast<std::uint64_t>(cost.transitions) * zone_cache_bytes;
  return cost;
}

ScenarioRow scenario_metrics(const ScenarioSpec& spec) {
  if (spec.users < 1 || spec.files < 1 || spec.image_bytes == 0 ||
      spec.multiplexing_gain < 1) {
    throw ArgumentError("scenario '" + spec.name +
                        "': users, files, image size and L must be positive");
  }
  ScenarioRow row;
  row.spec = spec;
  const auto library_bytes = static_cast<std::int64_t>(spec.files) *
                             static_cast<std::int64_t>(spec.image_bytes);
  row.cache_fraction =
      Rational(static_cast<std::int64_t>(spec.cache_bytes), library_bytes);
  if (row.cache_fraction <= 0 || row.cache_fraction > 1) {
    throw UnsupportedParameter("scenario '" + spec.name +
                               "': cache must hold between 0 and N files");
  }
  row.coded_gain = coded_caching_gain(spec.users, row.cache_fraction);
  const int t = row.coded_gain;
  const int L = spec.multiplexing_gain;
  if (spec.users % L == 0 && t % L == 0) {
    row.scheme = SchemeTag::grouped_signal_level;
    row.subpacketization = binomial(spec.users / L, t / L);
  } else {
    row.scheme = SchemeTag::bit_level_multi;
    row.subpacketization = bit_level_subpacketization(spec.users, t, L);
  }
  row.packet_bytes = Rational(static_cast<std::int64_t>(spec.image_bytes),
                              static_cast<std::int64_t>(row.subpacketization));
  row.parallel_streams = t + L;
  row.improvement_percent = Rational(100 * t, L);
  return row;
}

std::vector<ScenarioSpec> reference_scenarios() {
  constexpr std::uint64_t kMB = 1'000'000;
  constexpr std::uint64_t kGB = 1'000'000'000;
  return {
      {"Scenario I", 5, 5, 0.5, 5, 100, 4 * kGB, 100 * kMB, 2},
      {"Scenario II", 5, 5, 0.5, 10, 100, 4 * kGB, 100 * kMB, 2},
      {"Scenario III", 5, 5, 0.5, 10, 100, 8 * kGB, 100 * kMB, 2},
      {"Scenario IV", 10, 10, 0.5, 10, 400, 8 * kGB, 100 * kMB, 2},
      {"Scenario V", 10, 10, 0.5, 40, 400, 8 * kGB, 100 * kMB, 2},
  };
}

std::vector<ScenarioSpec> scenarios_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<nlohmann::json> items;
  if (doc.is_array()) {
    items.assign(doc.begin(), doc.end());
  } else {
    items.push_back(doc);
  }
  std::vector<ScenarioSpec> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& j = items[i];
    ScenarioSpec spec;
    spec.name = j.value("name", "Scenario " + std::to_string(i + 1));
    const auto& env = j.at("env_m");
    if (env.is_array()) {
      spec.env_width_m = env.at(0).get<double>();
      spec.env_height_m = env.at(1).get<double>();
    } else {
      spec.env_width_m = spec.env_height_m = env.get<double>();
    }
    spec.stu_m = j.value("stu_m", 0.5);
    spec.users = j.at("users").get<int>();
    const auto grid = build_grid(spec.env_width_m, spec.env_height_m, spec.stu_m);
    spec.files = j.value("files", grid.stu_count());
    if (spec.files != grid.stu_count()) {
      throw ArgumentError("scenario '" + spec.name + "': files (" +
                          std::to_string(spec.files) +
                          ") must match the STU count (" +
                          std::to_string(grid.stu_count()) + ")");
    }
    spec.cache_bytes = j.at("cache_bytes").get<std::uint64_t>();
    spec.image_bytes = j.at("image_bytes").get<std::uint64_t>();
    spec.multiplexing_gain = j.at("L").get<int>();
    out.push_back(spec);
  }
  return out;
}

std::string format_bytes(Rational bytes) {
  struct Unit {
    std::int64_t scale;
    const char* name;
  };
  static constexpr Unit kUnits[] = {
      {1'000'000'000'000, "TB"}, {1'000'000'000, "GB"}, {1'000'000, "MB"},
      {1'000, "KB"}};
  std::ostringstream out;
  out.imbue(std::locale::classic());
  for (const auto& u : kUnits) {
    const Rational scaled = bytes / u.scale;
    if (scaled.denominator() == 1 && scaled.numerator() > 0) {
      out << scaled.numerator() << ' ' << u.name;
      return out.str();
    }
  }
  for (const auto& u : kUnits) {
    const Rational scaled = bytes / u.scale;
    if (scaled >= 1) {
      out << std::fixed << std::setprecision(2)
          << boost::rational_cast<double>(scaled) << ' ' << u.name;
      return out.str();
    }
  }
  out << std::fixed << std::setprecision(2)
      << boost::rational_cast<double>(bytes) << " B";
  return out.str();
}

std::string scenario_table_csv(std::span<const ScenarioRow> rows) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  auto line = [&](const std::string& label, auto&& cell) {
    out << label;
    for (const auto& row : rows) out << ',' << cell(row);
    out << '\n';
  };
  auto number = [](auto v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << v;
    return s.str();
  };
  line("Parameter", [](const ScenarioRow& r) { return r.spec.name; });
  line("Application environment size", [&](const ScenarioRow& r) {
    return number(r.spec.env_width_m) + "m x " + number(r.spec.env_height_m) + "m";
  });
  line("User count", [&](const ScenarioRow& r) { return number(r.spec.users); });
  line("Library file count",
       [&](const ScenarioRow& r) { return number(r.spec.files); });
  line("User cache size", [](const ScenarioRow& r) {
    return format_bytes(Rational(static_cast<std::int64_t>(r.spec.cache_bytes)));
  });
  line("The coded caching gain (t)",
       [&](const ScenarioRow& r) { return number(r.coded_gain); });
  line("CC packet size",
       [](const ScenarioRow& r) { return format_bytes(r.packet_bytes); });
  line("CC packet size (bytes)", [&](const ScenarioRow& r) {
    return number(static_cast<std::int64_t>(
        std::llround(boost::rational_cast<double>(r.packet_bytes))));
  });
  line("Subpacketization",
       [&](const ScenarioRow& r) { return number(r.subpacketization); });
  line("CC scheme", [](const ScenarioRow& r) { return std::string(to_string(r.scheme)); });
  line("Transmitter spatial multiplexing gain (L)",
       [&](const ScenarioRow& r) { return number(r.spec.multiplexing_gain); });
  line("Parallel streams w/ CC (t+L)",
       [&](const ScenarioRow& r) { return number(r.parallel_streams); });
  line("Improvement by CC", [&](const ScenarioRow& r) {
    const auto& p = r.improvement_percent;
    if (p.denominator() == 1) return number(p.numerator()) + "%";
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << std::fixed << std::setprecision(2) << boost::rational_cast<double>(p)
      << '%';
    return s.str();
  });
  return out.str();
}

}  // namespace xrcc
