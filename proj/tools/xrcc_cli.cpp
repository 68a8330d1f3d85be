// Command-line front end: scenario tables, decodability sweeps, delivery
// time simulations and dynamic shared-cache DoF sweeps. Every subcommand
// writes CSV to --out or stdout.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xrcc/dynamic_cc.hpp"
#include "xrcc/errors.hpp"
#include "xrcc/harness.hpp"
#include "xrcc/verify.hpp"
#include "xrcc/xr_env.hpp"

namespace {

using xrcc::Rational;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw xrcc::ArgumentError("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void emit(const std::string& csv, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw xrcc::ArgumentError("cannot write " + out_path);
  out << csv;
}

/// "1/4", "0.25" or "3" as an exact fraction.
Rational parse_rational(std::string text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(std::stoll(text.substr(0, slash)),
                    std::stoll(text.substr(slash + 1)));
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text));
  const std::string digits = text.substr(dot + 1);
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < digits.size(); ++i) scale *= 10;
  const std::int64_t whole = dot == 0 ? 0 : std::stoll(text.substr(0, dot));
  const bool negative = !text.empty() && text[0] == '-';
  const std::int64_t frac = digits.empty() ? 0 : std::stoll(digits);
  return Rational(whole) + Rational(negative ? -frac : frac, scale);
}

Rational json_rational(const nlohmann::json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  return parse_rational(value.dump());
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

/// Applies the keys present in `j` on top of `config`.
void apply_json(const nlohmann::json& j, xrcc::ExperimentConfig& config) {
  if (j.contains("users")) config.users = j.at("users").get<int>();
  if (j.contains("cache_fraction")) config.cache_fraction = json_rational(j.at("cache_fraction"));
  if (j.contains("L")) config.multiplexing_gain = j.at("L").get<int>();
  if (j.contains("antennas")) config.antennas = j.at("antennas").get<int>();
  if (j.contains("env_m")) config.env_m = j.at("env_m").get<double>();
  if (j.contains("stu_m")) config.stu_m = j.at("stu_m").get<double>();
  if (j.contains("image_bits")) config.image_bits = j.at("image_bits").get<double>();
  if (j.contains("image_bytes")) config.image_bits = 8.0 * j.at("image_bytes").get<double>();
  if (j.contains("profiles")) config.profiles = j.at("profiles").get<int>();
  if (j.contains("trials")) config.trials = j.at("trials").get<int>();
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  auto& ch = config.channel;
  if (j.contains("pathloss_exponent")) ch.pathloss_exponent = j.at("pathloss_exponent").get<double>();
  if (j.contains("reference_distance_m")) ch.reference_distance_m = j.at("reference_distance_m").get<double>();
  if (j.contains("shadowing_std_db")) ch.shadowing_std_db = j.at("shadowing_std_db").get<double>();
  if (j.contains("noise_power")) ch.noise_power = j.at("noise_power").get<double>();
  if (j.contains("transmit_power")) ch.transmit_power = j.at("transmit_power").get<double>();
  if (j.contains("bandwidth_hz")) ch.bandwidth_hz = j.at("bandwidth_hz").get<double>();
}

std::vector<xrcc::Scheme> parse_schemes(const std::vector<std::string>& names) {
  std::vector<xrcc::Scheme> out;
  for (const auto& name : names) {
    const auto scheme = xrcc::scheme_from_string(name);
    if (!scheme) throw xrcc::ArgumentError("unknown scheme " + name);
    out.push_back(*scheme);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coded caching for collaborative XR: dimensioning and simulation"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::uint64_t seed = 1;
  int trials = 0;
  auto common = [&](CLI::App* sub, bool with_seed) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", out_path, "CSV output path (default: stdout)");
    if (with_seed) {
      sub->add_option("--seed", seed, "master seed");
      sub->add_option("--trials", trials, "number of trials");
    }
  };

  auto* table = app.add_subcommand("scenario-table", "XR dimensioning table as CSV");
  common(table, false);

  auto* verify = app.add_subcommand("codec-verify", "exhaustive decodability report");
  common(verify, true);
  int max_users = 4, max_files = 4, max_l = 2;
  std::size_t file_size = 24;
  verify->add_option("--max-users", max_users);
  verify->add_option("--max-files", max_files);
  verify->add_option("--max-l", max_l);
  verify->add_option("--file-size", file_size, "bytes per file");

  auto* simulate = app.add_subcommand("simulate", "delivery time CDFs per scheme");
  common(simulate, true);
  std::vector<std::string> scheme_names{"uniform_unicast", "nonuniform_unicast",
                                        "baseline_cc", "nonuniform_cc"};
  std::string preset = "desk";
  simulate->add_option("--schemes", scheme_names, "schemes to run")->delimiter(',');
  simulate->add_option("--preset", preset, "desk or large")
      ->check(CLI::IsMember({"desk", "large"}));

  auto* dof = app.add_subcommand("dynamic-dof", "shared-cache DoF versus skew");
  common(dof, true);
  int users = 50, profiles = 10, coded_gain = 5, mux = 9, seeds = 200, units = 0;
  std::string sigma_grid = "0,2,5,10,15";
  dof->add_option("--users", users);
  dof->add_option("--profiles", profiles);
  dof->add_option("--t", coded_gain);
  dof->add_option("--l", mux);
  dof->add_option("--sigma-grid", sigma_grid, "comma-separated sigma values");
  dof->add_option("--seeds", seeds, "assignments per sigma");
  dof->add_option("--units", units, "data units per user (default (t+L)L)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (table->parsed()) {
      const auto specs = config_path.empty()
                             ? xrcc::reference_scenarios()
                             : xrcc::scenarios_from_json(read_file(config_path));
      std::vector<xrcc::ScenarioRow> rows;
      for (const auto& spec : specs) rows.push_back(xrcc::scenario_metrics(spec));
      emit(xrcc::scenario_table_csv(rows), out_path);
      return 0;
    }

    if (verify->parsed()) {
      if (!config_path.empty()) {
        const auto j = nlohmann::json::parse(read_file(config_path));
        max_users = j.value("max_users", max_users);
        max_files = j.value("max_files", max_files);
        max_l = j.value("max_l", max_l);
        file_size = j.value("file_size", file_size);
      }
      const auto rows =
          xrcc::verify_decodability(max_users, max_files, max_l, file_size, seed);
      emit(xrcc::decodability_csv(rows), out_path);
      for (const auto& row : rows) {
        if (row.failures > 0) return 1;
      }
      return 0;
    }

    if (simulate->parsed()) {
      nlohmann::json j = nlohmann::json::object();
      if (!config_path.empty()) j = nlohmann::json::parse(read_file(config_path));
      if (j.contains("schemes")) {
        scheme_names = j.at("schemes").get<std::vector<std::string>>();
      }
      if (j.contains("preset")) preset = j.at("preset").get<std::string>();
      std::vector<xrcc::MetricReport> reports;
      for (auto scheme : parse_schemes(scheme_names)) {
        auto config = preset == "large" ? xrcc::large_config(scheme)
                                        : xrcc::desk_config(scheme);
        apply_json(j, config);
        if (simulate->count("--seed") > 0) config.seed = seed;
        if (trials > 0) config.trials = trials;
        reports.push_back(xrcc::run_experiment(config));
        const auto& r = reports.back();
        std::cerr << std::setprecision(6) << xrcc::to_string(scheme)
                  << ": mean " << r.mean_total() << " s, variance "
                  << r.variance_total() << ", failed " << r.failed_count() << '/'
                  << r.trials.size() << '\n';
      }
      emit(xrcc::cdf_csv(reports), out_path);
      return 0;
    }

    if (dof->parsed()) {
      if (!config_path.empty()) {
        const auto j = nlohmann::json::parse(read_file(config_path));
        users = j.value("users", users);
        profiles = j.value("profiles", profiles);
        coded_gain = j.value("t", coded_gain);
        mux = j.value("L", mux);
        seeds = j.value("seeds", seeds);
        units = j.value("units", units);
        if (j.contains("sigma_grid")) {
          std::ostringstream grid;
          for (double s : j.at("sigma_grid").get<std::vector<double>>()) grid << s << ',';
          sigma_grid = grid.str();
        }
      }
      if (trials > 0) seeds = trials;
      if (units <= 0) units = (coded_gain + mux) * mux;
      std::ostringstream out;
      out.imbue(std::locale::classic());
      out << "sigma,mean_dof,std\n" << std::setprecision(17);
      for (double sigma : parse_list(sigma_grid)) {
        std::vector<double> values;
        for (int s = 0; s < seeds; ++s) {
          const auto assignment = xrcc::assign_users(
              users, profiles, sigma, xrcc::trial_seed(seed, s));
          values.push_back(xrcc::normalized_dof(
              xrcc::schedule_dynamic(assignment, coded_gain, mux, units)));
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        const double sd =
            values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
        out << sigma << ',' << mean << ',' << sd << '\n';
      }
      emit(out.str(), out_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
