#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpbog/gp_solver.hpp"
#include "gpbog/scattering.hpp"
#include "gpbog/serialization.hpp"

namespace gpbog::cli {

enum class Format { csv, json };

struct RunConfig {
  std::string subcommand;
  json body = json::object();  // parsed --config file, empty object without one
  std::uint64_t seed = 42;
  unsigned threads = 1;
  std::string out;             // empty writes to standard output
  std::optional<Format> format;
  bool verbose = false;
};

/// Parses the file and checks that every *_path field names an existing file.
json load_config(const std::string& path);

double number(const json& j, const std::string& key, double fallback);
int integer(const json& j, const std::string& key, int fallback);
bool flag(const json& j, const std::string& key, bool fallback);
std::vector<double> number_list(const json& j, const std::string& key, std::vector<double> fallback);
const json& section(const json& j, const std::string& key);

/// "potential": {"kind", "V0_energy", "R0_length", "table_path"}.
RadialPotential potential_from(const json& j);
/// Scattering solve from "potential", "r_max_length" and "radial_points".
std::shared_ptr<const ScatteringSolution> scattering_from(const json& j);
/// "trap": {"kind", "half_width_length", "grid_points", "coefficients", "values_path"}.
TrapPotential trap_from(const json& j);

}  // namespace gpbog::cli
