#include "config.hpp"

#include <filesystem>
#include <fstream>

#include "gpbog/errors.hpp"

namespace gpbog::cli {

namespace {

void check_paths(const json& j, const std::filesystem::path& base) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      if (k.size() > 5 && k.compare(k.size() - 5, 5, "_path") == 0) {
        if (!it->is_string()) throw ValidationError("config field '" + k + "' must be a string");
        std::filesystem::path p = it->get<std::string>();
        if (p.is_relative()) p = base / p;
        if (!std::filesystem::exists(p)) throw ValidationError("config field '" + k + "' names a missing file: " + p.string());
      } else {
        check_paths(*it, base);
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) check_paths(v, base);
  }
}

std::string resolve(const json& j, const std::string& key) {
  std::filesystem::path p = j.at(key).get<std::string>();
  if (p.is_relative() && j.contains("__base")) p = std::filesystem::path(j.at("__base").get<std::string>()) / p;
  return p.string();
}

void stamp_base(json& j, const std::string& base) {
  if (j.is_object()) {
    bool has_path = false;
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      if (k.size() > 5 && k.compare(k.size() - 5, 5, "_path") == 0) has_path = true;
      stamp_base(*it, base);
    }
    if (has_path) j["__base"] = base;
  } else if (j.is_array()) {
    for (auto& v : j) stamp_base(v, base);
  }
}

}  // namespace

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config file must hold a JSON object");
  const auto base = std::filesystem::absolute(path).parent_path();
  check_paths(j, base);
  stamp_base(j, base.string());
  return j;
}

double number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ValidationError("config field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

int integer(const json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ValidationError("config field '" + key + "' must be an integer");
  return j.at(key).get<int>();
}

bool flag(const json& j, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ValidationError("config field '" + key + "' must be true or false");
  return j.at(key).get<bool>();
}

std::vector<double> number_list(const json& j, const std::string& key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.empty()) throw ValidationError("config field '" + key + "' must be a non-empty list");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ValidationError("config field '" + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

const json& section(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_object()) throw ValidationError("config needs an object '" + key + "'");
  return j.at(key);
}

RadialPotential potential_from(const json& j) {
  const json& p = section(j, "potential");
  if (!p.contains("kind") || !p.at("kind").is_string()) throw ValidationError("potential needs a 'kind'");
  const auto kind = potential_kind_from_string(p.at("kind").get<std::string>());
  const double R0 = number(p, "R0_length", 1.0);
  switch (kind) {
    case PotentialKind::square_well: return RadialPotential::square_well(number(p, "V0_energy", 10.0), R0);
    case PotentialKind::gaussian_truncated: return RadialPotential::gaussian_truncated(number(p, "V0_energy", 10.0), R0);
    case PotentialKind::hard_sphere: return RadialPotential::hard_sphere(R0);
    case PotentialKind::tabulated:
      if (!p.contains("table_path")) throw ValidationError("tabulated potential needs 'table_path'");
      return RadialPotential::read_table_file(resolve(p, "table_path"));
  }
  throw ValidationError("unsupported potential kind");
}

std::shared_ptr<const ScatteringSolution> scattering_from(const json& j) {
  const RadialPotential v = potential_from(j);
  const double r_max = number(j, "r_max_length", std::max(6.0 * v.R0, v.R0 + 4.0));
  const int n = integer(j, "radial_points", 3001);
  if (n < 2) throw ValidationError("radial_points must be at least 2");
  return std::make_shared<const ScatteringSolution>(solve_scattering(v, r_max, static_cast<std::size_t>(n)));
}

TrapPotential trap_from(const json& j) {
  const json& t = section(j, "trap");
  if (!t.contains("kind") || !t.at("kind").is_string()) throw ValidationError("trap needs a 'kind'");
  const std::string kind = t.at("kind").get<std::string>();
  const int M = integer(t, "grid_points", 32);
  const double L = number(t, "half_width_length", 8.0);
  if (kind == "torus" || kind == to_string(TrapKind::zero_on_torus)) return TrapPotential::torus(M);
  if (kind == "harmonic")
    return TrapPotential::harmonic(L, M, number_list(t, "coefficients", {1.0, 1.0, 1.0}));
  if (kind == "quartic") return TrapPotential::quartic(L, M, number(t, "c4", 1.0), number(t, "c2", 0.0));
  if (kind == "tabulated" || kind == to_string(TrapKind::tabulated_grid)) {
    if (!t.contains("values_path")) throw ValidationError("tabulated trap needs 'values_path'");
    std::ifstream in(resolve(t, "values_path"));
    std::vector<double> values;
    double x;
    while (in >> x) values.push_back(x);
    return TrapPotential::tabulated(L, M, std::move(values));
  }
  throw ValidationError("unknown trap kind '" + kind + "'");
}

}  // namespace gpbog::cli
