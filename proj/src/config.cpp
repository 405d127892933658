#include "slabrad/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace slabrad {

const std::vector<FieldSpec>& config_schema() {
  static const std::vector<FieldSpec> schema = {
      {"environment", FieldType::String, "slab", "host medium", {"slab", "homogeneous"}},
      {"wavelength_nm", FieldType::Number, 980.0, "free-space wavelength [nm]", {}},
      {"slab.index", FieldType::Number, 3.5, "core (or bulk) refractive index", {}},
      {"slab.width_nm", FieldType::Number, 200.0, "slab thickness W [nm]", {}},
      {"slab.cladding_index", FieldType::Number, 1.0, "cladding index on both sides", {}},
      {"slab.emitter_z_nm", FieldType::Number, 0.0, "emitter height above the mid-plane [nm]", {}},
      {"dipole.orientation", FieldType::String, "y", "shared dipole axis", {"x", "y", "z"}},
      {"lattice.kind", FieldType::String, "chain", "array geometry", {"chain", "square", "hexagonal"}},
      {"lattice.sites", FieldType::Integer, 5, "number of emitters", {}},
      {"lattice.d_over_lambda", FieldType::Number, 0.54, "spacing d/lambda, lambda = lambda0/n", {}},
      {"sweep.d_min_over_lambda", FieldType::Number, 0.05, "first d/lambda of sweeps", {}},
      {"sweep.d_max_over_lambda", FieldType::Number, 10.0, "last d/lambda of sweeps", {}},
      {"sweep.d_points", FieldType::Integer, 400, "points on the d/lambda axis", {}},
      {"sweep.phi_points", FieldType::Integer, 360, "points on the phi axis over [0, 2 pi)", {}},
      {"sweep.phi_over_pi", FieldType::Number, 0.22, "fixed direction for sizesweep [pi]", {}},
      {"sweep.N_list", FieldType::IntegerList, json::array({2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 25, 30}),
       "array sizes for sizesweep", {}},
      {"sweep.criterion", FieldType::String, "directional", "map value", {"directional", "total"}},
      {"modes.width_min_nm", FieldType::Number, 10.0, "first slab width of the modes sweep [nm]", {}},
      {"modes.width_max_nm", FieldType::Number, 1000.0, "last slab width [nm]", {}},
      {"modes.width_points", FieldType::Integer, 100, "slab widths", {}},
      {"disorder.sigma_over_d", FieldType::NumberList, json::array({0.0, 0.5}), "disorder strengths", {}},
      {"disorder.realizations", FieldType::Integer, 500, "realizations per sigma", {}},
      {"disorder.seed", FieldType::Integer, 1, "RNG seed", {}},
      {"scaling.alpha", FieldType::NumberList, json::array({0.5, 1.0}), "power-law exponents", {}},
      {"scaling.N_list_1d", FieldType::IntegerList,
       json::array({8, 16, 32, 64, 128, 256, 512, 1024}), "chain sizes", {}},
      {"scaling.N_list_2d", FieldType::IntegerList,
       json::array({64, 256, 1024, 4096, 16384}), "square-lattice sizes (perfect squares)", {}},
      {"oracle.n", FieldType::Integer, 3, "emitters per oracle case (1..6)", {}},
      {"oracle.seed", FieldType::Integer, 7, "oracle RNG seed", {}},
      {"oracle.cases", FieldType::Integer, 6, "random geometries", {}},
      {"oracle.phi_samples", FieldType::Integer, 4, "random directions per case", {}},
      {"oracle.rel_tol", FieldType::Number, 1e-4, "pass threshold", {}},
      {"quadrature.detour_height", FieldType::Number, 0.05, "contour depth [k0]", {}},
      {"quadrature.k_max_over_k0", FieldType::Number, 20.0, "real-axis extent before the tail [k0]", {}},
      {"quadrature.rel_tol", FieldType::Number, 1e-8, "Sommerfeld integral tolerance", {}},
      {"quadrature.tail_terms", FieldType::Integer, 8, "half-periods in the tail test", {}},
      {"output.path", FieldType::String, "slabrad_out.csv", "result file", {}},
      {"output.format", FieldType::String, "csv", "result format", {"csv", "json"}},
  };
  return schema;
}

namespace {

json::json_pointer pointer(const std::string& path) {
  std::string p = "/";
  for (char c : path) p += c == '.' ? '/' : c;
  return json::json_pointer(p);
}

const FieldSpec* find_field(const std::string& path) {
  for (const auto& f : config_schema())
    if (f.path == path) return &f;
  return nullptr;
}

bool is_section(const std::string& path) {
  for (const auto& f : config_schema())
    if (f.path.rfind(path + ".", 0) == 0) return true;
  return false;
}

std::string locate(const std::string& text, const std::string& key) {
  if (text.empty()) return {};
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return {};
  const auto line = 1 + std::count(text.begin(), text.begin() + long(pos), '\n');
  return " (line " + std::to_string(line) + ")";
}

bool type_ok(const json& v, FieldType t) {
  switch (t) {
    case FieldType::Number: return v.is_number();
    case FieldType::Integer: return v.is_number_integer();
    case FieldType::String: return v.is_string();
    case FieldType::NumberList:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); });
    case FieldType::IntegerList:
      return v.is_array() &&
             std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_integer(); });
  }
  return false;
}

const char* type_name(FieldType t) {
  switch (t) {
    case FieldType::Number: return "a number";
    case FieldType::Integer: return "an integer";
    case FieldType::String: return "a string";
    case FieldType::NumberList: return "a list of numbers";
    case FieldType::IntegerList: return "a list of integers";
  }
  return "?";
}

void check_choice(const FieldSpec& f, const json& v, const std::string& where) {
  if (f.choices.empty()) return;
  const auto s = v.get<std::string>();
  if (std::find(f.choices.begin(), f.choices.end(), s) == f.choices.end()) {
    std::string all;
    for (const auto& c : f.choices) all += (all.empty() ? "" : "|") + c;
    throw ConfigError("config key '" + f.path + "'" + where + ": '" + s + "' is not one of " + all);
  }
}

void merge(json& out, const json& user, const std::string& prefix, const std::string& text) {
  if (!user.is_object()) {
    throw ConfigError("config section '" + (prefix.empty() ? std::string("<root>") : prefix) +
                      "' must be an object");
  }
  for (const auto& [key, value] : user.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    const std::string where = locate(text, key);
    if (const FieldSpec* f = find_field(path)) {
      if (!type_ok(value, f->type)) {
        throw ConfigError("config key '" + path + "'" + where + " must be " + type_name(f->type));
      }
      check_choice(*f, value, where);
      out[pointer(path)] = value;
    } else if (is_section(path)) {
      merge(out, value, path, text);
    } else {
      throw ConfigError("unknown config key '" + path + "'" + where);
    }
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double to_number(const std::string& path, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ConfigError("config key '" + path + "': '" + s + "' is not a number");
  return v;
}

long long to_integer(const std::string& path, const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ConfigError("config key '" + path + "': '" + s + "' is not an integer");
  return v;
}

}  // namespace

json default_config() {
  json out = json::object();
  for (const auto& f : config_schema()) out[pointer(f.path)] = f.default_value;
  return out;
}

json resolve_config(const json& user, const std::string& text) {
  json out = default_config();
  if (user.is_object() && user.contains("config") && user.contains("subcommand")) {
    merge(out, user.at("config"), "", text);
  } else {
    merge(out, user, "", text);
  }
  validate_config(out);
  return out;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return resolve_config(doc, text);
}

void set_field(json& config, const std::string& path, const std::string& value) {
  const FieldSpec* f = find_field(path);
  if (!f) throw ConfigError("unknown config key '" + path + "'");
  json v;
  switch (f->type) {
    case FieldType::Number: v = to_number(path, value); break;
    case FieldType::Integer: v = to_integer(path, value); break;
    case FieldType::String: v = value; break;
    case FieldType::NumberList:
      v = json::array();
      for (const auto& s : split(value)) v.push_back(to_number(path, s));
      break;
    case FieldType::IntegerList:
      v = json::array();
      for (const auto& s : split(value)) v.push_back(to_integer(path, s));
      break;
  }
  check_choice(*f, v, "");
  config[pointer(path)] = v;
}

const json& at_path(const json& config, const std::string& path) {
  return config.at(pointer(path));
}

void validate_config(const json& c) {
  auto positive = [&](const std::string& path) {
    const double v = at_path(c, path).get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("config key '" + path + "' must be positive");
  };
  for (const char* p : {"wavelength_nm", "slab.index", "slab.width_nm", "slab.cladding_index",
                        "lattice.d_over_lambda", "sweep.d_min_over_lambda", "sweep.d_max_over_lambda",
                        "modes.width_min_nm", "modes.width_max_nm", "quadrature.detour_height",
                        "quadrature.k_max_over_k0", "quadrature.rel_tol", "oracle.rel_tol"}) {
    positive(p);
  }
  for (const char* p : {"lattice.sites", "disorder.realizations", "oracle.n", "oracle.cases",
                        "oracle.phi_samples", "quadrature.tail_terms"}) {
    if (at_path(c, p).get<long long>() < 1) throw ConfigError(std::string("config key '") + p + "' must be positive");
  }
  for (const char* p : {"sweep.d_points", "sweep.phi_points", "modes.width_points"}) {
    if (at_path(c, p).get<long long>() < 0) throw ConfigError(std::string("config key '") + p + "' must be >= 0");
  }
  if (at_path(c, "disorder.seed").get<long long>() < 0 || at_path(c, "oracle.seed").get<long long>() < 0) {
    throw ConfigError("seeds must be non-negative");
  }
  for (const auto& s : at_path(c, "disorder.sigma_over_d")) {
    if (!(s.get<double>() >= 0.0)) throw ConfigError("config key 'disorder.sigma_over_d' entries must be >= 0");
  }
  if (at_path(c, "slab.cladding_index").get<double>() >= at_path(c, "slab.index").get<double>()) {
    throw ConfigError("config key 'slab.cladding_index' must be below 'slab.index'");
  }
}

}  // namespace slabrad
