#include "polyshell/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace polyshell {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v))
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  return v;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& text, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    out.push_back(static_cast<T>(parse(key, item)));
  if (out.empty())
    throw ConfigError(key, "expected a comma-separated list");
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"n", [](auto& c, auto& k, auto& v) { c.n = static_cast<int>(parse_int(k, v)); }},
      {"circumradius", [](auto& c, auto& k, auto& v) { c.circumradius = parse_real(k, v); }},
      {"k", [](auto& c, auto& k, auto& v) { c.k = parse_real(k, v); }},
      {"kappa", [](auto& c, auto& k, auto& v) { c.kappa = parse_real(k, v); }},
      {"force_mode",
       [](auto& c, auto& k, auto& v) {
         const auto t = trim(v);
         if (t == "per_vertex")
           c.force_mode = ForceMode::per_vertex;
         else if (t == "total")
           c.force_mode = ForceMode::total;
         else
           throw ConfigError(k, "expected 'per_vertex' or 'total', got '" + v + "'");
       }},
      {"f", [](auto& c, auto& k, auto& v) { c.f = parse_real(k, v); }},
      {"f_min", [](auto& c, auto& k, auto& v) { c.f_min = parse_real(k, v); }},
      {"f_max", [](auto& c, auto& k, auto& v) { c.f_max = parse_real(k, v); }},
      {"f_steps", [](auto& c, auto& k, auto& v) { c.f_steps = static_cast<int>(parse_int(k, v)); }},
      {"f_grid", [](auto& c, auto& k, auto& v) { c.f_grid = parse_list<double>(k, v, parse_real); }},
      {"counts", [](auto& c, auto& k, auto& v) { c.counts = parse_list<int>(k, v, parse_int); }},
      {"n_list", [](auto& c, auto& k, auto& v) { c.n_list = parse_list<int>(k, v, parse_int); }},
      {"total_force", [](auto& c, auto& k, auto& v) { c.total_force = parse_real(k, v); }},
      {"resample_points",
       [](auto& c, auto& k, auto& v) { c.resample_points = static_cast<int>(parse_int(k, v)); }},
      {"contact_tol", [](auto& c, auto& k, auto& v) { c.contact_tol = parse_real(k, v); }},
      {"stat_tol", [](auto& c, auto& k, auto& v) { c.stat_tol = parse_real(k, v); }},
      {"feas_tol", [](auto& c, auto& k, auto& v) { c.feas_tol = parse_real(k, v); }},
      {"comp_tol", [](auto& c, auto& k, auto& v) { c.comp_tol = parse_real(k, v); }},
      {"c_pdas", [](auto& c, auto& k, auto& v) { c.c_pdas = parse_real(k, v); }},
      {"max_iters",
       [](auto& c, auto& k, auto& v) { c.max_iters = static_cast<int>(parse_int(k, v)); }},
      {"bending_rows",
       [](auto& c, auto& k, auto& v) {
         const auto t = trim(v);
         if (t == "all")
           c.bending_rows = BendingRows::all;
         else if (t == "free_only")
           c.bending_rows = BendingRows::free_only;
         else
           throw ConfigError(k, "expected 'all' or 'free_only', got '" + v + "'");
       }},
      {"out", [](auto& c, auto&, auto& v) { c.out = trim(v); }},
      {"svg", [](auto& c, auto&, auto& v) { c.svg = trim(v); }},
      {"seed",
       [](auto& c, auto& k, auto& v) {
         const auto s = parse_int(k, v);
         if (s < 0)
           throw ConfigError(k, "must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"instances",
       [](auto& c, auto& k, auto& v) { c.instances = static_cast<int>(parse_int(k, v)); }},
  };
  return table;
}

} // namespace

ContactOptions ExperimentConfig::contact_options() const {
  ContactOptions o;
  o.contact_tol = contact_tol;
  o.bending_rows = bending_rows;
  o.solver.stat_tol = stat_tol;
  o.solver.feas_tol = feas_tol;
  o.solver.comp_tol = comp_tol;
  o.solver.c_pdas = c_pdas;
  o.solver.max_iters = max_iters;
  return o;
}

double ExperimentConfig::per_vertex(double value) const {
  return force_mode == ForceMode::total ? value / (n - 1) : value;
}

std::vector<double> ExperimentConfig::grid() const {
  if (!f_grid.empty())
    return f_grid;
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(f_steps));
  for (int i = 0; i < f_steps; ++i)
    g.push_back(f_steps == 1 ? f_min : f_min + (f_max - f_min) * i / (f_steps - 1));
  return g;
}

void ExperimentConfig::validate() const {
  if (n < 3)
    throw ConfigError("n", "must be >= 3");
  if (!(circumradius > 0.0))
    throw ConfigError("circumradius", "must be > 0");
  if (!(k > 0.0))
    throw ConfigError("k", "must be > 0");
  if (!(kappa > 0.0))
    throw ConfigError("kappa", "must be > 0");
  if (!(f >= 0.0))
    throw ConfigError("f", "must be >= 0");
  if (f_grid.empty()) {
    if (!(f_min >= 0.0))
      throw ConfigError("f_min", "must be >= 0");
    if (!(f_max >= f_min))
      throw ConfigError("f_max", "must be >= f_min");
    if (f_steps < 1)
      throw ConfigError("f_steps", "must be >= 1");
  } else {
    for (std::size_t i = 0; i < f_grid.size(); ++i) {
      if (!(f_grid[i] >= 0.0))
        throw ConfigError("f_grid", "values must be >= 0");
      if (i > 0 && f_grid[i] < f_grid[i - 1])
        throw ConfigError("f_grid", "must be sorted ascending");
    }
  }
  for (int c : counts)
    if (c < 1)
      throw ConfigError("counts", "contact counts must be >= 1");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 3)
      throw ConfigError("n_list", "vertex counts must be >= 3");
    if (i > 0 && n_list[i] < n_list[i - 1])
      throw ConfigError("n_list", "must be sorted ascending");
  }
  if (!(total_force >= 0.0))
    throw ConfigError("total_force", "must be >= 0");
  if (resample_points < 3)
    throw ConfigError("resample_points", "must be >= 3");
  if (!(contact_tol > 0.0))
    throw ConfigError("contact_tol", "must be > 0");
  if (!(stat_tol > 0.0))
    throw ConfigError("stat_tol", "must be > 0");
  if (!(feas_tol > 0.0))
    throw ConfigError("feas_tol", "must be > 0");
  if (!(comp_tol > 0.0))
    throw ConfigError("comp_tol", "must be > 0");
  if (!(c_pdas > 0.0))
    throw ConfigError("c_pdas", "must be > 0");
  if (max_iters < 0)
    throw ConfigError("max_iters", "must be >= 0");
  if (instances < 1)
    throw ConfigError("instances", "must be >= 1");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [key, _] : setters())
      out.push_back(key);
    return out;
  }();
  return keys;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end())
    throw ConfigError(key, "unknown configuration key");
  it->second(cfg, key, value);
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config", "cannot open '" + path + "'");
  std::map<std::string, std::string> out;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", path + ":" + std::to_string(line_no) + ": expected key = value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

} // namespace polyshell
