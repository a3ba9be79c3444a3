#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyshell/contact.hpp"
#include "polyshell/energy.hpp"

namespace polyshell {

/// Bad or inconsistent experiment configuration. `field()` names the key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("invalid value for '" + field + "': " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

enum class ForceMode { per_vertex, total };

struct ExperimentConfig {
  int n = 10;
  double circumradius = 1.0;
  double k = 1.0;
  double kappa = 1.0;

  ForceMode force_mode = ForceMode::per_vertex;
  double f = 0.25;
  double f_min = 0.0;
  double f_max = 1.2;
  int f_steps = 50;
  std::vector<double> f_grid;  ///< explicit grid, overrides f_min/f_max/f_steps

  std::vector<int> counts{3, 5, 7};
  std::vector<int> n_list{10, 15, 20, 25, 30, 35, 40};
  double total_force = 2.25;
  int resample_points = 720;

  double contact_tol = 1e-7;
  double stat_tol = 1e-10;
  double feas_tol = 1e-10;
  double comp_tol = 1e-10;
  double c_pdas = 1.0;
  int max_iters = 0;
  BendingRows bending_rows = BendingRows::all;

  std::string out;
  std::string svg;
  std::uint64_t seed = 42;
  int instances = 100;

  ElasticParams params() const { return {k, kappa}; }
  ContactOptions contact_options() const;
  /// Per-vertex force for the configured force value and convention.
  double per_vertex(double value) const;
  /// The sweep grid (explicit, or f_steps evenly spaced points on [f_min, f_max]).
  std::vector<double> grid() const;
  void validate() const;
};

/// Names accepted in config files and as --flags.
const std::vector<std::string>& config_keys();

/// Sets one key from its textual value. Throws ConfigError naming the key.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat "key = value" lines; '#' starts a comment, blank lines are skipped.
std::map<std::string, std::string> read_config_file(const std::string& path);

} // namespace polyshell
