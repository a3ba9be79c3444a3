#pragma once

#include <memory>
#include <set>
#include <span>
#include <vector>

#include "polyshell/energy.hpp"
#include "polyshell/geometry.hpp"
#include "polyshell/solver.hpp"

namespace polyshell {

enum class Phase { indented, relaxed };

struct ContactOptions {
  /// Contact tolerance in units of the circumradius.
  double contact_tol = 1e-7;
  SolverOptions solver;
  BendingRows bending_rows = BendingRows::all;
};

/// Deformed polygon after one phase of the experiment.
struct DeformedConfig {
  std::shared_ptr<const EnergyModel> model;
  Displacement u;
  std::vector<Vec2> deformed;  ///< P1'..Pn', P1' == P1
  std::set<int> contact_set;   ///< 1-based labels on the surface
  Phase phase = Phase::indented;
  SolveResult solution;

  const Polygon& polygon() const { return model->polygon(); }
  int size() const { return polygon().size(); }
  double elastic_energy() const { return model->total_energy(u); }
};

/// Labels i with y_i <= tol. P1 is always included.
std::set<int> detect_contacts(std::span<const Vec2> vertices, double tol);

/// Reference vertices shifted by u (u_1 = 0).
std::vector<Vec2> deformed_vertices(const Polygon& p, const Displacement& u);

/// Phase I: uniform downward force f on P2..Pn, non-penetration only.
DeformedConfig indent(const Polygon& p, const ElasticParams& params, double f,
                      const ContactOptions& opts = {});
DeformedConfig indent(std::shared_ptr<const EnergyModel> model, double f,
                      const ContactOptions& opts = {});

/// Phase II: force removed, contact vertices stay on the surface but may
/// slide horizontally; all other vertices keep the non-penetration bound.
DeformedConfig relax(const DeformedConfig& cfg, const ContactOptions& opts = {});

} // namespace polyshell
