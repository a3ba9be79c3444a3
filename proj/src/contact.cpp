#include "polyshell/contact.hpp"

#include <algorithm>
#include <string>

namespace polyshell {

namespace {

DeformedConfig finish(std::shared_ptr<const EnergyModel> model, SolveResult solution, Phase phase,
                      const ContactOptions& opts) {
  DeformedConfig cfg;
  cfg.model = std::move(model);
  cfg.u = solution.u;
  cfg.solution = std::move(solution);
  cfg.phase = phase;
  cfg.deformed = deformed_vertices(cfg.polygon(), cfg.u);
  const double scale = cfg.polygon().circumradius();
  cfg.contact_set = detect_contacts(cfg.deformed, opts.contact_tol * scale);

  const double floor = -1e-9 * scale;
  for (std::size_t i = 0; i < cfg.deformed.size(); ++i)
    if (cfg.deformed[i].y < floor)
      throw SolverError("vertex " + std::to_string(i + 1) + " penetrates the surface",
                        cfg.solution);
  return cfg;
}

} // namespace

std::set<int> detect_contacts(std::span<const Vec2> vertices, double tol) {
  if (!(tol > 0.0))
    throw DomainError("contact tolerance must be positive");
  std::set<int> contacts{1};
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].y <= tol)
      contacts.insert(static_cast<int>(i) + 1);
  return contacts;
}

std::vector<Vec2> deformed_vertices(const Polygon& p, const Displacement& u) {
  if (u.size() != 2 * p.size() - 2)
    throw DomainError("displacement size does not match polygon");
  std::vector<Vec2> out(p.vertices().begin(), p.vertices().end());
  for (int label = 2; label <= p.size(); ++label)
    out[static_cast<std::size_t>(label - 1)] += Vec2{u(x_index(label)), u(y_index(label))};
  return out;
}

DeformedConfig indent(const Polygon& p, const ElasticParams& params, double f,
                      const ContactOptions& opts) {
  return indent(std::make_shared<const EnergyModel>(p, params, opts.bending_rows), f, opts);
}

DeformedConfig indent(std::shared_ptr<const EnergyModel> model, double f,
                      const ContactOptions& opts) {
  if (!(f >= 0.0) || !std::isfinite(f))
    throw DomainError("indentation force must be finite and >= 0");
  const Polygon& p = model->polygon();
  const auto force = ForceField::uniform(p.size(), {0.0, -f});
  auto solution = solve_pdas(*model, force, ConstraintSet::non_penetration(p), opts.solver);
  return finish(std::move(model), std::move(solution), Phase::indented, opts);
}

DeformedConfig relax(const DeformedConfig& cfg, const ContactOptions& opts) {
  if (cfg.phase != Phase::indented)
    throw DomainError("relax expects an indented configuration");
  const Polygon& p = cfg.polygon();
  ConstraintSet cons = ConstraintSet::non_penetration(p);
  for (int label : cfg.contact_set)
    if (label != 1)
      cons.pinned.insert(label);
  auto solution = solve_pdas(*cfg.model, ForceField::zero(p.size()), cons, opts.solver);
  return finish(cfg.model, std::move(solution), Phase::relaxed, opts);
}

} // namespace polyshell
