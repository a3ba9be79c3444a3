#include "polyshell/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace polyshell::verify {

namespace {

constexpr double kOracleTol = 1e-6;
constexpr double kKktTol = 1e-9;
constexpr double kVariationalTol = 1e-8;
constexpr double kUniquenessTol = 1e-9;
constexpr double kCrossOracleTol = 1e-8;
constexpr int kCrossOracleInstances = 10;

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

} // namespace

RandomInstance random_instance(std::mt19937_64& rng, int n_min, int n_max) {
  std::uniform_int_distribution<int> pick_n(n_min, n_max);
  const int n = pick_n(rng);
  ElasticParams params{log_uniform(rng, 0.1, 10.0), log_uniform(rng, 0.1, 10.0)};
  Polygon polygon(n, 1.0);

  const double magnitude = log_uniform(rng, 0.05, 2.0) * params.k;
  std::uniform_real_distribution<double> down(0.0, magnitude);
  std::normal_distribution<double> tangential(0.0, 0.2 * magnitude);
  ForceField force = ForceField::zero(n);
  for (Vec2& f : force.forces)
    f = {tangential(rng), -down(rng)};

  auto cons = ConstraintSet::non_penetration(polygon);
  return {EnergyModel(std::move(polygon), params), std::move(force), std::move(cons)};
}

Displacement random_feasible(std::mt19937_64& rng, const ConstraintSet& cons,
                             const Displacement& near) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool local = unit(rng) < 0.5;
  const double spread = local ? 1e-3 : 2.0;

  Displacement v(near.size());
  for (int j = 0; j < cons.size(); ++j) {
    const auto x = 2 * static_cast<Eigen::Index>(j);
    const double b = cons.lower_bounds[static_cast<std::size_t>(j)];
    v(x) = (local ? near(x) : 0.0) + spread * gauss(rng);
    if (cons.is_pinned(j)) {
      v(x + 1) = b;
    } else if (unit(rng) < 0.3) {
      v(x + 1) = b;
    } else {
      const double base = local ? near(x + 1) : b;
      v(x + 1) = std::max(b, base + spread * gauss(rng));
    }
  }
  return v;
}

double variational_inequality_margin(std::mt19937_64& rng, const Eigen::MatrixXd& hessian,
                                     const Eigen::VectorXd& force, const ConstraintSet& cons,
                                     const Displacement& u, int samples) {
  const Eigen::VectorXd residual = hessian * u - force;
  double margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s)
    margin = std::min(margin, residual.dot(random_feasible(rng, cons, u) - u));
  return margin;
}

std::vector<CheckResult> run_property_suite(const SuiteOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  SolverOptions solver;

  double worst_gap = 0.0;
  double worst_kkt = 0.0;
  double worst_vi = std::numeric_limits<double>::infinity();
  double worst_unique = 0.0;
  int failures = 0;
  std::string first_failure;

  for (int i = 0; i < opts.instances; ++i) {
    auto inst = random_instance(rng);
    try {
      const auto pdas = solve_pdas(inst.model, inst.force, inst.constraints, solver);
      const auto oracle =
          solve_oracle(inst.model, inst.force, inst.constraints, solver, OracleMethod::enumeration);
      worst_gap = std::max(worst_gap, (pdas.u - oracle.u).lpNorm<Eigen::Infinity>());
      worst_kkt = std::max(worst_kkt, pdas.residuals.max());
      worst_vi = std::min(worst_vi, variational_inequality_margin(
                                        rng, inst.model.hessian(), inst.force.to_vector(),
                                        inst.constraints, pdas.u, opts.vi_samples));

      SolverOptions from_all = solver;
      from_all.initial = InitialActiveSet::all;
      const auto other = solve_pdas(inst.model, inst.force, inst.constraints, from_all);
      worst_unique = std::max(worst_unique, (pdas.u - other.u).lpNorm<Eigen::Infinity>());
    } catch (const std::exception& e) {
      if (failures++ == 0)
        first_failure = e.what();
    }
  }

  double cross_gap = 0.0;
  for (int i = 0; i < kCrossOracleInstances; ++i) {
    auto inst = random_instance(rng, 6, 6);
    try {
      const auto a =
          solve_oracle(inst.model, inst.force, inst.constraints, solver, OracleMethod::enumeration);
      const auto b = solve_oracle(inst.model, inst.force, inst.constraints, solver,
                                  OracleMethod::projected_gradient);
      cross_gap = std::max(cross_gap, (a.u - b.u).lpNorm<Eigen::Infinity>());
    } catch (const std::exception& e) {
      if (failures++ == 0)
        first_failure = e.what();
    }
  }

  std::vector<CheckResult> out;
  out.push_back({"solver_failures", failures == 0,
                 failures == 0 ? "none" : std::to_string(failures) + ", first: " + first_failure});
  out.push_back({"pdas_vs_enumeration", worst_gap <= kOracleTol,
                 fmt("max |u_pdas - u_oracle|_inf = %.3e (tol %.0e)", worst_gap, kOracleTol)});
  out.push_back({"kkt_residuals", worst_kkt <= kKktTol,
                 fmt("max residual = %.3e (tol %.0e)", worst_kkt, kKktTol)});
  out.push_back({"variational_inequality", worst_vi >= -kVariationalTol,
                 fmt("min (Hu - F).(V - u) = %.3e (floor -%.0e)", worst_vi, kVariationalTol)});
  out.push_back({"uniqueness_initial_sets", worst_unique <= kUniquenessTol,
                 fmt("max |u_empty - u_all|_inf = %.3e (tol %.0e)", worst_unique, kUniquenessTol)});
  out.push_back({"enumeration_vs_projected_gradient", cross_gap <= kCrossOracleTol,
                 fmt("max gap = %.3e (tol %.0e)", cross_gap, kCrossOracleTol)});
  return out;
}

} // namespace polyshell::verify
