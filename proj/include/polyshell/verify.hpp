#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "polyshell/energy.hpp"
#include "polyshell/solver.hpp"

namespace polyshell::verify {

struct RandomInstance {
  EnergyModel model;
  ForceField force;
  ConstraintSet constraints;
};

/// Polygon with n in [n_min, n_max], log-uniform k and kappa in [0.1, 10],
/// and random downward vertex forces (with a smaller tangential part).
RandomInstance random_instance(std::mt19937_64& rng, int n_min = 3, int n_max = 8);

/// Random point of the admissible set: vertical components on or above their
/// bounds (pinned ones exactly on), horizontal components unconstrained. Half
/// the samples are small perturbations of `near`.
Displacement random_feasible(std::mt19937_64& rng, const ConstraintSet& cons,
                             const Displacement& near);

/// min over `samples` random feasible V of (H u - F) . (V - u).
double variational_inequality_margin(std::mt19937_64& rng, const Eigen::MatrixXd& hessian,
                                     const Eigen::VectorXd& force, const ConstraintSet& cons,
                                     const Displacement& u, int samples);

struct SuiteOptions {
  std::uint64_t seed = 42;
  int instances = 100;
  int vi_samples = 1000;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Oracle equivalence, KKT residuals, the variational inequality, uniqueness
/// from opposite starting active sets, and the two oracles against each other.
std::vector<CheckResult> run_property_suite(const SuiteOptions& opts);

} // namespace polyshell::verify
