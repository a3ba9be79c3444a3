#pragma once

#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "polyshell/energy.hpp"
#include "polyshell/geometry.hpp"

namespace polyshell {

/// Forces on P2..Pn. P1 is fixed and carries no force slot.
struct ForceField {
  std::vector<Vec2> forces;

  static ForceField zero(int n) { return {std::vector<Vec2>(static_cast<std::size_t>(n - 1))}; }
  static ForceField uniform(int n, Vec2 f) {
    return {std::vector<Vec2>(static_cast<std::size_t>(n - 1), f)};
  }

  Eigen::VectorXd to_vector() const;
};

/// Bounds on the vertical displacement of P2..Pn.
///
/// Entry j of `lower_bounds` constrains u_{j+2,y} >= lower_bounds[j]. A pinned
/// vertex has its vertical displacement fixed to exactly that bound while its
/// horizontal displacement stays free.
struct ConstraintSet {
  std::vector<double> lower_bounds;
  std::set<int> pinned;  ///< 1-based labels in [2, n]

  /// yi + u_{i,y} >= 0 for every free vertex of `p`.
  static ConstraintSet non_penetration(const Polygon& p);

  int size() const { return static_cast<int>(lower_bounds.size()); }
  bool is_pinned(int j) const { return pinned.contains(j + 2); }
  void validate() const;
};

enum class InitialActiveSet { empty, all };

struct SolverOptions {
  double stat_tol = 1e-10;
  double feas_tol = 1e-10;
  double comp_tol = 1e-10;
  double c_pdas = 1.0;
  int max_iters = 0;  ///< 0 selects 10 * n
  InitialActiveSet initial = InitialActiveSet::empty;
  bool fallback_on_cycle = true;
};

enum class SolvePath { pdas, projected_gradient, enumeration, equality };

std::string to_string(SolvePath path);

struct KktResiduals {
  double stationarity = 0.0;     ///< |H u - F - A^T lambda|_inf
  double primal = 0.0;           ///< bound violation, plus |u - b| on pinned rows
  double dual = 0.0;             ///< most negative inequality multiplier
  double complementarity = 0.0;  ///< max |lambda_j (u_j - b_j)|

  double max() const;
  bool within(const SolverOptions& opts) const;
};

struct SolveResult {
  Displacement u;
  /// One per inequality (vertex P_{j+2}); zero for pinned vertices.
  std::vector<double> multipliers;
  /// Equality multipliers of pinned vertices, any sign; zero elsewhere.
  std::vector<double> pinned_multipliers;
  /// Labels whose inequality is active. Pinned vertices are not listed.
  std::set<int> active_set;
  int iterations = 0;
  double kkt_residual = 0.0;
  KktResiduals residuals;
  SolvePath path = SolvePath::pdas;
};

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, SolveResult last)
      : std::runtime_error(what), last_(std::move(last)) {}
  const SolveResult& last() const { return last_; }

private:
  SolveResult last_;
};

KktResiduals kkt_residuals(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& force,
                           const ConstraintSet& cons, const Displacement& u,
                           std::span<const double> multipliers,
                           std::span<const double> pinned_multipliers);

/// Minimizes 1/2 u^T H u - F^T u subject to the bounds and pinned equalities
/// with the primal-dual active set method.
SolveResult solve_pdas(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& force,
                       const ConstraintSet& cons, const SolverOptions& opts = {});
SolveResult solve_pdas(const EnergyModel& model, const ForceField& f, const ConstraintSet& cons,
                       const SolverOptions& opts = {});

enum class OracleMethod { automatic, enumeration, projected_gradient };

/// Same minimizer as solve_pdas through an unrelated route: exhaustive
/// active-set enumeration over a full KKT LU solve when n <= 8, projected
/// gradient otherwise.
SolveResult solve_oracle(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& force,
                         const ConstraintSet& cons, const SolverOptions& opts = {},
                         OracleMethod method = OracleMethod::automatic);
SolveResult solve_oracle(const EnergyModel& model, const ForceField& f, const ConstraintSet& cons,
                         const SolverOptions& opts = {},
                         OracleMethod method = OracleMethod::automatic);

/// Solves the saddle-point system with equality rows on `active` plus every
/// pinned vertex; all other bounds are ignored.
SolveResult solve_equality(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& force,
                           const ConstraintSet& cons, const std::set<int>& active = {});
SolveResult solve_equality(const EnergyModel& model, const ForceField& f,
                           const ConstraintSet& cons, const std::set<int>& active = {});

/// 1/2 u^T H u - F^T u
double objective(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& force,
                 const Displacement& u);

} // namespace polyshell
