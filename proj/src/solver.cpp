#include "polyshell/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace polyshell {

namespace {

constexpr int kMaxProjectedGradientIters = 5'000'000;
constexpr double kProjectedGradientStep = 1e-12;
constexpr int kMaxEnumeratedConstraints = 20;

// Constraint j acts on the vertical component of vertex j + 2.
Eigen::Index row_of(int j) { return 2 * j + 1; }

void check_problem(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& force,
                   const ConstraintSet& cons) {
  if (hessian.rows() != hessian.cols())
    throw DomainError("Hessian must be square");
  if (hessian.rows() % 2 != 0 || hessian.rows() < 4)
    throw DomainError("Hessian size must be 2n - 2 for some n >= 3");
  if (force.size() != hessian.rows())
    throw DomainError("force has " + std::to_string(force.size()) + " entries, expected " +
                      std::to_string(hessian.rows()));
  if (2 * cons.size() != hessian.rows())
    throw DomainError("constraint set has " + std::to_string(cons.size()) +
                      " bounds, expected " + std::to_string(hessian.rows() / 2));
  cons.validate();
}

struct QpView {
  const Eigen::MatrixXd& hessian;
  const Eigen::LLT<Eigen::MatrixXd>& llt;
  const Eigen::VectorXd& force;
  const ConstraintSet& cons;
};

SolveResult make_result(const QpView& qp, Displacement u, std::vector<double> lambda,
                        std::vector<double> mu, SolvePath path, int iterations) {
  SolveResult r;
  r.u = std::move(u);
  r.multipliers = std::move(lambda);
  r.pinned_multipliers = std::move(mu);
  r.path = path;
  r.iterations = iterations;
  r.residuals = kkt_residuals(qp.hessian, qp.force, qp.cons, r.u, r.multipliers,
                              r.pinned_multipliers);
  r.kkt_residual = r.residuals.max();
  return r;
}

// Equality-constrained minimizer with rows on `rows` (constraint indices),
// by Cholesky of H and the Schur complement A H^-1 A^T.
struct EqualitySolution {
  Displacement u;
  Eigen::VectorXd mu;  // aligned with `rows`
};

EqualitySolution solve_rows(const QpView& qp, const std::vector<int>& rows) {
  const auto m = qp.hessian.rows();
  const auto a = static_cast<Eigen::Index>(rows.size());
  Displacement u0 = qp.llt.solve(qp.force);
  if (a == 0)
    return {std::move(u0), Eigen::VectorXd()};

  Eigen::MatrixXd selector = Eigen::MatrixXd::Zero(m, a);
  Eigen::VectorXd rhs(a);
  for (Eigen::Index c = 0; c < a; ++c) {
    const int j = rows[static_cast<std::size_t>(c)];
    selector(row_of(j), c) = 1.0;
    rhs(c) = qp.cons.lower_bounds[static_cast<std::size_t>(j)] - u0(row_of(j));
  }
  const Eigen::MatrixXd hinv_at = qp.llt.solve(selector);
  Eigen::MatrixXd schur(a, a);
  for (Eigen::Index r = 0; r < a; ++r)
    schur.row(r) = hinv_at.row(row_of(rows[static_cast<std::size_t>(r)]));
  schur = 0.5 * (schur + schur.transpose()).eval();

  Eigen::LLT<Eigen::MatrixXd> schur_llt(schur);
  if (schur_llt.info() != Eigen::Success)
    throw SolverError("singular Schur complement in equality solve (duplicate constraint?)", {});
  Eigen::VectorXd mu = schur_llt.solve(rhs);
  Displacement u = u0 + hinv_at * mu;
  // Constrained coordinates are known exactly; drop the roundoff.
  for (int j : rows)
    u(row_of(j)) = qp.cons.lower_bounds[static_cast<std::size_t>(j)];
  return {std::move(u), std::move(mu)};
}

// Splits equality multipliers into inequality and pinned slots.
void scatter(const QpView& qp, const std::vector<int>& rows, const Eigen::VectorXd& mu,
             std::vector<double>& lambda, std::vector<double>& pinned) {
  lambda.assign(static_cast<std::size_t>(qp.cons.size()), 0.0);
  pinned.assign(static_cast<std::size_t>(qp.cons.size()), 0.0);
  for (std::size_t c = 0; c < rows.size(); ++c) {
    const auto j = static_cast<std::size_t>(rows[c]);
    (qp.cons.is_pinned(rows[c]) ? pinned : lambda)[j] = mu(static_cast<Eigen::Index>(c));
  }
}

std::vector<int> pinned_rows(const ConstraintSet& cons) {
  std::vector<int> rows;
  for (int label : cons.pinned)
    rows.push_back(label - 2);
  return rows;
}

std::set<int> labels_of(const std::vector<bool>& active) {
  std::set<int> out;
  for (std::size_t j = 0; j < active.size(); ++j)
    if (active[j])
      out.insert(static_cast<int>(j) + 2);
  return out;
}

SolveResult projected_gradient(const QpView& qp, int prior_iterations) {
  const auto m = qp.hessian.rows();
  const double lmax =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(qp.hessian, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .maxCoeff();
  const double step = 1.0 / lmax;

  auto project = [&](Displacement& v) {
    for (int j = 0; j < qp.cons.size(); ++j) {
      const double b = qp.cons.lower_bounds[static_cast<std::size_t>(j)];
      if (qp.cons.is_pinned(j))
        v(row_of(j)) = b;
      else
        v(row_of(j)) = std::max(v(row_of(j)), b);
    }
  };

  Displacement u = Displacement::Zero(m);
  project(u);
  int it = 0;
  for (;;) {
    if (++it > kMaxProjectedGradientIters)
      throw SolverError("projected gradient did not converge",
                        make_result(qp, u, {}, {}, SolvePath::projected_gradient,
                                    prior_iterations + it));
    Displacement next = u - step * (qp.hessian * u - qp.force);
    project(next);
    const double moved = (next - u).lpNorm<Eigen::Infinity>();
    u = std::move(next);
    if (moved < kProjectedGradientStep)
      break;
  }

  const Eigen::VectorXd g = qp.hessian * u - qp.force;
  std::vector<double> lambda(static_cast<std::size_t>(qp.cons.size()), 0.0);
  std::vector<double> pinned(lambda.size(), 0.0);
  for (int j = 0; j < qp.cons.size(); ++j) {
    const auto sj = static_cast<std::size_t>(j);
    if (qp.cons.is_pinned(j))
      pinned[sj] = g(row_of(j));
    else if (u(row_of(j)) == qp.cons.lower_bounds[sj])
      lambda[sj] = g(row_of(j));
  }
  auto r = make_result(qp, std::move(u), std::move(lambda), std::move(pinned),
                       SolvePath::projected_gradient, prior_iterations + it);
  for (int j = 0; j < qp.cons.size(); ++j)
    if (r.multipliers[static_cast<std::size_t>(j)] != 0.0)
      r.active_set.insert(j + 2);
  return r;
}

SolveResult enumerate(const QpView& qp) {
  const auto m = qp.hessian.rows();
  std::vector<int> free_rows;
  for (int j = 0; j < qp.cons.size(); ++j)
    if (!qp.cons.is_pinned(j))
      free_rows.push_back(j);
  if (free_rows.size() > kMaxEnumeratedConstraints)
    throw DomainError("too many constraints for exhaustive enumeration");
  const std::vector<int> pinned = pinned_rows(qp.cons);
  const double tol = 1e-9 * (1.0 + qp.force.lpNorm<Eigen::Infinity>());

  SolveResult best;
  double best_value = std::numeric_limits<double>::infinity();
  int tried = 0;
  const std::uint64_t count = std::uint64_t{1} << free_rows.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    ++tried;
    std::vector<int> rows = pinned;
    for (std::size_t b = 0; b < free_rows.size(); ++b)
      if (mask & (std::uint64_t{1} << b))
        rows.push_back(free_rows[b]);
    const auto a = static_cast<Eigen::Index>(rows.size());

    // Full saddle-point system [H A^T; A 0][u; -lambda] = [F; b].
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + a, m + a);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + a);
    kkt.topLeftCorner(m, m) = qp.hessian;
    rhs.head(m) = qp.force;
    for (Eigen::Index c = 0; c < a; ++c) {
      const int j = rows[static_cast<std::size_t>(c)];
      kkt(m + c, row_of(j)) = 1.0;
      kkt(row_of(j), m + c) = 1.0;
      rhs(m + c) = qp.cons.lower_bounds[static_cast<std::size_t>(j)];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible())
      continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    Displacement u = sol.head(m);
    for (int j : rows)
      u(row_of(j)) = qp.cons.lower_bounds[static_cast<std::size_t>(j)];
    const Eigen::VectorXd mu = -sol.tail(a);

    bool ok = true;
    for (std::size_t b = 0; b < free_rows.size() && ok; ++b) {
      const int j = free_rows[b];
      ok = u(row_of(j)) >= qp.cons.lower_bounds[static_cast<std::size_t>(j)] - tol;
    }
    for (Eigen::Index c = 0; c < a && ok; ++c)
      if (!qp.cons.is_pinned(rows[static_cast<std::size_t>(c)]))
        ok = mu(c) >= -tol;
    if (!ok)
      continue;

    const double value = objective(qp.hessian, qp.force, u);
    if (value < best_value) {
      best_value = value;
      std::vector<double> lambda;
      std::vector<double> pinned_mu;
      scatter(qp, rows, mu, lambda, pinned_mu);
      best = make_result(qp, u, std::move(lambda), std::move(pinned_mu), SolvePath::enumeration,
                         tried);
      best.active_set.clear();
      for (int j : rows)
        if (!qp.cons.is_pinned(j))
          best.active_set.insert(j + 2);
    }
  }
  if (!std::isfinite(best_value))
    throw SolverError("enumeration found no KKT point", {});
  best.iterations = tried;
  return best;
}

SolveResult pdas(const QpView& qp, const SolverOptions& opts) {
  const int n = qp.cons.size() + 1;
  const int max_iters = opts.max_iters > 0 ? opts.max_iters : 10 * n;
  const auto nc = static_cast<std::size_t>(qp.cons.size());

  std::vector<bool> active(nc, opts.initial == InitialActiveSet::all);
  for (int label : qp.cons.pinned)
    active[static_cast<std::size_t>(label - 2)] = false;
  std::set<std::vector<bool>> visited;

  SolveResult last;
  for (int it = 1; it <= max_iters; ++it) {
    std::vector<int> rows = pinned_rows(qp.cons);
    for (std::size_t j = 0; j < nc; ++j)
      if (active[j])
        rows.push_back(static_cast<int>(j));

    EqualitySolution eq;
    try {
      eq = solve_rows(qp, rows);
    } catch (const SolverError& e) {
      throw SolverError(e.what(), last);
    }
    std::vector<double> lambda;
    std::vector<double> pinned_mu;
    scatter(qp, rows, eq.mu, lambda, pinned_mu);

    // Indicator lambda_j + c (b_j - u_j). Near-zero indicators are ties: the
    // constraint is weakly active either way, so membership is kept.
    std::vector<bool> next = active;
    for (std::size_t j = 0; j < nc; ++j) {
      if (qp.cons.is_pinned(static_cast<int>(j)))
        continue;
      const double indicator =
          lambda[j] + opts.c_pdas * (qp.cons.lower_bounds[j] - eq.u(row_of(static_cast<int>(j))));
      if (std::abs(indicator) > opts.feas_tol)
        next[j] = indicator > 0.0;
    }

    last = make_result(qp, std::move(eq.u), std::move(lambda), std::move(pinned_mu),
                       SolvePath::pdas, it);
    last.active_set = labels_of(active);

    if (next == active) {
      if (last.residuals.within(opts))
        return last;
      throw SolverError("active set settled but KKT residuals exceed tolerance", last);
    }
    visited.insert(active);
    if (visited.contains(next)) {
      if (!opts.fallback_on_cycle)
        throw SolverError("primal-dual active set iteration cycled", last);
      return projected_gradient(qp, it);
    }
    active = std::move(next);
  }
  throw SolverError("primal-dual active set did not converge in " + std::to_string(max_iters) +
                        " iterations",
                    last);
}

} // namespace

Eigen::VectorXd ForceField::to_vector() const {
  Eigen::VectorXd v(2 * static_cast<Eigen::Index>(forces.size()));
  for (std::size_t i = 0; i < forces.size(); ++i) {
    v(2 * static_cast<Eigen::Index>(i)) = forces[i].x;
    v(2 * static_cast<Eigen::Index>(i) + 1) = forces[i].y;
  }
  return v;
}

ConstraintSet ConstraintSet::non_penetration(const Polygon& p) {
  ConstraintSet cons;
  for (int i = 1; i < p.size(); ++i)
    cons.lower_bounds.push_back(-p.vertex(i).y);
  return cons;
}

void ConstraintSet::validate() const {
  for (double b : lower_bounds)
    if (!std::isfinite(b))
      throw DomainError("constraint bounds must be finite");
  for (int label : pinned)
    if (label < 2 || label > size() + 1)
      throw DomainError("pinned vertex label out of range: " + std::to_string(label));
}

std::string to_string(SolvePath path) {
  switch (path) {
  case SolvePath::pdas: return "pdas";
  case SolvePath::projected_gradient: return "projected_gradient";
  case SolvePath::enumeration: return "enumeration";
  case SolvePath::equality: return "equality";
  }
  return "unknown";
}

double KktResiduals::max() const {
  return std::max({stationarity, primal, dual, complementarity});
}

bool KktResiduals::within(const SolverOptions& opts) const {
  return stationarity <= opts.stat_tol && primal <= opts.feas_tol && dual <= opts.feas_tol &&
         complementarity <= opts.comp_tol;
}

KktResiduals kkt_residuals(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& force,
                           const ConstraintSet& cons, const Displacement& u,
                           std::span<const double> multipliers,
                           std::span<const double> pinned_multipliers) {
  KktResiduals r;
  Eigen::VectorXd station = hessian * u - force;
  for (int j = 0; j < cons.size(); ++j) {
    const auto sj = static_cast<std::size_t>(j);
    const double lambda = sj < multipliers.size() ? multipliers[sj] : 0.0;
    const double mu = sj < pinned_multipliers.size() ? pinned_multipliers[sj] : 0.0;
    const double gap = u(row_of(j)) - cons.lower_bounds[sj];
    station(row_of(j)) -= lambda + mu;
    if (cons.is_pinned(j)) {
      r.primal = std::max(r.primal, std::abs(gap));
    } else {
      r.primal = std::max(r.primal, -gap);
      r.dual = std::max(r.dual, -lambda);
      r.complementarity = std::max(r.complementarity, std::abs(lambda * gap));
    }
  }
  r.stationarity = station.lpNorm<Eigen::Infinity>();
  return r;
}

double objective(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& force,
                 const Displacement& u) {
  return 0.5 * u.dot(hessian * u) - force.dot(u);
}

SolveResult solve_pdas(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& force,
                       const ConstraintSet& cons, const SolverOptions& opts) {
  check_problem(hessian, force, cons);
  Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() != Eigen::Success)
    throw DomainError("Hessian is not positive definite");
  return pdas({hessian, llt, force, cons}, opts);
}

SolveResult solve_pdas(const EnergyModel& model, const ForceField& f, const ConstraintSet& cons,
                       const SolverOptions& opts) {
  const Eigen::VectorXd force = f.to_vector();
  check_problem(model.hessian(), force, cons);
  return pdas({model.hessian(), model.cholesky(), force, cons}, opts);
}

namespace {

SolveResult oracle(const QpView& qp, OracleMethod method) {
  const int n = qp.cons.size() + 1;
  if (method == OracleMethod::automatic)
    method = n <= 8 ? OracleMethod::enumeration : OracleMethod::projected_gradient;
  return method == OracleMethod::enumeration ? enumerate(qp) : projected_gradient(qp, 0);
}

} // namespace

SolveResult solve_oracle(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& force,
                         const ConstraintSet& cons, const SolverOptions&, OracleMethod method) {
  check_problem(hessian, force, cons);
  Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() != Eigen::Success)
    throw DomainError("Hessian is not positive definite");
  return oracle({hessian, llt, force, cons}, method);
}

SolveResult solve_oracle(const EnergyModel& model, const ForceField& f, const ConstraintSet& cons,
                         const SolverOptions&, OracleMethod method) {
  const Eigen::VectorXd force = f.to_vector();
  check_problem(model.hessian(), force, cons);
  return oracle({model.hessian(), model.cholesky(), force, cons}, method);
}

namespace {

SolveResult equality(const QpView& qp, const std::set<int>& active) {
  std::vector<int> rows = pinned_rows(qp.cons);
  for (int label : active) {
    if (label < 2 || label > qp.cons.size() + 1)
      throw DomainError("active vertex label out of range: " + std::to_string(label));
    if (!qp.cons.pinned.contains(label))
      rows.push_back(label - 2);
  }
  EqualitySolution eq = solve_rows(qp, rows);
  std::vector<double> lambda;
  std::vector<double> pinned_mu;
  scatter(qp, rows, eq.mu, lambda, pinned_mu);
  auto r = make_result(qp, std::move(eq.u), std::move(lambda), std::move(pinned_mu),
                       SolvePath::equality, 1);
  for (int label : active)
    if (!qp.cons.pinned.contains(label))
      r.active_set.insert(label);
  // Bounds outside the equality rows are not enforced here, so only the two
  // block equations are reported.
  Eigen::VectorXd eq_residual = qp.hessian * r.u - qp.force;
  for (int j = 0; j < qp.cons.size(); ++j)
    eq_residual(row_of(j)) -= r.multipliers[static_cast<std::size_t>(j)] +
                              r.pinned_multipliers[static_cast<std::size_t>(j)];
  r.residuals = {};
  r.residuals.stationarity = eq_residual.lpNorm<Eigen::Infinity>();
  for (int j : rows)
    r.residuals.primal = std::max(
        r.residuals.primal,
        std::abs(r.u(row_of(j)) - qp.cons.lower_bounds[static_cast<std::size_t>(j)]));
  r.kkt_residual = r.residuals.max();
  return r;
}

} // namespace

SolveResult solve_equality(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& force,
                           const ConstraintSet& cons, const std::set<int>& active) {
  check_problem(hessian, force, cons);
  Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() != Eigen::Success)
    throw DomainError("Hessian is not positive definite");
  return equality({hessian, llt, force, cons}, active);
}

SolveResult solve_equality(const EnergyModel& model, const ForceField& f,
                           const ConstraintSet& cons, const std::set<int>& active) {
  const Eigen::VectorXd force = f.to_vector();
  check_problem(model.hessian(), force, cons);
  return equality({model.hessian(), model.cholesky(), force, cons}, active);
}

} // namespace polyshell
