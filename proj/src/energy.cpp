#include "polyshell/energy.hpp"

#include <string>

namespace polyshell {

void ElasticParams::validate() const {
  if (!(k > 0.0) || !std::isfinite(k))
    throw DomainError("stretching constant k must be positive and finite");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw DomainError("bending constant kappa must be positive and finite");
}

Eigen::MatrixXd assemble_sigma(const Polygon& p) {
  const int n = p.size();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2 * n, 2 * n - 2);
  // Block row r holds u_r - u_{r+1} (1-based, modulo n) with u_1 = 0.
  for (int r = 1; r <= n; ++r) {
    const int head = r % n + 1;
    const auto row = 2 * (r - 1);
    if (r >= 2)
      sigma.block(row, x_index(r), 2, 2) = Eigen::Matrix2d::Identity();
    if (head >= 2)
      sigma.block(row, x_index(head), 2, 2) = -Eigen::Matrix2d::Identity();
  }
  return sigma;
}

Eigen::MatrixXd assemble_theta(const Polygon& p, BendingRows rows) {
  const int n = p.size();
  const auto edges = edge_vectors(p);
  const int first = rows == BendingRows::all ? 1 : 2;
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(n - first + 1, 2 * n - 2);

  auto put = [&](Eigen::Index row, int label, const Vec2& coeff) {
    if (label == 1)
      return;
    theta(row, x_index(label)) += coeff.x;
    theta(row, y_index(label)) += coeff.y;
  };

  for (int label = first; label <= n; ++label) {
    const int i = label - 1;
    const Vec2& incoming = edges[(i + n - 1) % n];  // P_{i-1} P_i
    const Vec2& outgoing = edges[i];                // P_i P_{i+1}
    const int prev = (i + n - 1) % n + 1;
    const int next = (i + 1) % n + 1;
    const Eigen::Index row = label - first;
    put(row, prev, -outgoing);
    put(row, label, outgoing - incoming);
    put(row, next, incoming);
  }
  return theta;
}

EnergyModel::EnergyModel(Polygon polygon, ElasticParams params, BendingRows rows)
    : polygon_(std::move(polygon)), params_(params), rows_(rows) {
  params_.validate();
  sigma_ = assemble_sigma(polygon_);
  theta_ = assemble_theta(polygon_, rows_);
  c_ = bending_constant(polygon_);
  hessian_ = params_.k * sigma_.transpose() * sigma_ +
             params_.kappa * c_ * c_ * theta_.transpose() * theta_;
  // Symmetrize exactly; the two products round independently.
  hessian_ = 0.5 * (hessian_ + hessian_.transpose()).eval();
  cholesky_.compute(hessian_);
  if (cholesky_.info() != Eigen::Success)
    throw DomainError("elastic Hessian is not positive definite for n = " +
                      std::to_string(polygon_.size()));
}

void EnergyModel::check_dims(const Displacement& u) const {
  if (u.size() != dofs())
    throw DomainError("displacement has " + std::to_string(u.size()) + " entries, expected " +
                      std::to_string(dofs()));
}

double EnergyModel::stretching_energy(const Displacement& u) const {
  check_dims(u);
  return 0.5 * params_.k * (sigma_ * u).squaredNorm();
}

double EnergyModel::bending_energy(const Displacement& u) const {
  check_dims(u);
  return 0.5 * params_.kappa * c_ * c_ * (theta_ * u).squaredNorm();
}

double EnergyModel::total_energy(const Displacement& u) const {
  return stretching_energy(u) + bending_energy(u);
}

Displacement EnergyModel::gradient(const Displacement& u) const {
  check_dims(u);
  return hessian_ * u;
}

} // namespace polyshell
