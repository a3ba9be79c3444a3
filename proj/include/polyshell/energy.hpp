#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "polyshell/geometry.hpp"

namespace polyshell {

/// Displacement of the free vertices P2..Pn, interleaved as
/// [u2x, u2y, u3x, u3y, ...]; P1 is fixed and has no slot.
using Displacement = Eigen::VectorXd;

/// Index of the x (resp. y) component of vertex `label` (1-based, >= 2).
inline Eigen::Index x_index(int label) { return 2 * (label - 2); }
inline Eigen::Index y_index(int label) { return 2 * (label - 2) + 1; }

struct ElasticParams {
  double k = 1.0;      ///< stretching constant
  double kappa = 1.0;  ///< bending constant

  void validate() const;
};

/// Which angles contribute bending energy. `all` keeps the angle at the
/// fixed vertex P1 as well; `free_only` drops it (n - 1 rows).
enum class BendingRows { all, free_only };

/// 2n x (2n-2): row block r holds u_r - u_{r+1} along edge r,
/// with the P1 column block removed.
Eigen::MatrixXd assemble_sigma(const Polygon& p);

/// n x (2n-2) (or (n-1) x (2n-2)): linearized angle variation at each vertex,
/// built from the undeformed edge vectors.
Eigen::MatrixXd assemble_theta(const Polygon& p, BendingRows rows = BendingRows::all);

/// Quadratic elastic energy of a polygon linearized about its reference shape.
/// Immutable after construction; the Hessian is factorized once.
class EnergyModel {
public:
  EnergyModel(Polygon polygon, ElasticParams params, BendingRows rows = BendingRows::all);

  const Polygon& polygon() const { return polygon_; }
  const ElasticParams& params() const { return params_; }
  BendingRows bending_rows() const { return rows_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const Eigen::MatrixXd& theta() const { return theta_; }
  double c() const { return c_; }
  /// k Sigma^T Sigma + kappa C^2 Theta^T Theta
  const Eigen::MatrixXd& hessian() const { return hessian_; }
  const Eigen::LLT<Eigen::MatrixXd>& cholesky() const { return cholesky_; }
  Eigen::Index dofs() const { return hessian_.rows(); }

  double stretching_energy(const Displacement& u) const;
  double bending_energy(const Displacement& u) const;
  double total_energy(const Displacement& u) const;
  Displacement gradient(const Displacement& u) const;

private:
  void check_dims(const Displacement& u) const;

  Polygon polygon_;
  ElasticParams params_;
  BendingRows rows_;
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd theta_;
  double c_;
  Eigen::MatrixXd hessian_;
  Eigen::LLT<Eigen::MatrixXd> cholesky_;
};

} // namespace polyshell
