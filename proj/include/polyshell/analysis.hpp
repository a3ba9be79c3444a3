#pragma once

#include <optional>
#include <span>
#include <vector>

#include "polyshell/contact.hpp"
#include "polyshell/geometry.hpp"

namespace polyshell {

/// Raised when a fit has no unique answer (fewer than three points, or all
/// points collinear).
class DegenerateInputError : public DomainError {
public:
  using DomainError::DomainError;
};

struct CircleFit {
  Vec2 center;
  double radius = 0.0;
  double rms_residual = 0.0;  ///< sqrt(mean((|p - center| - radius)^2))
  int point_count = 0;
};

/// Geometric least-squares circle. Algebraic (Kasa) fit first, then
/// Gauss-Newton on the point-to-circle distances.
CircleFit fit_circle(std::span<const Vec2> points);

/// Maximum y over the vertices.
double apparent_height(std::span<const Vec2> vertices);
double apparent_height(const DeformedConfig& cfg);

/// Vertices outside the contact set, in label order.
std::vector<Vec2> free_sector(const DeformedConfig& cfg);

/// Circle fit of the free sector, or nothing when it has fewer than three
/// vertices or is collinear.
std::optional<CircleFit> fit_free_sector(const DeformedConfig& cfg);

struct SweepRecord {
  double f = 0.0;
  double height = 0.0;
  double height_drop = 0.0;
  int contacts = 1;
  std::optional<CircleFit> fit;
};

/// One indentation per grid point (ascending, all >= 0). Solver failures are
/// rethrown as SolverError naming the failing force.
std::vector<SweepRecord> force_sweep(int n, double circumradius, const ElasticParams& params,
                                     std::span<const double> f_grid,
                                     const ContactOptions& opts = {});

struct RelaxationRow {
  int contacts = 0;
  bool reached = false;
  double f_used = 0.0;
  double radius_ratio = 0.0;  ///< fitted R / R0 of the relaxed free sector
  double rms = 0.0;
  std::optional<CircleFit> fit;
  std::optional<DeformedConfig> indented;
  std::optional<DeformedConfig> relaxed;
};

/// For each target contact count, bisects for the smallest force reaching it,
/// relaxes with those contacts held on the surface, and fits the free sector.
/// Counts no force produces come back with reached = false.
std::vector<RelaxationRow> relaxation_study(int n, double circumradius,
                                            const ElasticParams& params,
                                            std::span<const int> target_counts,
                                            const ContactOptions& opts = {});

struct ConvergenceRow {
  int n = 0;
  double apex_height = 0.0;
  double discrepancy = 0.0;  ///< resampled Hausdorff distance to the largest n
  std::vector<Vec2> shape;
};

constexpr int kDefaultResamplePoints = 720;

/// Same total downward force spread over n - 1 vertices for each n; shapes are
/// compared with the one for the largest n.
std::vector<ConvergenceRow> convergence_study(std::span<const int> n_list, double total_force,
                                              double circumradius, const ElasticParams& params,
                                              const ContactOptions& opts = {},
                                              int resample_points = kDefaultResamplePoints);

/// `count` points equally spaced in arc length along the closed polyline,
/// starting at its first vertex.
std::vector<Vec2> resample_closed(std::span<const Vec2> polyline, int count);

/// Symmetric discrete Hausdorff distance between two point sets.
double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b);

} // namespace polyshell
