#include "polyshell/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include <Eigen/Dense>

#include "polyshell/parallel.hpp"

namespace polyshell {

namespace {

constexpr int kGaussNewtonIters = 50;
constexpr double kGaussNewtonStep = 1e-12;
constexpr double kRankTolerance = 1e-12;
constexpr double kBisectionResolution = 1e-6;

double rms_of(std::span<const Vec2> points, const Vec2& center, double radius) {
  double sum = 0.0;
  for (const Vec2& p : points) {
    const double d = norm(p - center) - radius;
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(points.size()));
}

std::string force_tag(double f) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", f);
  return buf;
}

void check_setup(int n, double circumradius, const ElasticParams& params) {
  if (n < 3)
    throw DomainError("polygon needs n >= 3 vertices");
  if (!(circumradius > 0.0))
    throw DomainError("circumradius must be positive");
  params.validate();
}

} // namespace

CircleFit fit_circle(std::span<const Vec2> points) {
  const auto count = static_cast<Eigen::Index>(points.size());
  if (count < 3)
    throw DegenerateInputError("circle fit needs at least 3 points");

  // Work in centered, unit-scaled coordinates.
  Vec2 mean;
  for (const Vec2& p : points)
    mean += p;
  mean = (1.0 / static_cast<double>(count)) * mean;
  double scale = 0.0;
  for (const Vec2& p : points)
    scale = std::max(scale, norm(p - mean));
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw DegenerateInputError("circle fit points coincide");

  Eigen::MatrixX2d q(count, 2);
  for (Eigen::Index i = 0; i < count; ++i) {
    const Vec2 d = (1.0 / scale) * (points[static_cast<std::size_t>(i)] - mean);
    q(i, 0) = d.x;
    q(i, 1) = d.y;
  }

  // Algebraic fit: x^2 + y^2 = a x + b y + c.
  Eigen::MatrixX3d design(count, 3);
  design << q, Eigen::VectorXd::Ones(count);
  const Eigen::VectorXd rhs = q.rowwise().squaredNorm();
  Eigen::JacobiSVD<Eigen::MatrixX3d> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(2) <= kRankTolerance * sv(0))
    throw DegenerateInputError("circle fit points are collinear");
  const Eigen::Vector3d abc = svd.solve(rhs);
  Eigen::Vector3d params(abc(0) / 2, abc(1) / 2, 0.0);
  params(2) = std::sqrt(abc(2) + params(0) * params(0) + params(1) * params(1));

  // Geometric refinement on (cx, cy, r).
  Eigen::VectorXd residual(count);
  Eigen::MatrixX3d jacobian(count, 3);
  for (int it = 0; it < kGaussNewtonIters; ++it) {
    for (Eigen::Index i = 0; i < count; ++i) {
      const double dx = q(i, 0) - params(0);
      const double dy = q(i, 1) - params(1);
      const double d = std::max(std::hypot(dx, dy), std::numeric_limits<double>::min());
      residual(i) = d - params(2);
      jacobian.row(i) << -dx / d, -dy / d, -1.0;
    }
    const Eigen::Vector3d step = jacobian.colPivHouseholderQr().solve(-residual);
    if (!step.allFinite())
      break;
    params += step;
    if (step.norm() < kGaussNewtonStep)
      break;
  }

  CircleFit fit;
  fit.center = mean + scale * Vec2{params(0), params(1)};
  fit.radius = scale * std::abs(params(2));
  fit.rms_residual = rms_of(points, fit.center, fit.radius);
  fit.point_count = static_cast<int>(count);
  return fit;
}

double apparent_height(std::span<const Vec2> vertices) {
  double top = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : vertices)
    top = std::max(top, v.y);
  return top;
}

double apparent_height(const DeformedConfig& cfg) { return apparent_height(cfg.deformed); }

std::vector<Vec2> free_sector(const DeformedConfig& cfg) {
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < cfg.deformed.size(); ++i)
    if (!cfg.contact_set.contains(static_cast<int>(i) + 1))
      out.push_back(cfg.deformed[i]);
  return out;
}

std::optional<CircleFit> fit_free_sector(const DeformedConfig& cfg) {
  const auto pts = free_sector(cfg);
  if (pts.size() < 3)
    return std::nullopt;
  try {
    return fit_circle(pts);
  } catch (const DegenerateInputError&) {
    return std::nullopt;
  }
}

std::vector<SweepRecord> force_sweep(int n, double circumradius, const ElasticParams& params,
                                     std::span<const double> f_grid, const ContactOptions& opts) {
  check_setup(n, circumradius, params);
  for (std::size_t i = 0; i < f_grid.size(); ++i) {
    if (!(f_grid[i] >= 0.0) || !std::isfinite(f_grid[i]))
      throw DomainError("force grid values must be finite and >= 0");
    if (i > 0 && f_grid[i] < f_grid[i - 1])
      throw DomainError("force grid must be sorted ascending");
  }

  const auto model =
      std::make_shared<const EnergyModel>(Polygon(n, circumradius), params, opts.bending_rows);
  const double reference_height = apparent_height(model->polygon().vertices());
  std::vector<SweepRecord> records(f_grid.size());
  parallel_for(f_grid.size(), [&](std::size_t i) {
    const double f = f_grid[i];
    DeformedConfig cfg;
    try {
      cfg = indent(model, f, opts);
    } catch (const SolverError& e) {
      throw SolverError("at f = " + force_tag(f) + ": " + e.what(), e.last());
    }
    SweepRecord& r = records[i];
    r.f = f;
    r.height = apparent_height(cfg);
    r.height_drop = reference_height - r.height;
    r.contacts = static_cast<int>(cfg.contact_set.size());
    r.fit = fit_free_sector(cfg);
  });
  return records;
}

std::vector<RelaxationRow> relaxation_study(int n, double circumradius,
                                            const ElasticParams& params,
                                            std::span<const int> target_counts,
                                            const ContactOptions& opts) {
  check_setup(n, circumradius, params);
  const auto model =
      std::make_shared<const EnergyModel>(Polygon(n, circumradius), params, opts.bending_rows);
  auto contacts_at = [&](double f) {
    return static_cast<int>(indent(model, f, opts).contact_set.size());
  };

  std::vector<RelaxationRow> rows(target_counts.size());
  parallel_for(target_counts.size(), [&](std::size_t idx) {
    RelaxationRow& row = rows[idx];
    const int target = target_counts[idx];
    row.contacts = target;
    if (target < 1 || target > n)
      return;

    if (target == 1) {
      // No indentation: the free sector is the reference polygon minus P1,
      // inscribed in the circumcircle by construction.
      auto cfg = indent(model, 0.0, opts);
      row.relaxed = relax(cfg, opts);
      row.indented = std::move(cfg);
      row.reached = true;
      row.fit = fit_free_sector(*row.relaxed);
      row.radius_ratio = 1.0;
      row.rms = row.fit ? row.fit->rms_residual : 0.0;
      return;
    }

    double lo = 0.0;
    double hi = 1e-3;
    int at_hi = contacts_at(hi);
    for (int doubling = 0; at_hi < target; ++doubling) {
      if (at_hi == n || doubling > 60)
        return;
      lo = hi;
      hi *= 2.0;
      at_hi = contacts_at(hi);
    }
    while (hi - lo > kBisectionResolution * hi) {
      const double mid = 0.5 * (lo + hi);
      if (contacts_at(mid) >= target)
        hi = mid;
      else
        lo = mid;
    }

    auto cfg = indent(model, hi, opts);
    if (static_cast<int>(cfg.contact_set.size()) != target)
      return;
    row.f_used = hi;
    row.relaxed = relax(cfg, opts);
    row.indented = std::move(cfg);
    row.fit = fit_free_sector(*row.relaxed);
    if (!row.fit)
      return;
    row.reached = true;
    row.radius_ratio = row.fit->radius / circumradius;
    row.rms = row.fit->rms_residual;
  });
  return rows;
}

std::vector<ConvergenceRow> convergence_study(std::span<const int> n_list, double total_force,
                                              double circumradius, const ElasticParams& params,
                                              const ContactOptions& opts, int resample_points) {
  if (n_list.empty())
    throw DomainError("convergence study needs at least one vertex count");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    check_setup(n_list[i], circumradius, params);
    if (i > 0 && n_list[i] < n_list[i - 1])
      throw DomainError("vertex counts must be ascending");
  }
  if (!(total_force >= 0.0))
    throw DomainError("total force must be >= 0");
  if (resample_points < 3)
    throw DomainError("resampling needs at least 3 points");

  std::vector<ConvergenceRow> rows(n_list.size());
  parallel_for(n_list.size(), [&](std::size_t i) {
    const int n = n_list[i];
    const auto cfg = indent(Polygon(n, circumradius), params, total_force / (n - 1), opts);
    rows[i].n = n;
    rows[i].apex_height = apparent_height(cfg);
    rows[i].shape = cfg.deformed;
  });

  const auto reference = resample_closed(rows.back().shape, resample_points);
  parallel_for(rows.size(), [&](std::size_t i) {
    rows[i].discrepancy =
        hausdorff_distance(resample_closed(rows[i].shape, resample_points), reference);
  });
  return rows;
}

std::vector<Vec2> resample_closed(std::span<const Vec2> polyline, int count) {
  if (polyline.empty() || count < 1)
    throw DomainError("resampling needs a non-empty polyline and a positive count");
  const std::size_t m = polyline.size();
  std::vector<double> arc(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    arc[i + 1] = arc[i] + norm(polyline[(i + 1) % m] - polyline[i]);
  const double total = arc.back();

  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(count));
  std::size_t seg = 0;
  for (int k = 0; k < count; ++k) {
    const double s = total * k / count;
    while (seg + 1 < m && arc[seg + 1] <= s)
      ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double t = len > 0.0 ? (s - arc[seg]) / len : 0.0;
    const Vec2& a = polyline[seg];
    const Vec2& b = polyline[(seg + 1) % m];
    out.push_back(a + t * (b - a));
  }
  return out;
}

double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.empty() || b.empty())
    throw DomainError("Hausdorff distance of an empty set");
  auto directed = [](std::span<const Vec2> from, std::span<const Vec2> to) {
    double worst = 0.0;
    for (const Vec2& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec2& q : to) {
        const Vec2 d = p - q;
        best = std::min(best, dot(d, d));
      }
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

} // namespace polyshell
