#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "polyshell/analysis.hpp"

using namespace polyshell;
using std::numbers::pi;

namespace {

std::vector<Vec2> on_circle(Vec2 c, double r, std::span<const double> angles) {
  std::vector<Vec2> pts;
  for (double a : angles)
    pts.push_back(c + Vec2{r * std::cos(a), r * std::sin(a)});
  return pts;
}

} // namespace

TEST_CASE("circle through four points on the unit circle") {
  const double angles[] = {0.0, pi / 2, pi, 3 * pi / 2};
  const auto fit = fit_circle(on_circle({0, 0}, 1.0, angles));
  CHECK(std::abs(fit.center.x) < 1e-12);
  CHECK(std::abs(fit.center.y) < 1e-12);
  CHECK(fit.radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.rms_residual < 1e-12);
  CHECK(fit.point_count == 4);
}

TEST_CASE("regular polygon vertices fit their circumcircle") {
  for (double r0 : {0.5, 1.0, 3.0}) {
    const Polygon p(10, r0);
    const auto fit = fit_circle(p.vertices());
    CHECK(fit.radius == doctest::Approx(r0).epsilon(1e-12));
    CHECK(std::abs(fit.center.x) < 1e-12 * r0);
    CHECK(std::abs(fit.center.y - r0) < 1e-12 * r0);
    CHECK(fit.rms_residual <= 1e-12 * r0);
  }
}

TEST_CASE("exact circles are recovered from random arcs") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> rad(0.1, 10.0);
  std::uniform_real_distribution<double> span(0.5, 2 * pi);
  std::uniform_int_distribution<int> count(3, 40);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec2 c{u(rng), u(rng)};
    const double r = rad(rng);
    const double start = u(rng);
    const double width = span(rng);
    const int m = count(rng);
    std::vector<double> angles;
    std::uniform_real_distribution<double> a(start, start + width);
    for (int i = 0; i < m; ++i)
      angles.push_back(a(rng));
    const auto fit = fit_circle(on_circle(c, r, angles));
    CAPTURE(trial);
    CHECK(std::abs(fit.radius - r) <= 1e-10 * r);
    CHECK(norm(fit.center - c) <= 1e-10 * (r + norm(c)));
    CHECK(fit.rms_residual <= 1e-10 * r);
  }
}

TEST_CASE("circle fit is invariant under rigid motions") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 2 * pi);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 12; ++i) {
      const double a = 0.25 * i;
      pts.push_back({2.0 * std::cos(a) + 0.05 * g(rng), 2.0 * std::sin(a) + 0.05 * g(rng)});
    }
    const auto base = fit_circle(pts);
    const double theta = ang(rng);
    const Vec2 shift{3 * g(rng), 3 * g(rng)};
    auto move = [&](const Vec2& p) {
      return Vec2{std::cos(theta) * p.x - std::sin(theta) * p.y,
                  std::sin(theta) * p.x + std::cos(theta) * p.y} +
             shift;
    };
    std::vector<Vec2> moved;
    for (const Vec2& p : pts)
      moved.push_back(move(p));
    const auto fit = fit_circle(moved);
    CHECK(std::abs(fit.radius - base.radius) <= 1e-10);
    CHECK(norm(fit.center - move(base.center)) <= 1e-9);
    CHECK(std::abs(fit.rms_residual - base.rms_residual) <= 1e-10);
  }
}

TEST_CASE("degenerate circle fits") {
  const std::vector<Vec2> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(fit_circle(line), DegenerateInputError);
  const std::vector<Vec2> two{{0, 0}, {1, 0}};
  CHECK_THROWS_AS(fit_circle(two), DegenerateInputError);
  const std::vector<Vec2> same{{1, 1}, {1, 1}, {1, 1}};
  CHECK_THROWS_AS(fit_circle(same), DegenerateInputError);
}

TEST_CASE("apparent height") {
  CHECK(apparent_height(Polygon(10, 1.0).vertices()) == doctest::Approx(2.0).epsilon(1e-15));
  const std::vector<Vec2> flat{{0, 0}, {1, 0}, {2, 0}};
  CHECK(apparent_height(flat) == 0.0);
}

TEST_CASE("force sweep") {
  SUBCASE("zero force only") {
    const double grid[] = {0.0};
    const auto recs = force_sweep(10, 1.0, {1.0, 1.0}, grid);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].height == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(recs[0].height_drop == doctest::Approx(0.0));
    CHECK(recs[0].contacts == 1);
    REQUIRE(recs[0].fit);
    CHECK(recs[0].fit->radius == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("monotone staircase") {
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i)
      grid.push_back(0.03 * i);
    const auto recs = force_sweep(10, 1.0, {1.0, 1.0}, grid);
    for (std::size_t i = 1; i < recs.size(); ++i) {
      CHECK(recs[i].contacts >= recs[i - 1].contacts);
      CHECK(recs[i].height <= recs[i - 1].height + 1e-12);
      CHECK(recs[i].height <= 2.0 + 1e-12);
      CHECK(recs[i].contacts >= 1);
    }
    // Contact count at the reference load, computed on the same grid point.
    CHECK(recs[0].f == 0.0);
  }

  SUBCASE("bad grids") {
    const double unsorted[] = {0.2, 0.1};
    CHECK_THROWS_AS(force_sweep(10, 1.0, {1.0, 1.0}, unsorted), DomainError);
    const double negative[] = {-0.1};
    CHECK_THROWS_AS(force_sweep(10, 1.0, {1.0, 1.0}, negative), DomainError);
  }
}

TEST_CASE("relaxation study") {
  const int counts[] = {1, 2, 3, 5};
  const auto rows = relaxation_study(10, 1.0, {1.0, 1.0}, counts);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].reached);
  CHECK(rows[0].radius_ratio == 1.0);
  CHECK(rows[0].f_used == 0.0);
  // Contacts arrive in mirror pairs, so two is never the count.
  CHECK_FALSE(rows[1].reached);
  for (int i : {2, 3}) {
    CHECK(rows[i].reached);
    CHECK(std::isfinite(rows[i].rms));
    CHECK(rows[i].relaxed->contact_set.size() == static_cast<std::size_t>(counts[i]));
    // The force found is the smallest reaching the count (to the bisection resolution).
    const auto below = indent(Polygon(10, 1.0), {1.0, 1.0}, rows[i].f_used * (1 - 1e-5));
    CHECK(static_cast<int>(below.contact_set.size()) < counts[i]);
  }
  CHECK(rows[2].f_used < rows[3].f_used);
}

TEST_CASE("resampling and Hausdorff distance") {
  const std::vector<Vec2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto pts = resample_closed(square, 8);
  REQUIRE(pts.size() == 8);
  CHECK(pts[0] == Vec2{0, 0});
  CHECK(norm(pts[1] - Vec2{0.5, 0}) < 1e-15);
  CHECK(norm(pts[2] - Vec2{1, 0}) < 1e-15);
  CHECK(norm(pts[5] - Vec2{0.5, 1}) < 1e-15);

  CHECK(hausdorff_distance(pts, pts) == 0.0);
  std::vector<Vec2> shifted;
  for (const Vec2& p : pts)
    shifted.push_back(p + Vec2{0.0, 0.25});
  CHECK(hausdorff_distance(pts, shifted) == doctest::Approx(0.25));
  const std::vector<Vec2> one{{0, 0}};
  const std::vector<Vec2> far{{0, 0}, {3, 4}};
  CHECK(hausdorff_distance(one, far) == doctest::Approx(5.0));
  CHECK(hausdorff_distance(far, one) == doctest::Approx(5.0));
}

TEST_CASE("convergence study") {
  SUBCASE("duplicated vertex count has zero discrepancy") {
    const int ns[] = {12, 12};
    const auto rows = convergence_study(ns, 2.25, 1.0, {1.0, 1.0});
    CHECK(rows[0].discrepancy == 0.0);
    CHECK(rows[1].discrepancy == 0.0);
  }

  SUBCASE("shapes approach the largest-n result") {
    const int ns[] = {10, 20, 30, 40};
    const auto rows = convergence_study(ns, 2.25, 1.0, {1.0, 1.0});
    REQUIRE(rows.size() == 4);
    CHECK(rows.back().discrepancy == 0.0);
    for (std::size_t i = 1; i < rows.size(); ++i)
      CHECK(rows[i].discrepancy < rows[i - 1].discrepancy);
    for (const auto& r : rows)
      CHECK(r.shape.size() == static_cast<std::size_t>(r.n));
  }

  SUBCASE("invalid inputs") {
    const int unsorted[] = {20, 10};
    CHECK_THROWS_AS(convergence_study(unsorted, 1.0, 1.0, {}), DomainError);
    CHECK_THROWS_AS(convergence_study(std::span<const int>(), 1.0, 1.0, {}), DomainError);
  }
}
