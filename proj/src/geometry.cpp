#include "polyshell/geometry.hpp"

#include <numbers>

namespace polyshell {

Polygon::Polygon(int n, double circumradius) : circumradius_(circumradius) {
  if (n < 3)
    throw DomainError("polygon needs n >= 3 vertices, got " + std::to_string(n));
  if (!(circumradius > 0.0) || !std::isfinite(circumradius))
    throw DomainError("polygon circumradius must be positive and finite");

  using std::numbers::pi;
  vertices_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double angle = -pi / 2 + 2 * pi * i / n;
    vertices_.push_back({circumradius * std::cos(angle), circumradius * (1.0 + std::sin(angle))});
  }
  // cos(-pi/2) is not exactly zero in floating point.
  vertices_.front() = {0.0, 0.0};
}

double Polygon::edge_length() const {
  return 2.0 * circumradius_ * std::sin(std::numbers::pi / size());
}

double Polygon::signed_area() const {
  double twice = 0.0;
  const int n = size();
  for (int i = 0; i < n; ++i)
    twice += cross(vertices_[i], vertices_[(i + 1) % n]);
  return 0.5 * twice;
}

Polygon build_polygon(int n, double circumradius) { return Polygon(n, circumradius); }

std::vector<Vec2> edge_vectors(const Polygon& p) {
  const int n = p.size();
  std::vector<Vec2> edges;
  edges.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    edges.push_back(p.vertex((i + 1) % n) - p.vertex(i));
  return edges;
}

double bending_constant(const Polygon& p) {
  const double l = p.edge_length();
  return std::sin(2.0 * std::numbers::pi / p.size()) / (l * l);
}

double bending_constant_at(const Polygon& p, int label) {
  const int n = p.size();
  if (label < 1 || label > n)
    throw DomainError("vertex label out of range: " + std::to_string(label));
  const int i = label - 1;
  const Vec2 prev = p.vertex(i) - p.vertex((i + n - 1) % n);
  const Vec2 next = p.vertex((i + 1) % n) - p.vertex(i);
  const double np = dot(prev, prev);
  const double nn = dot(next, next);
  return std::abs(cross(next, prev)) / (nn * np);
}

} // namespace polyshell
