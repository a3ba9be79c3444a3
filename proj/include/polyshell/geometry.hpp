#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyshell {

/// Thrown when an argument lies outside the domain of an operation
/// (bad vertex count, non-positive radius, mismatched dimensions, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(double s, const Vec2& a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product of (a, 0) and (b, 0).
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

/// Undeformed regular n-gon resting on the line y = 0.
///
/// P1 sits at the origin, the center at (0, R), and the remaining vertices
/// follow counter-clockwise. Storage is 0-based: vertex(0) is P1.
class Polygon {
public:
  Polygon(int n, double circumradius);

  int size() const { return static_cast<int>(vertices_.size()); }
  double circumradius() const { return circumradius_; }
  Vec2 center() const { return {0.0, circumradius_}; }
  std::span<const Vec2> vertices() const { return vertices_; }
  const Vec2& vertex(int i) const { return vertices_.at(static_cast<std::size_t>(i)); }

  double edge_length() const;
  double signed_area() const;

private:
  double circumradius_;
  std::vector<Vec2> vertices_;
};

Polygon build_polygon(int n, double circumradius);

/// Entry i is P_{i+2} - P_{i+1} in 1-based labels; the last edge closes Pn -> P1.
std::vector<Vec2> edge_vectors(const Polygon& p);

/// C = |PiPi+1 x Pi-1Pi| / (|PiPi+1|^2 |Pi-1Pi|^2), in closed form sin(2pi/n) / l^2.
double bending_constant(const Polygon& p);

/// The defining ratio of the bending constant evaluated at 1-based vertex label i.
double bending_constant_at(const Polygon& p, int label);

/// 1-based label of the vertex mirrored across the symmetry axis x = 0.
inline int mirror_label(int n, int label) { return label == 1 ? 1 : n + 2 - label; }

} // namespace polyshell
