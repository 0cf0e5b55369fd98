#pragma once

#include <cmath>
#include <stdexcept>

namespace mnsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

  double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Axis-aligned rectangle with inclusive bounds.
struct Rect {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

  bool contains(Vec2 p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  bool contains(const Rect& r) const {
    return r.min_x >= min_x && r.max_x <= max_x && r.min_y >= min_y && r.max_y <= max_y;
  }
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  Vec2 center() const { return {(min_x + max_x) / 2.0, (min_y + max_y) / 2.0}; }

  static Rect centered_square(Vec2 center, double side) {
    const double h = side / 2.0;
    return {center.x - h, center.y - h, center.x + h, center.y + h};
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// World layout: users roam the movement area, which contains the indoor
/// area. Everything else in the world extent is outdoor-only territory where
/// base stations may stand.
struct Geometry {
  Rect world;
  Rect movement;
  Rect indoor;

  /// Points on the indoor boundary classify as indoor.
  bool is_indoor(Vec2 p) const {
    if (!world.contains(p)) throw std::out_of_range("is_indoor: position outside world extent");
    return indoor.contains(p);
  }

  bool valid() const {
    return world.width() > 0.0 && world.height() > 0.0 && movement.width() > 0.0 &&
           movement.height() > 0.0 && indoor.width() > 0.0 && indoor.height() > 0.0 &&
           world.contains(movement) && movement.contains(indoor);
  }

  /// Concentric squares, all centered on the world center.
  static Geometry squares(double world_side, double movement_side, double indoor_side) {
    Geometry g;
    const Vec2 c{world_side / 2.0, world_side / 2.0};
    g.world = Rect{0.0, 0.0, world_side, world_side};
    g.movement = Rect::centered_square(c, movement_side);
    g.indoor = Rect::centered_square(c, indoor_side);
    return g;
  }

  friend bool operator==(const Geometry&, const Geometry&) = default;
};

}  // namespace mnsim
