#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace fdv {

// Integer pixel coordinate; x grows to the right, y grows downwards.
struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Row-major order: (y, x) lexicographic.
inline bool row_major_less(const Point& a, const Point& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

inline std::int64_t squared_distance(const Point& a, const Point& b) {
  const std::int64_t dx = std::int64_t{a.x} - b.x;
  const std::int64_t dy = std::int64_t{a.y} - b.y;
  return dx * dx + dy * dy;
}

struct PointD {
  double x = 0.0;
  double y = 0.0;
};

using PointSet = std::vector<Point>;

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  int right() const { return x + width; }
  int bottom() const { return y + height; }
  bool empty() const { return width <= 0 || height <= 0; }
  bool contains(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

Rect intersect(const Rect& a, const Rect& b);

}  // namespace fdv
