#include "fdv/error.hpp"
#include "fdv/geometry.hpp"

#include <algorithm>

namespace fdv {

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

ErrorCategory Error::category() const noexcept {
  switch (kind_) {
    case ErrorKind::load:
    case ErrorKind::io:
      return ErrorCategory::io;
    case ErrorKind::degenerate_geometry:
    case ErrorKind::domain:
    case ErrorKind::degenerate:
    case ErrorKind::normalization:
    case ErrorKind::convergence:
    case ErrorKind::insufficient_boundary:
      return ErrorCategory::numeric;
    default:
      return ErrorCategory::validation;
  }
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::bounds: return "bounds";
    case ErrorKind::kind_mismatch: return "kind-mismatch";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::load: return "load";
    case ErrorKind::io: return "io";
    case ErrorKind::degenerate_geometry: return "degenerate-geometry";
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::normalization: return "normalization";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::insufficient_sequence: return "insufficient-sequence";
    case ErrorKind::insufficient_boundary: return "insufficient-boundary";
    case ErrorKind::scenario: return "scenario";
  }
  return "unknown";
}

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::validation: return 2;
    case ErrorCategory::io: return 3;
    case ErrorCategory::numeric: return 4;
  }
  return 1;
}

Rect intersect(const Rect& a, const Rect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return Rect{x0, y0, 0, 0};
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

}  // namespace fdv
