#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ptl/env.hpp"

namespace ptl {

/// Per-coordinate range normalization (v - min) / (max - min) over a cost
/// cloud. Coordinates with zero range carry no information and are dropped
/// from normalized vectors; `dropped` lists them.
class CostNormalizer {
 public:
  explicit CostNormalizer(std::span<const CostVector> cloud) {
    if (cloud.empty()) return;
    const std::size_t m = cloud.front().size();
    for (std::size_t k = 0; k < m; ++k) {
      double lo = cloud.front()[k], hi = lo;
      for (const auto& v : cloud) {
        lo = std::min(lo, v[k]);
        hi = std::max(hi, v[k]);
      }
      if (hi > lo) {
        kept_.push_back(k);
        lo_.push_back(lo);
        range_.push_back(hi - lo);
      } else {
        dropped_.push_back(k);
      }
    }
  }

  CostVector operator()(std::span<const double> v) const {
    CostVector out(kept_.size());
    for (std::size_t i = 0; i < kept_.size(); ++i) out[i] = (v[kept_[i]] - lo_[i]) / range_[i];
    return out;
  }

  const std::vector<std::size_t>& dropped() const { return dropped_; }
  std::size_t dimension() const { return kept_.size(); }

 private:
  std::vector<std::size_t> kept_;
  std::vector<double> lo_;
  std::vector<double> range_;
  std::vector<std::size_t> dropped_;
};

inline double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Worst per-coordinate increase when moving from `inside` to `outside`
/// (zero if nothing gets worse).
inline double degradation(std::span<const double> inside, std::span<const double> outside) {
  double worst = 0.0;
  for (std::size_t i = 0; i < inside.size(); ++i) worst = std::max(worst, outside[i] - inside[i]);
  return worst;
}

namespace detail {

inline double cross(const CostVector& o, const CostVector& a, const CostVector& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; input sorted and unique. Collinear points on the
// hull boundary are kept so no extreme point is lost to rounding.
inline std::vector<CostVector> hull_2d(const std::vector<CostVector>& pts) {
  if (pts.size() < 3) return pts;
  std::vector<CostVector> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) < 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) < 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace detail

/// Largest pairwise Euclidean distance in `points`.
inline double diameter(std::vector<CostVector> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 2) return 0.0;
  // The farthest pair lies on the convex hull; in the plane that shrinks the
  // quadratic scan to hull vertices.
  if (points.front().size() == 2) points = detail::hull_2d(points);
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) best = std::max(best, euclidean(points[i], points[j]));
  return best;
}

}  // namespace ptl
