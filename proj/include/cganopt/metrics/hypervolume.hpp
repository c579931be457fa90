#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cganopt/metrics/scaling.hpp"

namespace cganopt::metrics {

inline constexpr Point3 kUnitReference{1.0, 1.0, 1.0};
inline constexpr std::size_t kMaxOraclePoints = 20;

// Points not dominated by any other (minimization), duplicates collapsed.
std::vector<Point3> nondominated(std::span<const Point3> points);

// Volume dominated by the points and bounded by `reference`: a sweep over
// the third coordinate accumulating 2-D staircase areas.
double hypervolume(std::span<const Point3> points, const Point3& reference = kUnitReference);

// Inclusion-exclusion over all subsets. Throws std::invalid_argument for
// more than kMaxOraclePoints points.
double hypervolume_oracle(std::span<const Point3> points, const Point3& reference = kUnitReference);

}  // namespace cganopt::metrics
