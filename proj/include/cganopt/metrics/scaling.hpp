#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cganopt/district/reference_model.hpp"

namespace cganopt::metrics {

using Point3 = std::array<double, 3>;

// Most and least desirable value of each objective (LCC, GHG, WalkScore).
struct ScalingAnchors {
    district::ObjectiveTriple best;
    district::ObjectiveTriple worst;
};

// Throws std::invalid_argument on an empty set.
ScalingAnchors fit_anchors(std::span<const district::ObjectiveTriple> training);

// Objectives mapped so that best -> 0 and worst -> 1 on every axis.
struct ScaledFront {
    std::vector<Point3> points;  // unclamped
    ScalingAnchors anchors;
    std::vector<std::string> warnings;

    // Copy clamped into [0,1]^3, the form the hypervolume expects.
    std::vector<Point3> clamped() const;
};

ScaledFront minmax_scale(std::span<const district::ObjectiveTriple> points, const ScalingAnchors& anchors);

// Inverse map; degenerate axes return the anchor value.
district::ObjectiveTriple unscale(const Point3& p, const ScalingAnchors& anchors);

}  // namespace cganopt::metrics
