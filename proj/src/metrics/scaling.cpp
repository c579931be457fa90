#include "cganopt/metrics/scaling.hpp"

#include <algorithm>
#include <stdexcept>

namespace cganopt::metrics {

namespace {

constexpr std::array<const char*, 3> kAxisNames{"lcc", "ghg", "walkscore"};

Point3 as_point(const district::ObjectiveTriple& o) { return {o.lcc, o.ghg, o.walkscore}; }
district::ObjectiveTriple as_triple(const Point3& p) { return {p[0], p[1], p[2]}; }

}  // namespace

ScalingAnchors fit_anchors(std::span<const district::ObjectiveTriple> training) {
    if (training.empty()) throw std::invalid_argument("fit_anchors: empty training set");
    ScalingAnchors a{training.front(), training.front()};
    for (const auto& o : training) {
        a.best.lcc = std::min(a.best.lcc, o.lcc);
        a.worst.lcc = std::max(a.worst.lcc, o.lcc);
        a.best.ghg = std::min(a.best.ghg, o.ghg);
        a.worst.ghg = std::max(a.worst.ghg, o.ghg);
        a.best.walkscore = std::max(a.best.walkscore, o.walkscore);
        a.worst.walkscore = std::min(a.worst.walkscore, o.walkscore);
    }
    return a;
}

std::vector<Point3> ScaledFront::clamped() const {
    std::vector<Point3> out = points;
    for (auto& p : out)
        for (auto& v : p) v = std::clamp(v, 0.0, 1.0);
    return out;
}

ScaledFront minmax_scale(std::span<const district::ObjectiveTriple> points, const ScalingAnchors& anchors) {
    ScaledFront front;
    front.anchors = anchors;
    const Point3 best = as_point(anchors.best);
    const Point3 worst = as_point(anchors.worst);
    for (std::size_t m = 0; m < 3; ++m)
        if (best[m] == worst[m])
            front.warnings.push_back(std::string("degenerate scaling range for ") + kAxisNames[m] +
                                     "; all values map to 0");

    front.points.reserve(points.size());
    for (const auto& o : points) {
        const Point3 v = as_point(o);
        Point3 s{};
        // (v - best)/(worst - best) flips maximized axes automatically.
        for (std::size_t m = 0; m < 3; ++m) s[m] = best[m] == worst[m] ? 0.0 : (v[m] - best[m]) / (worst[m] - best[m]);
        front.points.push_back(s);
    }
    return front;
}

district::ObjectiveTriple unscale(const Point3& p, const ScalingAnchors& anchors) {
    const Point3 best = as_point(anchors.best);
    const Point3 worst = as_point(anchors.worst);
    Point3 v{};
    for (std::size_t m = 0; m < 3; ++m) v[m] = best[m] + p[m] * (worst[m] - best[m]);
    return as_triple(v);
}

}  // namespace cganopt::metrics
