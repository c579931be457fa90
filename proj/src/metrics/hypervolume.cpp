#include "cganopt/metrics/hypervolume.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <stdexcept>

namespace cganopt::metrics {

namespace {

bool weakly_dominates(const Point3& a, const Point3& b) {
    return a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2];
}

// Non-dominated 2-D points keyed by x; y strictly decreases with x.
class Staircase {
public:
    Staircase(double ref_x, double ref_y) : ref_x_(ref_x), ref_y_(ref_y) {}

    void insert(double x, double y) {
        auto it = steps_.upper_bound(x);
        if (it != steps_.begin() && std::prev(it)->second <= y) return;  // dominated
        // Drop the points the new one dominates: x' >= x, y' >= y.
        auto first = steps_.lower_bound(x);
        auto last = first;
        while (last != steps_.end() && last->second >= y) ++last;
        steps_.erase(first, last);
        steps_.emplace(x, y);
        area_ = compute_area();
    }

    double area() const { return area_; }

private:
    double compute_area() const {
        double a = 0.0;
        for (auto it = steps_.begin(); it != steps_.end(); ++it) {
            const auto next = std::next(it);
            const double right = next == steps_.end() ? ref_x_ : next->first;
            a += (right - it->first) * (ref_y_ - it->second);
        }
        return a;
    }

    double ref_x_;
    double ref_y_;
    double area_ = 0.0;
    std::map<double, double> steps_;
};

std::vector<Point3> inside_reference(std::span<const Point3> points, const Point3& ref) {
    std::vector<Point3> out;
    for (const auto& p : points)
        if (p[0] < ref[0] && p[1] < ref[1] && p[2] < ref[2]) out.push_back(p);
    return out;
}

void oracle_dfs(const std::vector<Point3>& pts, const Point3& ref, std::size_t start, const Point3& corner,
                int parity, double& total) {
    for (std::size_t i = start; i < pts.size(); ++i) {
        const Point3 c{std::max(corner[0], pts[i][0]), std::max(corner[1], pts[i][1]),
                       std::max(corner[2], pts[i][2])};
        const double vol = (ref[0] - c[0]) * (ref[1] - c[1]) * (ref[2] - c[2]);
        if (vol <= 0.0) continue;  // every superset is empty too
        total += parity * vol;
        oracle_dfs(pts, ref, i + 1, c, -parity, total);
    }
}

}  // namespace

std::vector<Point3> nondominated(std::span<const Point3> points) {
    std::vector<Point3> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<Point3> out;
    // Lexicographic order means a dominator always precedes what it dominates.
    for (const auto& p : sorted) {
        const bool dominated =
            std::any_of(out.begin(), out.end(), [&](const Point3& q) { return weakly_dominates(q, p); });
        if (!dominated) out.push_back(p);
    }
    return out;
}

double hypervolume(std::span<const Point3> points, const Point3& reference) {
    auto front = nondominated(inside_reference(points, reference));
    if (front.empty()) return 0.0;
    std::sort(front.begin(), front.end(), [](const Point3& a, const Point3& b) { return a[2] < b[2]; });

    Staircase slice(reference[0], reference[1]);
    double volume = 0.0;
    for (std::size_t i = 0; i < front.size(); ++i) {
        slice.insert(front[i][0], front[i][1]);
        const double top = i + 1 < front.size() ? front[i + 1][2] : reference[2];
        volume += slice.area() * (top - front[i][2]);
    }
    return volume;
}

double hypervolume_oracle(std::span<const Point3> points, const Point3& reference) {
    if (points.size() > kMaxOraclePoints)
        throw std::invalid_argument("hypervolume_oracle: at most " + std::to_string(kMaxOraclePoints) +
                                    " points");
    const std::vector<Point3> pts(points.begin(), points.end());
    double total = 0.0;
    const Point3 lowest{-1e300, -1e300, -1e300};
    oracle_dfs(pts, reference, 0, lowest, 1, total);
    return total;
}

}  // namespace cganopt::metrics
