#include "cganopt/metrics/front_history.hpp"

#include "cganopt/metrics/hypervolume.hpp"

namespace cganopt::metrics {

std::vector<GenerationHypervolume> cumulative_hypervolume(const moo::SolutionArchive& archive) {
    std::vector<district::ObjectiveTriple> all;
    for (const auto& e : archive.entries())
        if (e.solution.feasible()) all.push_back(*e.solution.objectives);

    std::vector<GenerationHypervolume> out;
    if (archive.empty()) return out;
    const bool any = !all.empty();
    const ScalingAnchors anchors = any ? fit_anchors(all) : ScalingAnchors{};

    std::vector<Point3> front;  // running non-dominated set
    std::size_t seen = 0;
    std::size_t i = 0;
    const auto& entries = archive.entries();
    while (i < entries.size()) {
        const int gen = entries[i].generation;
        std::vector<district::ObjectiveTriple> batch;
        for (; i < entries.size() && entries[i].generation == gen; ++i)
            if (entries[i].solution.feasible()) batch.push_back(*entries[i].solution.objectives);
        seen += batch.size();
        if (!batch.empty()) {
            const auto scaled = minmax_scale(batch, anchors).clamped();
            front.insert(front.end(), scaled.begin(), scaled.end());
            front = nondominated(front);
        }
        out.push_back({gen, seen, hypervolume(front)});
    }
    return out;
}

}  // namespace cganopt::metrics
