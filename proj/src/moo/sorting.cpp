#include "cganopt/moo/sorting.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace cganopt::moo {

namespace {

struct DominationTable {
    std::vector<std::vector<std::size_t>> dominated;  // members each point dominates
    std::vector<std::size_t> dominated_by;            // count of points dominating it
};

DominationTable domination_serial(std::span<const MinVector> pts) {
    const std::size_t n = pts.size();
    DominationTable t{std::vector<std::vector<std::size_t>>(n), std::vector<std::size_t>(n, 0)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(pts[i], pts[j])) t.dominated[i].push_back(j);
            else if (dominates(pts[j], pts[i])) ++t.dominated_by[i];
        }
    }
    return t;
}

DominationTable domination_parallel(std::span<const MinVector> pts) {
    const auto n = static_cast<long>(pts.size());
    DominationTable t{std::vector<std::vector<std::size_t>>(pts.size()), std::vector<std::size_t>(pts.size(), 0)};
    // Row i is written only by the thread that owns i.
#pragma omp parallel for schedule(dynamic, 16) if (n > 256)
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(pts[i], pts[j])) t.dominated[i].push_back(static_cast<std::size_t>(j));
            else if (dominates(pts[j], pts[i])) ++t.dominated_by[i];
        }
    }
    return t;
}

Fronts peel_fronts(DominationTable t) {
    Fronts fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < t.dominated_by.size(); ++i)
        if (t.dominated_by[i] == 0) current.push_back(i);
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto i : current)
            for (auto j : t.dominated[i])
                if (--t.dominated_by[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

}  // namespace

Fronts non_dominated_sort(std::span<const MinVector> points) { return peel_fronts(domination_parallel(points)); }

namespace serial {
Fronts non_dominated_sort(std::span<const MinVector> points) { return peel_fronts(domination_serial(points)); }
}  // namespace serial

Fronts non_dominated_sort(std::span<const Solution> population) {
    std::vector<std::size_t> feasible;
    std::map<int, std::vector<std::size_t>> infeasible;
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (population[i].feasible()) feasible.push_back(i);
        else infeasible[population[i].violation_count].push_back(i);
    }

    std::vector<MinVector> pts;
    pts.reserve(feasible.size());
    for (auto i : feasible) pts.push_back(to_minimization(*population[i].objectives));

    Fronts fronts;
    for (auto& local : non_dominated_sort(pts)) {
        for (auto& idx : local) idx = feasible[idx];
        fronts.push_back(std::move(local));
    }
    for (auto& [violations, members] : infeasible) fronts.push_back(std::move(members));
    return fronts;
}

std::vector<double> crowding_distance(std::span<const MinVector> front) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < 3; ++m) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a][m] < front[b][m]; });
        const double range = front[order.back()][m] - front[order.front()][m];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (range <= 0.0) continue;
        for (std::size_t k = 1; k + 1 < n; ++k)
            dist[order[k]] += (front[order[k + 1]][m] - front[order[k - 1]][m]) / range;
    }
    return dist;
}

void assign_rank_and_crowding(std::vector<Solution>& population) {
    const auto fronts = non_dominated_sort(std::span<const Solution>(population));
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        const auto& front = fronts[r];
        const bool feasible_front = population[front.front()].feasible();
        std::vector<MinVector> pts;
        if (feasible_front)
            for (auto i : front) pts.push_back(to_minimization(*population[i].objectives));
        const auto dist = feasible_front ? crowding_distance(pts) : std::vector<double>(front.size(), 0.0);
        for (std::size_t k = 0; k < front.size(); ++k) {
            population[front[k]].rank = r;
            population[front[k]].crowding = dist[k];
        }
    }
}

}  // namespace cganopt::moo
