#include "cganopt/moo/nsga2.hpp"

#include <algorithm>
#include <numeric>

#include "cganopt/moo/operators.hpp"
#include "cganopt/moo/sorting.hpp"

namespace cganopt::moo {

namespace {

Solution evaluate_one(const DecisionVector& d, const Evaluator& evaluate) {
    Solution s;
    s.decision = d;
    const auto verdict = district::validate(d);
    s.violation_count = static_cast<int>(verdict.violations.size());
    if (verdict.feasible()) {
        try {
            s.objectives = evaluate(d);
        } catch (...) {
            s.objectives.reset();
        }
        // An evaluator refusing a vector that validates counts as one violation.
        if (!s.objectives) s.violation_count = std::max(s.violation_count, 1);
    }
    return s;
}

DecisionVector random_decision(Rng& rng) {
    district::FieldArray f{};
    for (std::size_t i = 0; i < district::kFieldCount; ++i)
        f[i] = rng.uniform_int(district::kFieldBounds[i].lo, district::kFieldBounds[i].hi);
    return DecisionVector::from_array(f);
}

}  // namespace

std::vector<Solution> evaluate_population(std::span<const DecisionVector> decisions, const Evaluator& evaluate) {
    std::vector<Solution> out(decisions.size());
    const auto n = static_cast<long>(decisions.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) out[i] = evaluate_one(decisions[i], evaluate);
    return out;
}

namespace serial {
std::vector<Solution> evaluate_population(std::span<const DecisionVector> decisions, const Evaluator& evaluate) {
    std::vector<Solution> out;
    out.reserve(decisions.size());
    for (const auto& d : decisions) out.push_back(evaluate_one(d, evaluate));
    return out;
}
}  // namespace serial

const Solution& tournament_winner(const Solution& a, const Solution& b) {
    if (a.rank != b.rank) return a.rank < b.rank ? a : b;
    if (a.crowding != b.crowding) return a.crowding > b.crowding ? a : b;
    return a;
}

std::vector<Solution> environmental_selection(std::vector<Solution> combined, std::size_t count) {
    assign_rank_and_crowding(combined);
    std::vector<std::size_t> order(combined.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (combined[a].rank != combined[b].rank) return combined[a].rank < combined[b].rank;
        return combined[a].crowding > combined[b].crowding;
    });
    std::vector<Solution> survivors;
    survivors.reserve(count);
    for (std::size_t k = 0; k < count && k < order.size(); ++k) survivors.push_back(combined[order[k]]);
    return survivors;
}

SolutionArchive run_nsga2(const GaConfig& cfg, const Evaluator& evaluate, const GenerationObserver& observer) {
    cfg.check();
    Rng rng(cfg.rng_seed);
    auto draw = [&rng] { return rng.uniform(); };
    const auto pop_size = static_cast<std::size_t>(cfg.population_size);

    SolutionArchive archive;
    std::vector<DecisionVector> seeds;
    for (std::size_t i = 0; i < pop_size; ++i) seeds.push_back(random_decision(rng));
    auto population = evaluate_population(seeds, evaluate);
    for (const auto& s : population) archive.append(s, 0);
    assign_rank_and_crowding(population);
    if (observer) observer(0, population);

    for (int gen = 1; gen <= cfg.generations; ++gen) {
        std::vector<DecisionVector> children;
        children.reserve(pop_size);
        for (std::size_t i = 0; i < pop_size; ++i) {
            const auto& a = population[rng.uniform_int(0, cfg.population_size - 1)];
            const auto& b = population[rng.uniform_int(0, cfg.population_size - 1)];
            children.push_back(tournament_winner(a, b).decision);
        }
        for (std::size_t i = 0; i + 1 < pop_size; i += 2) {
            if (rng.uniform() < cfg.crossover_prob)
                std::tie(children[i], children[i + 1]) = sbx_crossover(children[i], children[i + 1], cfg.eta, draw);
        }
        for (auto& c : children) c = polynomial_mutation(c, cfg.eta, cfg.mutation_prob, draw);

        auto offspring = evaluate_population(children, evaluate);
        for (const auto& s : offspring) archive.append(s, gen);

        population.insert(population.end(), offspring.begin(), offspring.end());
        population = environmental_selection(std::move(population), pop_size);
        if (observer) observer(gen, population);
    }
    return archive;
}

}  // namespace cganopt::moo
