#include "cganopt/metrics/indicators.hpp"

#include <cmath>
#include <stdexcept>

namespace cganopt::metrics {

double improvement_pct(double train_value, double gen_value, district::Direction direction) {
    const double sign = direction == district::Direction::maximize ? 1.0 : -1.0;
    if (gen_value == train_value) return 0.0;
    const double base = train_value == 0.0 ? std::abs(gen_value) : std::abs(train_value);
    return sign * (gen_value - train_value) / base * 100.0;
}

BestObjectives extract_best(std::span<const district::ObjectiveTriple> objectives) {
    if (objectives.empty()) throw std::invalid_argument("extract_best: empty solution set");
    BestObjectives b{objectives[0].ghg, objectives[0].lcc, objectives[0].walkscore, 0, 0, 0};
    for (std::size_t i = 1; i < objectives.size(); ++i) {
        const auto& o = objectives[i];
        if (o.ghg < b.min_ghg) b.min_ghg = o.ghg, b.min_ghg_index = i;
        if (o.lcc < b.min_lcc) b.min_lcc = o.lcc, b.min_lcc_index = i;
        if (o.walkscore > b.max_walkscore) b.max_walkscore = o.walkscore, b.max_walkscore_index = i;
    }
    return b;
}

}  // namespace cganopt::metrics
