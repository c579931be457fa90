#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "cganopt/district/decision.hpp"

namespace cganopt::moo {

// Variation operators act on the real relaxation of each integer field and
// round back. `draw` yields uniforms in [0,1); the draw order is part of the
// contract so tests can pin it:
//   SBX, per field: apply (<0.5), and if parents differ, spread then swap (<0.5).
//   Mutation, per field: apply (<prob), and if applied, the perturbation draw.

// Bounded SBX spread factor for one side; `bound_gap` is the parent distance
// to the bound on that side divided by the parent spread.
inline double sbx_spread_factor(double u, double bound_gap, double eta) {
    const double beta = 1.0 + 2.0 * bound_gap;
    const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
    if (u <= 1.0 / alpha) return std::pow(u * alpha, 1.0 / (eta + 1.0));
    return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
}

// Children of one field before rounding.
struct SbxPair {
    double low;
    double high;
};

inline SbxPair sbx_field(double x1, double x2, double lo, double hi, double u, double eta) {
    if (x1 > x2) std::swap(x1, x2);
    const double spread = x2 - x1;
    const double bq_low = sbx_spread_factor(u, (x1 - lo) / spread, eta);
    const double bq_high = sbx_spread_factor(u, (hi - x2) / spread, eta);
    const double c1 = 0.5 * (x1 + x2 - bq_low * spread);
    const double c2 = 0.5 * (x1 + x2 + bq_high * spread);
    return {std::clamp(c1, lo, hi), std::clamp(c2, lo, hi)};
}

inline int round_to_field(double v, std::size_t field) {
    const auto& b = district::kFieldBounds[field];
    return std::clamp(static_cast<int>(std::lround(v)), b.lo, b.hi);
}

template <class Draw>
std::pair<district::DecisionVector, district::DecisionVector> sbx_crossover(const district::DecisionVector& a,
                                                                            const district::DecisionVector& b,
                                                                            double eta, Draw&& draw) {
    auto fa = a.to_array();
    auto fb = b.to_array();
    for (std::size_t i = 0; i < district::kFieldCount; ++i) {
        if (!(draw() < 0.5)) continue;
        if (fa[i] == fb[i]) continue;
        const auto& bounds = district::kFieldBounds[i];
        const auto kids = sbx_field(fa[i], fb[i], bounds.lo, bounds.hi, draw(), eta);
        const int low = round_to_field(kids.low, i);
        const int high = round_to_field(kids.high, i);
        if (draw() < 0.5) {
            fa[i] = high;
            fb[i] = low;
        } else {
            fa[i] = low;
            fb[i] = high;
        }
    }
    return {district::DecisionVector::from_array(fa), district::DecisionVector::from_array(fb)};
}

// Bounded polynomial mutation of one real value.
inline double polynomial_mutate_value(double x, double lo, double hi, double u, double eta) {
    const double range = hi - lo;
    const double power = 1.0 / (eta + 1.0);
    double delta;
    if (u < 0.5) {
        const double xy = 1.0 - (x - lo) / range;
        const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
        delta = std::pow(val, power) - 1.0;
    } else {
        const double xy = 1.0 - (hi - x) / range;
        const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
        delta = 1.0 - std::pow(val, power);
    }
    return std::clamp(x + delta * range, lo, hi);
}

template <class Draw>
district::DecisionVector polynomial_mutation(const district::DecisionVector& d, double eta, double mutation_prob,
                                             Draw&& draw) {
    auto f = d.to_array();
    for (std::size_t i = 0; i < district::kFieldCount; ++i) {
        if (!(draw() < mutation_prob)) continue;
        const auto& bounds = district::kFieldBounds[i];
        f[i] = round_to_field(polynomial_mutate_value(f[i], bounds.lo, bounds.hi, draw(), eta), i);
    }
    return district::DecisionVector::from_array(f);
}

}  // namespace cganopt::moo
