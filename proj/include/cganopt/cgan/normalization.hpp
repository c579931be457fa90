#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cganopt/district/decision.hpp"
#include "cganopt/district/reference_model.hpp"
#include "cganopt/nn/matrix.hpp"

namespace cganopt::cgan {

// Affine map of [lo, hi] onto [-1, 1].
struct AffineRange {
    double lo;
    double hi;

    double to_unit(double v) const { return 2.0 * (v - lo) / (hi - lo) - 1.0; }
    double from_unit(double u) const { return (u + 1.0) / 2.0 * (hi - lo) + lo; }
    bool degenerate() const { return !(hi > lo); }
};

class NormalizationSpec {
public:
    // Feature ranges come from the decision bounds; label ranges from the
    // training objectives. Degenerate label ranges map to 0 with a warning.
    static NormalizationSpec fit(std::span<const district::ObjectiveTriple> training);

    double normalize_feature(std::size_t field, double value) const;
    // Rounds to the nearest integer; out-of-range results are kept.
    int denormalize_feature(std::size_t field, double raw) const;
    district::FieldArray denormalize_features(std::span<const double> raw) const;

    double normalize_label(std::size_t objective, double value) const;
    double denormalize_label(std::size_t objective, double unit) const;

    nn::Matrix feature_matrix(std::span<const district::DecisionVector> decisions) const;
    nn::Matrix label_matrix(std::span<const district::ObjectiveTriple> objectives) const;

    const std::array<AffineRange, district::kFieldCount>& feature_ranges() const { return features_; }
    const std::array<AffineRange, 3>& label_ranges() const { return labels_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    void save(const std::filesystem::path& path) const;
    static NormalizationSpec load(const std::filesystem::path& path);

private:
    std::array<AffineRange, district::kFieldCount> features_{};
    std::array<AffineRange, 3> labels_{};
    std::vector<std::string> warnings_;
};

}  // namespace cganopt::cgan
