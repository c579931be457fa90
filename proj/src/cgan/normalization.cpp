#include "cganopt/cgan/normalization.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace cganopt::cgan {

namespace {
constexpr std::array<const char*, 3> kLabelNames{"lcc", "ghg", "walkscore"};

double component(const district::ObjectiveTriple& o, std::size_t m) {
    return m == 0 ? o.lcc : (m == 1 ? o.ghg : o.walkscore);
}
}  // namespace

NormalizationSpec NormalizationSpec::fit(std::span<const district::ObjectiveTriple> training) {
    if (training.empty()) throw std::invalid_argument("normalization: empty training set");
    NormalizationSpec spec;
    for (std::size_t i = 0; i < district::kFieldCount; ++i)
        spec.features_[i] = {static_cast<double>(district::kFieldBounds[i].lo),
                             static_cast<double>(district::kFieldBounds[i].hi)};
    for (std::size_t m = 0; m < 3; ++m) {
        double lo = component(training.front(), m), hi = lo;
        for (const auto& o : training) {
            lo = std::min(lo, component(o, m));
            hi = std::max(hi, component(o, m));
        }
        spec.labels_[m] = {lo, hi};
        if (!(hi > lo))
            spec.warnings_.push_back(std::string("degenerate label range for ") + kLabelNames[m] + " (all values " +
                                     std::to_string(lo) + "); normalized to 0");
    }
    return spec;
}

double NormalizationSpec::normalize_feature(std::size_t field, double value) const {
    return features_.at(field).to_unit(value);
}

int NormalizationSpec::denormalize_feature(std::size_t field, double raw) const {
    return static_cast<int>(std::lround(features_.at(field).from_unit(raw)));
}

district::FieldArray NormalizationSpec::denormalize_features(std::span<const double> raw) const {
    if (raw.size() != district::kFieldCount) throw std::invalid_argument("denormalize_features: expected 10 values");
    district::FieldArray f{};
    for (std::size_t i = 0; i < district::kFieldCount; ++i) f[i] = denormalize_feature(i, raw[i]);
    return f;
}

double NormalizationSpec::normalize_label(std::size_t objective, double value) const {
    const auto& r = labels_.at(objective);
    return r.degenerate() ? 0.0 : r.to_unit(value);
}

double NormalizationSpec::denormalize_label(std::size_t objective, double unit) const {
    const auto& r = labels_.at(objective);
    return r.degenerate() ? r.lo : r.from_unit(unit);
}

nn::Matrix NormalizationSpec::feature_matrix(std::span<const district::DecisionVector> decisions) const {
    nn::Matrix m(decisions.size(), district::kFieldCount);
    for (std::size_t r = 0; r < decisions.size(); ++r) {
        const auto f = decisions[r].to_array();
        for (std::size_t i = 0; i < district::kFieldCount; ++i) m(r, i) = normalize_feature(i, f[i]);
    }
    return m;
}

nn::Matrix NormalizationSpec::label_matrix(std::span<const district::ObjectiveTriple> objectives) const {
    nn::Matrix m(objectives.size(), 3);
    for (std::size_t r = 0; r < objectives.size(); ++r)
        for (std::size_t k = 0; k < 3; ++k) m(r, k) = normalize_label(k, component(objectives[r], k));
    return m;
}

void NormalizationSpec::save(const std::filesystem::path& path) const {
    nlohmann::ordered_json j;
    j["format"] = "cganopt-normalization";
    j["version"] = 1;
    for (std::size_t i = 0; i < district::kFieldCount; ++i)
        j["features"].push_back({{"name", district::kFieldNames[i]}, {"lo", features_[i].lo}, {"hi", features_[i].hi}});
    for (std::size_t m = 0; m < 3; ++m)
        j["labels"].push_back({{"name", kLabelNames[m]}, {"lo", labels_[m].lo}, {"hi", labels_[m].hi}});
    j["warnings"] = warnings_;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

NormalizationSpec NormalizationSpec::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    const auto j = nlohmann::json::parse(in);
    if (j.value("version", 0) != 1) throw std::runtime_error("normalization: unsupported version");
    NormalizationSpec spec;
    for (std::size_t i = 0; i < district::kFieldCount; ++i)
        spec.features_[i] = {j.at("features").at(i).at("lo").get<double>(), j.at("features").at(i).at("hi").get<double>()};
    for (std::size_t m = 0; m < 3; ++m)
        spec.labels_[m] = {j.at("labels").at(m).at("lo").get<double>(), j.at("labels").at(m).at("hi").get<double>()};
    spec.warnings_ = j.value("warnings", std::vector<std::string>{});
    return spec;
}

}  // namespace cganopt::cgan
