#include "uckd/selection.hpp"

#include <cmath>

#include "uckd/error.hpp"
#include "uckd/patterns.hpp"

namespace uckd {

void SelectionThresholds::validate() const {
    if (!(r_min > floor && r_min <= 1.0)) {
        throw Error(Errc::invalid_threshold, "r_min must lie in (0.5, 1]");
    }
    if (!(p_max > 0.0 && p_max < 1.0)) throw Error(Errc::invalid_threshold, "p_max must lie in (0, 1)");
}

void validate_confidence_min(double confidence_min) {
    if (!(confidence_min >= 0.5 && confidence_min <= 1.0)) {
        throw Error(Errc::invalid_threshold, "confidence_min must lie in [0.5, 1]");
    }
}

FeatureSet select_features_single(const FeatureCorrelationReport& report, const SelectionThresholds& t) {
    t.validate();
    if (report.entries.empty()) throw Error(Errc::empty_feature_set, "empty correlation report");
    std::vector<std::size_t> keep;
    for (std::size_t f = 0; f < report.entries.size(); ++f) {
        for (const auto& e : report.entries[f]) {
            if (!e.degenerate && e.p <= t.p_max && std::fabs(e.r) >= t.r_min) {
                keep.push_back(f);
                break;
            }
        }
    }
    if (keep.empty()) throw Error(Errc::no_relevant_features, "no feature passes the correlation filters");
    return FeatureSet(std::move(keep), report.entries.size());
}

ConfidenceMap ensemble_confidence(std::span<const FeatureSet> feature_sets, std::size_t feature_count) {
    if (feature_sets.empty()) throw Error(Errc::empty_ensemble, "no feature sets to combine");
    ConfidenceMap map;
    map.ensemble_size = feature_sets.size();
    map.hits.assign(feature_count, 0);
    for (const auto& set : feature_sets) {
        for (auto f : set.indices()) {
            if (f >= feature_count) throw Error(Errc::index_out_of_range, "feature index exceeds feature count");
            ++map.hits[f];
        }
    }
    return map;
}

FeatureSet select_by_confidence(const ConfidenceMap& confidence, double confidence_min) {
    validate_confidence_min(confidence_min);
    std::vector<std::size_t> keep;
    for (std::size_t f = 0; f < confidence.feature_count(); ++f) {
        if (confidence.confidence(f) >= confidence_min) keep.push_back(f);
    }
    return FeatureSet(std::move(keep), confidence.feature_count());
}

MemberSelection select_from_model(const UCModel& model, const SelectionThresholds& t) {
    MemberSelection out;
    const auto patterns = mine_for_target(model);
    out.pattern_count = patterns.size();
    out.selected = FeatureSet({}, model.feature_count());
    if (patterns.size() < 3) {
        out.status = "too_few_patterns";
        return out;
    }
    const auto report = correlate_patterns(patterns, model.target_kind(), model.class_labels().size());
    try {
        out.selected = select_features_single(report, t);
        out.status = "ok";
    } catch (const Error& e) {
        if (e.code() != Errc::no_relevant_features) throw;
        out.status = "no_relevant_features";
    }
    return out;
}

EnsembleSelection select_features_ensemble(const Dataset& train, const UCConfig& config,
                                           const SelectionThresholds& t, std::size_t ensemble_size,
                                           double confidence_min, std::uint64_t base_seed) {
    t.validate();
    validate_confidence_min(confidence_min);
    if (ensemble_size == 0) throw Error(Errc::empty_ensemble, "ensemble size must be positive");

    EnsembleSelection out;
    std::vector<FeatureSet> sets;
    for (std::size_t i = 0; i < ensemble_size; ++i) {
        const std::uint64_t seed = base_seed + i;
        const UCModel model = uckd::train(shuffle(train, seed), config);
        auto member = select_from_model(model, t);
        member.seed = seed;
        sets.push_back(member.selected);
        out.members.push_back(std::move(member));
    }
    out.confidence = ensemble_confidence(sets, train.feature_count());
    out.selected = select_by_confidence(out.confidence, confidence_min);
    if (out.selected.empty()) {
        throw Error(Errc::no_relevant_features, "no feature reaches the confidence threshold");
    }
    return out;
}

}  // namespace uckd
