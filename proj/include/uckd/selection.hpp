#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uckd/dataset.hpp"
#include "uckd/stats.hpp"
#include "uckd/uc_model.hpp"

namespace uckd {

/// Significance and magnitude filters. `r_min` must stay above `floor`.
struct SelectionThresholds {
    static constexpr double floor = 0.5;
    double r_min = 0.6;
    double p_max = 0.01;

    void validate() const;
    bool operator==(const SelectionThresholds&) const = default;
};

/// Fraction of ensemble members that selected each feature.
struct ConfidenceMap {
    std::vector<std::size_t> hits;
    std::size_t ensemble_size = 0;

    double confidence(std::size_t feature) const {
        return static_cast<double>(hits[feature]) / static_cast<double>(ensemble_size);
    }
    std::size_t feature_count() const noexcept { return hits.size(); }
    bool operator==(const ConfidenceMap&) const = default;
};

/// A feature survives when any of its entries has p <= p_max and |r| >= r_min.
/// Throws NoRelevantFeatures if nothing survives.
FeatureSet select_features_single(const FeatureCorrelationReport& report, const SelectionThresholds& t);

ConfidenceMap ensemble_confidence(std::span<const FeatureSet> feature_sets, std::size_t feature_count);

/// Features with confidence >= confidence_min (which must lie in [0.5, 1]).
FeatureSet select_by_confidence(const ConfidenceMap& confidence, double confidence_min);

/// What one model contributed to an ensemble.
struct MemberSelection {
    std::uint64_t seed = 0;
    FeatureSet selected;  // empty when the model found nothing relevant
    std::size_t pattern_count = 0;
    std::string status;   // "ok", "no_relevant_features" or "too_few_patterns"

    bool operator==(const MemberSelection&) const = default;
};

/// Mines, correlates and filters one trained model. Never throws
/// NoRelevantFeatures; that outcome is reported through `status`.
MemberSelection select_from_model(const UCModel& model, const SelectionThresholds& t);

struct EnsembleSelection {
    FeatureSet selected;
    ConfidenceMap confidence;
    std::vector<MemberSelection> members;
};

/// Trains `ensemble_size` models on shuffles seeded base_seed + i and keeps
/// the features that enough of them agree on.
EnsembleSelection select_features_ensemble(const Dataset& train, const UCConfig& config,
                                           const SelectionThresholds& t, std::size_t ensemble_size,
                                           double confidence_min, std::uint64_t base_seed);

void validate_confidence_min(double confidence_min);

}  // namespace uckd
