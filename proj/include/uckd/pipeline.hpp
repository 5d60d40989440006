#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uckd/dataset.hpp"
#include "uckd/error.hpp"
#include "uckd/patterns.hpp"
#include "uckd/selection.hpp"
#include "uckd/uc_model.hpp"

namespace uckd {

struct PipelineConfig {
    UCConfig uc;
    SelectionThresholds thresholds;
    std::size_t ensemble_size = 100;
    double confidence_min = 1.0;
    std::uint64_t base_seed = 0;
    std::size_t eval_repeats = 100;
    double split_fraction = 0.8;

    void validate() const;
};

/// Mean and sample standard deviation (0 for a single value).
struct AccuracySummary {
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> values;

    static AccuracySummary of(std::vector<double> values);
};

/// Accuracy of one trained model; `seed` is the shuffle seed of its input order.
struct ModelScore {
    std::uint64_t seed = 0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
};

struct PipelineReport {
    PipelineConfig config;
    std::string status;  // "complete" or "aborted_no_relevant_features"
    std::vector<std::string> feature_names;
    TargetKind target_kind = TargetKind::categorical;
    std::vector<std::string> class_labels;
    std::size_t initial_dims = 0;
    std::size_t final_dims = 0;
    double reduction_fraction = 0.0;

    // Steps 1-3: one entry per ensemble member.
    std::vector<MemberSelection> members;
    std::vector<ModelScore> ensemble_scores;
    // Step 4.
    ConfidenceMap confidence;
    FeatureSet selected;
    // Step 6.
    std::vector<ModelScore> eval_scores;
    // Accuracy summaries exist for categorical targets only.
    std::optional<AccuracySummary> initial_train;
    std::optional<AccuracySummary> initial_test;
    std::optional<AccuracySummary> final_train;
    std::optional<AccuracySummary> final_test;
    double train_gain = 0.0;
    double test_gain = 0.0;
    // Step 7: patterns of the model trained on the reduced train set in its
    // original, unshuffled order.
    std::vector<Pattern> final_patterns;
    std::vector<std::string> final_feature_names;
};

/// Raised when no feature reaches the confidence threshold. Carries the
/// report with steps 1-4 filled in.
class PipelineAborted : public Error {
public:
    explicit PipelineAborted(PipelineReport partial)
        : Error(Errc::no_relevant_features, "no feature reaches the confidence threshold"),
          partial_(std::move(partial)) {}

    const PipelineReport& partial() const noexcept { return partial_; }

private:
    PipelineReport partial_;
};

/// Ensemble selection, reduction, repeated retraining and final pattern extraction.
PipelineReport run_pipeline(const Dataset& train, const Dataset& test, const PipelineConfig& cfg);

// Experiments --------------------------------------------------------------

struct PatternValidityIteration {
    std::uint64_t seed = 0;
    std::string status;  // "ok", "no_relevant_features" or "too_few_patterns"
    std::size_t selected_dims = 0;
    double initial_train = 0.0;
    double initial_test = 0.0;
    double final_train = 0.0;
    double final_test = 0.0;
};

struct PatternValidityReport {
    PipelineConfig config;
    std::size_t initial_dims = 0;
    std::vector<PatternValidityIteration> iterations;
    AccuracySummary initial_train;
    AccuracySummary initial_test;
    AccuracySummary final_train;
    AccuracySummary final_test;
    double mean_final_dims = 0.0;
    double mean_reduction_fraction = 0.0;
    double train_gain = 0.0;
    double test_gain = 0.0;
};

/// Repeats single-model reduction: train on a shuffled order, select features
/// from that model's patterns, retrain on the reduced data in the same order.
/// Iterations where nothing qualifies keep every feature.
PatternValidityReport experiment_pattern_validity(const Dataset& train, const Dataset& test,
                                                  const PipelineConfig& cfg);

enum class BaselineMethod { proposal, pca, som };

struct BaselineSpec {
    BaselineMethod method = BaselineMethod::proposal;
    std::size_t dims = 0;  // ignored for the proposal

    static BaselineSpec parse(std::string_view text);  // "proposal", "pca:10", "som:9"
    std::string label() const;
};

struct BaselineOptions {
    std::size_t som_epochs = 50;
    /// Grid side used when a SOM reduces to 2 dims (BMU coordinates).
    std::size_t som_coords_grid_side = 10;
};

struct ComparisonRow {
    std::string method;
    double initial_train = 0.0;
    double initial_test = 0.0;
    double final_train = 0.0;
    double final_test = 0.0;
    double train_gain = 0.0;
    double test_gain = 0.0;
    double reduction_fraction = 0.0;
    double final_dims = 0.0;
    double final_train_stddev = 0.0;
    double final_test_stddev = 0.0;
    bool rank_deficient = false;
};

struct ComparisonTable {
    PipelineConfig config;
    BaselineOptions options;
    std::size_t initial_dims = 0;
    std::vector<ComparisonRow> rows;
};

ComparisonTable experiment_baseline_comparison(const Dataset& train, const Dataset& test, const PipelineConfig& cfg,
                                               const std::vector<BaselineSpec>& specs,
                                               const BaselineOptions& options = {});

/// Trains `repeats` models on shuffles seeded first_seed + j and scores each.
std::vector<ModelScore> evaluate_repeats(const Dataset& train, const Dataset& test, const UCConfig& config,
                                         std::size_t repeats, std::uint64_t first_seed);

}  // namespace uckd
