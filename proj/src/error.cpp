#include "uckd/error.hpp"

namespace uckd {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::missing_file: return "MissingFile";
        case Errc::io_failure: return "IoFailure";
        case Errc::missing_target_column: return "MissingTargetColumn";
        case Errc::unparsable_cell: return "UnparsableCell";
        case Errc::missing_value: return "MissingValue";
        case Errc::empty_dataset: return "EmptyDataset";
        case Errc::too_few_samples: return "TooFewSamples";
        case Errc::empty_feature_set: return "EmptyFeatureSet";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::invalid_config: return "InvalidConfig";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::not_normalized: return "NotNormalized";
        case Errc::model_untrained: return "ModelUntrained";
        case Errc::kind_mismatch: return "KindMismatch";
        case Errc::too_few_points: return "TooFewPoints";
        case Errc::too_few_patterns: return "TooFewPatterns";
        case Errc::impure_pattern: return "ImpurePattern";
        case Errc::no_relevant_features: return "NoRelevantFeatures";
        case Errc::empty_ensemble: return "EmptyEnsemble";
        case Errc::invalid_threshold: return "InvalidThreshold";
        case Errc::dataset_mismatch: return "DatasetMismatch";
        case Errc::bad_document: return "BadDocument";
    }
    return "Unknown";
}

ErrorCategory category(Errc code) noexcept {
    switch (code) {
        case Errc::missing_file:
        case Errc::io_failure:
            return ErrorCategory::io;
        case Errc::no_relevant_features:
            return ErrorCategory::no_relevant_features;
        default:
            return ErrorCategory::validation;
    }
}

}  // namespace uckd
