#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "uckd/dataset.hpp"
#include "uckd/patterns.hpp"
#include "uckd/pipeline.hpp"
#include "uckd/selection.hpp"
#include "uckd/stats.hpp"
#include "uckd/uc_model.hpp"

namespace uckd {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const NormParams& p);
NormParams norm_params_from_json(const Json& j);

/// {"origin_feature_count": n, "indices": [...], "names": [...]}; names are
/// written when `names` is non-empty.
Json to_json(const FeatureSet& s, const std::vector<std::string>& names = {});
/// Accepts a bare index array (needs `feature_count`), a FeatureSet object,
/// or any report carrying a "selected" FeatureSet.
FeatureSet feature_set_from_json(const Json& j, std::size_t feature_count);

Json to_json(const UCConfig& c);
UCConfig uc_config_from_json(const Json& j);
Json to_json(const SelectionThresholds& t);
Json to_json(const PipelineConfig& c);

Json to_json(const UCModel& m);
UCModel model_from_json(const Json& j);

Json patterns_to_json(const UCModel& m, const std::vector<Pattern>& patterns);
Json patterns_to_json(const std::vector<Pattern>& patterns, const std::vector<std::string>& feature_names,
                      const std::vector<std::string>& class_labels, TargetKind kind);

Json to_json(const FeatureCorrelationReport& r, const std::vector<std::string>& feature_names,
             const std::vector<std::string>& class_labels);
/// Columns: feature, class, r, p, degenerate.
void write_correlation_csv(std::ostream& out, const FeatureCorrelationReport& r,
                           const std::vector<std::string>& feature_names,
                           const std::vector<std::string>& class_labels);

Json to_json(const ConfidenceMap& c, const FeatureSet& selected, const std::vector<std::string>& feature_names);
/// Columns: feature, confidence, selected.
void write_confidence_csv(std::ostream& out, const ConfidenceMap& c, const FeatureSet& selected,
                          const std::vector<std::string>& feature_names);

Json to_json(const PipelineReport& r);
Json to_json(const PatternValidityReport& r);
Json to_json(const ComparisonTable& t);
/// Table-1 column order: method, initial/final train/test accuracy, gains, reduction.
void write_comparison_csv(std::ostream& out, const ComparisonTable& t);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace uckd
