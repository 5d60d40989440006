#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace uckd {

enum class TargetKind { numeric, categorical };

std::string_view to_string(TargetKind kind) noexcept;
TargetKind parse_target_kind(std::string_view text);

/// Row-major sample matrix with named feature columns and one target column.
///
/// Immutable once built: every transformation returns a new Dataset. For
/// categorical targets the class labels are kept sorted, so a class index
/// doubles as the label's lexicographic rank.
class Dataset {
public:
    Dataset() = default;

    static Dataset numeric(std::vector<double> values, std::vector<std::string> feature_names,
                           std::string target_name, std::vector<double> targets);

    static Dataset categorical(std::vector<double> values, std::vector<std::string> feature_names,
                               std::string target_name, const std::vector<std::string>& labels);

    /// `class_labels` must be sorted and unique; `classes` index into it.
    static Dataset categorical_indexed(std::vector<double> values, std::vector<std::string> feature_names,
                                       std::string target_name, std::vector<std::string> class_labels,
                                       std::vector<std::size_t> classes);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t feature_count() const noexcept { return feature_names_.size(); }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * feature_count(), feature_count()};
    }
    double at(std::size_t i, std::size_t j) const { return values_[i * feature_count() + j]; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double> column(std::size_t j) const;

    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const std::string& target_name() const noexcept { return target_name_; }
    TargetKind target_kind() const noexcept { return kind_; }
    const std::vector<std::string>& class_labels() const noexcept { return class_labels_; }

    std::size_t class_index(std::size_t i) const { return classes_[i]; }
    const std::vector<std::size_t>& class_indices() const noexcept { return classes_; }
    double numeric_target(std::size_t i) const { return numeric_targets_[i]; }
    const std::vector<double>& numeric_targets() const noexcept { return numeric_targets_; }
    /// Target rendered as text: the class label, or the number.
    std::string target_text(std::size_t i) const;

    /// Rows picked by index, in the given order. Class labels are kept.
    Dataset select_rows(std::span<const std::size_t> indices) const;

    /// Same rows and targets with a replacement feature matrix.
    Dataset with_features(std::vector<double> values, std::vector<std::string> feature_names) const;

    bool operator==(const Dataset&) const = default;

private:
    void validate() const;

    std::vector<double> values_;
    std::size_t rows_ = 0;
    std::vector<std::string> feature_names_;
    std::string target_name_;
    TargetKind kind_ = TargetKind::numeric;
    std::vector<std::string> class_labels_;
    std::vector<std::size_t> classes_;
    std::vector<double> numeric_targets_;
};

struct NormParams {
    std::vector<double> min;
    std::vector<double> max;

    bool operator==(const NormParams&) const = default;
};

/// Sorted, duplicate-free column indices into a dataset of `origin_feature_count` features.
class FeatureSet {
public:
    FeatureSet() = default;
    FeatureSet(std::vector<std::size_t> indices, std::size_t origin_feature_count);

    static FeatureSet all(std::size_t feature_count);

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }
    std::size_t origin_feature_count() const noexcept { return origin_; }
    bool contains(std::size_t index) const;
    bool is_subset_of(const FeatureSet& other) const;

    bool operator==(const FeatureSet&) const = default;

private:
    std::vector<std::size_t> indices_;
    std::size_t origin_ = 0;
};

// CSV ----------------------------------------------------------------------

Dataset load_csv(const std::filesystem::path& path, std::string_view target_col, TargetKind kind);
Dataset parse_csv(std::istream& in, std::string_view target_col, TargetKind kind);
/// Features in order, target last. Reals use the shortest round-trip form.
void write_csv(std::ostream& out, const Dataset& d);
void save_csv(const std::filesystem::path& path, const Dataset& d);

// Transformations ----------------------------------------------------------

/// Min-max scaling fitted on `d`. Constant columns map to 0.
std::pair<Dataset, NormParams> normalize(const Dataset& d);
NormParams fit_norm(const Dataset& d);
/// Scales with previously fitted parameters, clamping into [0, 1].
Dataset apply_norm(const NormParams& params, const Dataset& d);
void apply_norm(const NormParams& params, std::span<const double> raw, std::span<double> out);
double denormalize_value(const NormParams& params, std::size_t feature, double scaled);

/// Deterministic split, stratified by class for categorical targets. Both
/// parts keep the input's relative row order.
std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction, std::uint64_t seed);

Dataset shuffle(const Dataset& d, std::uint64_t seed);

Dataset reduce_features(const Dataset& d, const FeatureSet& keep);

struct SynthConfig {
    std::size_t samples = 200;
    std::size_t informative = 5;
    std::size_t noise = 95;
    std::size_t classes = 2;
    double separation = 4.0;
    std::uint64_t seed = 7;
};

struct SynthDataset {
    Dataset data;
    FeatureSet informative;
};

/// Planted-signal classification data. Informative columns come first and
/// hold unit Gaussians whose mean for class c in column j is
/// separation * ((c + j) mod classes), so class centroids differ in
/// direction as well as magnitude. The remaining columns are uniform [0, 1]
/// noise. Informative columns are min-max scaled into [0, 1].
SynthDataset synth_generate(const SynthConfig& config);

}  // namespace uckd
