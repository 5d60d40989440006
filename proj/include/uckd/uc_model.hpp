#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uckd/dataset.hpp"

namespace uckd {

enum class Metric { cosine, inverse_euclidean };

std::string_view to_string(Metric metric) noexcept;
Metric parse_metric(std::string_view text);

/// Knobs of the tree builder.
///
/// A cell at depth d merges an input into its most similar representation
/// when the similarity reaches 1 - (1 - theta0) * gamma^d, so deeper cells
/// demand closer matches. An input within Euclidean distance
/// `epsilon_identity` of a stored leaf is a duplicate: it is absorbed along
/// that leaf's path and never creates a representation.
struct UCConfig {
    Metric metric = Metric::cosine;
    double theta0 = 0.9;
    double gamma = 0.5;
    double epsilon_identity = 1e-9;
    std::optional<std::size_t> max_depth;
    /// Record which inputs each representation absorbed (for verification).
    bool audit = false;

    void validate() const;
    double threshold(std::size_t depth) const;

    bool operator==(const UCConfig&) const = default;
};

/// Similarity in [0, 1]. Cosine is clamped at 0; inverse Euclidean is 1 / (1 + |a - b|).
double similarity(std::span<const double> a, std::span<const double> b, Metric metric);

struct Cell;

struct Representation {
    std::vector<double> mean;
    std::size_t count = 0;
    /// Inputs per class index. Numeric targets use a single bucket.
    std::vector<std::size_t> label_hist;
    double target_mean = 0.0;
    std::size_t depth = 0;
    std::unique_ptr<Cell> child;
    /// Insertion ids of absorbed inputs; filled only in audit mode.
    std::vector<std::size_t> members;

    Representation() = default;
    Representation(const Representation& other);
    Representation& operator=(const Representation& other);
    Representation(Representation&&) noexcept = default;
    Representation& operator=(Representation&&) noexcept = default;
    ~Representation();

    std::size_t class_count() const;
    /// The only class present, if exactly one.
    std::optional<std::size_t> pure_class() const;
};

struct Cell {
    std::size_t depth = 0;
    std::vector<Representation> reps;
};

/// Target attached to an inserted input.
struct Target {
    std::size_t class_index = 0;
    double value = 0.0;

    static Target category(std::size_t index) { return {index, 0.0}; }
    static Target number(double v) { return {0, v}; }
};

/// The representation tree plus everything needed to route raw inputs into it.
class UCModel {
public:
    UCModel() = default;
    UCModel(UCConfig config, NormParams norm, std::vector<std::string> feature_names, std::string target_name,
            TargetKind kind, std::vector<std::string> class_labels);

    /// Absorbs one normalized input.
    void insert(std::span<const double> x, Target target);

    const Cell& seed_cell() const noexcept { return seed_; }
    const UCConfig& config() const noexcept { return config_; }
    const NormParams& norm() const noexcept { return norm_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const std::string& target_name() const noexcept { return target_name_; }
    TargetKind target_kind() const noexcept { return kind_; }
    const std::vector<std::string>& class_labels() const noexcept { return class_labels_; }
    std::size_t feature_count() const noexcept { return feature_names_.size(); }
    std::size_t total_inputs() const noexcept { return total_inputs_; }
    bool trained() const noexcept { return total_inputs_ > 0; }

    /// Rebuilds a model from a stored tree (deserialization).
    static UCModel restore(UCConfig config, NormParams norm, std::vector<std::string> feature_names,
                           std::string target_name, TargetKind kind, std::vector<std::string> class_labels,
                           Cell seed, std::size_t total_inputs);

private:
    std::size_t bucket_count() const { return kind_ == TargetKind::categorical ? class_labels_.size() : 1; }
    Representation make_literal(std::span<const double> x, Target target, std::size_t depth, std::size_t id) const;
    void absorb(Representation& rep, std::span<const double> x, Target target, std::size_t id) const;

    UCConfig config_;
    NormParams norm_;
    std::vector<std::string> feature_names_;
    std::string target_name_;
    TargetKind kind_ = TargetKind::categorical;
    std::vector<std::string> class_labels_;
    Cell seed_;
    std::size_t total_inputs_ = 0;
};

/// Normalizes `d`, then inserts its rows in order.
UCModel train(const Dataset& d, const UCConfig& config);

/// Leaf reached by greedy most-similar descent from the seed cell.
const Representation& route(const UCModel& m, std::span<const double> normalized);

/// Predicted class index for a raw (unnormalized) input.
std::size_t classify(const UCModel& m, std::span<const double> raw);
/// Predicted numeric target for a raw input.
double estimate(const UCModel& m, std::span<const double> raw);

/// Fraction of rows of `test` whose predicted label matches.
double accuracy(const UCModel& m, const Dataset& test);

}  // namespace uckd
