#include "uckd/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "uckd/error.hpp"
#include "uckd/random.hpp"

namespace uckd {

std::string_view to_string(TargetKind kind) noexcept {
    return kind == TargetKind::numeric ? "numeric" : "categorical";
}

TargetKind parse_target_kind(std::string_view text) {
    if (text == "numeric") return TargetKind::numeric;
    if (text == "categorical") return TargetKind::categorical;
    throw Error(Errc::invalid_config, "unknown target kind '" + std::string(text) + "'");
}

// Dataset ------------------------------------------------------------------

Dataset Dataset::numeric(std::vector<double> values, std::vector<std::string> feature_names,
                         std::string target_name, std::vector<double> targets) {
    Dataset d;
    d.rows_ = targets.size();
    d.values_ = std::move(values);
    d.feature_names_ = std::move(feature_names);
    d.target_name_ = std::move(target_name);
    d.kind_ = TargetKind::numeric;
    d.numeric_targets_ = std::move(targets);
    d.validate();
    return d;
}

Dataset Dataset::categorical(std::vector<double> values, std::vector<std::string> feature_names,
                             std::string target_name, const std::vector<std::string>& labels) {
    std::set<std::string> distinct(labels.begin(), labels.end());
    std::vector<std::string> class_labels(distinct.begin(), distinct.end());
    std::vector<std::size_t> classes;
    classes.reserve(labels.size());
    for (const auto& label : labels) {
        const auto it = std::lower_bound(class_labels.begin(), class_labels.end(), label);
        classes.push_back(static_cast<std::size_t>(it - class_labels.begin()));
    }
    return categorical_indexed(std::move(values), std::move(feature_names), std::move(target_name),
                               std::move(class_labels), std::move(classes));
}

Dataset Dataset::categorical_indexed(std::vector<double> values, std::vector<std::string> feature_names,
                                     std::string target_name, std::vector<std::string> class_labels,
                                     std::vector<std::size_t> classes) {
    Dataset d;
    d.rows_ = classes.size();
    d.values_ = std::move(values);
    d.feature_names_ = std::move(feature_names);
    d.target_name_ = std::move(target_name);
    d.kind_ = TargetKind::categorical;
    d.class_labels_ = std::move(class_labels);
    d.classes_ = std::move(classes);
    d.validate();
    return d;
}

void Dataset::validate() const {
    if (values_.size() != rows_ * feature_names_.size()) {
        throw Error(Errc::length_mismatch, "sample matrix size does not match rows x features");
    }
    std::set<std::string_view> names;
    for (const auto& n : feature_names_) {
        if (!names.insert(n).second) throw Error(Errc::bad_document, "duplicate feature name '" + n + "'");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error(Errc::unparsable_cell, "non-finite sample value");
    }
    if (kind_ == TargetKind::categorical) {
        if (!std::is_sorted(class_labels_.begin(), class_labels_.end()) ||
            std::adjacent_find(class_labels_.begin(), class_labels_.end()) != class_labels_.end()) {
            throw Error(Errc::invalid_config, "class labels must be sorted and unique");
        }
        for (auto c : classes_) {
            if (c >= class_labels_.size()) throw Error(Errc::index_out_of_range, "class index outside label set");
        }
    } else {
        for (double t : numeric_targets_) {
            if (!std::isfinite(t)) throw Error(Errc::unparsable_cell, "non-finite target value");
        }
    }
}

std::vector<double> Dataset::column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
}

namespace {

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string Dataset::target_text(std::size_t i) const {
    return kind_ == TargetKind::categorical ? class_labels_[classes_[i]] : format_real(numeric_targets_[i]);
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
    const std::size_t f = feature_count();
    std::vector<double> values;
    values.reserve(indices.size() * f);
    for (auto i : indices) {
        if (i >= rows_) throw Error(Errc::index_out_of_range, "row index out of range");
        const auto r = row(i);
        values.insert(values.end(), r.begin(), r.end());
    }
    Dataset out = *this;
    out.values_ = std::move(values);
    out.rows_ = indices.size();
    if (kind_ == TargetKind::categorical) {
        out.classes_.clear();
        for (auto i : indices) out.classes_.push_back(classes_[i]);
    } else {
        out.numeric_targets_.clear();
        for (auto i : indices) out.numeric_targets_.push_back(numeric_targets_[i]);
    }
    return out;
}

Dataset Dataset::with_features(std::vector<double> values, std::vector<std::string> feature_names) const {
    Dataset out = *this;
    out.values_ = std::move(values);
    out.feature_names_ = std::move(feature_names);
    out.validate();
    return out;
}

// FeatureSet ---------------------------------------------------------------

FeatureSet::FeatureSet(std::vector<std::size_t> indices, std::size_t origin_feature_count)
    : indices_(std::move(indices)), origin_(origin_feature_count) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
        throw Error(Errc::invalid_config, "duplicate feature index");
    }
    if (!indices_.empty() && indices_.back() >= origin_) {
        throw Error(Errc::index_out_of_range,
                    "feature index " + std::to_string(indices_.back()) + " >= " + std::to_string(origin_));
    }
}

FeatureSet FeatureSet::all(std::size_t feature_count) {
    std::vector<std::size_t> idx(feature_count);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return FeatureSet(std::move(idx), feature_count);
}

bool FeatureSet::contains(std::size_t index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool FeatureSet::is_subset_of(const FeatureSet& other) const {
    return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

// CSV ----------------------------------------------------------------------

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string cell_position(std::size_t line, const std::string& column) {
    return "row " + std::to_string(line) + ", column '" + column + "'";
}

double parse_real(std::string_view cell, std::size_t line, const std::string& column) {
    if (cell.empty()) throw Error(Errc::missing_value, cell_position(line, column));
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw Error(Errc::unparsable_cell, cell_position(line, column) + ": '" + std::string(cell) + "'");
    }
    return v;
}

}  // namespace

Dataset parse_csv(std::istream& in, std::string_view target_col, TargetKind kind) {
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::bad_document, "missing header row");
    std::vector<std::string> header;
    for (auto& h : split_line(line)) header.emplace_back(trim(h));

    const auto target_it = std::find(header.begin(), header.end(), target_col);
    if (target_it == header.end()) {
        throw Error(Errc::missing_target_column, "column '" + std::string(target_col) + "' not in header");
    }
    const auto target_pos = static_cast<std::size_t>(target_it - header.begin());
    std::vector<std::string> feature_names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != target_pos) feature_names.push_back(header[c]);
    }

    std::vector<double> values;
    std::vector<std::string> labels;
    std::vector<double> targets;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        for (std::size_t c = 0; c < header.size(); ++c) {
            const std::string_view cell = c < cells.size() ? trim(cells[c]) : std::string_view{};
            if (c == target_pos) {
                if (cell.empty()) throw Error(Errc::missing_value, cell_position(line_no, header[c]));
                if (kind == TargetKind::categorical) {
                    labels.emplace_back(cell);
                } else {
                    targets.push_back(parse_real(cell, line_no, header[c]));
                }
            } else {
                values.push_back(parse_real(cell, line_no, header[c]));
            }
        }
        if (cells.size() > header.size()) {
            throw Error(Errc::unparsable_cell, "row " + std::to_string(line_no) + " has more cells than the header");
        }
    }
    if (kind == TargetKind::categorical) {
        return Dataset::categorical(std::move(values), std::move(feature_names), std::string(target_col), labels);
    }
    return Dataset::numeric(std::move(values), std::move(feature_names), std::string(target_col), std::move(targets));
}

Dataset load_csv(const std::filesystem::path& path, std::string_view target_col, TargetKind kind) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::missing_file, path.string());
    return parse_csv(in, target_col, kind);
}

void write_csv(std::ostream& out, const Dataset& d) {
    for (const auto& name : d.feature_names()) out << name << ',';
    out << d.target_name() << '\n';
    for (std::size_t i = 0; i < d.rows(); ++i) {
        for (double v : d.row(i)) out << format_real(v) << ',';
        out << d.target_text(i) << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const Dataset& d) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
    write_csv(out, d);
    if (!out) throw Error(Errc::io_failure, "write failed for " + path.string());
}

// Normalization ------------------------------------------------------------

NormParams fit_norm(const Dataset& d) {
    if (d.empty()) throw Error(Errc::empty_dataset, "cannot fit normalization on an empty dataset");
    const std::size_t f = d.feature_count();
    NormParams p{std::vector<double>(d.row(0).begin(), d.row(0).end()),
                 std::vector<double>(d.row(0).begin(), d.row(0).end())};
    for (std::size_t i = 1; i < d.rows(); ++i) {
        const auto r = d.row(i);
        for (std::size_t j = 0; j < f; ++j) {
            p.min[j] = std::min(p.min[j], r[j]);
            p.max[j] = std::max(p.max[j], r[j]);
        }
    }
    return p;
}

void apply_norm(const NormParams& params, std::span<const double> raw, std::span<double> out) {
    if (raw.size() != params.min.size() || out.size() != raw.size()) {
        throw Error(Errc::length_mismatch, "row length does not match normalization parameters");
    }
    for (std::size_t j = 0; j < raw.size(); ++j) {
        const double range = params.max[j] - params.min[j];
        out[j] = range > 0.0 ? std::clamp((raw[j] - params.min[j]) / range, 0.0, 1.0) : 0.0;
    }
}

Dataset apply_norm(const NormParams& params, const Dataset& d) {
    std::vector<double> values(d.values().size());
    const std::size_t f = d.feature_count();
    for (std::size_t i = 0; i < d.rows(); ++i) {
        apply_norm(params, d.row(i), std::span<double>(values.data() + i * f, f));
    }
    return d.with_features(std::move(values), d.feature_names());
}

std::pair<Dataset, NormParams> normalize(const Dataset& d) {
    NormParams p = fit_norm(d);
    Dataset scaled = apply_norm(p, d);
    return {std::move(scaled), std::move(p)};
}

double denormalize_value(const NormParams& params, std::size_t feature, double scaled) {
    return params.min[feature] + scaled * (params.max[feature] - params.min[feature]);
}

// Row operations -----------------------------------------------------------

std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction, std::uint64_t seed) {
    if (d.rows() < 2) throw Error(Errc::too_few_samples, "split needs at least 2 samples");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error(Errc::invalid_config, "train fraction must lie in (0, 1)");
    }

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        groups[d.target_kind() == TargetKind::categorical ? d.class_index(i) : 0].push_back(i);
    }

    Rng rng(seed);
    std::vector<std::vector<std::size_t>> train_parts;
    std::vector<std::vector<std::size_t>> test_parts;
    for (auto& [cls, members] : groups) {
        rng.shuffle(std::span<std::size_t>(members));
        const auto n_train = static_cast<std::size_t>(
            std::floor(train_fraction * static_cast<double>(members.size()) + 0.5));
        train_parts.emplace_back(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
        test_parts.emplace_back(members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
    }

    // Both sides must be non-empty; borrow from the largest donor group.
    auto rebalance = [&](std::vector<std::vector<std::size_t>>& from, std::vector<std::vector<std::size_t>>& to) {
        const bool to_empty = std::all_of(to.begin(), to.end(), [](const auto& v) { return v.empty(); });
        if (!to_empty) return;
        std::size_t best = 0;
        for (std::size_t g = 1; g < from.size(); ++g) {
            if (from[g].size() > from[best].size()) best = g;
        }
        to[best].push_back(from[best].back());
        from[best].pop_back();
    };
    rebalance(train_parts, test_parts);
    rebalance(test_parts, train_parts);

    auto flatten = [](const std::vector<std::vector<std::size_t>>& parts) {
        std::vector<std::size_t> out;
        for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
        std::sort(out.begin(), out.end());
        return out;
    };
    const auto train_idx = flatten(train_parts);
    const auto test_idx = flatten(test_parts);
    return {d.select_rows(train_idx), d.select_rows(test_idx)};
}

Dataset shuffle(const Dataset& d, std::uint64_t seed) {
    std::vector<std::size_t> order(d.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));
    return d.select_rows(order);
}

Dataset reduce_features(const Dataset& d, const FeatureSet& keep) {
    if (keep.empty()) throw Error(Errc::empty_feature_set, "no features to keep");
    const auto& idx = keep.indices();
    if (idx.back() >= d.feature_count()) {
        throw Error(Errc::index_out_of_range, "feature index exceeds dataset width");
    }
    std::vector<std::string> names;
    for (auto j : idx) names.push_back(d.feature_names()[j]);
    std::vector<double> values;
    values.reserve(d.rows() * idx.size());
    for (std::size_t i = 0; i < d.rows(); ++i) {
        const auto r = d.row(i);
        for (auto j : idx) values.push_back(r[j]);
    }
    return d.with_features(std::move(values), std::move(names));
}

// Synthetic data -----------------------------------------------------------

SynthDataset synth_generate(const SynthConfig& config) {
    if (config.samples == 0 || config.informative == 0 || config.classes == 0) {
        throw Error(Errc::invalid_config, "samples, informative and classes must be positive");
    }
    if (!(config.separation > 0.0)) throw Error(Errc::invalid_config, "separation must be positive");

    const std::size_t width = config.informative + config.noise;
    Rng rng(config.seed);
    std::vector<double> values(config.samples * width);
    std::vector<std::string> labels(config.samples);
    for (std::size_t i = 0; i < config.samples; ++i) {
        const std::size_t cls = i % config.classes;
        labels[i] = "c" + std::to_string(cls);
        double* r = values.data() + i * width;
        for (std::size_t j = 0; j < config.informative; ++j) {
            r[j] = static_cast<double>((cls + j) % config.classes) * config.separation + rng.normal();
        }
        for (std::size_t j = config.informative; j < width; ++j) r[j] = rng.uniform01();
    }

    // Rescale the Gaussian columns into [0, 1]; the noise already lives there.
    for (std::size_t j = 0; j < config.informative; ++j) {
        double lo = values[j];
        double hi = values[j];
        for (std::size_t i = 1; i < config.samples; ++i) {
            lo = std::min(lo, values[i * width + j]);
            hi = std::max(hi, values[i * width + j]);
        }
        for (std::size_t i = 0; i < config.samples; ++i) {
            double& v = values[i * width + j];
            v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
        }
    }

    std::vector<std::string> names(width);
    for (std::size_t j = 0; j < width; ++j) names[j] = "f" + std::to_string(j);

    std::vector<std::size_t> planted(config.informative);
    std::iota(planted.begin(), planted.end(), std::size_t{0});
    return {Dataset::categorical(std::move(values), std::move(names), "class", labels),
            FeatureSet(std::move(planted), width)};
}

}  // namespace uckd
