#include "uckd/uc_model.hpp"

#include <algorithm>
#include <cmath>

#include "uckd/error.hpp"

namespace uckd {

std::string_view to_string(Metric metric) noexcept {
    return metric == Metric::cosine ? "cosine" : "euclidean";
}

Metric parse_metric(std::string_view text) {
    if (text == "cosine") return Metric::cosine;
    if (text == "euclidean" || text == "inverse_euclidean") return Metric::inverse_euclidean;
    throw Error(Errc::invalid_config, "unknown metric '" + std::string(text) + "'");
}

void UCConfig::validate() const {
    if (!(theta0 > 0.0 && theta0 < 1.0)) throw Error(Errc::invalid_config, "theta0 must lie in (0, 1)");
    if (!(gamma > 0.0 && gamma < 1.0)) throw Error(Errc::invalid_config, "gamma must lie in (0, 1)");
    if (!(epsilon_identity >= 0.0) || epsilon_identity >= 1.0) {
        throw Error(Errc::invalid_config, "epsilon_identity must lie in [0, 1)");
    }
}

double UCConfig::threshold(std::size_t depth) const {
    return 1.0 - (1.0 - theta0) * std::pow(gamma, static_cast<double>(depth));
}

double similarity(std::span<const double> a, std::span<const double> b, Metric metric) {
    if (a.size() != b.size()) throw Error(Errc::length_mismatch, "similarity of vectors with different lengths");
    if (metric == Metric::cosine) {
        double dot = 0.0, na = 0.0, nb = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        if (na == 0.0 || nb == 0.0) return (na == 0.0 && nb == 0.0) ? 1.0 : 0.0;
        return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sq += diff * diff;
    }
    return 1.0 / (1.0 + std::sqrt(sq));
}

// Representation -----------------------------------------------------------

Representation::Representation(const Representation& other)
    : mean(other.mean),
      count(other.count),
      label_hist(other.label_hist),
      target_mean(other.target_mean),
      depth(other.depth),
      child(other.child ? std::make_unique<Cell>(*other.child) : nullptr),
      members(other.members) {}

Representation& Representation::operator=(const Representation& other) {
    if (this != &other) {
        Representation copy(other);
        *this = std::move(copy);
    }
    return *this;
}

Representation::~Representation() = default;

std::size_t Representation::class_count() const {
    return static_cast<std::size_t>(std::count_if(label_hist.begin(), label_hist.end(), [](auto c) { return c > 0; }));
}

std::optional<std::size_t> Representation::pure_class() const {
    std::optional<std::size_t> only;
    for (std::size_t c = 0; c < label_hist.size(); ++c) {
        if (label_hist[c] == 0) continue;
        if (only) return std::nullopt;
        only = c;
    }
    return only;
}

// UCModel ------------------------------------------------------------------

UCModel::UCModel(UCConfig config, NormParams norm, std::vector<std::string> feature_names, std::string target_name,
                 TargetKind kind, std::vector<std::string> class_labels)
    : config_(config),
      norm_(std::move(norm)),
      feature_names_(std::move(feature_names)),
      target_name_(std::move(target_name)),
      kind_(kind),
      class_labels_(std::move(class_labels)) {
    config_.validate();
    if (norm_.min.size() != feature_names_.size() || norm_.max.size() != feature_names_.size()) {
        throw Error(Errc::length_mismatch, "normalization parameters do not match feature count");
    }
}

UCModel UCModel::restore(UCConfig config, NormParams norm, std::vector<std::string> feature_names,
                         std::string target_name, TargetKind kind, std::vector<std::string> class_labels, Cell seed,
                         std::size_t total_inputs) {
    UCModel m(config, std::move(norm), std::move(feature_names), std::move(target_name), kind,
              std::move(class_labels));
    m.seed_ = std::move(seed);
    m.total_inputs_ = total_inputs;
    return m;
}

Representation UCModel::make_literal(std::span<const double> x, Target target, std::size_t depth,
                                     std::size_t id) const {
    Representation rep;
    rep.mean.assign(x.begin(), x.end());
    rep.count = 1;
    rep.label_hist.assign(bucket_count(), 0);
    rep.label_hist[kind_ == TargetKind::categorical ? target.class_index : 0] = 1;
    rep.target_mean = target.value;
    rep.depth = depth;
    if (config_.audit) rep.members.push_back(id);
    return rep;
}

void UCModel::absorb(Representation& rep, std::span<const double> x, Target target, std::size_t id) const {
    ++rep.count;
    const double n = static_cast<double>(rep.count);
    for (std::size_t j = 0; j < x.size(); ++j) rep.mean[j] += (x[j] - rep.mean[j]) / n;
    ++rep.label_hist[kind_ == TargetKind::categorical ? target.class_index : 0];
    rep.target_mean += (target.value - rep.target_mean) / n;
    if (config_.audit) rep.members.push_back(id);
}

namespace {

bool identical(std::span<const double> a, std::span<const double> b, double epsilon) {
    const double limit = epsilon * epsilon;
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        sum += d * d;
        if (sum > limit) return false;
    }
    return true;
}

// Depth-first search for a leaf holding a copy of x; fills the path from the seed.
bool find_duplicate_leaf(Cell& cell, std::span<const double> x, double epsilon, std::vector<Representation*>& path) {
    for (auto& rep : cell.reps) {
        path.push_back(&rep);
        if (rep.child ? find_duplicate_leaf(*rep.child, x, epsilon, path) : identical(x, rep.mean, epsilon)) {
            return true;
        }
        path.pop_back();
    }
    return false;
}

}  // namespace

void UCModel::insert(std::span<const double> x, Target target) {
    if (x.size() != feature_count()) {
        throw Error(Errc::length_mismatch, "input has " + std::to_string(x.size()) + " values, model expects " +
                                               std::to_string(feature_count()));
    }
    for (double v : x) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::not_normalized, "input value outside [0, 1]");
    }
    if (kind_ == TargetKind::categorical && target.class_index >= class_labels_.size()) {
        throw Error(Errc::index_out_of_range, "class index outside label set");
    }

    const std::size_t id = total_inputs_;
    std::vector<Representation*> path;
    if (find_duplicate_leaf(seed_, x, config_.epsilon_identity, path)) {
        for (auto* rep : path) absorb(*rep, x, target, id);
        ++total_inputs_;
        return;
    }

    Cell* cell = &seed_;
    while (true) {
        const std::size_t depth = cell->depth;
        if (cell->reps.empty()) {
            cell->reps.push_back(make_literal(x, target, depth, id));
            break;
        }

        std::size_t best = 0;
        double best_sim = similarity(x, cell->reps[0].mean, config_.metric);
        for (std::size_t r = 1; r < cell->reps.size(); ++r) {
            const double s = similarity(x, cell->reps[r].mean, config_.metric);
            if (s > best_sim) {
                best_sim = s;
                best = r;
            }
        }
        Representation& rep = cell->reps[best];

        if (identical(x, rep.mean, config_.epsilon_identity)) {
            absorb(rep, x, target, id);
            if (!rep.child) break;
            cell = rep.child.get();
            continue;
        }

        if (best_sim < config_.threshold(depth)) {
            cell->reps.push_back(make_literal(x, target, depth, id));
            break;
        }

        if (config_.max_depth && depth + 1 > *config_.max_depth) {
            absorb(rep, x, target, id);
            break;
        }

        if (!rep.child) {
            // First split: the previous content and the new input become
            // sibling literals one level down.
            auto child = std::make_unique<Cell>();
            child->depth = depth + 1;
            Representation demoted = rep;
            demoted.depth = depth + 1;
            child->reps.push_back(std::move(demoted));
            child->reps.push_back(make_literal(x, target, depth + 1, id));
            rep.child = std::move(child);
            absorb(rep, x, target, id);
            break;
        }
        absorb(rep, x, target, id);
        cell = rep.child.get();
    }
    ++total_inputs_;
}

UCModel train(const Dataset& d, const UCConfig& config) {
    if (d.empty()) throw Error(Errc::empty_dataset, "cannot train on an empty dataset");
    auto [scaled, norm] = normalize(d);
    UCModel m(config, std::move(norm), d.feature_names(), d.target_name(), d.target_kind(), d.class_labels());
    for (std::size_t i = 0; i < scaled.rows(); ++i) {
        const Target t = d.target_kind() == TargetKind::categorical ? Target::category(scaled.class_index(i))
                                                                    : Target::number(scaled.numeric_target(i));
        m.insert(scaled.row(i), t);
    }
    return m;
}

const Representation& route(const UCModel& m, std::span<const double> normalized) {
    if (!m.trained()) throw Error(Errc::model_untrained, "model has no representations");
    if (normalized.size() != m.feature_count()) throw Error(Errc::length_mismatch, "input length mismatch");
    const Cell* cell = &m.seed_cell();
    while (true) {
        const Representation* best = &cell->reps[0];
        double best_sim = similarity(normalized, best->mean, m.config().metric);
        for (std::size_t r = 1; r < cell->reps.size(); ++r) {
            const double s = similarity(normalized, cell->reps[r].mean, m.config().metric);
            if (s > best_sim) {
                best_sim = s;
                best = &cell->reps[r];
            }
        }
        if (!best->child) return *best;
        cell = best->child.get();
    }
}

namespace {

const Representation& route_raw(const UCModel& m, std::span<const double> raw) {
    if (!m.trained()) throw Error(Errc::model_untrained, "model has no representations");
    if (raw.size() != m.feature_count()) throw Error(Errc::length_mismatch, "input length mismatch");
    std::vector<double> scaled(raw.size());
    apply_norm(m.norm(), raw, scaled);
    return route(m, scaled);
}

}  // namespace

std::size_t classify(const UCModel& m, std::span<const double> raw) {
    if (m.target_kind() != TargetKind::categorical) {
        throw Error(Errc::kind_mismatch, "classify needs a categorical target; use estimate");
    }
    const auto& hist = route_raw(m, raw).label_hist;
    // max_element returns the first maximum, i.e. the smallest label.
    return static_cast<std::size_t>(std::max_element(hist.begin(), hist.end()) - hist.begin());
}

double estimate(const UCModel& m, std::span<const double> raw) {
    return route_raw(m, raw).target_mean;
}

double accuracy(const UCModel& m, const Dataset& test) {
    if (test.target_kind() != TargetKind::categorical || m.target_kind() != TargetKind::categorical) {
        throw Error(Errc::kind_mismatch, "accuracy needs a categorical target");
    }
    if (test.feature_count() != m.feature_count()) {
        throw Error(Errc::length_mismatch, "test set width does not match the model");
    }
    if (test.empty()) throw Error(Errc::empty_dataset, "accuracy on an empty test set");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < test.rows(); ++i) {
        const std::size_t predicted = classify(m, test.row(i));
        if (m.class_labels()[predicted] == test.class_labels()[test.class_index(i)]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(test.rows());
}

}  // namespace uckd
