#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "uckd/dataset.hpp"
#include "uckd/error.hpp"
#include "uckd/patterns.hpp"
#include "uckd/serialize.hpp"
#include "uckd/uc_model.hpp"

namespace uckd::testing {

/// Error code thrown by `f`, or nullopt if it returned normally.
template <typename F>
std::optional<Errc> error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline Dataset random_dataset(std::mt19937_64& gen, std::size_t rows, std::size_t features, std::size_t classes) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> values(rows * features);
    for (double& v : values) v = unit(gen);
    std::vector<std::string> names(features);
    for (std::size_t j = 0; j < features; ++j) names[j] = "x" + std::to_string(j);
    std::vector<std::string> labels(rows);
    for (std::size_t i = 0; i < rows; ++i) labels[i] = "k" + std::to_string(gen() % classes);
    return Dataset::categorical(std::move(values), std::move(names), "label", labels);
}

inline UCConfig random_config(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    UCConfig c;
    c.metric = gen() % 2 == 0 ? Metric::cosine : Metric::inverse_euclidean;
    // Inverse Euclidean similarities of unit-cube points sit well below 1,
    // so its thresholds are drawn lower to get real trees.
    c.theta0 = c.metric == Metric::cosine ? 0.5 + 0.49 * unit(gen) : 0.2 + 0.6 * unit(gen);
    c.gamma = 0.05 + 0.9 * unit(gen);
    c.epsilon_identity = 1e-12 + 1e-9 * unit(gen);
    c.audit = true;
    return c;
}

inline void walk(const Cell& cell, const auto& visit) {
    for (const auto& rep : cell.reps) {
        visit(rep);
        if (rep.child) walk(*rep.child, visit);
    }
}

inline std::size_t cell_count(const Cell& cell) {
    std::size_t total = 0;
    for (const auto& rep : cell.reps) total += rep.count;
    return total;
}

/// Seed counts sum to total_inputs; every child cell's counts sum to its
/// parent's count; every histogram sums to its count; depths match cells.
inline bool partition_holds(const UCModel& m) {
    if (cell_count(m.seed_cell()) != m.total_inputs()) return false;
    bool ok = true;
    auto check_cell = [&](const Cell& cell, auto&& self) -> void {
        for (const auto& rep : cell.reps) {
            std::size_t hist = 0;
            for (auto h : rep.label_hist) hist += h;
            if (hist != rep.count || rep.depth != cell.depth || rep.count == 0) ok = false;
            if (rep.child) {
                if (cell_count(*rep.child) != rep.count || rep.child->depth != cell.depth + 1) ok = false;
                // Audit: children split the parent's inputs exactly.
                std::vector<std::size_t> kids;
                for (const auto& c : rep.child->reps) kids.insert(kids.end(), c.members.begin(), c.members.end());
                std::sort(kids.begin(), kids.end());
                auto parent = rep.members;
                std::sort(parent.begin(), parent.end());
                if (kids != parent) ok = false;
                self(*rep.child, self);
            }
        }
    };
    check_cell(m.seed_cell(), check_cell);
    return ok;
}

/// Largest |mean * count - sum(absorbed inputs)| over every representation,
/// using audit membership. `inputs` are the normalized rows in insertion order.
inline double running_mean_error(const UCModel& m, const Dataset& inputs) {
    double worst = 0.0;
    walk(m.seed_cell(), [&](const Representation& rep) {
        for (std::size_t j = 0; j < rep.mean.size(); ++j) {
            long double sum = 0;
            for (auto id : rep.members) sum += inputs.at(id, j);
            const double err = std::fabs(static_cast<double>(static_cast<long double>(rep.mean[j]) * rep.count - sum));
            worst = std::max(worst, err);
        }
    });
    return worst;
}

inline std::size_t representation_count(const UCModel& m) {
    std::size_t n = 0;
    walk(m.seed_cell(), [&](const Representation&) { ++n; });
    return n;
}

inline std::string fingerprint(const UCModel& m) { return to_json(m).dump(); }

}  // namespace uckd::testing
