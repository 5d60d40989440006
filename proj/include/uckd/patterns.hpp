#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "uckd/uc_model.hpp"

namespace uckd {

/// Snapshot of a representation chosen as a pattern.
struct Pattern {
    std::vector<double> values;        // normalized space
    std::vector<double> denormalized;  // original units
    std::size_t count = 0;
    std::size_t depth = 0;
    std::vector<std::size_t> label_hist;
    std::optional<std::size_t> pure_class;
    double target_mean = 0.0;
    std::vector<std::size_t> members;  // audit mode only

    bool operator==(const Pattern&) const = default;
};

/// One pattern per seed-cell representation, in creation order.
std::vector<Pattern> mine_unconstrained(const UCModel& m);

/// The most generic single-class representations: pure ones whose parent is
/// mixed (or that sit in the seed cell). Depth-first, creation order.
std::vector<Pattern> mine_class_constrained(const UCModel& m);

/// Seed-cell patterns for numeric targets, class-constrained for categorical ones.
std::vector<Pattern> mine_for_target(const UCModel& m);

/// One row per pattern: denormalized feature values, count, depth, class.
void write_patterns_csv(std::ostream& out, const UCModel& m, const std::vector<Pattern>& patterns);

}  // namespace uckd
