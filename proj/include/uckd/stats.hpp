#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uckd/dataset.hpp"
#include "uckd/patterns.hpp"

namespace uckd {

struct CorrelationResult {
    double r = 0.0;
    double p = 1.0;
    std::size_t n = 0;
    bool degenerate = false;

    bool operator==(const CorrelationResult&) const = default;
};

/// Per-feature correlations against the target, computed over patterns.
/// `entries[f]` has one result for numeric targets, one per class otherwise.
struct FeatureCorrelationReport {
    TargetKind kind = TargetKind::numeric;
    std::size_t pattern_count = 0;
    std::vector<std::vector<CorrelationResult>> entries;

    std::size_t feature_count() const noexcept { return entries.size(); }
    bool operator==(const FeatureCorrelationReport&) const = default;
};

/// Sample Pearson correlation with its two-tailed p-value. A constant input
/// gives a degenerate result (r = 0, p = 1).
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of `values` against a 0/1 indicator.
CorrelationResult point_biserial(std::span<const double> values, std::span<const double> indicator);

/// Two-tailed Student-t p-value of correlation r over n points (df = n - 2).
double p_value(double r, std::size_t n);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t distribution with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// Numeric targets: each feature against pattern target means. Categorical
/// targets: each feature against a one-vs-rest indicator per class.
FeatureCorrelationReport correlate_patterns(const std::vector<Pattern>& patterns, TargetKind kind,
                                            std::size_t class_count);

}  // namespace uckd
