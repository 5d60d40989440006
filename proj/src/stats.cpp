#include "uckd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uckd/error.hpp"

namespace uckd {

namespace {

bool is_constant(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iter = 10000;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw Error(Errc::invalid_config, "incomplete beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw Error(Errc::invalid_config, "degrees of freedom must be positive");
    if (t == 0.0) return 0.5;
    const double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
    return t > 0.0 ? 1.0 - tail : tail;
}

double p_value(double r, std::size_t n) {
    if (n < 3) throw Error(Errc::too_few_points, "p-value needs at least 3 points");
    if (!(std::fabs(r) <= 1.0)) throw Error(Errc::invalid_config, "correlation outside [-1, 1]");
    const double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    if (r == 0.0) return 1.0;
    // With t = r sqrt(df / (1 - r^2)), df / (df + t^2) reduces to 1 - r^2.
    const double df = static_cast<double>(n - 2);
    return std::clamp(incomplete_beta(df / 2.0, 0.5, 1.0 - r2), 0.0, 1.0);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(Errc::length_mismatch, "correlation of vectors with different lengths");
    const std::size_t n = x.size();
    if (n < 3) throw Error(Errc::too_few_points, "correlation needs at least 3 points");
    CorrelationResult out;
    out.n = n;
    if (is_constant(x) || is_constant(y)) {
        out.degenerate = true;
        return out;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    out.p = p_value(out.r, n);
    return out;
}

CorrelationResult point_biserial(std::span<const double> values, std::span<const double> indicator) {
    for (double v : indicator) {
        if (v != 0.0 && v != 1.0) throw Error(Errc::invalid_config, "indicator entries must be 0 or 1");
    }
    return pearson(values, indicator);
}

FeatureCorrelationReport correlate_patterns(const std::vector<Pattern>& patterns, TargetKind kind,
                                            std::size_t class_count) {
    if (patterns.size() < 3) {
        throw Error(Errc::too_few_patterns, "need at least 3 patterns, got " + std::to_string(patterns.size()));
    }
    const std::size_t width = patterns.front().values.size();
    for (const auto& p : patterns) {
        if (p.values.size() != width) throw Error(Errc::length_mismatch, "patterns differ in width");
        if (kind == TargetKind::categorical && !p.pure_class) {
            throw Error(Errc::impure_pattern, "categorical correlation needs single-class patterns");
        }
    }

    FeatureCorrelationReport report;
    report.kind = kind;
    report.pattern_count = patterns.size();
    report.entries.resize(width);

    std::vector<double> target(patterns.size());
    std::vector<std::vector<double>> indicators;
    if (kind == TargetKind::numeric) {
        for (std::size_t i = 0; i < patterns.size(); ++i) target[i] = patterns[i].target_mean;
    } else {
        indicators.assign(class_count, std::vector<double>(patterns.size(), 0.0));
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            if (*patterns[i].pure_class >= class_count) throw Error(Errc::index_out_of_range, "class index");
            indicators[*patterns[i].pure_class][i] = 1.0;
        }
    }

    std::vector<double> column(patterns.size());
    for (std::size_t f = 0; f < width; ++f) {
        for (std::size_t i = 0; i < patterns.size(); ++i) column[i] = patterns[i].values[f];
        if (kind == TargetKind::numeric) {
            report.entries[f].push_back(pearson(column, target));
        } else {
            for (const auto& ind : indicators) report.entries[f].push_back(point_biserial(column, ind));
        }
    }
    return report;
}

}  // namespace uckd
