#include <doctest.h>

#include <cmath>
#include <random>

#include "support/helpers.hpp"
#include "support/oracles.hpp"
#include "uckd/stats.hpp"

using namespace uckd;
using uckd::testing::error_of;
using V = std::vector<double>;

TEST_CASE("pearson examples") {
    const auto c = pearson(V{1, 2, 3, 4}, V{1, 3, 2, 4});
    CHECK(c.r == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(c.n == 4);
    CHECK(c.p == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(pearson(V{1, 2, 5}, V{1, 2, 5}).r == doctest::Approx(1.0));

    const auto flat = pearson(V{1, 2, 3}, V{7, 7, 7});
    CHECK(flat.degenerate);
    CHECK(flat.r == 0.0);
    CHECK(flat.p == 1.0);
    CHECK(error_of([] { pearson(V{1, 2}, V{1, 2}); }) == Errc::too_few_points);
    CHECK(error_of([] { pearson(V{1, 2, 3}, V{1, 2}); }) == Errc::length_mismatch);
}

TEST_CASE("p_value examples") {
    CHECK(p_value(0.8, 4) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(p_value(0.0, 3) == 1.0);
    CHECK(p_value(0.0, 50) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p_value(1.0, 5) == 0.0);
    CHECK(p_value(-1.0, 5) == 0.0);
    CHECK(p_value(-0.8, 4) == p_value(0.8, 4));
    CHECK(error_of([] { p_value(0.5, 2); }) == Errc::too_few_points);
}

TEST_CASE("p_value agrees with the closed forms for df 1 and 2") {
    for (double r = -0.99; r < 1.0; r += 0.01) {
        CHECK(std::fabs(p_value(r, 3) - oracle::p_df1(r)) <= 1e-10);
        CHECK(std::fabs(p_value(r, 4) - oracle::p_df2(r)) <= 1e-10);
    }
}

TEST_CASE("incomplete beta and t distribution") {
    CHECK(incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3));
    CHECK(incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(incomplete_beta(2, 3, 1.0) == 1.0);
    // I_x(a, b) = 1 - I_{1-x}(b, a)
    CHECK(incomplete_beta(2.5, 4, 0.35) == doctest::Approx(1.0 - incomplete_beta(4, 2.5, 0.65)).epsilon(1e-13));
    CHECK(student_t_cdf(0.0, 7) == doctest::Approx(0.5));
    // df = 1 is Cauchy.
    CHECK(student_t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(error_of([] { incomplete_beta(0, 1, 0.5); }) == Errc::invalid_config);
}

TEST_CASE("point-biserial examples") {
    CHECK(point_biserial(V{1, 2, 3, 4}, V{0, 0, 1, 1}).r == doctest::Approx(0.8944271909999159).epsilon(1e-14));
    CHECK(point_biserial(V{1, 1, 2, 2}, V{0, 0, 1, 1}).r == doctest::Approx(1.0));
    const auto zero = point_biserial(V{1, 2, 3}, V{0, 0, 0});
    CHECK(zero.degenerate);
    CHECK(zero.p == 1.0);
    CHECK(error_of([] { point_biserial(V{1, 2, 3}, V{0, 2, 1}); }) == Errc::invalid_config);
}

TEST_CASE("pearson properties on random vectors") {
    std::mt19937_64 gen(17);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + gen() % 40;
        V x(n), y(n), ind(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = normal(gen);
            y[i] = 0.5 * x[i] + normal(gen);
            ind[i] = static_cast<double>(gen() % 2);
        }
        const auto xy = pearson(x, y);
        CHECK(std::fabs(xy.r - oracle::pearson_sums(x, y)) <= 1e-12);
        CHECK(std::fabs(xy.r - pearson(y, x).r) <= 1e-12);
        const double a = scale(gen), b = normal(gen);
        V z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = a * x[i] + b;
        CHECK(std::fabs(pearson(z, y).r - xy.r) <= 1e-12);
        CHECK(point_biserial(x, ind) == pearson(x, ind));
        CHECK(xy.p >= 0.0);
        CHECK(xy.p <= 1.0);
    }
}

TEST_CASE("p_value against a permutation test") {
    // Below about 10 points the permutation null of a particular sample can
    // sit several hundredths away from Student's t, so this check stays at
    // moderate n.
    std::mt19937_64 gen(3);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 15 + gen() % 16;
        V x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = normal(gen);
            y[i] = 0.4 * x[i] + normal(gen);
        }
        CHECK(std::fabs(pearson(x, y).p - oracle::permutation_p(x, y, 10000, 100 + trial)) <= 0.02);
    }
}

namespace {

Pattern pure(std::vector<double> values, std::size_t cls) {
    Pattern p;
    p.values = std::move(values);
    p.pure_class = cls;
    p.count = 1;
    return p;
}

Pattern numeric(std::vector<double> values, double target) {
    Pattern p;
    p.values = std::move(values);
    p.target_mean = target;
    p.count = 1;
    return p;
}

}  // namespace

TEST_CASE("correlate_patterns for class targets") {
    const std::vector<Pattern> ps{pure({1, 5}, 0), pure({2, 5}, 0), pure({3, 5}, 1), pure({4, 5}, 1)};
    const auto report = correlate_patterns(ps, TargetKind::categorical, 2);
    CHECK(report.pattern_count == 4);
    REQUIRE(report.feature_count() == 2);
    REQUIRE(report.entries[0].size() == 2);
    CHECK(report.entries[0][1].r == doctest::Approx(0.8944271909999159));
    CHECK(report.entries[0][0].r == doctest::Approx(-0.8944271909999159));
    CHECK(report.entries[1][0].degenerate);

    auto mixed = ps;
    mixed[2].pure_class.reset();
    CHECK(error_of([&] { correlate_patterns(mixed, TargetKind::categorical, 2); }) == Errc::impure_pattern);
    CHECK(error_of([&] { correlate_patterns({ps[0], ps[1]}, TargetKind::categorical, 2); }) ==
          Errc::too_few_patterns);
}

TEST_CASE("correlate_patterns for numeric targets") {
    const std::vector<Pattern> ps{numeric({0.1, 0.3}, 0.1), numeric({0.5, 0.3}, 0.5), numeric({0.7, 0.3}, 0.7)};
    const auto report = correlate_patterns(ps, TargetKind::numeric, 0);
    REQUIRE(report.entries[0].size() == 1);
    CHECK(report.entries[0][0].r == doctest::Approx(1.0));
    CHECK(report.entries[0][0].p == 0.0);
    CHECK(report.entries[1][0].degenerate);
}
