#include "uckd/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uckd/error.hpp"
#include "uckd/random.hpp"

namespace uckd {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void normalize_in_place(std::vector<double>& v) {
    const double n = std::sqrt(dot(v, v));
    if (n > 0.0) {
        for (double& x : v) x /= n;
    }
}

void fix_sign(std::vector<double>& v) {
    for (double x : v) {
        if (std::fabs(x) > 1e-12) {
            if (x < 0.0) {
                for (double& y : v) y = -y;
            }
            return;
        }
    }
}

void sort_descending(EigenPairs& e) {
    std::vector<std::size_t> order(e.values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return e.values[a] > e.values[b]; });
    EigenPairs sorted;
    for (auto i : order) {
        sorted.values.push_back(e.values[i]);
        sorted.vectors.push_back(std::move(e.vectors[i]));
    }
    e = std::move(sorted);
}

}  // namespace

EigenPairs jacobi_eigen(std::vector<double> a, std::size_t n) {
    if (a.size() != n * n) throw Error(Errc::length_mismatch, "matrix is not n x n");
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    auto at = [n](std::vector<double>& m, std::size_t r, std::size_t c) -> double& { return m[r * n + c]; };

    double scale = 0.0;
    for (double x : a) scale += x * x;
    const double tol = 1e-10 * std::max(1.0, std::sqrt(scale));

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += at(a, p, q) * at(a, p, q);
        if (std::sqrt(off) <= tol) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(a, p, q);
                if (apq == 0.0) continue;
                const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(a, k, p);
                    const double akq = at(a, k, q);
                    at(a, k, p) = c * akp - s * akq;
                    at(a, k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(a, p, k);
                    const double aqk = at(a, q, k);
                    at(a, p, k) = c * apk - s * aqk;
                    at(a, q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = at(v, k, p);
                    const double vkq = at(v, k, q);
                    at(v, k, p) = c * vkp - s * vkq;
                    at(v, k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    EigenPairs out;
    for (std::size_t i = 0; i < n; ++i) {
        out.values.push_back(at(a, i, i));
        std::vector<double> col(n);
        for (std::size_t k = 0; k < n; ++k) col[k] = at(v, k, i);
        fix_sign(col);
        out.vectors.push_back(std::move(col));
    }
    sort_descending(out);
    return out;
}

EigenPairs power_eigen(std::vector<double> a, std::size_t n, std::size_t k) {
    if (a.size() != n * n) throw Error(Errc::length_mismatch, "matrix is not n x n");
    if (k > n) throw Error(Errc::invalid_config, "more eigenpairs requested than the matrix has");
    EigenPairs out;
    std::vector<double> w(n);
    for (std::size_t e = 0; e < k; ++e) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>((i + e) % 7);
        auto orthogonalize = [&](std::vector<double>& x) {
            for (const auto& u : out.vectors) {
                const double proj = dot(x, u);
                for (std::size_t i = 0; i < n; ++i) x[i] -= proj * u[i];
            }
            normalize_in_place(x);
        };
        orthogonalize(v);

        double lambda = 0.0;
        for (int iter = 0; iter < 10000; ++iter) {
            for (std::size_t r = 0; r < n; ++r) {
                w[r] = std::inner_product(a.begin() + static_cast<std::ptrdiff_t>(r * n),
                                          a.begin() + static_cast<std::ptrdiff_t>((r + 1) * n), v.begin(), 0.0);
            }
            const double next = dot(v, w);
            v = w;
            orthogonalize(v);
            const bool converged = iter > 0 && std::fabs(next - lambda) <= 1e-12 * std::fabs(next);
            lambda = next;
            if (converged) break;
        }
        fix_sign(v);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) a[r * n + c] -= lambda * v[r] * v[c];
        out.values.push_back(lambda);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

std::vector<double> sample_covariance(const Dataset& d, std::vector<double>& mean) {
    const std::size_t n = d.rows();
    const std::size_t f = d.feature_count();
    if (n < 2) throw Error(Errc::too_few_samples, "covariance needs at least 2 samples");
    mean.assign(f, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = d.row(i);
        for (std::size_t j = 0; j < f; ++j) mean[j] += r[j];
    }
    for (double& m : mean) m /= static_cast<double>(n);
    std::vector<double> cov(f * f, 0.0);
    std::vector<double> centered(f);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = d.row(i);
        for (std::size_t j = 0; j < f; ++j) centered[j] = r[j] - mean[j];
        for (std::size_t p = 0; p < f; ++p)
            for (std::size_t q = p; q < f; ++q) cov[p * f + q] += centered[p] * centered[q];
    }
    for (std::size_t p = 0; p < f; ++p) {
        for (std::size_t q = p; q < f; ++q) {
            cov[p * f + q] /= static_cast<double>(n - 1);
            cov[q * f + p] = cov[p * f + q];
        }
    }
    return cov;
}

PCAModel pca_fit(const Dataset& d, std::size_t k) {
    const std::size_t f = d.feature_count();
    if (d.rows() < 2 || k < 1 || k > std::min(d.rows() - 1, f)) {
        throw Error(Errc::invalid_config, "PCA needs 1 <= k <= min(samples - 1, features)");
    }
    PCAModel m;
    auto cov = sample_covariance(d, m.mean);
    double trace = 0.0;
    for (std::size_t j = 0; j < f; ++j) trace += cov[j * f + j];
    const EigenPairs pairs = f <= kJacobiMaxFeatures ? jacobi_eigen(std::move(cov), f) : power_eigen(std::move(cov), f, k);

    const double positive = 1e-12 * std::max(1.0, trace);
    for (std::size_t i = 0; i < k && i < pairs.values.size(); ++i) {
        if (pairs.values[i] <= positive) break;
        m.eigenvalues.push_back(pairs.values[i]);
        m.components.push_back(pairs.vectors[i]);
    }
    m.rank_deficient = m.components.size() < k;
    return m;
}

Dataset pca_transform(const PCAModel& m, const Dataset& d) {
    if (d.feature_count() != m.mean.size()) throw Error(Errc::length_mismatch, "dataset width differs from PCA fit");
    const std::size_t k = m.k();
    std::vector<double> values(d.rows() * k);
    std::vector<double> centered(m.mean.size());
    for (std::size_t i = 0; i < d.rows(); ++i) {
        const auto r = d.row(i);
        for (std::size_t j = 0; j < centered.size(); ++j) centered[j] = r[j] - m.mean[j];
        for (std::size_t c = 0; c < k; ++c) values[i * k + c] = dot(centered, m.components[c]);
    }
    std::vector<std::string> names(k);
    for (std::size_t c = 0; c < k; ++c) names[c] = "pc" + std::to_string(c + 1);
    return d.with_features(std::move(values), std::move(names));
}

// SOM ----------------------------------------------------------------------

std::string_view to_string(SOMEncoding mode) noexcept {
    return mode == SOMEncoding::bmu_coords ? "bmu_coords" : "unit_distances";
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

}  // namespace

std::size_t best_matching_unit(const SOMModel& m, std::span<const double> x) {
    if (x.size() != m.feature_count()) throw Error(Errc::length_mismatch, "input width differs from SOM weights");
    std::size_t best = 0;
    double best_d = squared_distance(x, m.weights[0]);
    for (std::size_t u = 1; u < m.units(); ++u) {
        const double dist = squared_distance(x, m.weights[u]);
        if (dist < best_d) {
            best_d = dist;
            best = u;
        }
    }
    return best;
}

SOMModel som_fit(const Dataset& d, std::size_t grid_side, std::size_t epochs, std::uint64_t seed, SOMEncoding mode) {
    if (grid_side < 1 || epochs < 1) throw Error(Errc::invalid_config, "SOM needs grid_side >= 1 and epochs >= 1");
    if (d.empty()) throw Error(Errc::empty_dataset, "cannot fit a SOM on an empty dataset");
    const std::size_t f = d.feature_count();
    Rng rng(seed);
    SOMModel m;
    m.grid_side = grid_side;
    m.epochs = epochs;
    m.mode = mode;
    m.weights.assign(grid_side * grid_side, std::vector<double>(f));
    for (auto& w : m.weights)
        for (double& x : w) x = rng.uniform01();

    std::vector<std::size_t> order(d.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const double side = static_cast<double>(grid_side);
    for (std::size_t e = 0; e < epochs; ++e) {
        const double progress = epochs > 1 ? static_cast<double>(e) / static_cast<double>(epochs - 1) : 0.0;
        const double rate = 0.5 + (0.01 - 0.5) * progress;
        const double radius = side / 2.0 + (0.5 - side / 2.0) * progress;
        rng.shuffle(std::span<std::size_t>(order));
        for (auto i : order) {
            const auto x = d.row(i);
            const std::size_t bmu = best_matching_unit(m, x);
            const double br = static_cast<double>(bmu / grid_side);
            const double bc = static_cast<double>(bmu % grid_side);
            for (std::size_t u = 0; u < m.units(); ++u) {
                const double dr = static_cast<double>(u / grid_side) - br;
                const double dc = static_cast<double>(u % grid_side) - bc;
                const double h = std::exp(-(dr * dr + dc * dc) / (2.0 * radius * radius));
                auto& w = m.weights[u];
                for (std::size_t j = 0; j < f; ++j) w[j] += rate * h * (x[j] - w[j]);
            }
        }
    }
    return m;
}

Dataset som_transform(const SOMModel& m, const Dataset& d) {
    if (d.feature_count() != m.feature_count()) throw Error(Errc::length_mismatch, "dataset width differs from SOM");
    std::vector<double> values;
    std::vector<std::string> names;
    if (m.mode == SOMEncoding::bmu_coords) {
        names = {"bmu_row", "bmu_col"};
        for (std::size_t i = 0; i < d.rows(); ++i) {
            const std::size_t bmu = best_matching_unit(m, d.row(i));
            values.push_back(static_cast<double>(bmu / m.grid_side));
            values.push_back(static_cast<double>(bmu % m.grid_side));
        }
    } else {
        for (std::size_t u = 0; u < m.units(); ++u) names.push_back("unit" + std::to_string(u));
        for (std::size_t i = 0; i < d.rows(); ++i) {
            for (const auto& w : m.weights) values.push_back(std::sqrt(squared_distance(d.row(i), w)));
        }
    }
    return d.with_features(std::move(values), std::move(names));
}

}  // namespace uckd
