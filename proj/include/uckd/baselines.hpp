#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "uckd/dataset.hpp"

namespace uckd {

// Eigen solvers ------------------------------------------------------------

/// Eigenpairs of a symmetric matrix, eigenvalues descending. Each vector's
/// first entry with magnitude above 1e-12 is positive.
struct EigenPairs {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

/// Full decomposition by cyclic Jacobi rotations. `a` is n x n, row-major.
EigenPairs jacobi_eigen(std::vector<double> a, std::size_t n);

/// Leading `k` eigenpairs by power iteration with deflation.
EigenPairs power_eigen(std::vector<double> a, std::size_t n, std::size_t k);

/// Sample covariance (n - 1 denominator), row-major; fills `mean`.
std::vector<double> sample_covariance(const Dataset& d, std::vector<double>& mean);

// PCA ----------------------------------------------------------------------

/// Above this width PCA switches from Jacobi to power iteration.
inline constexpr std::size_t kJacobiMaxFeatures = 64;

struct PCAModel {
    std::vector<double> mean;
    std::vector<std::vector<double>> components;
    std::vector<double> eigenvalues;
    /// Set when fewer than the requested k eigenvalues were positive.
    bool rank_deficient = false;

    std::size_t k() const noexcept { return components.size(); }
};

PCAModel pca_fit(const Dataset& d, std::size_t k);
Dataset pca_transform(const PCAModel& m, const Dataset& d);

// SOM ----------------------------------------------------------------------

enum class SOMEncoding { bmu_coords, unit_distances };

std::string_view to_string(SOMEncoding mode) noexcept;

struct SOMModel {
    std::size_t grid_side = 0;
    /// Unit u = row * grid_side + col.
    std::vector<std::vector<double>> weights;
    std::size_t epochs = 0;
    SOMEncoding mode = SOMEncoding::unit_distances;

    std::size_t units() const noexcept { return weights.size(); }
    std::size_t feature_count() const noexcept { return weights.empty() ? 0 : weights.front().size(); }
};

/// Online SOM. Learning rate falls linearly 0.5 -> 0.01 and the Gaussian
/// neighbourhood radius grid_side/2 -> 0.5 across epochs; samples are visited
/// in a fresh seeded order each epoch.
SOMModel som_fit(const Dataset& d, std::size_t grid_side, std::size_t epochs, std::uint64_t seed,
                 SOMEncoding mode = SOMEncoding::unit_distances);

/// Nearest unit by Euclidean distance; ties go to the lowest index.
std::size_t best_matching_unit(const SOMModel& m, std::span<const double> x);

/// bmu_coords: (row, col) of the BMU. unit_distances: distance to every unit.
Dataset som_transform(const SOMModel& m, const Dataset& d);

}  // namespace uckd
