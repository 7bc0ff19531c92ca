#pragma once

#include "lugsi/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lugsi {

/// A K-means partition of a training set into m granules.
struct granulation {
    /// Granule index of every training sample.
    std::vector<std::size_t> assignments;
    /// m x n, row k is the mean of granule k.
    matrix centroids;
    /// Member sample indices of every granule, ascending.
    std::vector<index_list> granule_members;
    /// Sum of squared distances of the samples to their centroids.
    double clustering_error{};
    std::size_t iterations_run{};
    std::uint64_t seed{};
    /// Clustering error after every centroid update, in order.
    std::vector<double> error_trace;

    [[nodiscard]] std::size_t granule_count() const noexcept { return granule_members.size(); }
};

struct kmeans_options {
    std::size_t max_iters{ 100 };
    /// Stop once no centroid moves farther than this (Euclidean).
    double tol{ 1e-6 };
    std::size_t threads{ 1 };
};

/**
 * Lloyd's algorithm from k-means++ seeding, followed by single-sample transfer
 * refinement (Hartigan-Wong style) until no transfer lowers the clustering
 * error. Empty clusters are reseeded with the sample farthest from its own
 * centroid. Deterministic in (data, m, seed, options); `threads` only
 * parallelizes the assignment step.
 */
[[nodiscard]] granulation kmeans_granulate(const matrix &points, std::size_t m, std::uint64_t seed, const kmeans_options &options = {});
[[nodiscard]] granulation kmeans_granulate(const dataset &data, std::size_t m, std::uint64_t seed, const kmeans_options &options = {});

/// Nearest centroid per row, ties to the lowest index.
[[nodiscard]] std::vector<std::size_t> assign_to_granules(const matrix &points, const granulation &granules);

/// Sum of squared distances from each point to its assigned centroid.
[[nodiscard]] double clustering_error(const matrix &points, const std::vector<std::size_t> &assignments, const matrix &centroids);

}  // namespace lugsi
