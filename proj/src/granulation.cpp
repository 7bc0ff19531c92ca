#include "lugsi/granulation.hpp"

#include "lugsi/error.hpp"
#include "lugsi/parallel.hpp"
#include "lugsi/rng.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace lugsi {

namespace {

double squared_distance(const matrix &a, Eigen::Index row_a, const matrix &b, Eigen::Index row_b) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const double d = a(row_a, j) - b(row_b, j);
        sum += d * d;
    }
    return sum;
}

std::size_t nearest_centroid(const matrix &points, Eigen::Index row, const matrix &centroids) {
    std::size_t best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < centroids.rows(); ++k) {
        const double d = squared_distance(points, row, centroids, k);
        if (d < best_distance) {
            best_distance = d;
            best = static_cast<std::size_t>(k);
        }
    }
    return best;
}

void assign_all(const matrix &points, const matrix &centroids, std::vector<std::size_t> &assignments, std::size_t threads) {
    parallel_for(assignments.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            assignments[i] = nearest_centroid(points, static_cast<Eigen::Index>(i), centroids);
        }
    });
}

matrix seed_centroids(const matrix &points, std::size_t m, split_mix64 &rng) {
    const auto l = static_cast<std::size_t>(points.rows());
    matrix centroids(static_cast<Eigen::Index>(m), points.cols());
    std::vector<bool> chosen(l, false);

    std::size_t pick = static_cast<std::size_t>(rng.below(l));
    std::vector<double> d2(l);
    for (std::size_t c = 0; c < m; ++c) {
        if (c > 0) {
            double total = 0.0;
            for (const double d : d2) {
                total += d;
            }
            if (total > 0.0) {
                const double target = rng.uniform() * total;
                double cumulative = 0.0;
                pick = l;
                std::size_t last_positive = 0;
                for (std::size_t i = 0; i < l; ++i) {
                    if (d2[i] <= 0.0) {
                        continue;
                    }
                    last_positive = i;
                    cumulative += d2[i];
                    if (cumulative > target) {
                        pick = i;
                        break;
                    }
                }
                if (pick == l) {
                    pick = last_positive;
                }
            } else {
                // Every remaining sample coincides with a chosen centroid.
                pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
            }
        }
        chosen[pick] = true;
        const auto row = static_cast<Eigen::Index>(c);
        centroids.row(row) = points.row(static_cast<Eigen::Index>(pick));
        for (std::size_t i = 0; i < l; ++i) {
            const double d = squared_distance(points, static_cast<Eigen::Index>(i), centroids, row);
            d2[i] = c == 0 ? d : std::min(d2[i], d);
        }
    }
    return centroids;
}

// Moves the sample farthest from its own centroid into each empty cluster.
void repair_empty_clusters(const matrix &points, const matrix &centroids, std::vector<std::size_t> &assignments, std::vector<std::size_t> &counts) {
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] != 0) {
            continue;
        }
        std::size_t farthest = assignments.size();
        double farthest_distance = -1.0;
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            if (counts[assignments[i]] <= 1) {
                continue;
            }
            const double d = squared_distance(points, static_cast<Eigen::Index>(i), centroids, static_cast<Eigen::Index>(assignments[i]));
            if (d > farthest_distance) {
                farthest_distance = d;
                farthest = i;
            }
        }
        --counts[assignments[farthest]];
        assignments[farthest] = k;
        counts[k] = 1;
    }
}

matrix cluster_means(const matrix &points, const std::vector<std::size_t> &assignments, std::size_t m) {
    matrix sums = matrix::Zero(static_cast<Eigen::Index>(m), points.cols());
    std::vector<std::size_t> counts(m, 0);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        sums.row(static_cast<Eigen::Index>(assignments[i])) += points.row(static_cast<Eigen::Index>(i));
        ++counts[assignments[i]];
    }
    for (std::size_t k = 0; k < m; ++k) {
        sums.row(static_cast<Eigen::Index>(k)) /= static_cast<double>(counts[k]);
    }
    return sums;
}

std::vector<std::size_t> cluster_sizes(const std::vector<std::size_t> &assignments, std::size_t m) {
    std::vector<std::size_t> counts(m, 0);
    for (const auto a : assignments) {
        ++counts[a];
    }
    return counts;
}

// Single-sample transfers between clusters while any transfer lowers the error.
// Returns the number of sweeps performed.
std::size_t transfer_refinement(const matrix &points, matrix &centroids, std::vector<std::size_t> &assignments, std::size_t max_sweeps) {
    const auto m = static_cast<std::size_t>(centroids.rows());
    auto counts = cluster_sizes(assignments, m);
    std::size_t sweeps = 0;
    bool moved = true;
    while (moved && sweeps < max_sweeps) {
        moved = false;
        ++sweeps;
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            const std::size_t from = assignments[i];
            if (counts[from] <= 1) {
                continue;
            }
            const auto row = static_cast<Eigen::Index>(i);
            const double n_from = static_cast<double>(counts[from]);
            const double removal_gain = n_from / (n_from - 1.0) * squared_distance(points, row, centroids, static_cast<Eigen::Index>(from));
            std::size_t to = from;
            double best_cost = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < m; ++k) {
                if (k == from) {
                    continue;
                }
                const double n_to = static_cast<double>(counts[k]);
                const double cost = n_to / (n_to + 1.0) * squared_distance(points, row, centroids, static_cast<Eigen::Index>(k));
                if (cost < best_cost) {
                    best_cost = cost;
                    to = k;
                }
            }
            if (to == from || !(best_cost < removal_gain * (1.0 - 1e-12))) {
                continue;
            }
            const auto f = static_cast<Eigen::Index>(from);
            const auto t = static_cast<Eigen::Index>(to);
            const double n_to = static_cast<double>(counts[to]);
            centroids.row(f) = (centroids.row(f) * n_from - points.row(row)) / (n_from - 1.0);
            centroids.row(t) = (centroids.row(t) * n_to + points.row(row)) / (n_to + 1.0);
            --counts[from];
            ++counts[to];
            assignments[i] = to;
            moved = true;
        }
    }
    return sweeps;
}

}  // namespace

double clustering_error(const matrix &points, const std::vector<std::size_t> &assignments, const matrix &centroids) {
    double error = 0.0;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        error += squared_distance(points, static_cast<Eigen::Index>(i), centroids, static_cast<Eigen::Index>(assignments[i]));
    }
    return error;
}

granulation kmeans_granulate(const matrix &points, std::size_t m, std::uint64_t seed, const kmeans_options &options) {
    const auto l = static_cast<std::size_t>(points.rows());
    if (m < 1) {
        throw usage_error{ "m must be ≥ 1" };
    }
    if (m > l) {
        throw usage_error{ "m (" + std::to_string(m) + ") exceeds the number of samples (" + std::to_string(l) + ")" };
    }
    if (options.max_iters < 1) {
        throw usage_error{ "max_iters must be >= 1" };
    }
    if (!(options.tol >= 0.0)) {
        throw usage_error{ "tol must be >= 0" };
    }

    split_mix64 rng{ seed };
    granulation result;
    result.seed = seed;
    matrix centroids = seed_centroids(points, m, rng);
    std::vector<std::size_t> assignments(l, m);
    std::vector<std::size_t> previous;

    while (result.iterations_run < options.max_iters) {
        previous = assignments;
        assign_all(points, centroids, assignments, options.threads);
        ++result.iterations_run;
        auto counts = cluster_sizes(assignments, m);
        repair_empty_clusters(points, centroids, assignments, counts);

        matrix updated = cluster_means(points, assignments, m);
        const double displacement = (updated - centroids).rowwise().norm().maxCoeff();
        centroids = std::move(updated);
        result.error_trace.push_back(clustering_error(points, assignments, centroids));
        if (assignments == previous || displacement < options.tol) {
            break;
        }
    }

    if (m > 1 && m < l) {
        result.iterations_run += transfer_refinement(points, centroids, assignments, options.max_iters);
    }

    result.centroids = cluster_means(points, assignments, m);
    result.assignments = std::move(assignments);
    result.granule_members.assign(m, {});
    for (std::size_t i = 0; i < l; ++i) {
        result.granule_members[result.assignments[i]].push_back(i);
    }
    result.clustering_error = clustering_error(points, result.assignments, result.centroids);
    result.error_trace.push_back(result.clustering_error);
    return result;
}

granulation kmeans_granulate(const dataset &data, std::size_t m, std::uint64_t seed, const kmeans_options &options) {
    return kmeans_granulate(data.features(), m, seed, options);
}

std::vector<std::size_t> assign_to_granules(const matrix &points, const granulation &granules) {
    if (points.rows() > 0 && points.cols() != granules.centroids.cols()) {
        throw usage_error{ "dimension mismatch: points have " + std::to_string(points.cols()) + " columns, centroids " + std::to_string(granules.centroids.cols()) };
    }
    std::vector<std::size_t> out(static_cast<std::size_t>(points.rows()));
    assign_all(points, granules.centroids, out, 1);
    return out;
}

}  // namespace lugsi
