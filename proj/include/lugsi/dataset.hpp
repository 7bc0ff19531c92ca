#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lugsi {

/// Row-major feature storage: one sample per row.
using matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using vector = Eigen::VectorXd;
using index_list = std::vector<std::size_t>;

/**
 * Binary classification data: an l x n feature matrix and a {0,1} label per row.
 *
 * Immutable after construction. The constructor rejects labels outside {0,1},
 * non-finite features and n == 0. A dataset with zero rows can be constructed
 * (it is the natural result of an empty subset) but every operation that
 * needs samples rejects it with "empty dataset".
 */
class dataset {
  public:
    dataset(matrix features, vector labels, std::vector<std::string> feature_names = {});

    [[nodiscard]] const matrix &features() const noexcept { return features_; }
    [[nodiscard]] const vector &labels() const noexcept { return labels_; }
    [[nodiscard]] const std::vector<std::string> &feature_names() const noexcept { return feature_names_; }

    /// Number of samples l.
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(features_.rows()); }
    /// Number of features n.
    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(features_.cols()); }
    [[nodiscard]] bool empty() const noexcept { return size() == 0; }

    [[nodiscard]] std::size_t count_positive() const noexcept;

    /// Rows in the given order (duplicates allowed).
    [[nodiscard]] dataset subset(std::span<const std::size_t> rows) const;

  private:
    matrix features_;
    vector labels_;
    std::vector<std::string> feature_names_;
};

/// Per-feature minimum and maximum observed on the data the scaling was fit on.
struct scaling_params {
    vector minimum;
    vector maximum;

    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(minimum.size()); }
    /// Affine map to [0,1] without clamping; constant features map to 0.
    [[nodiscard]] matrix transform(const matrix &features) const;
    /// Inverse of transform for non-constant features; constant features map back to their minimum.
    [[nodiscard]] matrix invert(const matrix &scaled) const;

    friend bool operator==(const scaling_params &, const scaling_params &) = default;
};

/// Identity scaling of dimension n (min 0, max 1).
[[nodiscard]] scaling_params identity_scaling(std::size_t n);

/// Fits minmax parameters on `data` and maps every feature to [0,1].
[[nodiscard]] std::pair<dataset, scaling_params> minmax_scale(const dataset &data);

/// Applies previously fit parameters, then clamps to [0,1].
[[nodiscard]] dataset apply_scaling(const dataset &data, const scaling_params &params);
[[nodiscard]] matrix apply_scaling(const matrix &features, const scaling_params &params);

/// Deterministic shuffled assignment of samples to folds.
struct fold_plan {
    std::uint64_t seed{};
    std::size_t fold_count{};
    std::vector<std::size_t> fold_assignments;

    [[nodiscard]] index_list test_indices(std::size_t fold) const;
    [[nodiscard]] index_list train_indices(std::size_t fold) const;
};

[[nodiscard]] fold_plan kfold_split(const dataset &data, std::size_t folds, std::uint64_t seed);
[[nodiscard]] fold_plan kfold_split(std::size_t sample_count, std::size_t folds, std::uint64_t seed);

struct csv_options {
    bool has_header{ false };
    /// Zero-based label column; defaults to the last column.
    std::optional<std::size_t> label_column{};
};

/// Comma-separated table with one label column holding 0/1 (or -1/+1).
[[nodiscard]] dataset load_csv(const std::filesystem::path &path, const csv_options &options = {});

/// "label idx:val ..." lines with 1-based ascending indices; -1/+1 labels become 0/1.
[[nodiscard]] dataset load_sparse(const std::filesystem::path &path, std::optional<std::size_t> dimension_hint = std::nullopt);

/// Writes `data` as CSV with the label in the last column.
void write_csv(const std::filesystem::path &path, const dataset &data, bool header = true);

/**
 * Normally-distributed-clusters data in the spirit of the NDC generator.
 *
 * Cluster centers are uniform in [0,10]^features, every blob is isotropic with
 * unit variance, and each blob takes the label of the side of a random
 * hyperplane (uniform random unit normal) through the mean of the centers on
 * which its center lies. Sample i belongs to blob i mod cluster_count.
 */
[[nodiscard]] dataset generate_ndc(std::size_t samples, std::size_t features, std::size_t cluster_count, std::uint64_t seed);

}  // namespace lugsi
