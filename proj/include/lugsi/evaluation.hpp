#pragma once

#include "lugsi/dataset.hpp"
#include "lugsi/granulation.hpp"
#include "lugsi/invariants.hpp"
#include "lugsi/kernels.hpp"
#include "lugsi/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lugsi {

/// Everything that selects a training run apart from the data.
struct train_settings {
    fit_method method{ fit_method::lugsi };
    /// nullopt trains the primal linear model f(x) = wᵀx + b.
    std::optional<kernel_spec> kernel{};
    measure_spec::kind measure{ measure_spec::kind::uniform_unit_cube };
    /// Force every v to 1 (LUGSI only).
    bool unit_predicates{ false };
    /// Divide the training v-values by their maximum before building invariants.
    bool normalize_v{ false };
    kmeans_options kmeans{};
    fit_options fit{};
};

/// The regularization parameter used for a tradeoff parameter C (γ = 1/C).
[[nodiscard]] double gamma_from_cost(double c);

struct training_outcome {
    model fitted;
    fit_diagnostics diagnostics;
    /// Present for LUGSI.
    std::optional<granulation> granules;
    double granulate_seconds{};
    /// Granulation, invariants and closed-form solve.
    double train_seconds{};
};

/**
 * Trains on an already scaled dataset. For LUGSI this is the whole training
 * procedure: K-means granulation, per-granule v-vectors, accumulation and the
 * closed-form solve. The returned model carries identity scaling; callers that
 * scaled the data attach their parameters with set_model_scaling.
 */
[[nodiscard]] training_outcome train(const dataset &scaled, double gamma, std::size_t m, std::uint64_t seed, const train_settings &settings);

/// Fraction of equal entries.
[[nodiscard]] double accuracy(std::span<const int> predicted, std::span<const int> actual);

/// Train/test split of one fold, scaled with parameters fit on the train part only.
struct fold_data {
    dataset train;
    dataset test;
    scaling_params scaling;
    index_list train_indices;
    index_list test_indices;
};

[[nodiscard]] fold_data prepare_fold(const dataset &data, const fold_plan &plan, std::size_t fold);

/// Seed handed to K-means for a given fold.
[[nodiscard]] std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold);

struct grid_point {
    double c{ 1.0 };
    /// rbf width; nullopt for the linear model and kernels without a width.
    std::optional<double> delta{};
    std::size_t m{ 1 };

    friend bool operator==(const grid_point &, const grid_point &) = default;
};

struct grid_spec {
    std::vector<double> c_values;
    std::vector<double> delta_values;
    std::vector<std::size_t> m_values;
    std::size_t folds{ 5 };
    std::uint64_t seed{ 0 };

    /// Configurations in grid order: c outermost, then delta, then m.
    [[nodiscard]] std::vector<grid_point> points(bool uses_delta) const;
};

/// C in 2^-8..2^8, δ in 2^-4..2^4, m in {1,3,7,l/2,l} (l < 800) or {1,3,7,l/16,l}.
[[nodiscard]] grid_spec default_grid(std::size_t l, std::size_t folds = 5, std::uint64_t seed = 0);
[[nodiscard]] std::vector<std::size_t> default_m_values(std::size_t l);

struct fold_result {
    std::size_t fold{};
    std::size_t m_effective{};
    double accuracy{};
    double train_seconds{};
    index_list test_indices;
    std::vector<int> predictions;
};

struct config_result {
    grid_point point;
    std::vector<fold_result> folds;
    double mean_accuracy{};
    /// Population standard deviation of the fold accuracies.
    double std_accuracy{};
    double mean_train_seconds{};
    bool m_clipped{ false };
};

[[nodiscard]] config_result cross_validate(const dataset &data, const grid_point &point, std::size_t folds, std::uint64_t seed, const train_settings &settings);

struct eval_report {
    grid_spec grid;
    train_settings settings;
    std::vector<config_result> results;
    std::size_t best{};
    std::vector<std::string> notes;

    [[nodiscard]] const config_result &best_result() const { return results.at(best); }
};

/**
 * Exhaustive grid search with shared per-fold work: each fold is scaled once,
 * granulated once per m, and (kernel) accumulated once per (m, δ); only the
 * closed-form solve runs per C. Results are bitwise identical to calling
 * cross_validate on every point.
 *
 * Best: highest mean accuracy, then lower std, then smaller m (the dominant
 * training cost), then grid order.
 */
[[nodiscard]] eval_report grid_search(const dataset &data, const grid_spec &grid, const train_settings &settings);

/// Index of the best configuration under the tie rule above.
[[nodiscard]] std::size_t select_best(std::span<const config_result> results);

struct report_options {
    /// Wall-clock columns are only written when set; everything else is deterministic.
    bool include_timing{ false };
    /// Per-fold test indices and predicted labels.
    bool include_predictions{ false };
    /// Free-form provenance line (typically the command line).
    std::string config_line;
};

[[nodiscard]] std::string report_json(const eval_report &report, const report_options &options);
/// Columns c, delta, m, fold, acc, train_seconds; one row per configuration and fold.
[[nodiscard]] std::string report_csv(const eval_report &report, const report_options &options);

struct scaling_row {
    std::size_t l{};
    double granulate_seconds{};
    /// v-values plus per-granule accumulation of u_k, s_k, t_k.
    double assembly_seconds{};
    /// fit_linear_lugsi (accumulation and solve).
    double fit_seconds{};
    /// Dense V-matrix assembly for contrast; nullopt above the cap.
    std::optional<double> v_matrix_seconds{};
    double training_accuracy{};
};

struct scaling_settings {
    std::size_t ndc_clusters{ 20 };
    double gamma{ 1.0 };
    std::size_t v_matrix_cap{ 5000 };
    /// Assembly and fit are repeated and the fastest run is reported.
    std::size_t repeats{ 3 };
    kmeans_options kmeans{};
};

/// Fits linear LUGSI on NDC data of each size and times the stages.
[[nodiscard]] std::vector<scaling_row> benchmark_scaling(std::span<const std::size_t> sizes, std::size_t features, std::size_t m, std::uint64_t seed, const scaling_settings &settings = {});

struct sweep_row {
    std::size_t m{};
    double mean_accuracy{};
    double std_accuracy{};
    double mean_train_seconds{};
};

/// Cross-validated accuracy and training time for each m at fixed C (and δ).
[[nodiscard]] std::vector<sweep_row> cluster_sweep(const dataset &data, std::span<const std::size_t> m_values, double c, std::optional<double> delta, std::size_t folds, std::uint64_t seed, const train_settings &settings);

/// Least-squares slope of y against x.
[[nodiscard]] double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace lugsi
