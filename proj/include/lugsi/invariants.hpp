#pragma once

#include "lugsi/dataset.hpp"
#include "lugsi/granulation.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace lugsi {

/// Measure over which the step-function integral v(x) = ∫ θ(x̂ − x) dμ(x̂) is taken.
struct measure_spec {
    enum class kind { uniform_unit_cube, empirical };

    kind type{ kind::uniform_unit_cube };
    /// Required for the empirical kind: the sample defining μ.
    std::optional<matrix> reference_points{};

    static measure_spec uniform() { return {}; }
    static measure_spec empirical(matrix references) { return { kind::empirical, std::move(references) }; }
};

/// Statistical invariant of one granule: its v-vector and the right-hand side vᵀY_k.
struct granule_invariant {
    std::size_t granule_index{};
    /// Ordered like the granule's member list.
    vector v;
    double target{};
};

/**
 * v(x) for a single point. Uniform measure on the unit cube: ∏_j (1 − x_j).
 * Empirical measure: fraction of reference points that dominate x in every
 * coordinate (θ(0) = 1, so equality counts as domination).
 */
[[nodiscard]] double v_value(const Eigen::Ref<const Eigen::RowVectorXd> &point, const measure_spec &measure);

/// v(x_i) for every row.
[[nodiscard]] vector v_values(const matrix &points, const measure_spec &measure);

/// One invariant per granule in granule order, built from the measure's v-values.
[[nodiscard]] std::vector<granule_invariant> granule_v_vectors(const dataset &data, const granulation &granules, const measure_spec &measure);

/// Invariants with every v forced to 1 (the predicate that ignores positions).
[[nodiscard]] std::vector<granule_invariant> unit_granule_invariants(const dataset &data, const granulation &granules);

/// Builds invariants from precomputed per-sample v-values.
[[nodiscard]] std::vector<granule_invariant> granule_invariants_from_values(const dataset &data, const granulation &granules, const vector &values);

/// Largest l accepted by v_matrix unless the caller overrides it.
inline constexpr std::size_t default_v_matrix_cap = 20000;

/**
 * Full l x l V-matrix V_ij = ∫ θ(x − x_i) θ(x − x_j) dμ(x).
 * Uniform measure: ∏_k (1 − max(x_ik, x_jk)). Empirical: (1/r) Σ_s θ(x_s − x_i) θ(x_s − x_j).
 * Throws numeric_error above `cap` samples.
 */
[[nodiscard]] Eigen::MatrixXd v_matrix(const matrix &points, const measure_spec &measure, std::size_t cap = default_v_matrix_cap);

}  // namespace lugsi
