#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace lugsi {

struct spd_solution {
    /// One column per right-hand side.
    Eigen::MatrixXd solution;
    /// max over columns of ‖M z − r‖ / ‖r‖ (0 for a zero right-hand side).
    double relative_residual{};
    /// (max diag L / min diag L)², a cheap lower bound on cond(M).
    double condition_hint{};
};

/**
 * Solves M Z = R for symmetric positive definite M with one Cholesky
 * factorization shared by every column of R, followed by iterative refinement
 * until each column satisfies ‖M z − r‖ ≤ 1e-8 ‖r‖.
 *
 * Throws numeric_error on non-finite input, on a non-positive leading minor
 * (the message names its 1-based index), or if refinement cannot reach the
 * residual bound.
 */
[[nodiscard]] spd_solution solve_spd(const Eigen::MatrixXd &m, const Eigen::MatrixXd &rhs);

inline constexpr double spd_residual_tolerance = 1e-8;

}  // namespace lugsi
