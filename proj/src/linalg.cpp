#include "lugsi/linalg.hpp"

#include "lugsi/error.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <string>

namespace lugsi {

namespace {

// Index of the first leading minor that is not positive, found with a plain
// right-looking Cholesky. Only called after Eigen's factorization failed.
Eigen::Index first_bad_minor(const Eigen::MatrixXd &m) {
    Eigen::MatrixXd a = m;
    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double pivot = a(k, k);
        if (!(pivot > 0.0)) {
            return k + 1;
        }
        const double root = std::sqrt(pivot);
        a.col(k).tail(n - k - 1) /= root;
        for (Eigen::Index j = k + 1; j < n; ++j) {
            a.col(j).tail(n - j) -= a(j, k) * a.col(k).tail(n - j);
        }
    }
    return n;
}

double column_residuals(const Eigen::MatrixXd &m, const Eigen::MatrixXd &z, const Eigen::MatrixXd &rhs, Eigen::MatrixXd &residual) {
    residual.noalias() = rhs - m * z;
    double worst = 0.0;
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
        const double scale = rhs.col(c).norm();
        const double r = residual.col(c).norm();
        worst = std::max(worst, scale > 0.0 ? r / scale : r);
    }
    return worst;
}

}  // namespace

spd_solution solve_spd(const Eigen::MatrixXd &m, const Eigen::MatrixXd &rhs) {
    if (m.rows() != m.cols() || m.rows() != rhs.rows()) {
        throw numeric_error{ "solve_spd: dimension mismatch" };
    }
    if (!m.allFinite() || !rhs.allFinite()) {
        throw numeric_error{ "solve_spd: non-finite entries" };
    }
    const Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt{ m };
    if (llt.info() != Eigen::Success) {
        throw numeric_error{ "Cholesky factorization failed at leading minor " + std::to_string(first_bad_minor(m)) };
    }
    const auto diagonal = llt.matrixLLT().diagonal();
    const double ratio = diagonal.maxCoeff() / diagonal.minCoeff();

    spd_solution out{ llt.solve(rhs), 0.0, ratio * ratio };
    Eigen::MatrixXd residual(rhs.rows(), rhs.cols());
    out.relative_residual = column_residuals(m, out.solution, rhs, residual);
    for (int step = 0; step < 3 && out.relative_residual > spd_residual_tolerance; ++step) {
        out.solution += llt.solve(residual);
        out.relative_residual = column_residuals(m, out.solution, rhs, residual);
    }
    if (!out.solution.allFinite()) {
        throw numeric_error{ "solve_spd: non-finite solution" };
    }
    if (out.relative_residual > spd_residual_tolerance) {
        throw numeric_error{ "solve_spd: residual " + std::to_string(out.relative_residual) + " above tolerance after refinement" };
    }
    return out;
}

}  // namespace lugsi
