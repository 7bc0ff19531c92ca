#include "lugsi/solver.hpp"

#include "lugsi/error.hpp"
#include "lugsi/linalg.hpp"
#include "lugsi/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <functional>
#include <string>

namespace lugsi {

std::string_view to_string(fit_method method) {
    switch (method) {
        case fit_method::lugsi:
            return "lugsi";
        case fit_method::lssvm:
            return "lssvm";
        case fit_method::vsvm:
            return "vsvm";
    }
    return "unknown";
}

fit_method parse_fit_method(std::string_view name) {
    if (name == "lugsi") {
        return fit_method::lugsi;
    }
    if (name == "lssvm") {
        return fit_method::lssvm;
    }
    if (name == "vsvm") {
        return fit_method::vsvm;
    }
    throw usage_error{ "unknown method '" + std::string{ name } + "'" };
}

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

void check_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw usage_error{ "gamma must be a positive finite number" };
    }
}

void check_dense_size(std::size_t l, const fit_options &options, std::string_view what) {
    if (l > options.dense_cap) {
        throw numeric_error{ std::string{ what } + " needs a dense " + std::to_string(l) + " x " + std::to_string(l) + " system, above the cap of " + std::to_string(options.dense_cap) };
    }
}

void check_invariants(const dataset &data, const granulation &granules, const std::vector<granule_invariant> &invariants) {
    if (granules.assignments.size() != data.size()) {
        throw usage_error{ "granulation does not match the dataset size" };
    }
    if (invariants.size() != granules.granule_count()) {
        throw usage_error{ "one invariant per granule is required" };
    }
    for (std::size_t k = 0; k < invariants.size(); ++k) {
        if (invariants[k].granule_index != k || static_cast<std::size_t>(invariants[k].v.size()) != granules.granule_members[k].size()) {
            throw usage_error{ "invariant " + std::to_string(k) + " does not align with its granule" };
        }
    }
}

// Stationarity system shared by every closed-form fit:
//   M·slope = rhs_y − bias·rhs_one,  bias·one_weight + rhs_oneᵀslope = y_weight.
struct normal_system {
    Eigen::MatrixXd m;
    vector rhs_y;
    vector rhs_one;
    double y_weight{};
    double one_weight{};
};

struct normal_solution {
    vector slope_b;
    vector slope_c;
    vector slope;
    double bias{};
    bool degenerate{};
    double residual{};
    double condition{};
};

normal_solution solve_normal(const normal_system &system) {
    Eigen::MatrixXd rhs(system.rhs_y.size(), 2);
    rhs.col(0) = system.rhs_y;
    rhs.col(1) = system.rhs_one;
    const spd_solution solved = solve_spd(system.m, rhs);

    normal_solution out;
    out.slope_b = solved.solution.col(0);
    out.slope_c = solved.solution.col(1);
    out.residual = solved.relative_residual;
    out.condition = solved.condition_hint;
    const double numerator = system.y_weight - system.rhs_one.dot(out.slope_b);
    const double denominator = system.one_weight - system.rhs_one.dot(out.slope_c);
    if (!std::isfinite(numerator) || !std::isfinite(denominator)) {
        throw numeric_error{ "non-finite bias terms" };
    }
    if (std::abs(denominator) < 1e-12 * (1.0 + std::abs(numerator))) {
        out.bias = 0.0;
        out.degenerate = true;
    } else {
        out.bias = numerator / denominator;
    }
    out.slope = out.slope_b - out.bias * out.slope_c;
    if (!out.slope.allFinite() || !std::isfinite(out.bias)) {
        throw numeric_error{ "non-finite model parameters" };
    }
    return out;
}

// θ = (slope..., bias).
using objective_fn = std::function<double(const vector &)>;
using gradient_fn = std::function<vector(const vector &)>;

vector pack(const vector &slope, double bias) {
    vector theta(slope.size() + 1);
    theta.head(slope.size()) = slope;
    theta[slope.size()] = bias;
    return theta;
}

double finite_difference_gradient_norm(const objective_fn &objective, vector theta) {
    constexpr double step = 1e-6;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double original = theta[i];
        theta[i] = original + step;
        const double up = objective(theta);
        theta[i] = original - step;
        const double down = objective(theta);
        theta[i] = original;
        const double g = (up - down) / (2.0 * step);
        sum += g * g;
    }
    return std::sqrt(sum);
}

void fill_diagnostics(fit_diagnostics &diagnostics, const normal_solution &solution, const objective_fn &objective, const gradient_fn &gradient, const fit_options &options) {
    diagnostics.system_condition_hint = solution.condition;
    diagnostics.relative_residual = solution.residual;
    diagnostics.degenerate_bias = solution.degenerate;
    if (!options.compute_diagnostics) {
        return;
    }
    const vector theta = pack(solution.slope, solution.bias);
    diagnostics.objective_value = objective(theta);
    if (static_cast<std::size_t>(theta.size()) <= options.finite_difference_limit) {
        diagnostics.gradient_norm = finite_difference_gradient_norm(objective, theta);
        diagnostics.gradient_by_finite_differences = true;
    } else {
        diagnostics.gradient_norm = gradient(theta).norm();
        diagnostics.gradient_by_finite_differences = false;
    }
}

linear_model make_linear(const normal_solution &solution, double gamma, std::size_t m, std::uint64_t seed, std::size_t n, fit_method method) {
    return linear_model{ solution.slope, solution.bias, solution.slope_b, solution.slope_c, gamma, m, seed, identity_scaling(n), method };
}

kernel_model make_kernel(const normal_solution &solution, const matrix &points, const kernel_spec &kernel, double gamma, std::size_t m, std::uint64_t seed, fit_method method) {
    return kernel_model{ solution.slope, solution.bias, solution.slope_b, solution.slope_c, points, kernel, gamma, m, seed, identity_scaling(static_cast<std::size_t>(points.cols())), method };
}

// Shared objective/gradient for R = rᵀ W r + λ·pᵀp with r = B p + bias·ones − y,
// where W is identity (weight == nullptr) or a dense PSD matrix.
struct dense_quadratic {
    const Eigen::MatrixXd *basis;  // l x p (X or K)
    const Eigen::MatrixXd *weight;
    const vector *labels;
    double lambda;

    [[nodiscard]] vector residual(const vector &theta) const {
        const Eigen::Index p = basis->cols();
        vector r = (*basis) * theta.head(p);
        r.array() += theta[p];
        return r - *labels;
    }
    [[nodiscard]] double value(const vector &theta) const {
        const Eigen::Index p = basis->cols();
        const vector r = residual(theta);
        const double fit = weight ? r.dot((*weight) * r) : r.squaredNorm();
        return fit + lambda * theta.head(p).squaredNorm();
    }
    [[nodiscard]] vector gradient(const vector &theta) const {
        const Eigen::Index p = basis->cols();
        const vector r = residual(theta);
        const vector wr = weight ? vector((*weight) * r) : r;
        vector g(p + 1);
        g.head(p) = 2.0 * basis->transpose() * wr + 2.0 * lambda * theta.head(p);
        g[p] = 2.0 * wr.sum();
        return g;
    }
};

void check_v_matrix(const Eigen::MatrixXd &v, std::size_t l) {
    if (static_cast<std::size_t>(v.rows()) != l || static_cast<std::size_t>(v.cols()) != l) {
        throw usage_error{ "V-matrix must be l x l" };
    }
    if (!v.allFinite()) {
        throw numeric_error{ "V-matrix has non-finite entries" };
    }
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw usage_error{ "V-matrix is not symmetric" };
    }
    if (l <= 2000) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen{ v, Eigen::EigenvaluesOnly };
        if (eigen.eigenvalues().minCoeff() < -1e-8) {
            throw usage_error{ "V-matrix is not positive semidefinite (smallest eigenvalue " + std::to_string(eigen.eigenvalues().minCoeff()) + ")" };
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// linear LUGSI

linear_lugsi_system::linear_lugsi_system(const dataset &data, const granulation &granules, const std::vector<granule_invariant> &invariants) :
    seed_{ granules.seed } {
    check_invariants(data, granules, invariants);
    const auto m = static_cast<Eigen::Index>(invariants.size());
    u_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.dimension()), m);
    s_.resize(m);
    t_.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto &members = granules.granule_members[static_cast<std::size_t>(k)];
        const auto &inv = invariants[static_cast<std::size_t>(k)];
        for (std::size_t p = 0; p < members.size(); ++p) {
            u_.col(k) += inv.v[static_cast<Eigen::Index>(p)] * data.features().row(static_cast<Eigen::Index>(members[p])).transpose();
        }
        s_[k] = inv.v.sum();
        t_[k] = inv.target;
    }
}

double linear_lugsi_system::objective(const vector &w, double b, double gamma) const {
    const vector rho = u_.transpose() * w + b * s_ - t_;
    return rho.squaredNorm() + gamma * static_cast<double>(granule_count()) * w.squaredNorm();
}

fit_result<linear_model> linear_lugsi_system::solve(double gamma, const fit_options &options) const {
    check_gamma(gamma);
    const auto start = clock_type::now();
    const double ridge = gamma * static_cast<double>(granule_count());
    normal_system system;
    system.m.noalias() = u_ * u_.transpose();
    system.m.diagonal().array() += ridge;
    system.rhs_y = u_ * t_;
    system.rhs_one = u_ * s_;
    system.y_weight = s_.dot(t_);
    system.one_weight = s_.dot(s_);
    const normal_solution solution = solve_normal(system);

    fit_result<linear_model> out{ make_linear(solution, gamma, granule_count(), seed_, static_cast<std::size_t>(u_.rows()), fit_method::lugsi), {} };
    out.diagnostics.wall_seconds = seconds_since(start);
    const Eigen::Index n = u_.rows();
    fill_diagnostics(
        out.diagnostics, solution,
        [&](const vector &theta) { return objective(theta.head(n), theta[n], gamma); },
        [&](const vector &theta) {
            const vector rho = u_.transpose() * theta.head(n) + theta[n] * s_ - t_;
            vector g(n + 1);
            g.head(n) = 2.0 * u_ * rho + 2.0 * ridge * theta.head(n);
            g[n] = 2.0 * s_.dot(rho);
            return g;
        },
        options);
    return out;
}

fit_result<linear_model> fit_linear_lugsi(const dataset &data, const granulation &granules, const std::vector<granule_invariant> &invariants, double gamma, const fit_options &options) {
    check_gamma(gamma);
    const auto start = clock_type::now();
    const linear_lugsi_system system{ data, granules, invariants };
    auto out = system.solve(gamma, options);
    out.diagnostics.wall_seconds = seconds_since(start);
    return out;
}

// ---------------------------------------------------------------------------
// kernel LUGSI

kernel_lugsi_system::kernel_lugsi_system(const dataset &data, const granulation &granules, const std::vector<granule_invariant> &invariants, const kernel_spec &kernel, const fit_options &options) :
    training_points_{ data.features() },
    kernel_{ kernel },
    seed_{ granules.seed } {
    kernel.validate();
    check_invariants(data, granules, invariants);
    check_dense_size(data.size(), options, "kernel LUGSI");
    const auto l = static_cast<Eigen::Index>(data.size());
    const auto m = static_cast<Eigen::Index>(invariants.size());

    // Per-sample granule and v-value, in sample order.
    std::vector<Eigen::Index> granule_of(static_cast<std::size_t>(l));
    vector weight(l);
    s_.resize(m);
    t_.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto &members = granules.granule_members[static_cast<std::size_t>(k)];
        const auto &inv = invariants[static_cast<std::size_t>(k)];
        for (std::size_t p = 0; p < members.size(); ++p) {
            granule_of[members[p]] = k;
            weight[static_cast<Eigen::Index>(members[p])] = inv.v[static_cast<Eigen::Index>(p)];
        }
        s_[k] = inv.v.sum();
        t_[k] = inv.target;
    }

    // q_k(j) = Σ_{i in S_k} v_i K(x_i, x_j); threads own disjoint ranges of j.
    q_ = Eigen::MatrixXd::Zero(l, m);
    const matrix &x = training_points_;
    parallel_for(static_cast<std::size_t>(l), options.threads, [&](std::size_t begin, std::size_t end) {
        for (Eigen::Index i = 0; i < l; ++i) {
            const double vi = weight[i];
            if (vi == 0.0) {
                continue;
            }
            const Eigen::Index k = granule_of[static_cast<std::size_t>(i)];
            for (auto j = static_cast<Eigen::Index>(begin); j < static_cast<Eigen::Index>(end); ++j) {
                q_(j, k) += vi * kernel_eval(kernel_, x.row(i), x.row(j));
            }
        }
    });
}

double kernel_lugsi_system::objective(const vector &a, double c, double gamma) const {
    const vector rho = q_.transpose() * a + c * s_ - t_;
    return rho.squaredNorm() + gamma * static_cast<double>(q_.cols()) * a.squaredNorm();
}

fit_result<kernel_model> kernel_lugsi_system::solve(double gamma, const fit_options &options) const {
    check_gamma(gamma);
    check_dense_size(static_cast<std::size_t>(q_.rows()), options, "kernel LUGSI");
    const auto start = clock_type::now();
    const auto m = static_cast<std::size_t>(q_.cols());
    const double ridge = gamma * static_cast<double>(m);
    normal_system system;
    system.m = Eigen::MatrixXd::Zero(q_.rows(), q_.rows());
    system.m.selfadjointView<Eigen::Lower>().rankUpdate(q_);
    system.m.triangularView<Eigen::StrictlyUpper>() = system.m.transpose();
    system.m.diagonal().array() += ridge;
    system.rhs_y = q_ * t_;
    system.rhs_one = q_ * s_;
    system.y_weight = s_.dot(t_);
    system.one_weight = s_.dot(s_);
    const normal_solution solution = solve_normal(system);

    fit_result<kernel_model> out{ make_kernel(solution, training_points_, kernel_, gamma, m, seed_, fit_method::lugsi), {} };
    out.diagnostics.wall_seconds = seconds_since(start);
    const Eigen::Index l = q_.rows();
    fill_diagnostics(
        out.diagnostics, solution,
        [&](const vector &theta) { return objective(theta.head(l), theta[l], gamma); },
        [&](const vector &theta) {
            const vector rho = q_.transpose() * theta.head(l) + theta[l] * s_ - t_;
            vector g(l + 1);
            g.head(l) = 2.0 * q_ * rho + 2.0 * ridge * theta.head(l);
            g[l] = 2.0 * s_.dot(rho);
            return g;
        },
        options);
    return out;
}

fit_result<kernel_model> fit_kernel_lugsi(const dataset &data, const granulation &granules, const std::vector<granule_invariant> &invariants, const kernel_spec &kernel, double gamma, const fit_options &options) {
    check_gamma(gamma);
    const auto start = clock_type::now();
    const kernel_lugsi_system system{ data, granules, invariants, kernel, options };
    auto out = system.solve(gamma, options);
    out.diagnostics.wall_seconds = seconds_since(start);
    return out;
}

// ---------------------------------------------------------------------------
// LSSVM

fit_result<linear_model> fit_lssvm(const dataset &data, double gamma, const fit_options &options) {
    check_gamma(gamma);
    if (data.empty()) {
        throw usage_error{ "empty dataset" };
    }
    const auto start = clock_type::now();
    const Eigen::MatrixXd x = data.features();
    const vector &y = data.labels();
    const double lambda = gamma * static_cast<double>(data.size());
    normal_system system;
    system.m.noalias() = x.transpose() * x;
    system.m.diagonal().array() += lambda;
    system.rhs_y = x.transpose() * y;
    system.rhs_one = x.colwise().sum().transpose();
    system.y_weight = y.sum();
    system.one_weight = static_cast<double>(data.size());
    const normal_solution solution = solve_normal(system);

    fit_result<linear_model> out{ make_linear(solution, gamma, data.size(), 0, data.dimension(), fit_method::lssvm), {} };
    out.diagnostics.wall_seconds = seconds_since(start);
    const dense_quadratic quadratic{ &x, nullptr, &y, lambda };
    fill_diagnostics(
        out.diagnostics, solution, [&](const vector &theta) { return quadratic.value(theta); }, [&](const vector &theta) { return quadratic.gradient(theta); }, options);
    return out;
}

fit_result<kernel_model> fit_lssvm(const dataset &data, const kernel_spec &kernel, double gamma, const fit_options &options) {
    check_gamma(gamma);
    kernel.validate();
    if (data.empty()) {
        throw usage_error{ "empty dataset" };
    }
    check_dense_size(data.size(), options, "kernel LSSVM");
    const auto start = clock_type::now();
    const Eigen::MatrixXd k = gram_block(kernel, data.features(), data.features(), options.threads);
    const vector &y = data.labels();
    const double lambda = gamma * static_cast<double>(data.size());
    normal_system system;
    system.m.noalias() = k.transpose() * k;
    system.m.diagonal().array() += lambda;
    system.rhs_y = k.transpose() * y;
    system.rhs_one = k.colwise().sum().transpose();
    system.y_weight = y.sum();
    system.one_weight = static_cast<double>(data.size());
    const normal_solution solution = solve_normal(system);

    fit_result<kernel_model> out{ make_kernel(solution, data.features(), kernel, gamma, data.size(), 0, fit_method::lssvm), {} };
    out.diagnostics.wall_seconds = seconds_since(start);
    const dense_quadratic quadratic{ &k, nullptr, &y, lambda };
    fill_diagnostics(
        out.diagnostics, solution, [&](const vector &theta) { return quadratic.value(theta); }, [&](const vector &theta) { return quadratic.gradient(theta); }, options);
    return out;
}

// ---------------------------------------------------------------------------
// VSVM

fit_result<linear_model> fit_vsvm(const dataset &data, const Eigen::MatrixXd &v, double gamma, const fit_options &options) {
    check_gamma(gamma);
    if (data.empty()) {
        throw usage_error{ "empty dataset" };
    }
    check_dense_size(data.size(), options, "VSVM");
    check_v_matrix(v, data.size());
    const auto start = clock_type::now();
    const Eigen::MatrixXd x = data.features();
    const vector &y = data.labels();
    const Eigen::MatrixXd vx = v * x;
    const vector v_one = v.rowwise().sum();
    normal_system system;
    system.m.noalias() = x.transpose() * vx;
    system.m = 0.5 * (system.m + system.m.transpose());
    system.m.diagonal().array() += gamma;
    system.rhs_y = vx.transpose() * y;
    system.rhs_one = x.transpose() * v_one;
    system.y_weight = v_one.dot(y);
    system.one_weight = v_one.sum();
    const normal_solution solution = solve_normal(system);

    fit_result<linear_model> out{ make_linear(solution, gamma, 1, 0, data.dimension(), fit_method::vsvm), {} };
    out.diagnostics.wall_seconds = seconds_since(start);
    const dense_quadratic quadratic{ &x, &v, &y, gamma };
    fill_diagnostics(
        out.diagnostics, solution, [&](const vector &theta) { return quadratic.value(theta); }, [&](const vector &theta) { return quadratic.gradient(theta); }, options);
    return out;
}

fit_result<kernel_model> fit_vsvm(const dataset &data, const Eigen::MatrixXd &v, const kernel_spec &kernel, double gamma, const fit_options &options) {
    check_gamma(gamma);
    kernel.validate();
    if (data.empty()) {
        throw usage_error{ "empty dataset" };
    }
    check_dense_size(data.size(), options, "kernel VSVM");
    check_v_matrix(v, data.size());
    const auto start = clock_type::now();
    const Eigen::MatrixXd k = gram_block(kernel, data.features(), data.features(), options.threads);
    const vector &y = data.labels();
    const Eigen::MatrixXd vk = v * k;
    const vector v_one = v.rowwise().sum();
    normal_system system;
    system.m.noalias() = k.transpose() * vk;
    system.m = 0.5 * (system.m + system.m.transpose());
    system.m.diagonal().array() += gamma;
    system.rhs_y = vk.transpose() * y;
    system.rhs_one = k.transpose() * v_one;
    system.y_weight = v_one.dot(y);
    system.one_weight = v_one.sum();
    const normal_solution solution = solve_normal(system);

    fit_result<kernel_model> out{ make_kernel(solution, data.features(), kernel, gamma, 1, 0, fit_method::vsvm), {} };
    out.diagnostics.wall_seconds = seconds_since(start);
    const dense_quadratic quadratic{ &k, &v, &y, gamma };
    fill_diagnostics(
        out.diagnostics, solution, [&](const vector &theta) { return quadratic.value(theta); }, [&](const vector &theta) { return quadratic.gradient(theta); }, options);
    return out;
}

// ---------------------------------------------------------------------------
// prediction

double decision_value(const linear_model &model, const Eigen::Ref<const Eigen::RowVectorXd> &point) {
    if (point.size() != model.w.size()) {
        throw usage_error{ "dimension mismatch: point has " + std::to_string(point.size()) + " features, model " + std::to_string(model.w.size()) };
    }
    return point.dot(model.w.transpose()) + model.b;
}

double decision_value(const kernel_model &model, const Eigen::Ref<const Eigen::RowVectorXd> &point) {
    if (point.size() != model.training_points.cols()) {
        throw usage_error{ "dimension mismatch: point has " + std::to_string(point.size()) + " features, model " + std::to_string(model.training_points.cols()) };
    }
    double sum = model.c;
    for (Eigen::Index j = 0; j < model.training_points.rows(); ++j) {
        if (model.a[j] != 0.0) {
            sum += model.a[j] * kernel_eval(model.kernel, model.training_points.row(j), point);
        }
    }
    return sum;
}

double decision_value(const model &model, const Eigen::Ref<const Eigen::RowVectorXd> &point) {
    return std::visit([&](const auto &m) { return decision_value(m, point); }, model);
}

int label_from_decision(double decision) noexcept {
    return decision >= 0.5 ? 1 : 0;
}

int predict_label(const model &model, const Eigen::Ref<const Eigen::RowVectorXd> &point) {
    return label_from_decision(decision_value(model, point));
}

vector decision_values(const model &model, const matrix &points, std::size_t threads) {
    vector out(points.rows());
    parallel_for(static_cast<std::size_t>(points.rows()), threads, [&](std::size_t begin, std::size_t end) {
        for (auto i = static_cast<Eigen::Index>(begin); i < static_cast<Eigen::Index>(end); ++i) {
            out[i] = decision_value(model, points.row(i));
        }
    });
    return out;
}

std::size_t model_dimension(const model &model) {
    if (const auto *linear = std::get_if<linear_model>(&model)) {
        return static_cast<std::size_t>(linear->w.size());
    }
    return static_cast<std::size_t>(std::get<kernel_model>(model).training_points.cols());
}

const scaling_params &model_scaling(const model &model) {
    return std::visit([](const auto &m) -> const scaling_params & { return m.scaling; }, model);
}

void set_model_scaling(model &model, scaling_params scaling) {
    std::visit([&](auto &m) { m.scaling = std::move(scaling); }, model);
}

}  // namespace lugsi
