#pragma once

#include "lugsi/dataset.hpp"
#include "lugsi/granulation.hpp"
#include "lugsi/invariants.hpp"
#include "lugsi/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace lugsi {

enum class fit_method { lugsi, lssvm, vsvm };

[[nodiscard]] std::string_view to_string(fit_method method);
[[nodiscard]] fit_method parse_fit_method(std::string_view name);

/// f(x) = wᵀx + b with w = w_b − b·w_c.
struct linear_model {
    vector w;
    double b{};
    vector w_b;
    vector w_c;
    double gamma{};
    std::size_t m{};
    std::uint64_t seed{};
    scaling_params scaling;
    fit_method method{ fit_method::lugsi };
};

/// f(x) = Aᵀ𝒦(x) + c over the stored training points, with A = A_b − c·A_c.
struct kernel_model {
    vector a;
    double c{};
    vector a_b;
    vector a_c;
    /// Scaled training samples the expansion runs over.
    matrix training_points;
    kernel_spec kernel;
    double gamma{};
    std::size_t m{};
    std::uint64_t seed{};
    scaling_params scaling;
    fit_method method{ fit_method::lugsi };
};

using model = std::variant<linear_model, kernel_model>;

struct fit_diagnostics {
    /// Objective R at the fitted parameters.
    double objective_value{};
    /// Norm of ∇R: central differences (step 1e-6) when the parameter count
    /// is at most fit_options::finite_difference_limit, analytic otherwise.
    double gradient_norm{};
    bool gradient_by_finite_differences{ true };
    double system_condition_hint{};
    double relative_residual{};
    double wall_seconds{};
    /// The bias denominator vanished and b (or c) was set to 0.
    bool degenerate_bias{ false };
};

struct fit_options {
    bool compute_diagnostics{ true };
    std::size_t finite_difference_limit{ 512 };
    /// Largest l accepted for the dense l x l kernel and V-matrix systems.
    std::size_t dense_cap{ 15000 };
    std::size_t threads{ 1 };
};

template <typename Model>
struct fit_result {
    Model model;
    fit_diagnostics diagnostics;
};

/**
 * Rank-one accumulation of the linear LUGSI problem.
 *
 * Per granule it keeps u_k = X_kᵀv_k, s_k = v_kᵀ1 and t_k = v_kᵀY_k; V_k is
 * never formed. The objective is
 *   R(w, b) = Σ_k (u_kᵀw + b·s_k − t_k)² + γ·m·wᵀw,
 * which is Σ_k (X_k w + b1 − Y_k)ᵀ V_k (X_k w + b1 − Y_k) + γ·m·wᵀw.
 * Building the system is independent of γ, so one instance serves a whole
 * regularization sweep.
 */
class linear_lugsi_system {
  public:
    linear_lugsi_system(const dataset &data, const granulation &granules, const std::vector<granule_invariant> &invariants);

    [[nodiscard]] fit_result<linear_model> solve(double gamma, const fit_options &options = {}) const;
    [[nodiscard]] double objective(const vector &w, double b, double gamma) const;

    [[nodiscard]] std::size_t granule_count() const noexcept { return static_cast<std::size_t>(u_.cols()); }
    [[nodiscard]] const Eigen::MatrixXd &u() const noexcept { return u_; }
    [[nodiscard]] const vector &s() const noexcept { return s_; }
    [[nodiscard]] const vector &t() const noexcept { return t_; }

  private:
    Eigen::MatrixXd u_;  // n x m
    vector s_;
    vector t_;
    std::uint64_t seed_{};
};

/**
 * Kernel LUGSI with q_k = K_kᵀv_k, K_k the granule-vs-training Gram block:
 *   R(A, c) = Σ_k (q_kᵀA + c·s_k − t_k)² + γ·m·AᵀA.
 * The q_k are accumulated one kernel row at a time (O(l·m) memory); the
 * solve forms the l x l matrix Σ_k q_k q_kᵀ + γ·m·I.
 */
class kernel_lugsi_system {
  public:
    kernel_lugsi_system(const dataset &data, const granulation &granules, const std::vector<granule_invariant> &invariants, const kernel_spec &kernel, const fit_options &options = {});

    [[nodiscard]] fit_result<kernel_model> solve(double gamma, const fit_options &options = {}) const;
    [[nodiscard]] double objective(const vector &a, double c, double gamma) const;

    [[nodiscard]] const Eigen::MatrixXd &q() const noexcept { return q_; }

  private:
    Eigen::MatrixXd q_;  // l x m
    vector s_;
    vector t_;
    matrix training_points_;
    kernel_spec kernel_;
    std::uint64_t seed_{};
};

[[nodiscard]] fit_result<linear_model> fit_linear_lugsi(const dataset &data, const granulation &granules, const std::vector<granule_invariant> &invariants, double gamma, const fit_options &options = {});

[[nodiscard]] fit_result<kernel_model> fit_kernel_lugsi(const dataset &data, const granulation &granules, const std::vector<granule_invariant> &invariants, const kernel_spec &kernel, double gamma, const fit_options &options = {});

/**
 * Least-squares SVM as the LUGSI limit with singleton granules and unit
 * predicates, solved directly from the samples:
 *   R(w, b) = ‖Xw + b1 − Y‖² + γ·l·wᵀw   (kernel: K in place of X, AᵀA as W).
 * The regularization is γ·l because the LUGSI objective charges γW once per
 * granule.
 */
[[nodiscard]] fit_result<linear_model> fit_lssvm(const dataset &data, double gamma, const fit_options &options = {});
[[nodiscard]] fit_result<kernel_model> fit_lssvm(const dataset &data, const kernel_spec &kernel, double gamma, const fit_options &options = {});

/**
 * V-matrix SVM in closed form with a dense V:
 *   R(w, b) = (Xw + b1 − Y)ᵀ V (Xw + b1 − Y) + γ·wᵀw   (kernel: K for X, AᵀA as W).
 * V must be symmetric PSD; the eigenvalue check runs when l <= 2000.
 */
[[nodiscard]] fit_result<linear_model> fit_vsvm(const dataset &data, const Eigen::MatrixXd &v, double gamma, const fit_options &options = {});
[[nodiscard]] fit_result<kernel_model> fit_vsvm(const dataset &data, const Eigen::MatrixXd &v, const kernel_spec &kernel, double gamma, const fit_options &options = {});

/// f(x) for an already scaled point.
[[nodiscard]] double decision_value(const linear_model &model, const Eigen::Ref<const Eigen::RowVectorXd> &point);
[[nodiscard]] double decision_value(const kernel_model &model, const Eigen::Ref<const Eigen::RowVectorXd> &point);
[[nodiscard]] double decision_value(const model &model, const Eigen::Ref<const Eigen::RowVectorXd> &point);

/// θ(f(x) − 0.5): 1 iff f(x) >= 0.5.
[[nodiscard]] int label_from_decision(double decision) noexcept;
[[nodiscard]] int predict_label(const model &model, const Eigen::Ref<const Eigen::RowVectorXd> &point);

/// Decision values for every row of an already scaled matrix.
[[nodiscard]] vector decision_values(const model &model, const matrix &points, std::size_t threads = 1);

[[nodiscard]] std::size_t model_dimension(const model &model);
[[nodiscard]] const scaling_params &model_scaling(const model &model);
void set_model_scaling(model &model, scaling_params scaling);

}  // namespace lugsi
