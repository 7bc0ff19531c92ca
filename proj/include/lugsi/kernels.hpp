#pragma once

#include "lugsi/dataset.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace lugsi {

struct kernel_spec {
    enum class kind { linear, rbf, cro };

    kind type{ kind::rbf };
    /// rbf width δ in exp(−‖x − x'‖² / 2δ²).
    double delta{ 1.0 };
    /// CRO constant γ.
    double cro_gamma{ 0.0 };
    /// Gauss-Legendre nodes for the CRO integral.
    int quadrature_nodes{ 64 };

    static kernel_spec linear() { return { kind::linear }; }
    static kernel_spec rbf(double delta) { return { kind::rbf, delta }; }
    static kernel_spec cro(double gamma, int nodes = 64) { return { kind::cro, 1.0, gamma, nodes }; }

    /// Throws usage_error unless delta > 0 (rbf), gamma is finite (cro) and nodes >= 1.
    void validate() const;

    friend bool operator==(const kernel_spec &, const kernel_spec &) = default;
};

[[nodiscard]] std::string_view to_string(kernel_spec::kind kind);
[[nodiscard]] kernel_spec::kind parse_kernel_kind(std::string_view name);

/// Nodes and weights on [-1, 1].
struct gauss_legendre_rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule with `count` nodes, computed by Newton iteration on P_count.
[[nodiscard]] const gauss_legendre_rule &gauss_legendre(int count);

/// Standard normal CDF Φ.
[[nodiscard]] double normal_cdf(double x);

/**
 * CRO kernel value for cosine similarity u:
 *   Φ²(γ) + ∫_0^u exp(−γ²/(1+ρ)) / (2π√(1−ρ²)) dρ.
 * The substitution ρ = sin t removes the endpoint singularity, leaving
 * ∫_0^{asin u} exp(−γ²/(1+sin t)) / 2π dt, integrated by Gauss-Legendre.
 * u is clamped to [−1, 1].
 */
[[nodiscard]] double cro_value(double cosine, double gamma, int nodes = 64);

[[nodiscard]] double kernel_eval(const kernel_spec &spec, const Eigen::Ref<const Eigen::RowVectorXd> &x, const Eigen::Ref<const Eigen::RowVectorXd> &x2);

/// (i, j) = kernel_eval(rows[i], cols[j]).
[[nodiscard]] Eigen::MatrixXd gram_block(const kernel_spec &spec, const matrix &rows, const matrix &cols, std::size_t threads = 1);

}  // namespace lugsi
