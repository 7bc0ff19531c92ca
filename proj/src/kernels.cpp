#include "lugsi/kernels.hpp"

#include "lugsi/error.hpp"
#include "lugsi/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace lugsi {

void kernel_spec::validate() const {
    if (type == kind::rbf && !(delta > 0.0 && std::isfinite(delta))) {
        throw usage_error{ "rbf kernel needs delta > 0" };
    }
    if (type == kind::cro && !std::isfinite(cro_gamma)) {
        throw usage_error{ "cro kernel needs a finite gamma" };
    }
    if (quadrature_nodes < 1) {
        throw usage_error{ "quadrature needs at least one node" };
    }
}

std::string_view to_string(kernel_spec::kind kind) {
    switch (kind) {
        case kernel_spec::kind::linear:
            return "linear";
        case kernel_spec::kind::rbf:
            return "rbf";
        case kernel_spec::kind::cro:
            return "cro";
    }
    return "unknown";
}

kernel_spec::kind parse_kernel_kind(std::string_view name) {
    if (name == "linear") {
        return kernel_spec::kind::linear;
    }
    if (name == "rbf") {
        return kernel_spec::kind::rbf;
    }
    if (name == "cro") {
        return kernel_spec::kind::cro;
    }
    throw usage_error{ "unknown kernel '" + std::string{ name } + "'" };
}

namespace {

gauss_legendre_rule compute_rule(int count) {
    gauss_legendre_rule rule;
    rule.nodes.resize(static_cast<std::size_t>(count));
    rule.weights.resize(static_cast<std::size_t>(count));
    const int half = (count + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
        double derivative = 0.0;
        for (int iteration = 0; iteration < 100; ++iteration) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= count; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            derivative = count * (x * p0 - p1) / (x * x - 1.0);
            const double step = p0 / derivative;
            x -= step;
            if (std::abs(step) < 1e-15) {
                break;
            }
        }
        const double weight = 2.0 / ((1.0 - x * x) * derivative * derivative);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(count - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = weight;
        rule.weights[hi] = weight;
    }
    if (count % 2 == 1) {
        rule.nodes[static_cast<std::size_t>(count / 2)] = 0.0;
    }
    return rule;
}

}  // namespace

const gauss_legendre_rule &gauss_legendre(int count) {
    if (count < 1) {
        throw usage_error{ "quadrature needs at least one node" };
    }
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<gauss_legendre_rule>> cache;
    const std::lock_guard lock{ mutex };
    auto &slot = cache[count];
    if (!slot) {
        slot = std::make_unique<gauss_legendre_rule>(compute_rule(count));
    }
    return *slot;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double cro_value(double cosine, double gamma, int nodes) {
    const double u = std::clamp(cosine, -1.0, 1.0);
    const double phi = normal_cdf(gamma);
    const double upper = std::asin(u);
    const double g2 = gamma * gamma;
    const auto &rule = gauss_legendre(nodes);
    const double half = 0.5 * upper;
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = half * (rule.nodes[q] + 1.0);
        const double denominator = 1.0 + std::sin(t);
        const double integrand = g2 == 0.0 ? 1.0 : (denominator > 0.0 ? std::exp(-g2 / denominator) : 0.0);
        sum += rule.weights[q] * integrand;
    }
    return phi * phi + half * sum / (2.0 * std::numbers::pi);
}

double kernel_eval(const kernel_spec &spec, const Eigen::Ref<const Eigen::RowVectorXd> &x, const Eigen::Ref<const Eigen::RowVectorXd> &x2) {
    if (x.size() != x2.size()) {
        throw usage_error{ "dimension mismatch in kernel evaluation" };
    }
    switch (spec.type) {
        case kernel_spec::kind::linear:
            return x.dot(x2);
        case kernel_spec::kind::rbf:
            return std::exp(-(x - x2).squaredNorm() / (2.0 * spec.delta * spec.delta));
        case kernel_spec::kind::cro: {
            const double norms = x.norm() * x2.norm();
            if (norms == 0.0) {
                throw usage_error{ "cro kernel is undefined for a zero vector" };
            }
            return cro_value(x.dot(x2) / norms, spec.cro_gamma, spec.quadrature_nodes);
        }
    }
    throw usage_error{ "unknown kernel kind" };
}

Eigen::MatrixXd gram_block(const kernel_spec &spec, const matrix &rows, const matrix &cols, std::size_t threads) {
    spec.validate();
    if (rows.cols() != cols.cols()) {
        throw usage_error{ "dimension mismatch: rows have " + std::to_string(rows.cols()) + " features, cols " + std::to_string(cols.cols()) };
    }
    Eigen::MatrixXd out(rows.rows(), cols.rows());
    parallel_for(static_cast<std::size_t>(rows.rows()), threads, [&](std::size_t begin, std::size_t end) {
        for (auto i = static_cast<Eigen::Index>(begin); i < static_cast<Eigen::Index>(end); ++i) {
            for (Eigen::Index j = 0; j < cols.rows(); ++j) {
                out(i, j) = kernel_eval(spec, rows.row(i), cols.row(j));
            }
        }
    });
    return out;
}

}  // namespace lugsi
