#include "lugsi/error.hpp"
#include "lugsi/granulation.hpp"
#include "lugsi/invariants.hpp"
#include "lugsi/solver.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lugsi;

namespace {

dataset sample_data(std::uint64_t seed, std::size_t l, std::size_t n) {
    split_mix64 rng{ seed };
    return oracle::random_dataset(rng, l, n);
}

dataset constant_labels(const dataset &d, double label) {
    return { d.features(), vector::Constant(static_cast<Eigen::Index>(d.size()), label) };
}

std::vector<long double> per_sample_v(const dataset &d, const granulation &g, const std::vector<granule_invariant> &inv) {
    std::vector<long double> v(d.size());
    for (std::size_t k = 0; k < g.granule_count(); ++k) {
        for (std::size_t a = 0; a < g.granule_members[k].size(); ++a) {
            v[g.granule_members[k][a]] = inv[k].v(static_cast<Eigen::Index>(a));
        }
    }
    return v;
}

double relative_error(const Eigen::VectorXd &got, const oracle::lvector &want) {
    const Eigen::VectorXd w = want.cast<double>();
    return (got - w).cwiseAbs().maxCoeff() / std::max(w.cwiseAbs().maxCoeff(), 1e-300);
}

Eigen::VectorXd theta_of(const linear_model &m) {
    Eigen::VectorXd t(m.w.size() + 1);
    t << m.w, m.b;
    return t;
}

Eigen::VectorXd theta_of(const kernel_model &m) {
    Eigen::VectorXd t(m.a.size() + 1);
    t << m.a, m.c;
    return t;
}

oracle::dense_problem linear_oracle(const dataset &d, const granulation &g, const std::vector<granule_invariant> &inv, double gamma) {
    return { oracle::with_bias(d.features()), oracle::labels_of(d), g.granule_members, per_sample_v(d, g, inv), static_cast<long double>(gamma) * static_cast<long double>(g.granule_count()) };
}

oracle::dense_problem rbf_oracle(const dataset &d, const granulation &g, const std::vector<granule_invariant> &inv, double delta, double gamma) {
    const auto l = static_cast<Eigen::Index>(d.size());
    Eigen::MatrixXd k(l, l);
    for (Eigen::Index i = 0; i < l; ++i) {
        for (Eigen::Index j = 0; j < l; ++j) {
            k(i, j) = oracle::rbf(d.features().row(i), d.features().row(j), delta);
        }
    }
    return { oracle::with_bias(k), oracle::labels_of(d), g.granule_members, per_sample_v(d, g, inv), static_cast<long double>(gamma) * static_cast<long double>(g.granule_count()) };
}

}  // namespace

TEST(LinearLugsi, AllOnesGivesZeroSlopeUnitBias) {
    const dataset d = constant_labels(sample_data(1, 20, 3), 1.0);
    for (const std::size_t m : { 1, 3, 20 }) {
        const granulation g = kmeans_granulate(d, m, 2);
        const auto r = fit_linear_lugsi(d, g, granule_v_vectors(d, g, measure_spec::uniform()), 0.3);
        EXPECT_LT(r.model.w.cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(r.model.b, 1.0, 1e-12);
    }
}

TEST(LinearLugsi, AllZerosGivesZeroModel) {
    const dataset d = constant_labels(sample_data(2, 15, 2), 0.0);
    const granulation g = kmeans_granulate(d, 4, 0);
    const auto r = fit_linear_lugsi(d, g, granule_v_vectors(d, g, measure_spec::uniform()), 0.3);
    EXPECT_EQ(r.model.w.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(r.model.b, 0.0);
}

TEST(LinearLugsi, MatchesDenseStationarityOracle) {
    const dataset d = sample_data(3, 6, 2);
    const granulation g = kmeans_granulate(d, 2, 5);
    const auto inv = granule_v_vectors(d, g, measure_spec::uniform());
    const auto r = fit_linear_lugsi(d, g, inv, 0.1);
    const auto want = linear_oracle(d, g, inv, 0.1).solve();
    EXPECT_LE(relative_error(theta_of(r.model), want), 1e-10);
}

TEST(LinearLugsi, SplitFormConsistency) {
    const dataset d = sample_data(4, 30, 4);
    const granulation g = kmeans_granulate(d, 5, 1);
    const auto r = fit_linear_lugsi(d, g, granule_v_vectors(d, g, measure_spec::uniform()), 0.05);
    const vector recon = r.model.w_b - r.model.b * r.model.w_c;
    EXPECT_LE((recon - r.model.w).norm(), 1e-12 * std::max(1.0, r.model.w.norm()));
    EXPECT_EQ(r.model.m, 5U);
    EXPECT_EQ(r.model.seed, 1U);
    EXPECT_EQ(r.model.gamma, 0.05);
    EXPECT_TRUE(r.model.w.allFinite());
}

TEST(LinearLugsi, SystemSolveEqualsOneShotFit) {
    const dataset d = sample_data(5, 40, 3);
    const granulation g = kmeans_granulate(d, 6, 3);
    const auto inv = granule_v_vectors(d, g, measure_spec::uniform());
    const linear_lugsi_system system{ d, g, inv };
    for (const double gamma : { 0.01, 1.0, 10.0 }) {
        const auto a = system.solve(gamma);
        const auto b = fit_linear_lugsi(d, g, inv, gamma);
        EXPECT_EQ(a.model.w, b.model.w);
        EXPECT_EQ(a.model.b, b.model.b);
    }
}

TEST(LinearLugsi, DegenerateBiasFallsBackToZero) {
    // Every sample touches the upper face of the cube, so every uniform v is 0.
    matrix x(4, 2);
    x << 1, 0.2, 0.3, 1, 1, 1, 1, 0.5;
    vector y(4);
    y << 1, 0, 1, 0;
    const dataset d{ x, y };
    const granulation g = kmeans_granulate(d, 2, 0);
    const auto r = fit_linear_lugsi(d, g, granule_v_vectors(d, g, measure_spec::uniform()), 1.0);
    EXPECT_TRUE(r.diagnostics.degenerate_bias);
    EXPECT_EQ(r.model.b, 0.0);
}

TEST(LinearLugsi, RejectsBadInput) {
    const dataset d = sample_data(6, 10, 2);
    const granulation g = kmeans_granulate(d, 2, 0);
    const auto inv = granule_v_vectors(d, g, measure_spec::uniform());
    EXPECT_THROW((void)fit_linear_lugsi(d, g, inv, 0.0), usage_error);
    EXPECT_THROW((void)fit_linear_lugsi(d, g, inv, -1.0), usage_error);
    auto short_inv = inv;
    short_inv.pop_back();
    EXPECT_THROW((void)fit_linear_lugsi(d, g, short_inv, 1.0), usage_error);
}

TEST(KernelLugsi, AllOnesGivesZeroExpansionUnitBias) {
    const dataset d = constant_labels(sample_data(7, 12, 2), 1.0);
    const granulation g = kmeans_granulate(d, 3, 0);
    const auto r = fit_kernel_lugsi(d, g, granule_v_vectors(d, g, measure_spec::uniform()), kernel_spec::rbf(0.7), 0.2);
    EXPECT_LT(r.model.a.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(r.model.c, 1.0, 1e-12);
}

TEST(KernelLugsi, MatchesDenseOracle) {
    const dataset d = sample_data(8, 8, 2);
    const granulation g = kmeans_granulate(d, 2, 0);
    const auto inv = granule_v_vectors(d, g, measure_spec::uniform());
    const auto r = fit_kernel_lugsi(d, g, inv, kernel_spec::rbf(1.0), 0.5);
    const auto want = rbf_oracle(d, g, inv, 1.0, 0.5).solve();
    EXPECT_LE(relative_error(theta_of(r.model), want), 1e-10);
    const vector recon = r.model.a_b - r.model.c * r.model.a_c;
    EXPECT_LE((recon - r.model.a).norm(), 1e-12 * std::max(1.0, r.model.a.norm()));
    EXPECT_EQ(r.model.training_points.rows(), r.model.a.size());
}

TEST(KernelLugsi, ThreadCountDoesNotChangeResult) {
    const dataset d = sample_data(9, 60, 3);
    const granulation g = kmeans_granulate(d, 5, 0);
    const auto inv = granule_v_vectors(d, g, measure_spec::uniform());
    fit_options one;
    fit_options four;
    four.threads = 4;
    const auto a = fit_kernel_lugsi(d, g, inv, kernel_spec::rbf(0.5), 0.1, one);
    const auto b = fit_kernel_lugsi(d, g, inv, kernel_spec::rbf(0.5), 0.1, four);
    EXPECT_EQ(a.model.a, b.model.a);
    EXPECT_EQ(a.model.c, b.model.c);
}

TEST(KernelLugsi, LinearKernelAgreesWithPrimalSolver) {
    // The kernel objective penalizes AᵀA while the primal one penalizes wᵀw,
    // so the two coincide only as γ → 0. With m > n + 1 the unregularized
    // minimizer is unique in w, and both solvers approach it.
    std::size_t identical = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const dataset d = sample_data(100 + seed, 24, 3);
        const granulation g = kmeans_granulate(d, 8, seed);
        const auto inv = granule_v_vectors(d, g, measure_spec::uniform());
        const auto primal = fit_linear_lugsi(d, g, inv, 1e-10);
        const auto dual = fit_kernel_lugsi(d, g, inv, kernel_spec::linear(), 1e-10);
        bool same = true;
        for (Eigen::Index i = 0; i < d.features().rows(); ++i) {
            const double fp = decision_value(primal.model, d.features().row(i));
            const double fd = decision_value(dual.model, d.features().row(i));
            EXPECT_NEAR(fp, fd, 1e-4) << "seed " << seed << " row " << i;
            same = same && label_from_decision(fp) == label_from_decision(fd);
        }
        identical += same ? 1U : 0U;
    }
    EXPECT_EQ(identical, 20U);
}

TEST(KernelLugsi, DenseCap) {
    const dataset d = sample_data(10, 20, 2);
    const granulation g = kmeans_granulate(d, 2, 0);
    fit_options capped;
    capped.dense_cap = 10;
    EXPECT_THROW((void)fit_kernel_lugsi(d, g, granule_v_vectors(d, g, measure_spec::uniform()), kernel_spec::rbf(1.0), 1.0, capped), numeric_error);
}

TEST(Lssvm, EqualsLugsiWithSingletonsAndUnitPredicates) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const dataset d = sample_data(200 + seed, 10 + seed, 1 + seed % 4);
        const granulation g = kmeans_granulate(d, d.size(), seed);
        const double gamma = 0.01 * static_cast<double>(1 + seed);
        const auto lugsi = fit_linear_lugsi(d, g, unit_granule_invariants(d, g), gamma);
        const auto ls = fit_lssvm(d, gamma);
        EXPECT_LE((theta_of(lugsi.model) - theta_of(ls.model)).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, theta_of(ls.model).cwiseAbs().maxCoeff()));
    }
}

TEST(Lssvm, AllOnes) {
    const auto r = fit_lssvm(constant_labels(sample_data(11, 9, 2), 1.0), 0.4);
    EXPECT_LT(r.model.w.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(r.model.b, 1.0, 1e-12);
    const auto k = fit_lssvm(constant_labels(sample_data(11, 9, 2), 1.0), kernel_spec::rbf(1.0), 0.4);
    EXPECT_LT(k.model.a.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(k.model.c, 1.0, 1e-12);
}

TEST(Lssvm, StrongRegularizationLimit) {
    matrix x(2, 1);
    x << 0.2, 0.8;
    vector y(2);
    y << 0, 1;
    const dataset d{ x, y };
    const double gamma = 1e6;
    const auto r = fit_lssvm(d, gamma);
    oracle::dense_problem p{ oracle::with_bias(x), oracle::labels_of(d), { { 0 }, { 1 } }, { 1.0L, 1.0L }, static_cast<long double>(gamma) * 2.0L };
    const auto want = p.solve();
    EXPECT_NEAR(r.model.w(0), static_cast<double>(want(0)), 1e-12);
    EXPECT_NEAR(r.model.b, static_cast<double>(want(1)), 1e-12);
    EXPECT_LT(std::abs(r.model.w(0)), 1e-6);
    EXPECT_NEAR(r.model.b, 0.5, 1e-6);
}

TEST(Vsvm, IdentityMatchesLssvmWithScaledGamma) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const dataset d = sample_data(300 + seed, 15, 3);
        const double gamma = 0.07;
        const auto ls = fit_lssvm(d, gamma);
        const auto vs = fit_vsvm(d, Eigen::MatrixXd::Identity(15, 15), gamma * 15.0);
        EXPECT_LE((theta_of(vs.model) - theta_of(ls.model)).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, theta_of(ls.model).cwiseAbs().maxCoeff()));
    }
}

TEST(Vsvm, RankOneVEqualsLugsiWithOneGranule) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const dataset d = sample_data(400 + seed, 8 + seed, 1 + seed % 5);
        const granulation g = kmeans_granulate(d, 1, seed);
        const auto inv = granule_v_vectors(d, g, measure_spec::uniform());
        const double gamma = 0.02 * static_cast<double>(1 + seed);
        const auto lugsi = fit_linear_lugsi(d, g, inv, gamma);
        const Eigen::MatrixXd v = inv[0].v * inv[0].v.transpose();
        const auto vs = fit_vsvm(d, v, gamma);
        EXPECT_LE((theta_of(lugsi.model) - theta_of(vs.model)).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, theta_of(vs.model).cwiseAbs().maxCoeff())) << "seed " << seed;
    }
}

TEST(Vsvm, AllOnesAndKernelPath) {
    const dataset d = constant_labels(sample_data(12, 10, 2), 1.0);
    const Eigen::MatrixXd v = v_matrix(d.features(), measure_spec::uniform());
    const auto r = fit_vsvm(d, v, 0.3);
    EXPECT_LT(r.model.w.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(r.model.b, 1.0, 1e-12);
    const auto k = fit_vsvm(d, v, kernel_spec::rbf(0.5), 0.3);
    EXPECT_LT(k.model.a.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(k.model.c, 1.0, 1e-12);
}

TEST(Vsvm, RejectsInvalidV) {
    const dataset d = sample_data(13, 5, 2);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(5, 5);
    bad(0, 0) = -1.0;
    EXPECT_THROW((void)fit_vsvm(d, bad, 1.0), usage_error);
    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(5, 5);
    asym(0, 1) = 0.5;
    EXPECT_THROW((void)fit_vsvm(d, asym, 1.0), usage_error);
    EXPECT_THROW((void)fit_vsvm(d, Eigen::MatrixXd::Identity(4, 4), 1.0), usage_error);
}

TEST(Decision, FixedModels) {
    linear_model lin;
    lin.w = vector::Zero(3);
    lin.b = 1.0;
    const Eigen::RowVectorXd x = Eigen::RowVectorXd::Constant(3, 0.4);
    EXPECT_EQ(decision_value(lin, x), 1.0);
    kernel_model ker;
    ker.a = vector::Zero(4);
    ker.c = 0.3;
    ker.training_points = matrix::Constant(4, 3, 0.2);
    ker.kernel = kernel_spec::rbf(1.0);
    EXPECT_DOUBLE_EQ(decision_value(ker, x), 0.3);
    EXPECT_THROW((void)decision_value(lin, Eigen::RowVectorXd::Zero(2)), usage_error);
    EXPECT_THROW((void)decision_value(ker, Eigen::RowVectorXd::Zero(2)), usage_error);
}

TEST(Decision, ThresholdRule) {
    EXPECT_EQ(label_from_decision(0.5), 1);
    EXPECT_EQ(label_from_decision(0.49), 0);
    EXPECT_EQ(label_from_decision(0.51), 1);
    linear_model lin;
    lin.w = vector::Zero(1);
    lin.b = 0.5;
    EXPECT_EQ(predict_label(model{ lin }, Eigen::RowVectorXd::Zero(1)), 1);
}

TEST(Decision, BatchMatchesPointwiseForAnyThreadCount) {
    const dataset d = sample_data(14, 50, 3);
    const granulation g = kmeans_granulate(d, 4, 0);
    const auto fit = fit_kernel_lugsi(d, g, granule_v_vectors(d, g, measure_spec::uniform()), kernel_spec::rbf(0.4), 0.1);
    const model m{ fit.model };
    const vector one = decision_values(m, d.features(), 1);
    const vector many = decision_values(m, d.features(), 3);
    EXPECT_EQ(one, many);
    for (Eigen::Index i = 0; i < 50; ++i) {
        EXPECT_EQ(one(i), decision_value(m, d.features().row(i)));
    }
}

TEST(Diagnostics, ReportedGradientIsSmall) {
    const dataset d = sample_data(15, 25, 3);
    const granulation g = kmeans_granulate(d, 4, 0);
    const auto r = fit_linear_lugsi(d, g, granule_v_vectors(d, g, measure_spec::uniform()), 0.2);
    EXPECT_TRUE(r.diagnostics.gradient_by_finite_differences);
    EXPECT_LE(r.diagnostics.gradient_norm, 1e-5 * (1.0 + std::abs(r.diagnostics.objective_value)));
    EXPECT_GE(r.diagnostics.wall_seconds, 0.0);
    EXPECT_LE(r.diagnostics.relative_residual, 1e-8);

    fit_options analytic;
    analytic.finite_difference_limit = 0;
    const auto a = fit_linear_lugsi(d, g, granule_v_vectors(d, g, measure_spec::uniform()), 0.2, analytic);
    EXPECT_FALSE(a.diagnostics.gradient_by_finite_differences);
    EXPECT_LE(a.diagnostics.gradient_norm, 1e-8 * (1.0 + std::abs(a.diagnostics.objective_value)));
}

TEST(FitMethod, Names) {
    EXPECT_EQ(parse_fit_method("lugsi"), fit_method::lugsi);
    EXPECT_EQ(parse_fit_method(to_string(fit_method::vsvm)), fit_method::vsvm);
    EXPECT_THROW((void)parse_fit_method("csvm"), usage_error);
}
