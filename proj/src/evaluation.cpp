#include "lugsi/evaluation.hpp"

#include "lugsi/error.hpp"
#include "lugsi/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

namespace lugsi {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::string format17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

measure_spec measure_for(const dataset &train, measure_spec::kind kind) {
    if (kind == measure_spec::kind::empirical) {
        return measure_spec::empirical(train.features());
    }
    return measure_spec::uniform();
}

std::vector<granule_invariant> invariants_for(const dataset &train, const granulation &granules, const train_settings &settings) {
    if (settings.unit_predicates) {
        return unit_granule_invariants(train, granules);
    }
    if (!settings.normalize_v) {
        return granule_v_vectors(train, granules, measure_for(train, settings.measure));
    }
    vector values = v_values(train.features(), measure_for(train, settings.measure));
    const double top = values.maxCoeff();
    if (top > 0.0) {
        values /= top;
    }
    return granule_invariants_from_values(train, granules, values);
}

bool uses_delta(const train_settings &settings) {
    return settings.kernel && settings.kernel->type == kernel_spec::kind::rbf;
}

kernel_spec kernel_with_delta(const kernel_spec &kernel, std::optional<double> delta) {
    kernel_spec out = kernel;
    if (delta) {
        out.delta = *delta;
    }
    return out;
}

std::vector<int> to_labels(const vector &labels) {
    std::vector<int> out(static_cast<std::size_t>(labels.size()));
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        out[static_cast<std::size_t>(i)] = labels(i) > 0.5 ? 1 : 0;
    }
    return out;
}

std::vector<int> predict_all(const model &fitted, const matrix &points, std::size_t threads) {
    const vector decisions = decision_values(fitted, points, threads);
    std::vector<int> out(static_cast<std::size_t>(decisions.size()));
    for (Eigen::Index i = 0; i < decisions.size(); ++i) {
        out[static_cast<std::size_t>(i)] = label_from_decision(decisions(i));
    }
    return out;
}

void check_positive(const std::vector<double> &values, const char *name) {
    for (const double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw usage_error{ std::string{ name } + " values must be positive and finite" };
        }
    }
}

void validate_grid(const grid_spec &grid, bool with_delta) {
    if (grid.c_values.empty() || grid.m_values.empty()) {
        throw usage_error{ "grid is empty" };
    }
    if (with_delta && grid.delta_values.empty()) {
        throw usage_error{ "rbf grid needs at least one delta value" };
    }
    check_positive(grid.c_values, "C");
    if (with_delta) {
        check_positive(grid.delta_values, "delta");
    }
    for (const auto m : grid.m_values) {
        if (m < 1) {
            throw usage_error{ "m must be ≥ 1" };
        }
    }
    if (grid.folds < 2) {
        throw usage_error{ "folds must be >= 2" };
    }
}

void summarize(config_result &result) {
    const auto count = static_cast<double>(result.folds.size());
    double acc = 0.0;
    double time = 0.0;
    for (const auto &f : result.folds) {
        acc += f.accuracy;
        time += f.train_seconds;
    }
    result.mean_accuracy = acc / count;
    result.mean_train_seconds = time / count;
    double var = 0.0;
    for (const auto &f : result.folds) {
        const double d = f.accuracy - result.mean_accuracy;
        var += d * d;
    }
    result.std_accuracy = std::sqrt(var / count);
}

nlohmann::ordered_json optional_number(std::optional<double> value) {
    return value ? nlohmann::ordered_json(*value) : nlohmann::ordered_json(nullptr);
}

}  // namespace

double gamma_from_cost(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw usage_error{ "C must be positive and finite" };
    }
    return 1.0 / c;
}

training_outcome train(const dataset &scaled, double gamma, std::size_t m, std::uint64_t seed, const train_settings &settings) {
    if (scaled.empty()) {
        throw data_error{ "empty dataset" };
    }
    const auto start = clock_type::now();
    training_outcome out;
    switch (settings.method) {
        case fit_method::lugsi: {
            granulation granules = kmeans_granulate(scaled, m, seed, settings.kmeans);
            out.granulate_seconds = seconds_since(start);
            const auto invariants = invariants_for(scaled, granules, settings);
            if (settings.kernel) {
                auto r = fit_kernel_lugsi(scaled, granules, invariants, *settings.kernel, gamma, settings.fit);
                out.fitted = std::move(r.model);
                out.diagnostics = r.diagnostics;
            } else {
                auto r = fit_linear_lugsi(scaled, granules, invariants, gamma, settings.fit);
                out.fitted = std::move(r.model);
                out.diagnostics = r.diagnostics;
            }
            out.granules = std::move(granules);
            break;
        }
        case fit_method::lssvm: {
            if (settings.kernel) {
                auto r = fit_lssvm(scaled, *settings.kernel, gamma, settings.fit);
                out.fitted = std::move(r.model);
                out.diagnostics = r.diagnostics;
            } else {
                auto r = fit_lssvm(scaled, gamma, settings.fit);
                out.fitted = std::move(r.model);
                out.diagnostics = r.diagnostics;
            }
            break;
        }
        case fit_method::vsvm: {
            const Eigen::MatrixXd v = v_matrix(scaled.features(), measure_for(scaled, settings.measure), settings.fit.dense_cap);
            if (settings.kernel) {
                auto r = fit_vsvm(scaled, v, *settings.kernel, gamma, settings.fit);
                out.fitted = std::move(r.model);
                out.diagnostics = r.diagnostics;
            } else {
                auto r = fit_vsvm(scaled, v, gamma, settings.fit);
                out.fitted = std::move(r.model);
                out.diagnostics = r.diagnostics;
            }
            break;
        }
    }
    out.train_seconds = seconds_since(start);
    return out;
}

double accuracy(std::span<const int> predicted, std::span<const int> actual) {
    if (predicted.size() != actual.size()) {
        throw usage_error{ "length mismatch: " + std::to_string(predicted.size()) + " predictions, " + std::to_string(actual.size()) + " labels" };
    }
    if (predicted.empty()) {
        throw usage_error{ "accuracy of empty vectors" };
    }
    std::size_t equal = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        equal += predicted[i] == actual[i] ? 1U : 0U;
    }
    return static_cast<double>(equal) / static_cast<double>(predicted.size());
}

fold_data prepare_fold(const dataset &data, const fold_plan &plan, std::size_t fold) {
    index_list train_idx = plan.train_indices(fold);
    index_list test_idx = plan.test_indices(fold);
    auto [train, scaling] = minmax_scale(data.subset(train_idx));
    dataset test = apply_scaling(data.subset(test_idx), scaling);
    return { std::move(train), std::move(test), std::move(scaling), std::move(train_idx), std::move(test_idx) };
}

std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold) {
    split_mix64 rng{ seed ^ (0xD1B54A32D192ED03ULL * (static_cast<std::uint64_t>(fold) + 1)) };
    return rng.next();
}

std::vector<grid_point> grid_spec::points(bool with_delta) const {
    std::vector<grid_point> out;
    const std::vector<std::optional<double>> deltas = [&] {
        std::vector<std::optional<double>> d;
        if (with_delta) {
            d.assign(delta_values.begin(), delta_values.end());
        } else {
            d.emplace_back(std::nullopt);
        }
        return d;
    }();
    for (const double c : c_values) {
        for (const auto &delta : deltas) {
            for (const auto m : m_values) {
                out.push_back({ c, delta, m });
            }
        }
    }
    return out;
}

std::vector<std::size_t> default_m_values(std::size_t l) {
    if (l == 0) {
        throw data_error{ "empty dataset" };
    }
    const std::size_t middle = l < 800 ? l / 2 : l / 16;
    std::vector<std::size_t> out;
    for (const std::size_t m : { std::size_t{ 1 }, std::size_t{ 3 }, std::size_t{ 7 }, middle, l }) {
        const std::size_t clipped = std::clamp<std::size_t>(m, 1, l);
        if (std::find(out.begin(), out.end(), clipped) == out.end()) {
            out.push_back(clipped);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

grid_spec default_grid(std::size_t l, std::size_t folds, std::uint64_t seed) {
    grid_spec grid;
    for (int e = -8; e <= 8; ++e) {
        grid.c_values.push_back(std::ldexp(1.0, e));
    }
    for (int e = -4; e <= 4; ++e) {
        grid.delta_values.push_back(std::ldexp(1.0, e));
    }
    grid.m_values = default_m_values(l);
    grid.folds = folds;
    grid.seed = seed;
    return grid;
}

std::size_t select_best(std::span<const config_result> results) {
    if (results.empty()) {
        throw usage_error{ "no results to select from" };
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        const auto &a = results[i];
        const auto &b = results[best];
        if (a.mean_accuracy != b.mean_accuracy) {
            if (a.mean_accuracy > b.mean_accuracy) {
                best = i;
            }
            continue;
        }
        if (a.std_accuracy != b.std_accuracy) {
            if (a.std_accuracy < b.std_accuracy) {
                best = i;
            }
            continue;
        }
        if (a.point.m < b.point.m) {
            best = i;
        }
    }
    return best;
}

eval_report grid_search(const dataset &data, const grid_spec &grid, const train_settings &settings) {
    const bool with_delta = uses_delta(settings);
    validate_grid(grid, with_delta);
    if (data.empty()) {
        throw data_error{ "empty dataset" };
    }

    eval_report report;
    report.grid = grid;
    report.settings = settings;
    const auto points = grid.points(with_delta);
    report.results.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        report.results[i].point = points[i];
    }

    const std::size_t n_delta = with_delta ? grid.delta_values.size() : 1;
    const std::size_t n_m = grid.m_values.size();
    const auto index_of = [&](std::size_t ci, std::size_t di, std::size_t mi) { return (ci * n_delta + di) * n_m + mi; };

    fit_options fit = settings.fit;
    fit.compute_diagnostics = false;
    const std::size_t threads = std::max<std::size_t>(1, settings.fit.threads);

    const fold_plan plan = kfold_split(data, grid.folds, grid.seed);
    for (std::size_t f = 0; f < grid.folds; ++f) {
        const fold_data fd = prepare_fold(data, plan, f);
        const std::vector<int> actual = to_labels(fd.test.labels());
        const std::uint64_t seed = fold_seed(grid.seed, f);

        const auto record = [&](std::size_t index, std::size_t m_effective, const model &fitted, double seconds) {
            fold_result r;
            r.fold = f;
            r.m_effective = m_effective;
            r.train_seconds = seconds;
            r.test_indices = fd.test_indices;
            r.predictions = predict_all(fitted, fd.test.features(), threads);
            r.accuracy = accuracy(r.predictions, actual);
            auto &target = report.results[index];
            target.folds.push_back(std::move(r));
            target.m_clipped = target.m_clipped || m_effective != target.point.m;
        };

        for (std::size_t mi = 0; mi < n_m; ++mi) {
            const std::size_t m = grid.m_values[mi];
            const std::size_t m_eff = std::min(m, fd.train.size());
            if (m_eff != m) {
                report.notes.push_back("fold " + std::to_string(f) + ": m = " + std::to_string(m) + " clipped to the training fold size " + std::to_string(m_eff));
            }

            if (settings.method != fit_method::lugsi) {
                for (std::size_t di = 0; di < n_delta; ++di) {
                    train_settings local = settings;
                    local.fit = fit;
                    if (local.kernel) {
                        local.kernel = kernel_with_delta(*local.kernel, with_delta ? std::optional{ grid.delta_values[di] } : std::nullopt);
                    }
                    for (std::size_t ci = 0; ci < grid.c_values.size(); ++ci) {
                        const auto outcome = train(fd.train, gamma_from_cost(grid.c_values[ci]), m_eff, seed, local);
                        record(index_of(ci, di, mi), m_eff, outcome.fitted, outcome.train_seconds);
                    }
                }
                continue;
            }

            const auto granulate_start = clock_type::now();
            const granulation granules = kmeans_granulate(fd.train, m_eff, seed, settings.kmeans);
            const auto invariants = invariants_for(fd.train, granules, settings);
            const double granulate_seconds = seconds_since(granulate_start);

            for (std::size_t di = 0; di < n_delta; ++di) {
                const auto build_start = clock_type::now();
                if (settings.kernel) {
                    const kernel_spec kernel = kernel_with_delta(*settings.kernel, with_delta ? std::optional{ grid.delta_values[di] } : std::nullopt);
                    const kernel_lugsi_system system{ fd.train, granules, invariants, kernel, fit };
                    const double build_seconds = seconds_since(build_start);
                    for (std::size_t ci = 0; ci < grid.c_values.size(); ++ci) {
                        const auto solve_start = clock_type::now();
                        const auto r = system.solve(gamma_from_cost(grid.c_values[ci]), fit);
                        const double seconds = granulate_seconds + build_seconds + seconds_since(solve_start);
                        record(index_of(ci, di, mi), m_eff, model{ r.model }, seconds);
                    }
                } else {
                    const linear_lugsi_system system{ fd.train, granules, invariants };
                    const double build_seconds = seconds_since(build_start);
                    for (std::size_t ci = 0; ci < grid.c_values.size(); ++ci) {
                        const auto solve_start = clock_type::now();
                        const auto r = system.solve(gamma_from_cost(grid.c_values[ci]), fit);
                        const double seconds = granulate_seconds + build_seconds + seconds_since(solve_start);
                        record(index_of(ci, di, mi), m_eff, model{ r.model }, seconds);
                    }
                }
            }
        }
    }

    for (auto &r : report.results) {
        summarize(r);
    }
    report.best = select_best(report.results);
    return report;
}

config_result cross_validate(const dataset &data, const grid_point &point, std::size_t folds, std::uint64_t seed, const train_settings &settings) {
    grid_spec grid;
    grid.c_values = { point.c };
    if (point.delta) {
        grid.delta_values = { *point.delta };
    }
    grid.m_values = { point.m };
    grid.folds = folds;
    grid.seed = seed;
    train_settings local = settings;
    if (local.kernel && !uses_delta(local) && point.delta) {
        throw usage_error{ "delta given for a kernel without a width" };
    }
    if (uses_delta(local) && !point.delta) {
        grid.delta_values = { local.kernel->delta };
    }
    auto report = grid_search(data, grid, local);
    return std::move(report.results.front());
}

std::string report_json(const eval_report &report, const report_options &options) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["format_version"] = 1;
    doc["kind"] = "eval_report";
    doc["config"] = options.config_line;
    json settings;
    settings["method"] = std::string{ to_string(report.settings.method) };
    if (report.settings.kernel) {
        json kernel;
        kernel["type"] = std::string{ to_string(report.settings.kernel->type) };
        kernel["cro_gamma"] = report.settings.kernel->cro_gamma;
        kernel["quadrature_nodes"] = report.settings.kernel->quadrature_nodes;
        settings["kernel"] = kernel;
    } else {
        settings["kernel"] = nullptr;
    }
    settings["measure"] = report.settings.measure == measure_spec::kind::empirical ? "empirical" : "uniform";
    settings["unit_predicates"] = report.settings.unit_predicates;
    settings["kmeans_max_iters"] = report.settings.kmeans.max_iters;
    settings["kmeans_tol"] = report.settings.kmeans.tol;
    settings["gamma_from_c"] = "1/C";
    doc["settings"] = settings;

    json grid;
    grid["c_values"] = report.grid.c_values;
    grid["delta_values"] = uses_delta(report.settings) ? json(report.grid.delta_values) : json::array();
    grid["m_values"] = report.grid.m_values;
    grid["folds"] = report.grid.folds;
    grid["seed"] = report.grid.seed;
    doc["grid"] = grid;

    json results = json::array();
    for (const auto &r : report.results) {
        json item;
        item["c"] = r.point.c;
        item["delta"] = optional_number(r.point.delta);
        item["m"] = r.point.m;
        item["mean_accuracy"] = r.mean_accuracy;
        item["std_accuracy"] = r.std_accuracy;
        if (options.include_timing) {
            item["mean_train_seconds"] = r.mean_train_seconds;
        }
        item["m_clipped"] = r.m_clipped;
        json folds = json::array();
        for (const auto &f : r.folds) {
            json fold;
            fold["fold"] = f.fold;
            fold["m_effective"] = f.m_effective;
            fold["accuracy"] = f.accuracy;
            if (options.include_timing) {
                fold["train_seconds"] = f.train_seconds;
            }
            if (options.include_predictions) {
                fold["test_indices"] = f.test_indices;
                fold["predictions"] = f.predictions;
            }
            folds.push_back(std::move(fold));
        }
        item["folds"] = std::move(folds);
        results.push_back(std::move(item));
    }
    doc["results"] = std::move(results);

    const auto &best = report.best_result();
    json b;
    b["index"] = report.best;
    b["c"] = best.point.c;
    b["delta"] = optional_number(best.point.delta);
    b["m"] = best.point.m;
    b["mean_accuracy"] = best.mean_accuracy;
    b["std_accuracy"] = best.std_accuracy;
    b["tie_rule"] = "mean accuracy, then lower std, then smaller m, then grid order";
    doc["best"] = b;
    doc["notes"] = report.notes;
    return doc.dump(1) + "\n";
}

std::string report_csv(const eval_report &report, const report_options &options) {
    std::ostringstream out;
    out << "# " << options.config_line << '\n';
    out << "c,delta,m,fold,acc,train_seconds\n";
    for (const auto &r : report.results) {
        for (const auto &f : r.folds) {
            out << format17(r.point.c) << ',' << (r.point.delta ? format17(*r.point.delta) : std::string{ "NA" }) << ',' << r.point.m << ',' << f.fold << ',' << format17(f.accuracy) << ','
                << (options.include_timing ? format17(f.train_seconds) : std::string{ "NA" }) << '\n';
        }
    }
    return out.str();
}

std::vector<scaling_row> benchmark_scaling(std::span<const std::size_t> sizes, std::size_t features, std::size_t m, std::uint64_t seed, const scaling_settings &settings) {
    if (sizes.empty()) {
        throw usage_error{ "no sizes given" };
    }
    if (!std::is_sorted(sizes.begin(), sizes.end()) || std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end()) {
        throw usage_error{ "sizes must be strictly ascending" };
    }
    if (features < 1) {
        throw usage_error{ "features must be >= 1" };
    }
    if (m < 1) {
        throw usage_error{ "m must be ≥ 1" };
    }
    const std::size_t repeats = std::max<std::size_t>(1, settings.repeats);
    fit_options fit;
    fit.compute_diagnostics = false;
    fit.threads = settings.kmeans.threads;

    std::vector<scaling_row> rows;
    for (const std::size_t l : sizes) {
        if (l < m) {
            throw usage_error{ "size " + std::to_string(l) + " is smaller than m = " + std::to_string(m) };
        }
        const auto [scaled, scaling] = minmax_scale(generate_ndc(l, features, settings.ndc_clusters, seed));
        scaling_row row;
        row.l = l;

        auto start = clock_type::now();
        const granulation granules = kmeans_granulate(scaled, m, seed, settings.kmeans);
        row.granulate_seconds = seconds_since(start);

        row.assembly_seconds = std::numeric_limits<double>::infinity();
        row.fit_seconds = std::numeric_limits<double>::infinity();
        std::optional<fit_result<linear_model>> fitted;
        for (std::size_t rep = 0; rep < repeats; ++rep) {
            start = clock_type::now();
            const auto invariants = granule_v_vectors(scaled, granules, measure_spec::uniform());
            const linear_lugsi_system system{ scaled, granules, invariants };
            row.assembly_seconds = std::min(row.assembly_seconds, seconds_since(start));

            start = clock_type::now();
            fitted = fit_linear_lugsi(scaled, granules, invariants, settings.gamma, fit);
            row.fit_seconds = std::min(row.fit_seconds, seconds_since(start));
        }

        if (l <= settings.v_matrix_cap) {
            start = clock_type::now();
            const Eigen::MatrixXd v = v_matrix(scaled.features(), measure_spec::uniform(), settings.v_matrix_cap);
            row.v_matrix_seconds = seconds_since(start);
        }

        const std::vector<int> predictions = predict_all(model{ fitted->model }, scaled.features(), 1);
        row.training_accuracy = accuracy(predictions, to_labels(scaled.labels()));
        rows.push_back(row);
    }
    return rows;
}

std::vector<sweep_row> cluster_sweep(const dataset &data, std::span<const std::size_t> m_values, double c, std::optional<double> delta, std::size_t folds, std::uint64_t seed, const train_settings &settings) {
    grid_spec grid;
    grid.c_values = { c };
    if (delta) {
        grid.delta_values = { *delta };
    } else if (uses_delta(settings)) {
        grid.delta_values = { settings.kernel->delta };
    }
    grid.m_values.assign(m_values.begin(), m_values.end());
    grid.folds = folds;
    grid.seed = seed;
    const auto report = grid_search(data, grid, settings);
    std::vector<sweep_row> rows;
    for (const auto &r : report.results) {
        rows.push_back({ r.point.m, r.mean_accuracy, r.std_accuracy, r.mean_train_seconds });
    }
    return rows;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw usage_error{ "slope needs two or more paired values" };
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) {
        throw usage_error{ "slope undefined for constant x" };
    }
    return sxy / sxx;
}

}  // namespace lugsi
