// lugsi: train, predict, cross-validate and benchmark granularity-invariant classifiers.

#include "lugsi/dataset.hpp"
#include "lugsi/error.hpp"
#include "lugsi/evaluation.hpp"
#include "lugsi/granulation.hpp"
#include "lugsi/invariants.hpp"
#include "lugsi/kernels.hpp"
#include "lugsi/model_io.hpp"
#include "lugsi/solver.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace lugsi;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_data = 3;
constexpr int exit_numeric = 4;

std::string num(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

struct data_flags {
    std::string path;
    std::string format{ "auto" };
    bool header{ false };
    std::optional<std::size_t> label_column;
    std::optional<std::size_t> dimension;

    void add_to(CLI::App &app, bool required = true) {
        auto *opt = app.add_option("--data", path, "Input dataset (CSV or sparse 'label idx:val' text)");
        if (required) {
            opt->required();
        }
        app.add_option("--format", format, "csv, sparse or auto (by extension)")->check(CLI::IsMember({ "auto", "csv", "sparse" }));
        app.add_flag("--header", header, "CSV has a header row");
        app.add_option("--label-column", label_column, "Zero-based CSV label column (default: last)");
        app.add_option("--dimension", dimension, "Feature count for sparse input");
    }

    [[nodiscard]] dataset load() const {
        std::string kind = format;
        if (kind == "auto") {
            const auto ext = fs::path{ path }.extension().string();
            kind = ext == ".csv" ? "csv" : "sparse";
        }
        if (kind == "csv") {
            return load_csv(path, { header, label_column });
        }
        return load_sparse(path, dimension);
    }
};

struct model_flags {
    std::string kernel{ "linear" };
    double delta{ 1.0 };
    double cro_gamma{ 0.0 };
    std::size_t nodes{ 64 };
    std::string method{ "lugsi" };
    std::string measure{ "uniform" };
    bool unit_predicates{ false };
    bool normalize_v{ false };
    std::size_t max_iters{ 100 };
    double tol{ 1e-6 };
    std::size_t dense_cap{ 15000 };
    std::size_t threads{ 1 };

    void add_to(CLI::App &app, bool with_delta = true) {
        app.add_option("--kernel", kernel, "linear (primal), rbf or cro")->check(CLI::IsMember({ "linear", "rbf", "cro" }));
        if (with_delta) {
            app.add_option("--delta", delta, "rbf width");
        }
        app.add_option("--cro-gamma", cro_gamma, "CRO kernel offset parameter");
        app.add_option("--nodes", nodes, "Gauss-Legendre nodes for the CRO integral");
        app.add_option("--method", method, "lugsi, lssvm or vsvm")->check(CLI::IsMember({ "lugsi", "lssvm", "vsvm" }));
        app.add_option("--measure", measure, "v-value measure: uniform or empirical")->check(CLI::IsMember({ "uniform", "empirical" }));
        app.add_flag("--unit-predicates", unit_predicates, "Use v = 1 for every sample");
        app.add_flag("--normalize-v", normalize_v, "Divide training v-values by their maximum");
        app.add_option("--max-iters", max_iters, "K-means iteration cap");
        app.add_option("--tol", tol, "K-means centroid displacement tolerance");
        app.add_option("--dense-cap", dense_cap, "Largest l for dense l x l systems");
        app.add_option("--threads", threads, "Worker threads (results do not depend on it)");
    }

    [[nodiscard]] train_settings settings() const {
        train_settings s;
        s.method = parse_fit_method(method);
        if (kernel == "rbf") {
            s.kernel = kernel_spec::rbf(delta);
        } else if (kernel == "cro") {
            s.kernel = kernel_spec::cro(cro_gamma, nodes);
        }
        if (s.kernel) {
            s.kernel->validate();
        }
        s.measure = measure == "empirical" ? measure_spec::kind::empirical : measure_spec::kind::uniform_unit_cube;
        s.unit_predicates = unit_predicates;
        s.normalize_v = normalize_v;
        s.kmeans.max_iters = max_iters;
        s.kmeans.tol = tol;
        s.kmeans.threads = threads;
        s.fit.dense_cap = dense_cap;
        s.fit.threads = threads;
        return s;
    }
};

struct regularization_flags {
    std::optional<double> gamma;
    std::optional<double> cost;

    void add_to(CLI::App &app) {
        auto *g = app.add_option("--gamma", gamma, "Regularization gamma");
        auto *c = app.add_option("--cost", cost, "Tradeoff parameter C (gamma = 1/C)");
        g->excludes(c);
    }

    [[nodiscard]] double value() const {
        if (gamma && cost) {
            throw usage_error{ "--gamma and --cost are mutually exclusive" };
        }
        if (gamma) {
            if (!(*gamma > 0.0)) {
                throw usage_error{ "gamma must be positive" };
            }
            return *gamma;
        }
        return gamma_from_cost(cost.value_or(1.0));
    }
};

void require_input(const std::string &path) {
    if (!fs::is_regular_file(path)) {
        throw data_error{ "cannot read " + path };
    }
}

void require_output(const std::string &path) {
    if (path.empty()) {
        return;
    }
    const fs::path parent = fs::absolute(fs::path{ path }).parent_path();
    if (!fs::is_directory(parent)) {
        throw usage_error{ "output directory does not exist: " + parent.string() };
    }
    if (fs::is_directory(path)) {
        throw usage_error{ "output path is a directory: " + path };
    }
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out{ path, std::ios::binary };
    if (!out) {
        throw data_error{ "cannot write " + path };
    }
    out << text;
    if (!out) {
        throw data_error{ "cannot write " + path };
    }
}

std::vector<int> labels_of(const dataset &data) {
    std::vector<int> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        out[i] = data.labels()(static_cast<Eigen::Index>(i)) > 0.5 ? 1 : 0;
    }
    return out;
}

double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------- train

struct train_command {
    data_flags data;
    model_flags model;
    regularization_flags reg;
    std::size_t clusters{ 7 };
    bool clusters_given{ false };
    std::uint64_t seed{ 0 };
    std::string out;

    int run(const std::string &config) {
        require_input(data.path);
        require_output(out);
        const train_settings settings = model.settings();
        const double gamma = reg.value();
        if (clusters < 1) {
            throw usage_error{ "m must be ≥ 1" };
        }

        const dataset raw = data.load();
        auto [scaled, scaling] = minmax_scale(raw);
        std::size_t m = clusters;
        if (!clusters_given && m > scaled.size()) {
            m = scaled.size();
        }
        if (settings.method == fit_method::lssvm) {
            m = scaled.size();
        }

        const auto start = std::chrono::steady_clock::now();
        training_outcome outcome = train(scaled, gamma, m, seed, settings);
        const double seconds = elapsed(start);
        set_model_scaling(outcome.fitted, scaling);
        save_model(out, outcome.fitted);

        const auto predictions = [&] {
            const vector d = decision_values(outcome.fitted, scaled.features(), settings.fit.threads);
            std::vector<int> p(static_cast<std::size_t>(d.size()));
            for (Eigen::Index i = 0; i < d.size(); ++i) {
                p[static_cast<std::size_t>(i)] = label_from_decision(d(i));
            }
            return p;
        }();

        const auto &diag = outcome.diagnostics;
        std::cout << "# " << config << '\n';
        std::cout << "samples " << scaled.size() << "\nfeatures " << scaled.dimension() << "\nm " << m << "\ngamma " << num(gamma) << '\n';
        if (outcome.granules) {
            std::cout << "clustering_error " << num(outcome.granules->clustering_error) << '\n';
        }
        std::cout << "objective " << num(diag.objective_value) << '\n';
        std::cout << "gradient_norm " << num(diag.gradient_norm) << (diag.gradient_by_finite_differences ? " (central differences)" : " (analytic)") << '\n';
        std::cout << "relative_residual " << num(diag.relative_residual) << '\n';
        std::cout << "condition_hint " << num(diag.system_condition_hint) << '\n';
        if (diag.degenerate_bias) {
            std::cout << "warning: bias denominator vanished, bias set to 0\n";
        }
        std::cout << "training_accuracy " << num(accuracy(predictions, labels_of(scaled))) << '\n';
        std::cout << "fit_seconds " << num(diag.wall_seconds) << "\ntrain_seconds " << num(seconds) << '\n';
        std::cout << "model " << out << '\n';
        return exit_ok;
    }
};

// ---------------------------------------------------------------- predict

struct predict_command {
    data_flags data;
    std::string model_path;
    std::string out;
    std::size_t threads{ 1 };

    int run(const std::string &config) {
        require_input(model_path);
        require_input(data.path);
        require_output(out);
        const lugsi::model fitted = load_model(model_path);
        const dataset raw = data.load();
        if (raw.dimension() != model_dimension(fitted)) {
            throw usage_error{ "dimension mismatch: model has " + std::to_string(model_dimension(fitted)) + " features, data " + std::to_string(raw.dimension()) };
        }
        const matrix scaled = apply_scaling(raw.features(), model_scaling(fitted));
        const vector decisions = decision_values(fitted, scaled, threads);

        std::ostringstream csv;
        csv << "# " << config << '\n' << "index,decision_value,label\n";
        std::vector<int> predicted(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const double d = decisions(static_cast<Eigen::Index>(i));
            predicted[i] = label_from_decision(d);
            csv << i << ',' << num(d) << ',' << predicted[i] << '\n';
        }
        write_text(out, csv.str());
        std::cout << "predictions " << raw.size() << "\naccuracy_vs_file_labels " << num(accuracy(predicted, labels_of(raw))) << '\n';
        return exit_ok;
    }
};

// ---------------------------------------------------------------- cv

struct cv_command {
    data_flags data;
    model_flags model;
    std::vector<double> c_values;
    std::vector<double> delta_values;
    std::vector<std::size_t> m_values;
    std::size_t folds{ 5 };
    std::uint64_t seed{ 0 };
    std::string report;
    std::string plot;
    bool timing{ false };
    bool with_predictions{ false };

    int run(const std::string &config) {
        require_input(data.path);
        require_output(report);
        require_output(plot);
        if (report.empty() && plot.empty()) {
            throw usage_error{ "nothing to write: give --report and/or --plot" };
        }
        const train_settings settings = model.settings();
        for (const auto m : m_values) {
            if (m < 1) {
                throw usage_error{ "m must be ≥ 1" };
            }
        }

        const dataset raw = data.load();
        grid_spec grid = default_grid(raw.size(), folds, seed);
        if (!c_values.empty()) {
            grid.c_values = c_values;
        }
        if (!delta_values.empty()) {
            grid.delta_values = delta_values;
        }
        if (!m_values.empty()) {
            grid.m_values = m_values;
        }
        if (settings.method != fit_method::lugsi) {
            grid.m_values = { settings.method == fit_method::lssvm ? raw.size() : 1 };
        }

        const eval_report result = grid_search(raw, grid, settings);
        const report_options options{ timing, with_predictions, config };
        if (!report.empty()) {
            write_text(report, report_json(result, options));
        }
        if (!plot.empty()) {
            write_text(plot, report_csv(result, options));
        }

        const auto &best = result.best_result();
        std::cout << "configurations " << result.results.size() << "\nbest_c " << num(best.point.c) << '\n';
        if (best.point.delta) {
            std::cout << "best_delta " << num(*best.point.delta) << '\n';
        }
        std::cout << "best_m " << best.point.m << "\nbest_mean_accuracy " << num(best.mean_accuracy) << "\nbest_std_accuracy " << num(best.std_accuracy) << '\n';
        for (const auto &note : result.notes) {
            std::cout << "note: " << note << '\n';
        }
        return exit_ok;
    }
};

// ---------------------------------------------------------------- bench

struct bench_command {
    data_flags data;
    model_flags model;
    regularization_flags reg;
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> m_values;
    std::size_t features{ 32 };
    std::size_t samples{ 1000 };
    std::size_t clusters{ 50 };
    std::size_t ndc_clusters{ 20 };
    std::size_t v_cap{ 5000 };
    std::size_t repeats{ 3 };
    std::size_t folds{ 5 };
    std::uint64_t seed{ 0 };
    std::string out;
    bool timing{ false };

    int run(const std::string &config) {
        if (sizes.empty() == m_values.empty()) {
            throw usage_error{ "give exactly one of --sizes (l sweep) or --m-values (cluster sweep)" };
        }
        if (!data.path.empty()) {
            require_input(data.path);
        }
        require_output(out);
        const auto cell = [&](double seconds) { return timing ? num(seconds) : std::string{ "NA" }; };
        std::ostringstream csv;
        csv << "# " << config << '\n';

        if (!sizes.empty()) {
            scaling_settings s;
            s.ndc_clusters = ndc_clusters;
            s.gamma = reg.value();
            s.v_matrix_cap = v_cap;
            s.repeats = repeats;
            s.kmeans = model.settings().kmeans;
            if (clusters < 1) {
                throw usage_error{ "m must be ≥ 1" };
            }
            const auto rows = benchmark_scaling(sizes, features, clusters, seed, s);
            csv << "l,granulate_seconds,assembly_seconds,fit_seconds,v_matrix_seconds,training_accuracy\n";
            std::cout << "l granulate_s assembly_s fit_s v_matrix_s train_acc\n";
            for (const auto &r : rows) {
                const std::string vm = r.v_matrix_seconds ? cell(*r.v_matrix_seconds) : std::string{ "skipped_above_cap" };
                csv << r.l << ',' << cell(r.granulate_seconds) << ',' << cell(r.assembly_seconds) << ',' << cell(r.fit_seconds) << ',' << vm << ',' << num(r.training_accuracy) << '\n';
                std::cout << r.l << ' ' << num(r.granulate_seconds) << ' ' << num(r.assembly_seconds) << ' ' << num(r.fit_seconds) << ' '
                          << (r.v_matrix_seconds ? num(*r.v_matrix_seconds) : std::string{ "skipped" }) << ' ' << num(r.training_accuracy) << '\n';
            }
        } else {
            const train_settings settings = model.settings();
            for (const auto m : m_values) {
                if (m < 1) {
                    throw usage_error{ "m must be ≥ 1" };
                }
            }
            const dataset source = data.path.empty() ? generate_ndc(samples, features, ndc_clusters, seed) : data.load();
            const double gamma = reg.value();
            const double c = reg.cost ? *reg.cost : 1.0 / gamma;
            const std::optional<double> delta = settings.kernel && settings.kernel->type == kernel_spec::kind::rbf ? std::optional{ settings.kernel->delta } : std::nullopt;
            const auto rows = cluster_sweep(source, m_values, c, delta, folds, seed, settings);
            csv << "m,accuracy,std_accuracy,train_seconds\n";
            std::cout << "m accuracy std train_s\n";
            std::vector<double> xs;
            std::vector<double> ys;
            for (const auto &r : rows) {
                csv << r.m << ',' << num(r.mean_accuracy) << ',' << num(r.std_accuracy) << ',' << cell(r.mean_train_seconds) << '\n';
                std::cout << r.m << ' ' << num(r.mean_accuracy) << ' ' << num(r.std_accuracy) << ' ' << num(r.mean_train_seconds) << '\n';
                xs.push_back(static_cast<double>(r.m));
                ys.push_back(r.mean_train_seconds);
            }
            if (rows.size() >= 2) {
                std::cout << "train_seconds_slope " << num(least_squares_slope(xs, ys)) << '\n';
            }
        }
        if (!out.empty()) {
            write_text(out, csv.str());
        }
        return exit_ok;
    }
};

// ---------------------------------------------------------------- granulate

struct granulate_command {
    data_flags data;
    std::size_t clusters{ 7 };
    std::uint64_t seed{ 0 };
    std::size_t max_iters{ 100 };
    double tol{ 1e-6 };
    std::size_t threads{ 1 };
    std::string out;
    std::string centroids_out;
    std::string emit_v;
    std::string measure{ "uniform" };

    int run(const std::string &config) {
        require_input(data.path);
        require_output(out);
        require_output(centroids_out);
        require_output(emit_v);
        if (clusters < 1) {
            throw usage_error{ "m must be ≥ 1" };
        }
        const dataset raw = data.load();
        const auto [scaled, scaling] = minmax_scale(raw);
        const granulation g = kmeans_granulate(scaled, clusters, seed, { max_iters, tol, threads });

        std::ostringstream csv;
        csv << "# " << config << '\n' << "index,granule\n";
        for (std::size_t i = 0; i < g.assignments.size(); ++i) {
            csv << i << ',' << g.assignments[i] << '\n';
        }
        write_text(out, csv.str());

        if (!centroids_out.empty()) {
            std::ostringstream c;
            c << "# " << config << "\n# centroids in scaled [0,1] coordinates\ngranule,size";
            for (std::size_t j = 0; j < scaled.dimension(); ++j) {
                c << ",x" << j;
            }
            c << '\n';
            for (std::size_t k = 0; k < g.granule_count(); ++k) {
                c << k << ',' << g.granule_members[k].size();
                for (Eigen::Index j = 0; j < g.centroids.cols(); ++j) {
                    c << ',' << num(g.centroids(static_cast<Eigen::Index>(k), j));
                }
                c << '\n';
            }
            write_text(centroids_out, c.str());
        }

        if (!emit_v.empty()) {
            const measure_spec spec = measure == "empirical" ? measure_spec::empirical(scaled.features()) : measure_spec::uniform();
            const vector v = v_values(scaled.features(), spec);
            std::ostringstream c;
            c << "# " << config << '\n' << "index,granule,v\n";
            for (std::size_t i = 0; i < g.assignments.size(); ++i) {
                c << i << ',' << g.assignments[i] << ',' << num(v(static_cast<Eigen::Index>(i))) << '\n';
            }
            write_text(emit_v, c.str());
        }

        std::cout << "m " << g.granule_count() << "\nclustering_error " << num(g.clustering_error) << "\niterations " << g.iterations_run << '\n';
        return exit_ok;
    }
};

std::string config_line(int argc, char **argv) {
    std::string line = "lugsi";
    for (int i = 1; i < argc; ++i) {
        line += ' ';
        line += argv[i];
    }
    return line;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{ "Granularity statistical invariant classifiers" };
    app.require_subcommand(1);

    train_command train_cmd;
    auto *train_app = app.add_subcommand("train", "Fit a model on a dataset and write it to a file");
    train_cmd.data.add_to(*train_app);
    train_cmd.model.add_to(*train_app);
    train_cmd.reg.add_to(*train_app);
    auto *clusters_opt = train_app->add_option("--clusters,-m", train_cmd.clusters, "Number of granules m (default 7, capped at l)");
    train_app->add_option("--seed", train_cmd.seed, "K-means seed");
    train_app->add_option("--out,-o", train_cmd.out, "Model file")->required();

    predict_command predict_cmd;
    auto *predict_app = app.add_subcommand("predict", "Apply a saved model");
    predict_cmd.data.add_to(*predict_app);
    predict_app->add_option("--model", predict_cmd.model_path, "Model file")->required();
    predict_app->add_option("--out,-o", predict_cmd.out, "Predictions CSV")->required();
    predict_app->add_option("--threads", predict_cmd.threads, "Worker threads");

    cv_command cv_cmd;
    auto *cv_app = app.add_subcommand("cv", "Cross-validated grid search");
    cv_cmd.data.add_to(*cv_app);
    cv_cmd.model.add_to(*cv_app, false);
    cv_app->add_option("--c-values", cv_cmd.c_values, "C grid (default 2^-8..2^8)")->delimiter(',');
    cv_app->add_option("--delta-values", cv_cmd.delta_values, "rbf width grid (default 2^-4..2^4)")->delimiter(',');
    cv_app->add_option("--m-values", cv_cmd.m_values, "Cluster-count grid (default 1,3,7,l/2,l or l/16 for l >= 800)")->delimiter(',');
    cv_app->add_option("--folds", cv_cmd.folds, "Number of folds");
    cv_app->add_option("--seed", cv_cmd.seed, "Fold and K-means seed");
    cv_app->add_option("--report", cv_cmd.report, "JSON report");
    cv_app->add_option("--plot", cv_cmd.plot, "Plot CSV (c, delta, m, fold, acc, train_seconds)");
    cv_app->add_flag("--timing", cv_cmd.timing, "Write wall-clock times into the output files");
    cv_app->add_flag("--with-predictions", cv_cmd.with_predictions, "Store per-fold test predictions in the report");

    bench_command bench_cmd;
    auto *bench_app = app.add_subcommand("bench", "Scaling (--sizes) or cluster (--m-values) sweeps");
    bench_cmd.data.add_to(*bench_app, false);
    bench_cmd.model.add_to(*bench_app);
    bench_cmd.reg.add_to(*bench_app);
    bench_app->add_option("--sizes", bench_cmd.sizes, "Ascending sample counts for NDC data")->delimiter(',');
    bench_app->add_option("--m-values", bench_cmd.m_values, "Cluster counts to sweep")->delimiter(',');
    bench_app->add_option("--features", bench_cmd.features, "NDC feature count");
    bench_app->add_option("--samples", bench_cmd.samples, "NDC sample count for a cluster sweep without --data");
    bench_app->add_option("--clusters,-m", bench_cmd.clusters, "Granule count for the size sweep");
    bench_app->add_option("--ndc-clusters", bench_cmd.ndc_clusters, "Gaussian blobs in generated data");
    bench_app->add_option("--v-cap", bench_cmd.v_cap, "Largest l timed for dense V-matrix assembly");
    bench_app->add_option("--repeats", bench_cmd.repeats, "Timing repeats (fastest kept)");
    bench_app->add_option("--folds", bench_cmd.folds, "Folds for the cluster sweep");
    bench_app->add_option("--seed", bench_cmd.seed, "Data and K-means seed");
    bench_app->add_option("--out,-o", bench_cmd.out, "Output CSV");
    bench_app->add_flag("--timing", bench_cmd.timing, "Write wall-clock times into the output file");

    granulate_command gran_cmd;
    auto *gran_app = app.add_subcommand("granulate", "K-means granulation of scaled data");
    gran_cmd.data.add_to(*gran_app);
    gran_app->add_option("--clusters,-m", gran_cmd.clusters, "Number of granules m");
    gran_app->add_option("--seed", gran_cmd.seed, "K-means seed");
    gran_app->add_option("--max-iters", gran_cmd.max_iters, "Iteration cap");
    gran_app->add_option("--tol", gran_cmd.tol, "Centroid displacement tolerance");
    gran_app->add_option("--threads", gran_cmd.threads, "Worker threads");
    gran_app->add_option("--out,-o", gran_cmd.out, "Assignments CSV (index, granule)")->required();
    gran_app->add_option("--centroids", gran_cmd.centroids_out, "Centroids CSV");
    gran_app->add_option("--emit-v", gran_cmd.emit_v, "Per-sample v-values CSV (index, granule, v)");
    gran_app->add_option("--measure", gran_cmd.measure, "uniform or empirical")->check(CLI::IsMember({ "uniform", "empirical" }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    const std::string config = config_line(argc, argv);
    train_cmd.clusters_given = clusters_opt->count() > 0;
    try {
        if (*train_app) {
            return train_cmd.run(config);
        }
        if (*predict_app) {
            return predict_cmd.run(config);
        }
        if (*cv_app) {
            return cv_cmd.run(config);
        }
        if (*bench_app) {
            return bench_cmd.run(config);
        }
        if (*gran_app) {
            return gran_cmd.run(config);
        }
    } catch (const usage_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const data_error &e) {
        std::cerr << "data error: " << e.what() << '\n';
        return exit_data;
    } catch (const numeric_error &e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return exit_numeric;
    } catch (const std::bad_alloc &) {
        std::cerr << "numeric error: out of memory\n";
        return exit_numeric;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_usage;
}
