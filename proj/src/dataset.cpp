#include "lugsi/dataset.hpp"

#include "lugsi/error.hpp"
#include "lugsi/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string_view>

namespace lugsi {

namespace {

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        return std::nullopt;
    }
    return value;
}

// 0 and -1 map to 0, 1 maps to 1.
std::optional<double> parse_label(std::string_view text) {
    const auto value = parse_double(text);
    if (!value) {
        return std::nullopt;
    }
    if (*value == 1.0) {
        return 1.0;
    }
    if (*value == 0.0 || *value == -1.0) {
        return 0.0;
    }
    return std::nullopt;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::ifstream open_input(const std::filesystem::path &path) {
    std::ifstream in{ path, std::ios::binary };
    if (!in) {
        throw data_error{ "cannot open '" + path.string() + "'" };
    }
    return in;
}

}  // namespace

dataset::dataset(matrix features, vector labels, std::vector<std::string> feature_names) :
    features_{ std::move(features) },
    labels_{ std::move(labels) },
    feature_names_{ std::move(feature_names) } {
    if (features_.cols() < 1) {
        throw data_error{ "dataset needs at least one feature" };
    }
    if (labels_.size() != features_.rows()) {
        throw data_error{ "label count does not match row count" };
    }
    if (!feature_names_.empty() && feature_names_.size() != static_cast<std::size_t>(features_.cols())) {
        throw data_error{ "feature name count does not match column count" };
    }
    for (Eigen::Index i = 0; i < labels_.size(); ++i) {
        if (labels_[i] != 0.0 && labels_[i] != 1.0) {
            throw data_error{ "non-binary label at row " + std::to_string(i + 1) };
        }
    }
    if (!features_.allFinite()) {
        throw data_error{ "non-finite feature value" };
    }
}

std::size_t dataset::count_positive() const noexcept {
    return static_cast<std::size_t>((labels_.array() == 1.0).count());
}

dataset dataset::subset(std::span<const std::size_t> rows) const {
    matrix features(static_cast<Eigen::Index>(rows.size()), features_.cols());
    vector labels(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] >= size()) {
            throw usage_error{ "subset row index out of range" };
        }
        const auto i = static_cast<Eigen::Index>(r);
        features.row(i) = features_.row(static_cast<Eigen::Index>(rows[r]));
        labels[i] = labels_[static_cast<Eigen::Index>(rows[r])];
    }
    return dataset{ std::move(features), std::move(labels), feature_names_ };
}

matrix scaling_params::transform(const matrix &features) const {
    if (static_cast<std::size_t>(features.cols()) != dimension()) {
        throw usage_error{ "dimension mismatch: data has " + std::to_string(features.cols()) + " features, scaling has " + std::to_string(dimension()) };
    }
    matrix out(features.rows(), features.cols());
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
        const double range = maximum[j] - minimum[j];
        if (range > 0.0) {
            out.col(j) = (features.col(j).array() - minimum[j]) / range;
        } else {
            out.col(j).setZero();
        }
    }
    return out;
}

matrix scaling_params::invert(const matrix &scaled) const {
    if (static_cast<std::size_t>(scaled.cols()) != dimension()) {
        throw usage_error{ "dimension mismatch in inverse scaling" };
    }
    matrix out(scaled.rows(), scaled.cols());
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
        const double range = maximum[j] - minimum[j];
        out.col(j) = scaled.col(j).array() * range + minimum[j];
    }
    return out;
}

scaling_params identity_scaling(std::size_t n) {
    const auto size = static_cast<Eigen::Index>(n);
    return scaling_params{ vector::Zero(size), vector::Ones(size) };
}

std::pair<dataset, scaling_params> minmax_scale(const dataset &data) {
    if (data.empty()) {
        throw usage_error{ "empty dataset" };
    }
    scaling_params params{ data.features().colwise().minCoeff().transpose(), data.features().colwise().maxCoeff().transpose() };
    // Exact minmax output is already in [0,1]; the clamp only absorbs rounding at the max.
    matrix scaled = params.transform(data.features()).cwiseMax(0.0).cwiseMin(1.0);
    return { dataset{ std::move(scaled), data.labels(), data.feature_names() }, std::move(params) };
}

matrix apply_scaling(const matrix &features, const scaling_params &params) {
    if (features.rows() == 0) {
        throw usage_error{ "empty dataset" };
    }
    return params.transform(features).cwiseMax(0.0).cwiseMin(1.0);
}

dataset apply_scaling(const dataset &data, const scaling_params &params) {
    return dataset{ apply_scaling(data.features(), params), data.labels(), data.feature_names() };
}

index_list fold_plan::test_indices(std::size_t fold) const {
    index_list out;
    for (std::size_t i = 0; i < fold_assignments.size(); ++i) {
        if (fold_assignments[i] == fold) {
            out.push_back(i);
        }
    }
    return out;
}

index_list fold_plan::train_indices(std::size_t fold) const {
    index_list out;
    for (std::size_t i = 0; i < fold_assignments.size(); ++i) {
        if (fold_assignments[i] != fold) {
            out.push_back(i);
        }
    }
    return out;
}

fold_plan kfold_split(std::size_t sample_count, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) {
        throw usage_error{ "folds must be >= 2" };
    }
    if (folds > sample_count) {
        throw usage_error{ "folds (" + std::to_string(folds) + ") exceed sample count (" + std::to_string(sample_count) + ")" };
    }
    std::vector<std::size_t> order(sample_count);
    std::iota(order.begin(), order.end(), std::size_t{ 0 });
    split_mix64 rng{ seed };
    rng.shuffle(std::span{ order });

    fold_plan plan{ seed, folds, std::vector<std::size_t>(sample_count) };
    for (std::size_t position = 0; position < sample_count; ++position) {
        plan.fold_assignments[order[position]] = position % folds;
    }
    return plan;
}

fold_plan kfold_split(const dataset &data, std::size_t folds, std::uint64_t seed) {
    return kfold_split(data.size(), folds, seed);
}

dataset load_csv(const std::filesystem::path &path, const csv_options &options) {
    auto in = open_input(path);
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    std::vector<double> labels;
    std::optional<std::size_t> width;
    std::size_t label_column{};

    std::string line;
    std::size_t line_number = 0;
    bool header_pending = options.has_header;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string_view view = trim(line);
        if (view.empty()) {
            continue;
        }
        const auto cells = split(view, ',');
        if (!width) {
            width = cells.size();
            if (*width < 2) {
                throw data_error{ "row " + std::to_string(line_number) + ": need at least one feature column and a label column" };
            }
            label_column = options.label_column.value_or(*width - 1);
            if (label_column >= *width) {
                throw data_error{ "label column " + std::to_string(label_column) + " out of range for " + std::to_string(*width) + " columns" };
            }
        } else if (cells.size() != *width) {
            throw data_error{ "malformed row " + std::to_string(line_number) + ": expected " + std::to_string(*width) + " fields, found " + std::to_string(cells.size()) };
        }
        if (header_pending) {
            header_pending = false;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (c != label_column) {
                    names.emplace_back(trim(cells[c]));
                }
            }
            continue;
        }
        std::vector<double> row;
        row.reserve(*width - 1);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_column) {
                const auto label = parse_label(cells[c]);
                if (!label) {
                    throw data_error{ "non-binary label at row " + std::to_string(line_number) };
                }
                labels.push_back(*label);
                continue;
            }
            const auto value = parse_double(cells[c]);
            if (!value || !std::isfinite(*value)) {
                throw data_error{ "malformed row " + std::to_string(line_number) + ": bad or missing value in column " + std::to_string(c + 1) };
            }
            row.push_back(*value);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw data_error{ "empty file '" + path.string() + "'" };
    }

    matrix features(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(*width - 1));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return dataset{ std::move(features), Eigen::Map<const vector>(labels.data(), static_cast<Eigen::Index>(labels.size())), std::move(names) };
}

dataset load_sparse(const std::filesystem::path &path, std::optional<std::size_t> dimension_hint) {
    auto in = open_input(path);
    struct entry {
        std::size_t row, column;
        double value;
    };
    std::vector<entry> entries;
    std::vector<double> labels;
    std::size_t max_index = 0;

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view view = trim(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = trim(view.substr(0, hash));
        }
        if (view.empty()) {
            continue;
        }
        std::istringstream tokens{ std::string{ view } };
        std::string token;
        tokens >> token;
        const auto label = parse_label(token);
        if (!label) {
            throw data_error{ "non-binary label at row " + std::to_string(line_number) };
        }
        const std::size_t row = labels.size();
        labels.push_back(*label);

        std::size_t previous = 0;
        while (tokens >> token) {
            const auto colon = token.find(':');
            if (colon == std::string::npos) {
                throw data_error{ "malformed row " + std::to_string(line_number) + ": expected idx:val, found '" + token + "'" };
            }
            std::size_t index{};
            const std::string_view index_text{ token.data(), colon };
            const auto [ptr, ec] = std::from_chars(index_text.data(), index_text.data() + index_text.size(), index);
            if (ec != std::errc{} || ptr != index_text.data() + index_text.size() || index == 0) {
                throw data_error{ "malformed row " + std::to_string(line_number) + ": bad feature index '" + std::string{ index_text } + "'" };
            }
            const auto value = parse_double(std::string_view{ token }.substr(colon + 1));
            if (!value || !std::isfinite(*value)) {
                throw data_error{ "malformed row " + std::to_string(line_number) + ": bad value in '" + token + "'" };
            }
            if (index <= previous) {
                throw data_error{ "non-ascending feature index " + std::to_string(index) + " at row " + std::to_string(line_number) };
            }
            if (dimension_hint && index > *dimension_hint) {
                throw data_error{ "feature index " + std::to_string(index) + " exceeds dimension " + std::to_string(*dimension_hint) + " at row " + std::to_string(line_number) };
            }
            previous = index;
            max_index = std::max(max_index, index);
            entries.push_back({ row, index - 1, *value });
        }
    }
    if (labels.empty()) {
        throw data_error{ "empty file '" + path.string() + "'" };
    }
    const std::size_t dimension = dimension_hint.value_or(std::max<std::size_t>(max_index, 1));
    matrix features = matrix::Zero(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(dimension));
    for (const auto &e : entries) {
        features(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.column)) = e.value;
    }
    return dataset{ std::move(features), Eigen::Map<const vector>(labels.data(), static_cast<Eigen::Index>(labels.size())) };
}

void write_csv(const std::filesystem::path &path, const dataset &data, bool header) {
    std::ofstream out{ path, std::ios::binary };
    if (!out) {
        throw data_error{ "cannot write '" + path.string() + "'" };
    }
    out << std::setprecision(17);
    if (header) {
        for (std::size_t j = 0; j < data.dimension(); ++j) {
            out << (data.feature_names().empty() ? "x" + std::to_string(j + 1) : data.feature_names()[j]) << ',';
        }
        out << "label\n";
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        for (Eigen::Index j = 0; j < data.features().cols(); ++j) {
            out << data.features()(row, j) << ',';
        }
        out << static_cast<int>(data.labels()[row]) << '\n';
    }
}

dataset generate_ndc(std::size_t samples, std::size_t features, std::size_t cluster_count, std::uint64_t seed) {
    if (cluster_count < 2 || samples < cluster_count) {
        throw usage_error{ "generate_ndc needs samples >= cluster_count >= 2" };
    }
    if (features < 1) {
        throw usage_error{ "generate_ndc needs features >= 1" };
    }
    split_mix64 rng{ seed };
    const auto n = static_cast<Eigen::Index>(features);
    const auto k = static_cast<Eigen::Index>(cluster_count);

    matrix centers(k, n);
    for (Eigen::Index c = 0; c < k; ++c) {
        for (Eigen::Index j = 0; j < n; ++j) {
            centers(c, j) = rng.uniform(0.0, 10.0);
        }
    }
    vector normal(n);
    do {
        for (Eigen::Index j = 0; j < n; ++j) {
            normal[j] = rng.normal();
        }
    } while (normal.norm() == 0.0);
    normal.normalize();

    const Eigen::RowVectorXd mean = centers.colwise().mean();
    vector blob_label(k);
    for (Eigen::Index c = 0; c < k; ++c) {
        blob_label[c] = (centers.row(c) - mean).dot(normal.transpose()) >= 0.0 ? 1.0 : 0.0;
    }

    matrix points(static_cast<Eigen::Index>(samples), n);
    vector labels(static_cast<Eigen::Index>(samples));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const Eigen::Index c = i % k;
        for (Eigen::Index j = 0; j < n; ++j) {
            points(i, j) = centers(c, j) + rng.normal();
        }
        labels[i] = blob_label[c];
    }
    return dataset{ std::move(points), std::move(labels) };
}

}  // namespace lugsi
