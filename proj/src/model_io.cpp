#include "lugsi/model_io.hpp"

#include "lugsi/error.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace lugsi {

using json = nlohmann::ordered_json;

namespace {

json to_json(const vector &v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

vector vector_from(const json &node) {
    const auto values = node.get<std::vector<double>>();
    return Eigen::Map<const vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json to_json(const matrix &points) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const Eigen::RowVectorXd row = points.row(i);
        rows.push_back(std::vector<double>(row.data(), row.data() + row.size()));
    }
    return rows;
}

matrix matrix_from(const json &node, Eigen::Index cols) {
    matrix out(static_cast<Eigen::Index>(node.size()), cols);
    for (std::size_t i = 0; i < node.size(); ++i) {
        const auto row = node[i].get<std::vector<double>>();
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw data_error{ "model file: ragged training_points" };
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            out(static_cast<Eigen::Index>(i), j) = row[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

json to_json(const scaling_params &scaling) {
    return json{ { "minimum", to_json(scaling.minimum) }, { "maximum", to_json(scaling.maximum) } };
}

json to_json(const kernel_spec &kernel) {
    return json{ { "kind", std::string{ to_string(kernel.type) } }, { "delta", kernel.delta }, { "cro_gamma", kernel.cro_gamma }, { "quadrature_nodes", kernel.quadrature_nodes } };
}

json header(std::string_view kind, fit_method method, double gamma, std::size_t m, std::uint64_t seed) {
    return json{ { "format_version", model_format_version }, { "model_kind", kind }, { "method", std::string{ to_string(method) } }, { "gamma", gamma }, { "m", m }, { "seed", seed } };
}

}  // namespace

std::string serialize_model(const model &model) {
    json doc;
    if (const auto *linear = std::get_if<linear_model>(&model)) {
        doc = header("linear", linear->method, linear->gamma, linear->m, linear->seed);
        doc["kernel"] = nullptr;
        doc["scaling"] = to_json(linear->scaling);
        doc["w"] = to_json(linear->w);
        doc["b"] = linear->b;
        doc["w_b"] = to_json(linear->w_b);
        doc["w_c"] = to_json(linear->w_c);
    } else {
        const auto &kernel = std::get<kernel_model>(model);
        doc = header("kernel", kernel.method, kernel.gamma, kernel.m, kernel.seed);
        doc["kernel"] = to_json(kernel.kernel);
        doc["scaling"] = to_json(kernel.scaling);
        doc["A"] = to_json(kernel.a);
        doc["c"] = kernel.c;
        doc["A_b"] = to_json(kernel.a_b);
        doc["A_c"] = to_json(kernel.a_c);
        doc["training_points"] = to_json(kernel.training_points);
    }
    return doc.dump(1) + "\n";
}

model deserialize_model(const std::string &text) {
    try {
        const json doc = json::parse(text);
        const int version = doc.at("format_version").get<int>();
        if (version != model_format_version) {
            throw data_error{ "unsupported model format_version " + std::to_string(version) };
        }
        const auto kind = doc.at("model_kind").get<std::string>();
        const fit_method method = parse_fit_method(doc.at("method").get<std::string>());
        const scaling_params scaling{ vector_from(doc.at("scaling").at("minimum")), vector_from(doc.at("scaling").at("maximum")) };
        const double gamma = doc.at("gamma").get<double>();
        const auto m = doc.at("m").get<std::size_t>();
        const auto seed = doc.at("seed").get<std::uint64_t>();
        if (kind == "linear") {
            linear_model out{ vector_from(doc.at("w")), doc.at("b").get<double>(), vector_from(doc.at("w_b")), vector_from(doc.at("w_c")), gamma, m, seed, scaling, method };
            if (out.w.size() != scaling.minimum.size()) {
                throw data_error{ "model file: w and scaling dimensions differ" };
            }
            return out;
        }
        if (kind == "kernel") {
            const json &k = doc.at("kernel");
            kernel_spec spec{ parse_kernel_kind(k.at("kind").get<std::string>()), k.at("delta").get<double>(), k.at("cro_gamma").get<double>(), k.at("quadrature_nodes").get<int>() };
            kernel_model out{ vector_from(doc.at("A")), doc.at("c").get<double>(), vector_from(doc.at("A_b")), vector_from(doc.at("A_c")), matrix_from(doc.at("training_points"), scaling.minimum.size()), spec, gamma, m, seed, scaling, method };
            if (out.a.size() != out.training_points.rows()) {
                throw data_error{ "model file: A and training_points lengths differ" };
            }
            return out;
        }
        throw data_error{ "unknown model_kind '" + kind + "'" };
    } catch (const json::exception &e) {
        throw data_error{ std::string{ "malformed model file: " } + e.what() };
    } catch (const usage_error &e) {
        throw data_error{ std::string{ "malformed model file: " } + e.what() };
    }
}

void save_model(const std::filesystem::path &path, const model &model) {
    std::ofstream out{ path, std::ios::binary };
    if (!out) {
        throw data_error{ "cannot write '" + path.string() + "'" };
    }
    out << serialize_model(model);
}

model load_model(const std::filesystem::path &path) {
    std::ifstream in{ path, std::ios::binary };
    if (!in) {
        throw data_error{ "cannot open model '" + path.string() + "'" };
    }
    std::ostringstream text;
    text << in.rdbuf();
    return deserialize_model(text.str());
}

}  // namespace lugsi
