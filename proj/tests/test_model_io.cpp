#include "lugsi/error.hpp"
#include "lugsi/granulation.hpp"
#include "lugsi/invariants.hpp"
#include "lugsi/model_io.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

using namespace lugsi;

namespace {

dataset sample(std::uint64_t seed) {
    split_mix64 rng{ seed };
    return oracle::random_dataset(rng, 30, 3);
}

std::filesystem::path temp_file(const std::string &name) {
    const auto dir = std::filesystem::temp_directory_path() / "lugsi_model_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(ModelIo, LinearRoundTripIsBitwise) {
    const dataset d = sample(1);
    const granulation g = kmeans_granulate(d, 4, 9);
    auto fit = fit_linear_lugsi(d, g, granule_v_vectors(d, g, measure_spec::uniform()), 0.013);
    fit.model.scaling = { vector::Constant(3, -0.1), vector::Constant(3, 2.0 / 3.0) };
    const model original{ fit.model };
    const auto path = temp_file("linear.json");
    save_model(path, original);
    const model loaded = load_model(path);
    ASSERT_TRUE(std::holds_alternative<linear_model>(loaded));
    const auto &a = std::get<linear_model>(original);
    const auto &b = std::get<linear_model>(loaded);
    EXPECT_EQ(a.w, b.w);
    EXPECT_EQ(a.b, b.b);
    EXPECT_EQ(a.w_b, b.w_b);
    EXPECT_EQ(a.w_c, b.w_c);
    EXPECT_EQ(a.gamma, b.gamma);
    EXPECT_EQ(a.m, b.m);
    EXPECT_EQ(a.seed, b.seed);
    EXPECT_EQ(a.scaling, b.scaling);
    EXPECT_EQ(a.method, b.method);
    EXPECT_EQ(serialize_model(original), serialize_model(loaded));
}

TEST(ModelIo, KernelRoundTripIsBitwise) {
    const dataset d = sample(2);
    const granulation g = kmeans_granulate(d, 3, 0);
    for (const auto &kernel : { kernel_spec::rbf(0.37), kernel_spec::cro(0.8, 32), kernel_spec::linear() }) {
        const model original{ fit_kernel_lugsi(d, g, granule_v_vectors(d, g, measure_spec::uniform()), kernel, 0.2).model };
        const model loaded = deserialize_model(serialize_model(original));
        ASSERT_TRUE(std::holds_alternative<kernel_model>(loaded));
        const auto &a = std::get<kernel_model>(original);
        const auto &b = std::get<kernel_model>(loaded);
        EXPECT_EQ(a.a, b.a);
        EXPECT_EQ(a.c, b.c);
        EXPECT_EQ(a.training_points, b.training_points);
        EXPECT_EQ(a.kernel.type, b.kernel.type);
        EXPECT_EQ(a.kernel.delta, b.kernel.delta);
        EXPECT_EQ(a.kernel.cro_gamma, b.kernel.cro_gamma);
        EXPECT_EQ(a.kernel.quadrature_nodes, b.kernel.quadrature_nodes);
        EXPECT_EQ(decision_values(original, d.features()), decision_values(loaded, d.features()));
    }
}

TEST(ModelIo, BaselineMethodSurvives) {
    const model original{ fit_lssvm(sample(3), 0.5).model };
    const model loaded = deserialize_model(serialize_model(original));
    EXPECT_EQ(std::get<linear_model>(loaded).method, fit_method::lssvm);
}

TEST(ModelIo, RejectsOtherVersions) {
    auto doc = nlohmann::json::parse(serialize_model(model{ fit_lssvm(sample(4), 1.0).model }));
    doc["format_version"] = 2;
    try {
        (void)deserialize_model(doc.dump());
        FAIL() << "expected data_error";
    } catch (const data_error &e) {
        EXPECT_NE(std::string{ e.what() }.find("format_version 2"), std::string::npos) << e.what();
    }
}

TEST(ModelIo, RejectsMalformedDocuments) {
    EXPECT_THROW((void)deserialize_model("not json"), data_error);
    EXPECT_THROW((void)deserialize_model("{}"), data_error);
    auto doc = nlohmann::json::parse(serialize_model(model{ fit_lssvm(sample(5), 1.0).model }));
    doc["model_kind"] = "tree";
    EXPECT_THROW((void)deserialize_model(doc.dump()), data_error);
    EXPECT_THROW((void)load_model(temp_file("does_not_exist.json")), data_error);
}
