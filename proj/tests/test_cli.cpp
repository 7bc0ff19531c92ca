#include "lugsi/dataset.hpp"
#include "lugsi/model_io.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace lugsi;

namespace {

struct run_result {
    int code;
    std::string output;
};

run_result run(const std::string &args) {
    const std::string command = std::string{ LUGSI_CLI_PATH } + " " + args + " 2>&1";
    FILE *pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        return { -1, "" };
    }
    std::string output;
    std::array<char, 4096> buffer{};
    while (const std::size_t n = std::fread(buffer.data(), 1, buffer.size(), pipe)) {
        output.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    return { WIFEXITED(status) ? WEXITSTATUS(status) : -1, output };
}

std::string slurp(const fs::path &path) {
    std::ifstream in{ path, std::ios::binary };
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in{ text };
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("lugsi_cli_" + std::string{ ::testing::UnitTest::GetInstance()->current_test_info()->name() });
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        split_mix64 rng{ 5 };
        write_csv(path("data.csv"), oracle::random_dataset(rng, 60, 3));
    }
    void TearDown() override { fs::remove_all(dir_); }

    [[nodiscard]] std::string path(const std::string &name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, TrainIsDeterministic) {
    const std::string args = "train --data " + path("data.csv") + " --header --clusters 4 --seed 3 --cost 8 --out ";
    const auto a = run(args + path("a.json"));
    const auto b = run(args + path("b.json"));
    ASSERT_EQ(a.code, 0) << a.output;
    ASSERT_EQ(b.code, 0) << b.output;
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    EXPECT_NE(a.output.find("gradient_norm"), std::string::npos);
    EXPECT_NE(a.output.find("training_accuracy"), std::string::npos);
}

TEST_F(Cli, ZeroClustersIsAUsageError) {
    const auto r = run("train --data " + path("data.csv") + " --header --clusters 0 --out " + path("m.json"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("m must be ≥ 1"), std::string::npos) << r.output;
    EXPECT_FALSE(fs::exists(path("m.json")));
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("train --bogus").code, 2);
    EXPECT_EQ(run("train --data " + path("missing.csv") + " --out " + path("m.json")).code, 3);
    EXPECT_EQ(run("train --data " + path("data.csv") + " --header --out " + path("nodir/m.json")).code, 2);
    EXPECT_EQ(run("train --data " + path("data.csv") + " --header --gamma 1 --cost 1 --out " + path("m.json")).code, 2);
    std::ofstream{ path("bad.csv") } << "0.1,0.2,7\n";
    EXPECT_EQ(run("train --data " + path("bad.csv") + " --out " + path("m.json")).code, 3);
    EXPECT_EQ(run("train --data " + path("data.csv") + " --header --kernel rbf --dense-cap 10 --out " + path("m.json")).code, 4);
}

TEST_F(Cli, PredictRoundTrip) {
    ASSERT_EQ(run("train --data " + path("data.csv") + " --header --kernel rbf --delta 0.5 -m 5 --out " + path("m.json")).code, 0);
    const auto r = run("predict --data " + path("data.csv") + " --header --model " + path("m.json") + " --out " + path("p.csv"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto rows = lines_of(slurp(path("p.csv")));
    ASSERT_EQ(rows.size(), 62U);
    EXPECT_EQ(rows[0].rfind("# lugsi predict", 0), 0U);
    EXPECT_EQ(rows[1], "index,decision_value,label");

    const model m = load_model(path("m.json"));
    const dataset d = load_csv(path("data.csv"), { true, std::nullopt });
    const vector f = decision_values(m, apply_scaling(d.features(), model_scaling(m)));
    for (std::size_t i = 0; i < 60; ++i) {
        std::istringstream row{ rows[i + 2] };
        std::string index;
        std::string value;
        std::string label;
        std::getline(row, index, ',');
        std::getline(row, value, ',');
        std::getline(row, label, ',');
        EXPECT_EQ(std::stoul(index), i);
        EXPECT_EQ(std::stod(value), f(static_cast<Eigen::Index>(i)));
        EXPECT_EQ(std::stoi(label), label_from_decision(f(static_cast<Eigen::Index>(i))));
    }
}

TEST_F(Cli, AllOnesModelPredictsOne) {
    matrix x(5, 2);
    x << 0, 0, 1, 1, 0.5, 0.2, 0.3, 0.9, 0.7, 0.4;
    write_csv(path("ones.csv"), dataset{ x, vector::Ones(5) });
    ASSERT_EQ(run("train --data " + path("ones.csv") + " --header -m 2 --out " + path("m.json")).code, 0);
    ASSERT_EQ(run("predict --data " + path("ones.csv") + " --header --model " + path("m.json") + " --out " + path("p.csv")).code, 0);
    const auto rows = lines_of(slurp(path("p.csv")));
    for (std::size_t i = 2; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].back(), '1') << rows[i];
    }
}

TEST_F(Cli, PredictDimensionMismatch) {
    ASSERT_EQ(run("train --data " + path("data.csv") + " --header -m 3 --out " + path("m.json")).code, 0);
    matrix x(3, 2);
    x.setConstant(0.5);
    vector y(3);
    y << 0, 1, 0;
    write_csv(path("narrow.csv"), dataset{ x, y });
    const auto r = run("predict --data " + path("narrow.csv") + " --header --model " + path("m.json") + " --out " + path("p.csv"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("dimension mismatch"), std::string::npos);
}

TEST_F(Cli, CvSingleConfiguration) {
    const auto r = run("cv --data " + path("data.csv") + " --header --c-values 4 --m-values 5 --folds 3 --seed 1 --with-predictions --report " + path("r.json") + " --plot " + path("r.csv"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto doc = nlohmann::json::parse(slurp(path("r.json")));
    ASSERT_EQ(doc["results"].size(), 1U);
    EXPECT_EQ(doc["results"][0]["folds"].size(), 3U);
    EXPECT_EQ(doc["best"]["m"], 5);
    EXPECT_EQ(lines_of(slurp(path("r.csv"))).size(), 2U + 3U);
    EXPECT_NE(r.output.find("best_mean_accuracy"), std::string::npos);
}

TEST_F(Cli, CvOutputsAreByteIdenticalAcrossRuns) {
    const std::string args = "cv --data " + path("data.csv") + " --header --kernel rbf --c-values 1,16 --delta-values 0.5,2 --m-values 1,7 --folds 3 --threads 2 --with-predictions";
    ASSERT_EQ(run(args + " --report " + path("a.json") + " --plot " + path("a.csv")).code, 0);
    ASSERT_EQ(run(args + " --report " + path("a2.json") + " --plot " + path("a2.csv")).code, 0);
    // The header line carries the argv, so compare everything after it.
    const auto strip = [](const std::string &s) { return s.substr(s.find('\n') + 1); };
    EXPECT_EQ(strip(slurp(path("a.csv"))), strip(slurp(path("a2.csv"))));
    auto a = nlohmann::json::parse(slurp(path("a.json")));
    auto b = nlohmann::json::parse(slurp(path("a2.json")));
    a.erase("config");
    b.erase("config");
    EXPECT_EQ(a.dump(), b.dump());
}

TEST_F(Cli, BenchSizeSweep) {
    const auto r = run("bench --sizes 200,400,800 --features 4 -m 5 --repeats 1 --out " + path("b.csv"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto rows = lines_of(slurp(path("b.csv")));
    ASSERT_EQ(rows.size(), 5U);
    EXPECT_EQ(rows[1], "l,granulate_seconds,assembly_seconds,fit_seconds,v_matrix_seconds,training_accuracy");
    EXPECT_EQ(rows[2].substr(0, 4), "200,");
}

TEST_F(Cli, BenchClusterSweep) {
    const auto r = run("bench --data " + path("data.csv") + " --header --m-values 1,3,9 --folds 3 --out " + path("s.csv"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto rows = lines_of(slurp(path("s.csv")));
    ASSERT_EQ(rows.size(), 5U);
    EXPECT_EQ(rows[1], "m,accuracy,std_accuracy,train_seconds");
}

TEST_F(Cli, GranulateEmitsV) {
    const auto r = run("granulate --data " + path("data.csv") + " --header -m 4 --out " + path("g.csv") + " --emit-v " + path("v.csv") + " --centroids " + path("c.csv"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto g = lines_of(slurp(path("g.csv")));
    const auto v = lines_of(slurp(path("v.csv")));
    ASSERT_EQ(g.size(), 62U);
    ASSERT_EQ(v.size(), 62U);
    EXPECT_EQ(v[1], "index,granule,v");
    for (std::size_t i = 2; i < v.size(); ++i) {
        const double value = std::stod(v[i].substr(v[i].rfind(',') + 1));
        EXPECT_GE(value, 0.0);
        EXPECT_LE(value, 1.0);
        EXPECT_EQ(v[i].substr(0, v[i].rfind(',')), g[i]);
    }
    EXPECT_EQ(lines_of(slurp(path("c.csv"))).size(), 2U + 1U + 4U);
}
