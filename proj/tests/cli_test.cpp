#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("polyimage_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

    std::string read(const std::string& name) const {
        std::ifstream in(path(name));
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    Outcome run(const std::string& args) const {
        std::string cmd = std::string(POLYIMAGE_CLI) + " " + args + " >" + path("stdout") + " 2>" + path("stderr");
        int status = std::system(cmd.c_str());
        Outcome r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = read("stdout");
        r.err = read("stderr");
        return r;
    }

    fs::path dir_;
};

const char* kWedge = R"({"dim":2,"constraints":[{"a":["0","-1"],"b":"0"},{"a":["1","-1"],"b":"0"},{"a":["-1","-1"],"b":"0"}]})";
const char* kHalf = R"({"dim":2,"constraints":[{"a":["-1","0"],"b":"0"}]})";
const char* kLayer = R"({"dim":2,"constraints":[{"a":["1","0"],"b":"0"},{"a":["-1","0"],"b":"1"}]})";

}  // namespace

TEST_F(Cli, HalfSpaceComplementIsSinglePolyMap) {
    write("half.json", kHalf);
    Outcome r = run("synthesize --input " + path("half.json") + " --target complement --out " + path("chain.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    auto chain = nlohmann::json::parse(read("chain.json"));
    ASSERT_EQ(chain.at("steps").size(), 1u);
    EXPECT_EQ(chain.at("steps")[0].at("kind"), "polymap");
    Outcome e = run("evaluate --chain " + path("chain.json") + " --point 0,0");
    EXPECT_EQ(e.code, 0);
    EXPECT_EQ(e.out.substr(0, 3), "1,0");
}

TEST_F(Cli, LayerExitsWithSynthesisError) {
    write("layer.json", kLayer);
    Outcome r = run("synthesize --input " + path("layer.json") + " --target interior-complement --out " + path("c.json"));
    EXPECT_EQ(r.code, 2);
    auto err = nlohmann::json::parse(r.err);
    EXPECT_EQ(err.at("error"), "LayerEncountered");
    EXPECT_TRUE(err.contains("detail"));
}

TEST_F(Cli, MalformedInputExitsWithValidationError) {
    write("bad.json", "{\"dim\": 2, \"constraints\": [{\"a\": [\"1/0\", \"1\"], \"b\": \"0\"}]}");
    Outcome r = run("synthesize --input " + path("bad.json") + " --target complement --out " + path("c.json"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("\"error\""), std::string::npos);
    write("junk.json", "not json");
    EXPECT_EQ(run("probe --poly " + path("junk.json")).code, 1);
    EXPECT_EQ(run("verify --mode nonsense --poly " + path("junk.json") + " --seed 1").code, 1);
}

TEST_F(Cli, SynthesisIsByteDeterministic) {
    write("wedge.json", kWedge);
    std::string base = "synthesize --input " + path("wedge.json") + " --target interior-complement";
    ASSERT_EQ(run(base + " --out " + path("a.json") + " --trace " + path("ta.json")).code, 0);
    ASSERT_EQ(run(base + " --out " + path("b.json") + " --trace " + path("tb.json")).code, 0);
    EXPECT_EQ(read("a.json"), read("b.json"));
    EXPECT_EQ(read("ta.json"), read("tb.json"));
}

TEST_F(Cli, ContainmentReportAndDeterminism) {
    write("wedge.json", kWedge);
    ASSERT_EQ(run("synthesize --input " + path("wedge.json") + " --target interior-complement --out " + path("c.json")).code, 0);
    std::string v = "verify --chain " + path("c.json") + " --poly " + path("wedge.json") +
                    " --mode containment --samples 2000 --seed 5 --report ";
    Outcome a = run(v + path("r1.json"));
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(run(v + path("r2.json")).code, 0);
    EXPECT_EQ(read("r1.json"), read("r2.json"));
    auto rep = nlohmann::json::parse(read("r1.json"));
    EXPECT_EQ(rep.at("violation_count"), 0);
    EXPECT_EQ(rep.at("samples_used"), 2000);
    EXPECT_FALSE(rep.contains("runtime_seconds"));
}

TEST_F(Cli, CorruptedChainFailsVerification) {
    write("wedge.json", kWedge);
    ASSERT_EQ(run("synthesize --input " + path("wedge.json") + " --target interior-complement --out " + path("c.json")).code, 0);
    auto chain = nlohmann::json::parse(read("c.json"));
    // Reflect the final image through the origin.
    nlohmann::json flip = {{"kind", "affine"},
                           {"label", "corruption"},
                           {"matrix", nlohmann::json::array({nlohmann::json::array({"-1", "0"}), nlohmann::json::array({"0", "-1"})})},
                           {"translation", nlohmann::json::array({"0", "0"})}};
    chain["steps"].push_back(flip);
    write("bad.json", chain.dump());
    Outcome r = run("verify --chain " + path("bad.json") + " --poly " + path("wedge.json") +
                " --mode containment --samples 500 --seed 1 --report " + path("r.json"));
    EXPECT_EQ(r.code, 3);
    auto rep = nlohmann::json::parse(read("r.json"));
    EXPECT_GT(rep.at("violation_count").get<int>(), 0);
    EXPECT_FALSE(rep.at("violations").empty());
}

TEST_F(Cli, ProbeClassifiesPoint) {
    write("wedge.json", kWedge);
    Outcome r = run("probe --poly " + path("wedge.json") + " --point 0,-1");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("region"), "inside");
    EXPECT_EQ(j.at("minimal").at("constraints").size(), 2u);
}

TEST_F(Cli, PlotDataWritesTaggedRows) {
    write("wedge.json", kWedge);
    ASSERT_EQ(run("synthesize --input " + path("wedge.json") + " --target interior-complement --out " + path("c.json")).code, 0);
    Outcome r = run("plot-data --chain " + path("c.json") + " --poly " + path("wedge.json") + " --samples 200 --seed 3 --out " +
                path("p.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    std::string csv = read("p.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,y,tag");
    EXPECT_NE(csv.find(",image"), std::string::npos);
    EXPECT_NE(csv.find(",boundary"), std::string::npos);
}

TEST_F(Cli, HelpExitsCleanly) { EXPECT_EQ(run("--help").code, 0); }
