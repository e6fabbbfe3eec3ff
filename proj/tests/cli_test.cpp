#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("sqa_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) {
        std::string cmd = std::string(SQA_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2> " +
                          (dir_ / "stderr.txt").string();
        int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string read(const std::string& name) const {
        std::ifstream in(dir_ / name);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateSolveEvaluate) {
    ASSERT_EQ(run("generate --seed 3 --stories 5 --config " + std::string(SQA_DATA_DIR) +
                  "/gen_config.json --out " + path("d.json")),
              0)
        << read("stderr.txt");
    for (std::string mode : {"gold", "parse"}) {
        ASSERT_EQ(run("solve --dataset " + path("d.json") + " --mode " + mode + " --trace --out " + path("p.json")), 0)
            << read("stderr.txt");
        ASSERT_EQ(run("eval --pred " + path("p.json") + " --dataset " + path("d.json") + " --by-hops --report " +
                      path("r.json")),
                  0)
            << read("stderr.txt");
        auto report = nlohmann::json::parse(read("r.json"));
        EXPECT_EQ(report["yn_accuracy"], 1.0) << mode;
        EXPECT_EQ(report["fr_exact_accuracy"], 1.0) << mode;
    }
}

TEST_F(Cli, SolveWithLexiconFiles) {
    ASSERT_EQ(run("generate --seed 4 --stories 2 --out " + path("d.json")), 0);
    EXPECT_EQ(run("solve --dataset " + path("d.json") + " --mode parse --lexicon " + std::string(SQA_DATA_DIR) +
                  "/relations.tsv --attributes " + std::string(SQA_DATA_DIR) + "/attributes.json --out " +
                  path("p.json")),
              0)
        << read("stderr.txt");
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("solve --dataset x.json"), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run("solve --dataset " + path("none.json") + " --mode sideways --out " + path("p.json")), 1);
}

TEST_F(Cli, DataErrors) {
    EXPECT_EQ(run("solve --dataset " + path("missing.json") + " --out " + path("p.json")), 2);
    write("bad.json", "{ not json");
    EXPECT_EQ(run("solve --dataset " + path("bad.json") + " --out " + path("p.json")), 2);
    write("cfg.json", R"({"near_threshold": 9, "far_threshold": 3})");
    EXPECT_EQ(run("generate --stories 1 --config " + path("cfg.json") + " --out " + path("d.json")), 2);
}

TEST_F(Cli, EvalIdMismatch) {
    ASSERT_EQ(run("generate --seed 1 --stories 2 --out " + path("d.json")), 0);
    write("p.json", R"({"predictions": []})");
    EXPECT_EQ(run("eval --pred " + path("p.json") + " --dataset " + path("d.json") + " --report " + path("r.json")),
              2);
}

TEST_F(Cli, ClosureQuery) {
    write("f.json", R"([{"subject": "car", "relation": "FRONT", "object": "house"}])");
    ASSERT_EQ(run("closure --facts " + path("f.json") + " --trace --query 'BEHIND(house,car)'"), 0)
        << read("stderr.txt");
    auto out = nlohmann::json::parse(read("stdout.txt"));
    EXPECT_EQ(out["query"]["answer"], "True");
    EXPECT_EQ(out["positive"].size(), 2u);
    EXPECT_EQ(out["negative"].size(), 2u);
    ASSERT_EQ(run("closure --facts " + path("f.json") + " --query 'BEHIND(car,house)'"), 0);
    EXPECT_EQ(nlohmann::json::parse(read("stdout.txt"))["query"]["answer"], "False");
}

TEST_F(Cli, ClosureContradiction) {
    write("f.json", R"([{"subject": "a", "relation": "LEFT", "object": "b"},
                        {"subject": "a", "relation": "RIGHT", "object": "b"}])");
    EXPECT_EQ(run("closure --facts " + path("f.json")), 3);
    write("self.json", R"([{"subject": "a", "relation": "LEFT", "object": "a"}])");
    EXPECT_EQ(run("closure --facts " + path("self.json")), 2);
    EXPECT_EQ(run("closure --facts " + path("self.json") + " --query 'nonsense'"), 2);
}
