#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "camdp/chain.hpp"
#include "camdp/eval.hpp"
#include "camdp/policy.hpp"
#include "cli.hpp"
#include "json.hpp"

using namespace camdp;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("camdp_cli_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ExampleThenValidate) {
  const auto model = path("example_model.json");
  EXPECT_EQ(run({"example", "--out", model}).code, 0);
  const auto v = run({"validate", "--model", model});
  EXPECT_EQ(v.code, 0) << v.err;
  EXPECT_NE(v.out.find("ok"), std::string::npos);
  EXPECT_EQ(slurp(model), slurp(fs::path(CAMDP_DATA_DIR) / "example_model.json"));
}

TEST_F(Cli, EvalPrintsValuesAndGain) {
  const auto csv = path("v.csv");
  const auto r = run({"eval", "--model", std::string(CAMDP_DATA_DIR) + "/example_model.json",
                      "--policy", "0000:1100", "--csv", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("gain 0.00417741"), std::string::npos) << r.out;
  const auto m = example_model();
  const auto v = evaluate_direct(induced_chain(m, parse_policy_literal(m, "0000:1100")), m.gamma)
                     .values;
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "state_index,s0,ss,s1,value");
  int n = 0;
  while (std::getline(in, line)) {
    const double value = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_EQ(value, v(n));
    ++n;
  }
  EXPECT_EQ(n, 8);
}

TEST_F(Cli, ValidateNamesTheBadRow) {
  const auto model = path("bad.json");
  run({"example", "--out", model});
  auto doc = nlohmann::json::parse(slurp(model));
  doc["P0"][0][1] = {0.5, 0.4};
  std::ofstream(model) << doc.dump();
  const auto r = run({"validate", "--model", model});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("P0[0][1]"), std::string::npos) << r.err;
  EXPECT_EQ(run({"eval", "--model", model}).code, 1);
}

TEST_F(Cli, MissingFieldIsNamed) {
  const auto model = path("missing.json");
  run({"example", "--out", model});
  auto doc = nlohmann::json::parse(slurp(model));
  doc.erase("Rs");
  std::ofstream(model) << doc.dump();
  const auto r = run({"validate", "--model", model});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'Rs'"), std::string::npos) << r.err;
}

TEST_F(Cli, CoadaptExitCodes) {
  EXPECT_EQ(run({"coadapt"}).code, 2);
  EXPECT_EQ(run({"coadapt", "--agent0", "pialike:0.1:1", "--agent1", "pialike:0.1:1",
                 "--max-iters", "5"})
                .code,
            3);
  const auto r = run({"coadapt", "--agent0", "pialike:0.1:1", "--agent1", "pialike:0.1:1",
                      "--max-iters", "400"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("status converged"), std::string::npos);
  EXPECT_EQ(run({"coadapt", "--schedule", "alternating"}).code, 0);
  EXPECT_EQ(run({"coadapt", "--agent0", "bogus"}).code, 1);
}

TEST_F(Cli, CsvIsByteIdenticalAcrossRuns) {
  for (const auto& cmd : std::vector<std::vector<std::string>>{
           {"coadapt"}, {"enumerate"}, {"eta-scan", "--points", "5"}, {"eval"}}) {
    auto a = cmd, b = cmd;
    a.insert(a.end(), {"--csv", path("a.csv")});
    b.insert(b.end(), {"--csv", path("b.csv")});
    run(a);
    run(b);
    EXPECT_FALSE(slurp(path("a.csv")).empty());
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv"))) << cmd[0];
  }
}

TEST_F(Cli, EnumerateCsv) {
  const auto r = run({"enumerate", "--csv", path("e.csv")});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("best [0 0 0 0][1 1 0 0] (No.13)"), std::string::npos) << r.out;
  std::istringstream in(slurp(path("e.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "policy_no,pi0,pi1,value");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("1,0000,0000,", 0), 0u);
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 256);
}

TEST_F(Cli, CalibrateReport) {
  const auto r = run({"calibrate", "--report", path("c.json")});
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(slurp(path("c.json")));
  EXPECT_EQ(doc["best"]["reward_mode"], "product");
  EXPECT_TRUE(doc["best"]["ordering_matches"].get<bool>());
  EXPECT_EQ(nlohmann::json::parse(run({"calibrate"}).out), doc);
}

TEST_F(Cli, ImproveShowsAdvantages) {
  const auto r = run({"improve", "--policy", "1111:1100", "--agent", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("old 1111"), std::string::npos);
  EXPECT_NE(r.out.find("new 0000"), std::string::npos) << r.out;
  const auto never = run({"improve", "--policy", "1111:1100", "--mode", "revised", "--eta", "1"});
  EXPECT_NE(never.out.find("new 1111  (stable)"), std::string::npos) << never.out;
  EXPECT_EQ(run({"improve", "--agent", "2"}).code, 1);
  EXPECT_EQ(run({"improve", "--mode", "fast"}).code, 1);
}

TEST_F(Cli, SeededRandomModels) {
  run({"example", "--random", "--seed", "5", "--out", path("r1.json")});
  run({"example", "--random", "--seed", "5", "--out", path("r2.json")});
  run({"example", "--random", "--seed", "6", "--out", path("r3.json")});
  EXPECT_EQ(slurp(path("r1.json")), slurp(path("r2.json")));
  EXPECT_NE(slurp(path("r1.json")), slurp(path("r3.json")));
  EXPECT_EQ(run({"enumerate", "--seed", "5"}).out,
            run({"enumerate", "--model", path("r1.json")}).out);
}

TEST_F(Cli, GlobalOverrides) {
  const auto r = run({"eval", "--gamma", "0.5", "--reward-mode", "sum"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("gamma=0.5  reward_mode=sum"), std::string::npos) << r.out;
  EXPECT_EQ(run({"eval", "--gamma", "1"}).code, 1);
  EXPECT_EQ(run({"eval", "--reward-mode", "max"}).code, 1);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"eval", "--policy", "12"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}
