#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <sys/wait.h>

#include "ras/error.hpp"
#include "ras_cli/commands.hpp"
#include "ras_cli/io.hpp"

namespace fs = std::filesystem;
using namespace ras;
using namespace ras::cli;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(RAS_TOOL_PATH) + " " + args + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  RunResult r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), int(buf.size()), pipe.get()) != nullptr) r.out += buf.data();
  const int status = pclose(pipe.release());
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("ras_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }
  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

const fs::path kData = RAS_TEST_DATA_DIR;

}  // namespace

TEST_F(CliTest, PiCsvRoundTrip) {
  Eigen::MatrixXd m(2, 3);
  m << 0.1, 0.2, 0.7, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0;
  const ChoiceDataset pi(m, {}, {"early", "late"});
  write_pi_csv(path("pi.csv"), {"a", "b", "c"}, pi);
  const PiTable back = read_pi_csv(path("pi.csv"));
  EXPECT_EQ(back.items, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(back.data.pi(), m);
  EXPECT_EQ(back.data.period_labels(), (std::vector<std::string>{"early", "late"}));

  const PiTable counted = with_counts(back, {12, 30});
  write_counts_csv(path("counts.csv"), counted.data);
  EXPECT_EQ(read_counts_csv(path("counts.csv"), counted.data.period_labels()), (std::vector<double>{12, 30}));
}

TEST_F(CliTest, MalformedPiCsv) {
  write("bad.csv", "period,a,b\n1,0.5,0.6\n");
  EXPECT_THROW(read_pi_csv(path("bad.csv")), std::exception);
  write("short.csv", "period,a,b\n1,0.5\n");
  EXPECT_THROW(read_pi_csv(path("short.csv")), ConfigError);
  EXPECT_THROW(read_pi_csv(path("missing.csv")), ConfigError);
}

TEST_F(CliTest, RawCsvRoundTrip) {
  const std::vector<RawObservation> rows = {{"r1", 0.0, "a"}, {"r2", 2.5, "b"}};
  write_raw_csv(path("raw.csv"), rows);
  const auto back = read_raw_csv(path("raw.csv"));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].respondent_id, "r2");
  EXPECT_EQ(back[1].stopping_time, 2.5);
  EXPECT_EQ(back[1].choice, "b");
}

TEST_F(CliTest, LotteriesFileMatchesBuiltIn) {
  const LotterySet file = read_lotteries_json(kData / "lotteries.json");
  const LotterySet built = experiment_lotteries();
  ASSERT_EQ(file.lotteries.size(), built.lotteries.size());
  EXPECT_EQ(file.outside, built.outside);
  for (std::size_t i = 0; i < file.lotteries.size(); ++i) {
    EXPECT_EQ(file.lotteries[i].label, built.lotteries[i].label);
    EXPECT_EQ(file.lotteries[i].outcomes, built.lotteries[i].outcomes);
  }
}

TEST_F(CliTest, GenerateTopNThenSurvive) {
  write("topn.json", R"({"items": ["a", "b", "c", "d"], "periods": 4,
                         "orderings": [["c", "a", "d", "b"]], "search_order": ["d", "b", "a", "c"]})");
  const RunResult gen = run("generate --model topn --config " + path("topn.json").string() + " --out " +
                            path("pi.csv").string());
  ASSERT_EQ(gen.exit_code, 0);
  const RunResult surv = run("--json survive --no-never-chosen --pi " + path("pi.csv").string());
  ASSERT_EQ(surv.exit_code, 0);
  const auto j = nlohmann::json::parse(surv.out);
  EXPECT_EQ(j.at("schema_version"), kSchemaVersion);
  bool found = false;
  for (const auto& s : j.at("survivors")) found = found || s.get<std::vector<std::string>>() == std::vector<std::string>{"c", "a", "d", "b"};
  EXPECT_TRUE(found);
}

TEST_F(CliTest, GenerateModelsProduceMonotoneRules) {
  write("mm.json", R"({"items": ["a", "b", "o"], "outside": "o", "periods": 2,
                       "orderings": [["a", "b", "o"], ["b", "a", "o"]], "p": [0.4, 0.6],
                       "gamma": [[0.2, 0.5, 1.0], [0.6, 0.7, 1.0]], "counts": 100})");
  GenerateArgs args{"mm", path("mm.json"), path("mm.csv"), path("mm_counts.csv"), path("mm_rule.csv")};
  const CommandOutput out = cmd_generate(args);
  EXPECT_TRUE(out.json.at("monotone").get<bool>());
  EXPECT_TRUE(fs::exists(path("mm_rule.csv")));
  const PiTable table = read_pi_csv(path("mm.csv"));
  EXPECT_EQ(read_counts_csv(path("mm_counts.csv"), table.data.period_labels()), (std::vector<double>{100, 100}));

  write("sat.json", R"({"items": ["x", "y", "z"], "periods": 3, "utilities": [1.0, 0.5, 0.0],
                        "draws": 2000, "seed": 3})");
  EXPECT_TRUE(cmd_generate({"satisficing", path("sat.json"), path("sat.csv"), {}, {}}).json.at("monotone").is_boolean());

  write("dif.json", R"({"items": ["a", "b", "o"], "outside": "o", "periods": 3, "drifts": [0.5, 1.0, 0.0],
                        "sigma": 1.0, "thresholds": [[2.0, 2.0, 0.0], [1.5, 2.0, 0.0], [1.0, 2.0, 0.0]]})");
  EXPECT_TRUE(cmd_generate({"diffusion", path("dif.json"), path("dif.csv"), {}, {}}).json.at("monotone").get<bool>());
}

TEST_F(CliTest, EstimateTable2) {
  EstimateArgs args;
  args.pi = kData / "table2_pi.csv";
  args.sims = 50;
  args.seed = 1;
  const CommandOutput out = cmd_estimate(args);
  const auto p = out.json.at("p_hat").get<std::vector<double>>();
  ASSERT_EQ(p.size(), 6u);
  double total = 0.0;
  for (double x : p) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(out.json.at("consideration_sets"), 32);
  EXPECT_TRUE(out.json.at("outside_mode").get<bool>());

  args.ordering.no_outside = true;
  const CommandOutput robust = cmd_estimate(args);
  EXPECT_EQ(robust.json.at("consideration_sets"), 63);
  EXPECT_FALSE(robust.json.at("outside_mode").get<bool>());
}

TEST_F(CliTest, CrraTableCommand) {
  const RunResult r = run("--json crra-table");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.at("intervals").size(), 6u);
  EXPECT_EQ(j.at("intervals")[0].at("ordering").get<std::vector<std::string>>(),
            (std::vector<std::string>{"l1", "l4", "l3", "l5", "l2"}));
}

TEST_F(CliTest, ClusterCommand) {
  write("raw.csv", "respondent_id,stopping_time,choice\n1,0,a\n2,1,b\n3,1,a\n4,10,b\n5,10,b\n");
  const RunResult r = run("--json cluster --periods 3 --input " + path("raw.csv").string() + " --out " +
                          path("pi.csv").string() + " --counts-out " + path("counts.csv").string());
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("period_counts").get<std::vector<double>>(), (std::vector<double>{1, 2, 2}));
  const PiTable table = read_pi_csv(path("pi.csv"));
  EXPECT_EQ(table.data(1, 0), 0.5);
}

TEST_F(CliTest, JsonOutFile) {
  ASSERT_EQ(run("crra-table --json-out " + path("t.json").string()).exit_code, 0);
  EXPECT_EQ(read_json(path("t.json")).at("intervals").size(), 6u);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("").exit_code, 1);
  EXPECT_EQ(run("estimate").exit_code, 1);
  EXPECT_EQ(run("generate --model nope --config x --out y").exit_code, 1);
  write("bad.csv", "period,a,b\n1,0.5,0.6\n");
  EXPECT_EQ(run("survive --pi " + path("bad.csv").string()).exit_code, 1);
  EXPECT_EQ(run("estimate --sims 0 --pi " + (kData / "table2_pi.csv").string()).exit_code, 1);
  EXPECT_EQ(run("--help").exit_code, 0);
}
