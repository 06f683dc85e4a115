#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gridsim/cli.hpp"

using namespace gridsim;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("gridsim_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out_dir() const { return dir_.string(); }
  fs::path dir_;
};

}  // namespace

TEST(ParseSeeds, RangesAndLists) {
  EXPECT_EQ(cli::parse_seeds("1..3"), (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(cli::parse_seeds("4,1..2"), (std::vector<std::uint64_t>{4, 1, 2}));
  EXPECT_THROW(cli::parse_seeds("3..1"), ParseError);
  EXPECT_THROW(cli::parse_seeds("1,1"), ParseError);
  EXPECT_THROW(cli::parse_seeds("a"), ParseError);
}

TEST_F(CliTest, MetricsCase3) {
  auto r = invoke({"metrics", "--case", "3", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir_ / "metrics" / "rankings.csv");
  auto rows = io::read_rankings(in);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0].metric, "betweenness");
  EXPECT_EQ(rows[0].members, (std::vector<std::string>{"6", "10"}));
  EXPECT_TRUE(fs::exists(dir_ / "metrics" / "node_metrics.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "metrics" / "edge_metrics.csv"));
  EXPECT_NE(r.out.find("(6, 10)"), std::string::npos);
}

TEST_F(CliTest, MetricsFromFile) {
  auto topo = dir_ / "tiny.topo";
  std::ofstream(topo) << "node s sink\nnode r1 router\nnode r2 router\nnode g generator\n"
                         "edge s r1\nedge r1 r2\nedge r2 g\n";
  auto r = invoke({"metrics", "--topology", topo.string(), "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir_ / "metrics" / "node_metrics.csv");
  auto rows = io::read_node_metrics(in);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].id, "r1");
  EXPECT_NEAR(rows[1].betweenness, 2.0 / 3.0, 1e-12);
}

TEST_F(CliTest, MissingTopologyFails) {
  auto r = invoke({"metrics", "--topology", (dir_ / "absent.topo").string(), "--out", out_dir()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("absent.topo"), std::string::npos);
}

TEST_F(CliTest, MalformedTopologyReportsLine) {
  auto topo = dir_ / "bad.topo";
  std::ofstream(topo) << "node s sink\nnode r router\nlink s r\n";
  auto r = invoke({"metrics", "--topology", topo.string(), "--out", out_dir()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, DirectedEccentricityIsX) {
  auto r = invoke({"metrics", "--case", "1", "--directed", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(" X "), std::string::npos);
  EXPECT_NE(slurp(dir_ / "metrics" / "node_metrics.csv").find(",X,"), std::string::npos);
}

TEST_F(CliTest, SimulateDosMarksTargetInEverySeed) {
  auto r = invoke({"simulate", "--case", "1", "--scenario", "dos:5", "--seeds", "1,2,3", "--duration", "200",
                "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (int seed = 1; seed <= 3; ++seed) {
    auto run = dir_ / "runs" / "dos-5" / std::to_string(seed);
    std::ifstream in(run / "summary.csv");
    auto rows = io::read_summary(in);
    ASSERT_EQ(rows.size(), 18u);
    for (const auto& row : rows) EXPECT_EQ(row.attacked, row.router == "5");
    std::ifstream acc(run / "accounting.csv");
    EXPECT_TRUE(io::read_accounting(acc).conserved());
    EXPECT_TRUE(fs::exists(run / "timeseries.csv"));
  }
}

TEST_F(CliTest, SimulateDdosAndStable) {
  auto r = invoke({"simulate", "--case", "3", "--scenario", "ddos:2,6", "stable", "--seed", "7", "--duration",
                "100", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir_ / "runs" / "ddos-2-6" / "7" / "summary.csv");
  for (const auto& row : io::read_summary(in)) EXPECT_EQ(row.attacked, row.router == "2" || row.router == "6");
  EXPECT_TRUE(fs::exists(dir_ / "runs" / "stable" / "7" / "summary.csv"));
}

TEST_F(CliTest, SimulateIsByteDeterministic) {
  const std::vector<std::string> base{"simulate", "--case", "2", "--scenario", "dos:3", "--seeds", "1..2",
                                      "--duration", "150", "--jobs", "2", "--out"};
  auto a = base, b = base;
  a.push_back((dir_ / "a").string());
  b.push_back((dir_ / "b").string());
  ASSERT_EQ(invoke(a).code, 0);
  ASSERT_EQ(invoke(b).code, 0);
  for (auto file : {"timeseries.csv", "summary.csv", "accounting.csv"}) {
    auto pa = dir_ / "a" / "runs" / "dos-3" / "2" / file;
    auto pb = dir_ / "b" / "runs" / "dos-3" / "2" / file;
    EXPECT_FALSE(slurp(pa).empty());
    EXPECT_EQ(slurp(pa), slurp(pb)) << file;
  }
}

TEST_F(CliTest, SimulateRejectsUnknownTarget) {
  auto r = invoke({"simulate", "--case", "1", "--scenario", "dos:77", "--out", out_dir()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("77"), std::string::npos);
}

TEST_F(CliTest, CompareKZeroIsUsageError) {
  auto r = invoke({"compare", "--case", "2", "--k", "0", "--out", out_dir()});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, CompareCase2ExcludesSinkNeighbours) {
  auto r = invoke({"compare", "--case", "2", "--seeds", "1..2", "--duration", "300", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1 (sink-adjacent)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("2 (sink-adjacent)"), std::string::npos);
  std::ifstream in(dir_ / "compare" / "delay_ranking.csv");
  for (const auto& row : io::read_rankings(in))
    for (const auto& m : row.members) EXPECT_TRUE(m != "1" && m != "2");
  EXPECT_EQ(slurp(dir_ / "compare" / "report.txt"), r.out);
}

TEST_F(CliTest, CompareCase3TopTwoRows) {
  auto r = invoke({"compare", "--case", "3", "--k", "2", "--seeds", "1", "--duration", "200", "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir_ / "compare" / "comparison.csv");
  auto rows = io::read_comparison(in);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& row : rows) EXPECT_EQ(row.k, 2u);
}

TEST_F(CliTest, CompareDirectedOmitsEccentricity) {
  auto r = invoke({"compare", "--case", "3", "--k", "2", "--directed", "--seeds", "1", "--duration", "100",
                "--out", out_dir()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir_ / "compare" / "comparison.csv");
  EXPECT_EQ(io::read_comparison(in).size(), 3u);
  EXPECT_NE(r.out.find("eccentricity: X"), std::string::npos);
}

TEST_F(CliTest, CompareReusesStoredRuns) {
  ASSERT_EQ(invoke({"simulate", "--case", "3", "--seeds", "1..2", "--duration", "100", "--out", out_dir()}).code, 0);
  auto fresh = invoke({"compare", "--case", "3", "--k", "2", "--seeds", "1..2", "--duration", "100", "--out",
                    out_dir()});
  auto reused = invoke({"compare", "--case", "3", "--k", "2", "--seeds", "1..2", "--reuse-runs", "--out", out_dir()});
  ASSERT_EQ(reused.code, 0) << reused.err;
  EXPECT_EQ(fresh.out, reused.out);
  auto wrong = invoke({"compare", "--case", "2", "--seeds", "1..2", "--reuse-runs", "--out", out_dir()});
  EXPECT_EQ(wrong.code, 1);
}

TEST(CliUsage, UnknownFlagAndNoSubcommand) {
  EXPECT_EQ(invoke({"metrics", "--case", "9"}).code, 2);
  EXPECT_EQ(invoke({"metrics", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  auto cases = invoke({"cases"});
  EXPECT_EQ(cases.code, 0);
  EXPECT_NE(cases.out.find("case 1"), std::string::npos);
  EXPECT_NE(cases.out.find("(approximate)"), std::string::npos);
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string bin = GRIDSIM_CLI_PATH;
  const std::string quiet = " >/dev/null 2>&1";
  auto status = [](int raw) { return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1; };
  EXPECT_EQ(status(std::system((bin + " metrics --case 3 --out " + out_dir() + quiet).c_str())), 0);
  EXPECT_EQ(status(std::system((bin + " metrics --topology " + out_dir() + "/none.topo" + quiet).c_str())), 1);
  EXPECT_EQ(status(std::system((bin + " compare --case 2 --k 0" + quiet).c_str())), 2);
}
