#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmt_cli/runner.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = rmt::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rmt_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("tw-compare"), std::string::npos);
  EXPECT_NE(r.out.find("jue-mc"), std::string::npos);
}

TEST_F(Cli, UnknownSubcommandIsParameterError) {
  const auto r = run({"bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
}

TEST_F(Cli, InvalidParameterIsParameterError) {
  EXPECT_EQ(run({"jue-hard", "--N", "1", "--out", path("x.csv")}).code, 2);
  EXPECT_EQ(run({"jue-hard", "--edge", "middle", "--out", path("x.csv")}).code, 2);
  EXPECT_EQ(run({"--threads", "-1", "lue-hard", "--out", path("x.csv")}).code, 2);
  EXPECT_FALSE(fs::exists(path("x.csv")));
}

TEST_F(Cli, CheckWithoutReferenceIsParameterError) {
  const auto r = run({"--check", "gue-piv", "--n", "7", "--out", path("g.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(fs::exists(path("g.csv")));
}

TEST_F(Cli, WritesCsvAndManifest) {
  const auto out = path("lue_hard.csv");
  const auto r = run({"--check", "lue-hard", "--N", "20", "--points", "11", "--out", out});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("check: PASS"), std::string::npos);
  const std::string csv = slurp(out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "s,E_finite,E_hard,abs_err");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
  const std::string man = slurp(out + ".manifest");
  EXPECT_NE(man.find("command=lue-hard"), std::string::npos);
  EXPECT_NE(man.find("parameters.N=20"), std::string::npos);
  EXPECT_NE(man.find("parameters.check=true"), std::string::npos);
  EXPECT_NE(man.find("outputs.0=" + out), std::string::npos);
  EXPECT_NE(man.find("toolkit_version="), std::string::npos);
}

TEST_F(Cli, OutputIsDeterministic) {
  const std::vector<std::string> base = {"jue-hard", "--N", "10", "--points", "7"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", path("a.csv")});
  b.insert(b.end(), {"--threads", "1", "--out", path("b.csv")});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = path("run.ini");
  std::ofstream(cfg) << "[jue-hard]\nN=12\npoints=5\na=1\n";
  ASSERT_EQ(run({"--config", cfg, "jue-hard", "--N", "14", "--out", path("c.csv")}).code, 0);
  const std::string man = slurp(path("c.csv.manifest"));
  EXPECT_NE(man.find("parameters.N=14"), std::string::npos);
  EXPECT_NE(man.find("parameters.points=5"), std::string::npos);
  EXPECT_NE(man.find("parameters.a=1"), std::string::npos);
}

TEST_F(Cli, FailedCheckExitsFour) {
  // A coarse Airy discretisation misses the 3e-4 agreement budget.
  const auto r = run({"--check", "tw-compare", "--nodes", "10", "--out", path("tw.csv")});
  EXPECT_EQ(r.code, 4) << r.out << r.err;
  EXPECT_NE(r.out.find("check: FAIL"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("tw.csv")));
}

TEST_F(Cli, NumericalFailureExitsThree) {
  // Anchors below the resolvable range of log F cannot be placed.
  const auto r = run({"gue-piv", "--n", "20", "--width", "30", "--anchors", "40", "--out", path("p.csv")});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.err.find("numerical error"), std::string::npos);
}

}  // namespace
