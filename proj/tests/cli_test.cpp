// Drives the built `coherent` executable end to end.
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef COHERENT_CLI_PATH
#error "COHERENT_CLI_PATH must point at the coherent executable"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("coherent_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  RunResult run(const std::string& args) const {
    const fs::path out = path("stdout.txt"), err = path("stderr.txt");
    const std::string cmd = std::string("\"") + COHERENT_CLI_PATH + "\" " + args + " >\"" + out.string() +
                            "\" 2>\"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

 private:
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UnknownSuiteIsUsageError) {
  const RunResult r = run("verify --suite nope");
  EXPECT_EQ(r.status, 2);
  for (const char* suite : {"algebra", "coherent", "extended", "glauber", "quadrature", "squeeze", "trace"})
    EXPECT_NE(r.err.find(suite), std::string::npos) << r.err;
}

TEST_F(Cli, BadArgumentsAreUsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("verify --dim notanumber").status, 2);
  EXPECT_EQ(run("verify --tol missing_equals").status, 2);
  EXPECT_EQ(run("verify --tol unknown.check=1e-3").status, 2);
  EXPECT_EQ(run("verify --band 100").status, 2);
  EXPECT_EQ(run("table --kind weird --nmax 1 --mmax 1 --z 1,0 --out x.csv").status, 2);
  EXPECT_EQ(run("table --kind coherent --nmax 1 --mmax 1 --z 1,zz --out " + path("t.csv").string()).status, 2);
  EXPECT_EQ(run("probe --sigma 1 --t 0.5,abc --out " + path("p.csv").string()).status, 2);
}

TEST_F(Cli, SelectedSuitePassesAndWritesReport) {
  const fs::path report = path("report.json");
  const RunResult r = run("verify --suite trace --suite quadrature --report " + report.string());
  EXPECT_EQ(r.status, 0) << r.out << r.err;
  const auto json = nlohmann::json::parse(slurp(report));
  EXPECT_EQ(json["schema_version"], 1);
  EXPECT_EQ(json["config"]["dim"], 128);
  EXPECT_EQ(json["config"]["band"], 32);
  for (const auto& c : json["checks"]) {
    EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
    EXPECT_LE(c["residual"].get<double>(), c["tol"].get<double>());
  }
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST_F(Cli, ReportToStdout) {
  const RunResult r = run("verify --suite trace --report -");
  EXPECT_EQ(r.status, 0);
  const auto json = nlohmann::json::parse(r.out);
  EXPECT_FALSE(json["checks"].empty());
}

TEST_F(Cli, ForcedToleranceFailureExitsOne) {
  const fs::path report = path("forced.json");
  const RunResult r = run("verify --suite extended --samples 5 --tol extended.disentangle=1e-30 --report " +
                          report.string());
  EXPECT_EQ(r.status, 1) << r.out << r.err;
  const auto json = nlohmann::json::parse(slurp(report));
  int forced = 0;
  for (const auto& c : json["checks"]) {
    const std::string name = c["name"];
    if (name.rfind("extended.disentangle", 0) != 0) continue;
    ++forced;
    EXPECT_FALSE(c["pass"].get<bool>());
    EXPECT_EQ(c["tol"].get<double>(), 1e-30);
    EXPECT_TRUE(c["residual"].is_number());
    EXPECT_GT(c["residual"].get<double>(), 0.0);
  }
  EXPECT_EQ(forced, 2);
  EXPECT_EQ(json["config"]["tol_overrides"]["extended.disentangle"], 1e-30);
}

TEST_F(Cli, DefaultRunExitStatusMatchesReport) {
  const fs::path report = path("default.json");
  const RunResult r = run("verify --report " + report.string());
  const auto json = nlohmann::json::parse(slurp(report));
  bool all_pass = true;
  for (const auto& c : json["checks"]) all_pass = all_pass && c["pass"].get<bool>();
  EXPECT_EQ(r.status, all_pass ? 0 : 1);
  EXPECT_EQ(json["config"]["suites"].size(), 7u);
}

TEST_F(Cli, SameSeedGivesIdenticalBytes) {
  const fs::path a = path("a.json"), b = path("b.json"), c = path("c.json");
  run("verify --suite coherent --suite squeeze --samples 6 --seed 7 --report " + a.string());
  run("verify --suite coherent --suite squeeze --samples 6 --seed 7 --report " + b.string());
  run("verify --suite coherent --suite squeeze --samples 6 --seed 8 --report " + c.string());
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(slurp(a), slurp(c));
}

TEST_F(Cli, CoherentTable) {
  const fs::path out = path("table.csv");
  const RunResult r = run("table --kind coherent --nmax 2 --mmax 2 --z 1,0 --out " + out.string());
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,m,re_closed,im_closed,re_oracle,im_oracle,abs_err");
  int rows = 0;
  while (std::getline(in, line)) {
    if (rows == 0) EXPECT_EQ(line.rfind("0,0,0.6065306597126", 0), 0u) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 9);
}

TEST_F(Cli, ExtendedTableAndIndexLimit) {
  const fs::path out = path("ext.csv");
  EXPECT_EQ(run("table --kind extended --nmax 4 --mmax 4 --z 0.5,-0.5 --t 6.2831 --out " + out.string()).status,
            0);
  EXPECT_EQ(run("table --kind extended --nmax 65 --mmax 4 --z 0.5,0 --t 1 --out " + out.string()).status, 2);
  EXPECT_EQ(run("table --kind coherent --nmax 1 --mmax 1 --z 1,0 --out /nonexistent-dir/x.csv").status, 2);
}

TEST_F(Cli, ProbeSeriesWithSkippedEntry) {
  const fs::path out = path("probe.csv");
  const RunResult r = run("probe --sigma 1 --t 0.5,0.25,0,0.125,0.0625 --out " + out.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.err.find("skipped 1"), std::string::npos) << r.err;
  const std::string text = slurp(out);
  EXPECT_NE(text.find("# warning: skipped t=0"), std::string::npos);
  EXPECT_NE(text.find("\n0.0625,"), std::string::npos);
}
