#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cubetriple/cli.hpp"

using namespace cubetriple;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<nlohmann::json> lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cubetriple_cli_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(CliBuild, FourCycleAdjacency) {
  auto r = run({"build", "--d", "2", "--op", "adjacency"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rows"], 4);
  EXPECT_EQ(j["entries"].size(), 8u);
}

TEST(CliBuild, ConjugatingMatrixOfOneEdge) {
  auto r = run({"build", "--d", "1", "--op", "P"});
  ASSERT_EQ(r.status, 0);
  ExactMatrix p = matrix_from_json(nlohmann::json::parse(r.out));
  EXPECT_EQ(p, (ExactMatrix{{1, 1}, {-GaussRat::i(), GaussRat::i()}}));
}

TEST(CliBuild, IndexedFamilies) {
  auto r = run({"build", "--d", "3", "--op", "Estar", "--index", "1"});
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["entries"].size(), 3u);
  EXPECT_EQ(run({"build", "--d", "3", "--op", "E"}).status, 2);
  EXPECT_EQ(run({"build", "--d", "3", "--op", "distance", "--index", "4"}).status, 2);
}

TEST(CliBuild, CsvAndPrettyFormats) {
  auto csv = run({"build", "--d", "1", "--op", "imaginary", "--format", "csv"});
  EXPECT_EQ(csv.out, "row,col,re,im\n0,1,0/1,1/1\n1,0,0/1,-1/1\n");
  auto pretty = run({"build", "--d", "1", "--op", "adjacency", "--format", "pretty"});
  EXPECT_EQ(pretty.status, 0);
  EXPECT_EQ(std::count(pretty.out.begin(), pretty.out.end(), '\n'), 2);
}

TEST(CliUsage, DimensionBounds) {
  EXPECT_EQ(run({"build", "--d", "0"}).status, 2);
  EXPECT_EQ(run({"decompose", "--d", "11"}).status, 2);
  EXPECT_EQ(run({"decompose", "--d", "4", "--d-limit", "3"}).status, 2);
  EXPECT_EQ(run({"verify", "--d", "2", "--suite", "nonsense"}).status, 2);
  EXPECT_EQ(run({"frobnicate"}).status, 2);
  EXPECT_EQ(run({}).status, 2);
}

TEST(CliUsage, EnvironmentOverridesLimit) {
  ::setenv(k_d_limit_env, "2", 1);
  EXPECT_EQ(run({"decompose", "--d", "3"}).status, 2);
  ::setenv(k_d_limit_env, "bogus", 1);
  EXPECT_EQ(run({"decompose", "--d", "1"}).status, 2);
  ::unsetenv(k_d_limit_env);
  EXPECT_EQ(run({"decompose", "--d", "3"}).status, 0);
}

TEST(CliVerify, CommutatorSuiteListsFiveIdentities) {
  auto r = run({"verify", "--d", "6", "--suite", "commutators"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto records = lines(r.out);
  ASSERT_EQ(records.size(), 6u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(records[k]["suite"], "commutators");
    EXPECT_TRUE(records[k]["passed"].get<bool>());
  }
  EXPECT_TRUE(records[5]["summary"]["passed"].get<bool>());
}

TEST(CliVerify, AllSuitesPassAtFour) {
  auto r = run({"verify", "--d", "4", "--suite", "all"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.err.find("[6/6]"), std::string::npos);
}

TEST(CliVerify, InjectedFaultsFail) {
  auto aeps = run({"verify", "--d", "3", "--suite", "commutators", "--inject-fault", "aeps:0,4"});
  EXPECT_EQ(aeps.status, 1);
  auto records = lines(aeps.out);
  EXPECT_FALSE(records.front()["passed"].get<bool>());
  EXPECT_TRUE(records.front()["first_discrepancy"].is_array());
  EXPECT_EQ(run({"verify", "--d", "3", "--suite", "inner-products", "--inject-fault", "phi:1,0"}).status, 1);
  EXPECT_EQ(run({"verify", "--d", "3", "--suite", "transitions", "--inject-fault", "phi:0,0"}).status, 1);
  EXPECT_EQ(run({"verify", "--d", "3", "--inject-fault", "bad"}).status, 2);
}

TEST(CliVerify, CsvFlattensPairings) {
  auto r = run({"verify", "--d", "2", "--suite", "inner-products", "--format", "csv"});
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("D,r,module_index,check,i,j,passed\n", 0), 0u);
  EXPECT_NE(r.out.find("2,0,0,krawtchouk/1,1,1,true"), std::string::npos);
}

TEST(CliVerify, ParallelOutputMatchesSerial) {
  auto serial = run({"verify", "--d", "5", "--suite", "transitions"});
  auto parallel = run({"verify", "--d", "5", "--suite", "transitions", "--parallel"});
  EXPECT_EQ(serial.status, 0);
  EXPECT_EQ(serial.out, parallel.out);
}

TEST(CliDecompose, ModuleListing) {
  auto r = run({"decompose", "--d", "3"});
  ASSERT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["multiplicities"], (nlohmann::json{{"0", 1}, {"1", 2}}));
  EXPECT_EQ(j["modules"].size(), 3u);
}

TEST(CliDecompose, EmitsOneSeedFilePerModule) {
  auto dir = temp_dir("seeds");
  auto r = run({"decompose", "--d", "5", "--emit-seeds", dir.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    ++files;
    std::ifstream in(entry.path());
    auto j = nlohmann::json::parse(in);
    ExactVector u = vector_from_json(j["u_star"]);
    EXPECT_EQ(u.size(), 32u);
  }
  EXPECT_EQ(files, 10u);
  std::filesystem::remove_all(dir);
}

TEST(CliIo, UnwritableOutputIsAnIoError) {
  EXPECT_EQ(run({"build", "--d", "1", "--output", "/nonexistent/dir/out.json"}).status, 3);
  auto file = temp_dir("blocker");
  std::ofstream(file.string()) << "x";
  EXPECT_EQ(run({"decompose", "--d", "2", "--emit-seeds", (file / "sub").string()}).status, 3);
  std::filesystem::remove(file);
}

TEST(CliIo, OutputFileReceivesReport) {
  auto path = temp_dir("report.json");
  auto r = run({"decompose", "--d", "2", "--output", path.string()});
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(nlohmann::json::parse(in)["D"], 2);
  std::filesystem::remove(path);
}

TEST(CliReports, ModuleReportSelection) {
  auto r = run({"module-report", "--d", "4", "--r", "1"});
  ASSERT_EQ(r.status, 0);
  auto records = lines(r.out);
  ASSERT_EQ(records.size(), 3u);
  for (const auto& rec : records) {
    EXPECT_EQ(rec["r"], 1);
    EXPECT_EQ(rec["transitions"]["cells_checked"], 36);
    EXPECT_EQ(rec["leonard_triple"], "true");
  }
  EXPECT_EQ(run({"module-report", "--d", "4", "--r", "1", "--index", "7"}).status, 2);
}

TEST(CliReports, LeonardCheck) {
  auto r = run({"leonard-check", "--d", "4", "--format", "pretty"});
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("leonard triple: true"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliReports, OutputIsDeterministic) {
  for (auto args : std::vector<std::vector<std::string>>{{"module-report", "--d", "4"},
                                                         {"decompose", "--d", "5", "--format", "csv"},
                                                         {"verify", "--d", "3", "--format", "pretty"}}) {
    auto first = run(args);
    auto second = run(args);
    EXPECT_EQ(first.out, second.out);
    EXPECT_EQ(first.status, second.status);
  }
}

TEST(CliBinary, ExitCodesFromTheExecutable) {
  auto status = [](const std::string& args) {
    int raw = std::system((std::string(CUBETRIPLE_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("build --d 2"), 0);
  EXPECT_EQ(status("build --d 0"), 2);
  EXPECT_EQ(status("verify --d 2 --suite commutators --inject-fault aeps:0,1"), 1);
  EXPECT_EQ(status("build --d 1 --output /nonexistent/x.json"), 3);
  EXPECT_EQ(status("--help"), 0);
}
