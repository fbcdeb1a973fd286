#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cptheta/cli.hpp"
#include "fixtures.hpp"

namespace cptheta {
namespace {

namespace fs = std::filesystem;

const fs::path kCorpus = CPTHETA_CORPUS_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cptheta");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cptheta_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }
  std::string write(const std::string& name, const Graph& g) {
    return write(name, format_edge_list(g));
  }
  std::string corpus(const std::string& name) { return (kCorpus / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, BuildK2Pair) {
  const auto k2 = write("k2.txt", "2 1\n0 1\n");
  const auto r = invoke({"build", k2, k2});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc.at("dim"), 5);
  const Program p = program_from_json(doc);
  EXPECT_EQ(p.count(ConstraintKind::kRowOrth), 2u);
  EXPECT_EQ(p.count(ConstraintKind::kColOrth), 2u);
  EXPECT_EQ(p, build_program(testing::complete(2), testing::complete(2)));
}

TEST_F(CliTest, BuildWritesFileAndRoundTrips) {
  const auto a = write("a.txt", testing::path(4));
  const auto b = write("b.txt", testing::star(4));
  const auto target = (dir_ / "program.json").string();
  ASSERT_EQ(invoke({"build", a, b, "-o", target}).code, 0);
  std::ifstream in(target);
  EXPECT_EQ(program_from_json(Json::parse(in)), build_program(testing::path(4), testing::star(4)));
}

TEST_F(CliTest, BuildSingleVertex) {
  const auto one = write("one.txt", "1 0\n");
  const auto r = invoke({"build", one, one});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out).at("dim"), 2);
}

TEST_F(CliTest, InputErrors) {
  const auto a = write("a.txt", testing::path(3));
  const auto b = write("b.txt", testing::path(4));
  const auto bad = write("bad.txt", "3 2\n0 1\n1 9\n");
  EXPECT_EQ(invoke({"build", a, b}).code, cli::kExitInputError);
  const auto r = invoke({"decide", a, bad});
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_EQ(invoke({"decide", a, (dir_ / "missing.txt").string()}).code, cli::kExitInputError);
  EXPECT_EQ(invoke({"decide", a}).code, cli::kExitInputError);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitInputError);
  EXPECT_EQ(invoke({"decide", a, a, "--tol", "-1"}).code, cli::kExitInputError);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, DecideIsomorphicCorpusPair) {
  const auto r = invoke({"decide", corpus("c6_relabeled_a.txt"), corpus("c6_relabeled_b.txt")});
  EXPECT_EQ(r.code, cli::kExitIsomorphic) << r.out << r.err;
  EXPECT_NE(r.out.find("verdict: Isomorphic"), std::string::npos);
  EXPECT_NE(r.out.find("certificate:"), std::string::npos);
}

TEST_F(CliTest, DecideNonIsomorphicCorpusPair) {
  const auto a = corpus("c6_vs_2c3_a.txt"), b = corpus("c6_vs_2c3_b.txt");
  const auto r = invoke({"decide", a, b});
  EXPECT_TRUE(r.code == cli::kExitNonIsomorphic || r.code == cli::kExitInconclusive) << r.out;
  EXPECT_EQ(invoke({"decide", a, b, "--oracle-fallback"}).code, cli::kExitNonIsomorphic);
}

TEST_F(CliTest, DecideInconclusiveOnIterationCap) {
  const auto p = corpus("petersen_relabeled_a.txt");
  const auto r = invoke({"decide", p, p, "--max-iter", "2"});
  EXPECT_EQ(r.code, cli::kExitInconclusive);
  EXPECT_NE(r.out.find("MaxIter"), std::string::npos);
}

TEST_F(CliTest, DecideJsonRoundTripsAndIsDeterministic) {
  const auto a = corpus("c5_relabeled_a.txt"), b = corpus("c5_relabeled_b.txt");
  const auto r1 = invoke({"decide", a, b, "--json", "--truth", "--seed", "7"});
  const auto r2 = invoke({"decide", a, b, "--json", "--truth", "--seed", "7"});
  ASSERT_EQ(r1.code, 0) << r1.err;
  Json j1 = Json::parse(r1.out), j2 = Json::parse(r2.out);
  const RunReport report = j1.get<RunReport>();
  EXPECT_EQ(Json(report), j1);
  EXPECT_EQ(report.config.seed, 7u);
  ASSERT_TRUE(report.oracle);
  EXPECT_TRUE(report.oracle->isomorphic);
  j1.erase("timings");
  j2.erase("timings");
  EXPECT_EQ(j1, j2);
}

TEST_F(CliTest, EnvironmentSuppliesDefaults) {
  const auto p = corpus("petersen_relabeled_a.txt");
  ::setenv("CPTHETA_MAX_ITER", "2", 1);
  const auto r = invoke({"decide", p, p});
  ::unsetenv("CPTHETA_MAX_ITER");
  EXPECT_EQ(r.code, cli::kExitInconclusive);
}

TEST_F(CliTest, Oracle) {
  const auto c4 = write("c4.txt", testing::cycle(4));
  const auto r = invoke({"oracle", c4, c4, "--json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out).at("count"), 8);
  EXPECT_EQ(Json::parse(invoke({"oracle", c4, c4, "--json", "--cap", "3"}).out).at("count"), 3);
  const auto star = write("s.txt", testing::star(4));
  EXPECT_EQ(invoke({"oracle", c4, star}).code, cli::kExitNonIsomorphic);
}

TEST_F(CliTest, BenchMissingManifest) {
  EXPECT_EQ(invoke({"bench", dir_.string()}).code, cli::kExitInputError);
}

TEST_F(CliTest, BenchEmptyManifest) {
  write("manifest.json", R"({"pairs": []})");
  const auto r = invoke({"bench", dir_.string(), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out).at("summary").at("pairs"), 0);
}

TEST_F(CliTest, BenchSinglePairAndReport) {
  write("a.txt", testing::cycle(5));
  write("b.txt", testing::relabel(testing::cycle(5), Permutation({3, 0, 4, 1, 2})));
  write("manifest.json",
        R"({"pairs": [{"name": "c5", "g1": "a.txt", "g2": "b.txt", "isomorphic": true}]})");
  const auto report = (dir_ / "report.json").string();
  const auto r = invoke({"bench", dir_.string(), "--report", report, "--verify-manifest"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("c5"), std::string::npos);
  std::ifstream in(report);
  const Json doc = Json::parse(in);
  EXPECT_EQ(doc.at("summary").at("isomorphic"), 1);
  EXPECT_EQ(doc.at("summary").at("disagreements"), 0);
}

TEST_F(CliTest, BenchWrongManifestTruth) {
  write("a.txt", testing::path(4));
  write("b.txt", testing::star(4));
  write("manifest.json",
        R"({"pairs": [{"name": "lie", "g1": "a.txt", "g2": "b.txt", "isomorphic": true}]})");
  EXPECT_EQ(invoke({"bench", dir_.string(), "--verify-manifest"}).code, cli::kExitInputError);
  const auto r = invoke({"bench", dir_.string(), "--oracle-fallback"});
  EXPECT_EQ(r.code, cli::kExitBenchDisagreement);
}

TEST_F(CliTest, BenchJobsKeepManifestOrder) {
  const auto serial = invoke({"bench", kCorpus.string(), "--json"});
  const auto parallel = invoke({"bench", kCorpus.string(), "--json", "--jobs", "3"});
  ASSERT_EQ(serial.code, 0) << serial.out;
  Json a = Json::parse(serial.out), b = Json::parse(parallel.out);
  ASSERT_EQ(a.at("rows").size(), b.at("rows").size());
  for (std::size_t k = 0; k < a.at("rows").size(); ++k) {
    EXPECT_EQ(a["rows"][k]["name"], b["rows"][k]["name"]);
    EXPECT_EQ(a["rows"][k]["verdict"], b["rows"][k]["verdict"]);
    EXPECT_EQ(a["rows"][k]["objective"], b["rows"][k]["objective"]);
  }
  EXPECT_EQ(a.at("summary"), b.at("summary"));
}

}  // namespace
}  // namespace cptheta
