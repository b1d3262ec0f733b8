#include <gtest/gtest.h>

#include "oracles.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run(const oracle::TempDir& dir, const std::string& args, const std::string& env = "") {
  const auto err_path = dir / "stderr.txt";
  const std::string cmd = env + " " + std::string(SKETCHPRESS_CLI) + " " + args + " 2>" + err_path.string();
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream e(err_path);
  std::stringstream ss;
  ss << e.rdbuf();
  r.err = ss.str();
  return r;
}

nlohmann::json parse(const RunResult& r) { return nlohmann::json::parse(r.out); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const RunResult g = run(dir, "gen-data --kind spectrum --decay exact-rank --rank 4 --m 60 --n 200 --seed 3 -o " +
                                     (dir / "rank4.lrsm").string());
    ASSERT_EQ(g.code, 0) << g.err;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  oracle::TempDir dir{"cli"};
};

}  // namespace

TEST_F(Cli, CompressVerifyExactRank) {
  const RunResult r = run(dir, "compress -i " + path("rank4.lrsm") + " -o " + path("a.lrsa") +
                                   " --algorithm spc-svd --rank 4 --coarsen 10 --verify");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_EQ(j["passes"], 1);
  EXPECT_EQ(j["expected_passes"], 1);
  EXPECT_EQ(j["verification"]["passes"], 1);
  EXPECT_LE(j["verification"]["rel_frob"].get<double>(), 1e-8);
  EXPECT_TRUE(j.contains("wall_seconds"));
  EXPECT_NEAR(j["temporal_cf"].get<double>(), 60.0 * 200.0 / (4.0 * 260.0), 1e-12);
}

TEST_F(Cli, PassCountsPerAlgorithm) {
  for (const std::string algo : {"spc-svd", "spc-id", "tpc-svd", "tpc-id", "proto-tpc"}) {
    const RunResult r = run(dir, "compress -i " + path("rank4.lrsm") + " -o " + path("p.lrsa") + " --algorithm " +
                                     algo + " --rank 4");
    ASSERT_EQ(r.code, 0) << algo << r.err;
    const auto j = parse(r);
    EXPECT_EQ(j["passes"], algo.rfind("spc", 0) == 0 ? 1 : 2) << algo;
  }
}

TEST_F(Cli, RankAboveCoarseWidthIsConfigError) {
  const RunResult r =
      run(dir, "compress -i " + path("rank4.lrsm") + " -o " + path("x.lrsa") + " --rank 30 --coarsen 10");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("k <= n_c"), std::string::npos) << r.err;
}

TEST_F(Cli, UnknownFlagIsConfigError) {
  EXPECT_EQ(run(dir, "compress --bogus").code, 2);
  EXPECT_EQ(run(dir, "").code, 2);
}

TEST_F(Cli, MissingInputIsIoError) {
  EXPECT_EQ(run(dir, "compress -i " + path("none.lrsm") + " -o " + path("x.lrsa")).code, 3);
  EXPECT_EQ(run(dir, "inspect -i " + path("none.lrsa")).code, 3);
}

TEST_F(Cli, RankDeficientSketchIsNumericalError) {
  ASSERT_EQ(run(dir, "gen-data --decay exact-rank --rank 2 --m 30 --n 100 -o " + path("r2.lrsm")).code, 0);
  const RunResult r = run(dir, "compress -i " + path("r2.lrsm") + " -o " + path("x.lrsa") +
                                   " --algorithm tpc-svd --rank 3");
  EXPECT_EQ(r.code, 4) << r.err;
}

TEST_F(Cli, TamperedArchiveIsIoError) {
  ASSERT_EQ(run(dir, "compress -i " + path("rank4.lrsm") + " -o " + path("a.lrsa")).code, 0);
  std::string bytes = slurp(dir / "a.lrsa");
  bytes[bytes.size() - 5] ^= 0x11;
  std::ofstream(dir / "bad.lrsa", std::ios::binary) << bytes;
  const RunResult r = run(dir, "decompress -i " + path("bad.lrsa") + " -o " + path("out.lrsm"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("CRC-32"), std::string::npos);
}

TEST_F(Cli, InspectAndDecompress) {
  ASSERT_EQ(run(dir, "compress -i " + path("rank4.lrsm") + " -o " + path("a.lrsa") +
                         " --sketch nn --codec fixed --bits 24 --deflate")
                .code,
            0);
  const RunResult i = run(dir, "inspect -i " + path("a.lrsa"));
  ASSERT_EQ(i.code, 0);
  const auto j = parse(i);
  EXPECT_EQ(j["k"], 4);
  EXPECT_EQ(j["sketch"]["kind"], "nearest-neighbor");
  EXPECT_GT(j["cf"].get<double>(), 1.0);
  EXPECT_EQ(j["codec"]["bits"], 24);
  const RunResult d = run(dir, "decompress -i " + path("a.lrsa") + " -o " + path("back.lrsm"));
  ASSERT_EQ(d.code, 0);
  EXPECT_EQ(parse(d)["m"], 60);
  EXPECT_EQ(std::filesystem::file_size(dir / "back.lrsm"), 24u + 60u * 200u * 8u);
}

TEST_F(Cli, EstimateErrorFullSamplingMatchesExact) {
  const RunResult r = run(dir, "estimate-error -i " + path("rank4.lrsm") + " --sketch ga --coarsen 5 --exact");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_EQ(j["passes"], 1);
  const auto hat = j["epsilon_hat"].get<std::vector<double>>();
  const auto exact = j["epsilon"].get<std::vector<double>>();
  ASSERT_EQ(hat.size(), exact.size());
  double scale = 0.0;
  for (double e : exact) scale = std::max(scale, std::abs(e));
  for (std::size_t t = 0; t < hat.size(); ++t) EXPECT_NEAR(hat[t], exact[t], 1e-12 * scale);
}

TEST_F(Cli, BenchOracleEqualAlgorithmGivesUnitMreo) {
  ASSERT_EQ(run(dir, "gen-data --decay power --m 20 --n 40 -o " + path("p.lrsm")).code, 0);
  const RunResult r = run(dir, "bench -i " + path("p.lrsm") + " --algorithm tpc-svd --coarsen 1 --trials 1 " +
                                   "--rank-min 1 --rank-max 3 --no-timing -o " + path("b.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : parse(r)["results"]) EXPECT_NEAR(row["mreo"].get<double>(), 1.0, 1e-10);
  const std::string csv = slurp(dir / "b.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "rank,mreo,mean_runtime,algorithm");
}

TEST_F(Cli, SeededRunsAreByteIdentical) {
  const std::string args = " --sketch di+gauss --rank 3 --oversample 4 --power 1 --seed 17 --codec fixed --bits 16";
  ASSERT_EQ(run(dir, "compress -i " + path("rank4.lrsm") + " -o " + path("x1.lrsa") + args).code, 0);
  ASSERT_EQ(run(dir, "compress -i " + path("rank4.lrsm") + " -o " + path("x2.lrsa") + args).code, 0);
  EXPECT_EQ(slurp(dir / "x1.lrsa"), slurp(dir / "x2.lrsa"));
  const std::string bench = "bench -i " + path("rank4.lrsm") + " --sketch di+gauss --oversample 2 --trials 3 " +
                            "--rank-max 3 --seed 5 --no-timing -o ";
  ASSERT_EQ(run(dir, bench + path("c1.csv")).code, 0);
  ASSERT_EQ(run(dir, bench + path("c2.csv"), "SKETCHPRESS_THREADS=1").code, 0);
  EXPECT_EQ(slurp(dir / "c1.csv"), slurp(dir / "c2.csv"));
}
