#include <gtest/gtest.h>

#include "cli_runner.hpp"
#include "opball/io.hpp"

using namespace opball;

namespace {

std::string write(const std::filesystem::path& dir, const std::string& name, const CMat& m) {
  const auto p = dir / name;
  io::write_matrix(p.string(), m);
  return p.string();
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli::run("").code, 2);
  EXPECT_EQ(cli::run("frobnicate").code, 2);
  EXPECT_EQ(cli::run("identities --dim-h 33").code, 2);
  EXPECT_EQ(cli::run("identities --dim-k 9").code, 2);
  EXPECT_EQ(cli::run("identities --dim-h 2 --dim-k 3").code, 2);
  EXPECT_EQ(cli::run("identities --tol -1").code, 2);
  EXPECT_EQ(cli::run("identities --trials abc").code, 2);
  EXPECT_EQ(cli::run("approx --dim-h 2 --dim-k 3").code, 2);
  EXPECT_EQ(cli::run("approx --trials 0").code, 2);
  EXPECT_EQ(cli::run("metric onlyone.json").code, 2);
  EXPECT_EQ(cli::run("--help").code, 0);
}

TEST(Cli, IdentitiesZeroTrials) {
  const cli::Result r = cli::run("identities --trials 0");
  EXPECT_EQ(r.code, 0);
  const auto j = io::json::parse(r.out);
  EXPECT_TRUE(j.at("identities").empty());
  EXPECT_TRUE(j.at("all_pass").get<bool>());
}

TEST(Cli, IdentitiesDefaultsPassAndAreDeterministic) {
  const cli::Result a = cli::run("identities --seed 5");
  const cli::Result b = cli::run("identities --seed 5 --threads 4");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  const auto j = io::json::parse(a.out);
  EXPECT_EQ(j.at("identities").size(), 12u);
  for (const auto& id : j.at("identities")) {
    EXPECT_TRUE(id.at("pass").get<bool>()) << id.dump();
    EXPECT_LE(id.at("max_residual").get<double>(), 1e-8);
  }
}

TEST(Cli, IdentitiesFailureExitsOne) {
  const cli::Result r = cli::run("identities --trials 3 --tol 1e-30");
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(io::json::parse(r.out).at("all_pass").get<bool>());
}

TEST(Cli, Metric) {
  const auto dir = cli::tmp_dir("metric");
  const std::string zero = write(dir, "zero.json", CMat{{0.0}});
  const std::string one = write(dir, "one.json", CMat{{1.0}});
  const std::string wide = write(dir, "wide.json", CMat::zeros(2, 3));
  const std::string tall = write(dir, "tall.json", CMat::zeros(3, 2));

  const cli::Result r = cli::run("metric " + zero + " " + one);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.881373587020\n");

  const cli::Result same = cli::run("metric " + one + " " + one);
  EXPECT_EQ(same.code, 0);
  EXPECT_LE(std::stod(same.out), 1e-12);

  const std::string cmd = std::string(OPBALL_CLI_PATH) + " metric " + wide + " " + tall + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  char buf[512] = {};
  const std::size_t n = std::fread(buf, 1, sizeof buf - 1, pipe);
  const int status = pclose(pipe);
  const std::string msg(buf, n);
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_NE(msg.find("2x3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("3x2"), std::string::npos) << msg;

  cli::spit(dir / "bad.json", R"({"rows":1,"cols":1,"data":[[1]]})");
  EXPECT_EQ(cli::run("metric " + (dir / "bad.json").string() + " " + one).code, 2);
  EXPECT_EQ(cli::run("metric " + (dir / "missing.json").string() + " " + one).code, 2);
}

TEST(Cli, Symcheck) {
  const auto dir = cli::tmp_dir("symcheck");
  const cplx i(0.0, 1.0);
  const std::string sym = write(dir, "sym.json", CMat{{1.0, 2.0 * i}, {2.0 * i, 3.0}});
  const std::string asym = write(dir, "asym.json", CMat{{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}});
  const std::string zero = write(dir, "zero.json", CMat::zeros(4, 2));

  const cli::Result r = cli::run("symcheck " + sym + " --pair identity");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "residual 0\nSYMMETRIC\n");

  const cli::Result a = cli::run("symcheck " + asym + " --pair canonical");
  EXPECT_EQ(a.code, 1);
  EXPECT_NE(a.out.find("NOT-SYMMETRIC"), std::string::npos);

  EXPECT_EQ(cli::run("symcheck " + zero + " --pair canonical").code, 0);
  const auto pair_path = dir / "pair.json";
  io::write_text(pair_path.string(), io::pair_to_json(random_pair(2, 4, 3)).dump());
  const cli::Result f = cli::run("symcheck " + zero + " --pair file --pair-file " + pair_path.string());
  EXPECT_EQ(f.code, 0);
  EXPECT_NE(f.out.find("SYMMETRIC"), std::string::npos);

  EXPECT_EQ(cli::run("symcheck " + asym + " --pair identity").code, 2);
  EXPECT_EQ(cli::run("symcheck " + sym + " --pair file --pair-file " + pair_path.string()).code, 2);
  EXPECT_EQ(cli::run("symcheck " + sym + " --pair file").code, 2);
  EXPECT_EQ(cli::run("symcheck " + sym + " --pair bogus").code, 2);
  EXPECT_EQ(cli::run("symcheck " + write(dir, "wide.json", CMat::zeros(2, 3)) + " --pair canonical").code, 2);
}

TEST(Cli, ApproxWritesProfileAndReport) {
  const auto dir = cli::tmp_dir("approx");
  const std::string prefix = (dir / "run").string();
  const cli::Result r =
      cli::run("approx --trials 1 --dim-h 4 --dim-k 1 --seed 3 --out " + prefix);
  EXPECT_EQ(r.code, 0);
  const std::string csv = cli::slurp(dir / "run_trial000.csv");
  std::istringstream lines(csv);
  std::string line, last;
  std::getline(lines, line);
  EXPECT_EQ(line, "n,dist,sym_residual,margin");
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    last = line;
  }
  EXPECT_EQ(count, 4);
  const auto fields = last.substr(2);
  EXPECT_LE(std::stod(fields.substr(0, fields.find(','))), 1e-8);
  const auto report = io::json::parse(cli::slurp(dir / "run_report.json"));
  EXPECT_TRUE(report.at("aggregate").at("all_valid").get<bool>());
}

TEST(Cli, ApproxIsDeterministicAcrossRunsAndThreads) {
  const auto dir = cli::tmp_dir("approx_det");
  const std::string base = "approx --trials 6 --dim-h 6 --dim-k 2 --seed 11 --out ";
  ASSERT_EQ(cli::run(base + (dir / "a").string()).code, 0);
  ASSERT_EQ(cli::run(base + (dir / "b").string() + " --threads 3").code, 0);
  EXPECT_EQ(cli::slurp(dir / "a_report.json"), cli::slurp(dir / "b_report.json"));
  for (int t = 0; t < 6; ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "_trial%03d.csv", t);
    EXPECT_EQ(cli::slurp(dir / ("a" + std::string(name))), cli::slurp(dir / ("b" + std::string(name))));
  }
}
