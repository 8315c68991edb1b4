// Integration tests that run the grandlab executable.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(GRANDLAB_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("grandlab_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, NormExamples) {
  auto j = nlohmann::json::parse(run("norm --p 2 --theta 1 --f one --format json").out);
  EXPECT_DOUBLE_EQ(j["value"].get<double>(), 1.0);
  EXPECT_TRUE(j["boundary_attained"].get<bool>());

  j = nlohmann::json::parse(run("norm --p 2 --theta 1 --f power:-0.5 --format json").out);
  EXPECT_NEAR(j["value"].get<double>(), 2.0, 1e-9);

  j = nlohmann::json::parse(run("norm --p 2 --theta 1 --f indicator:0,1 --weight power:1 --format json").out);
  EXPECT_NEAR(j["value"].get<double>(), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(j["eps_star"].get<double>(), 1.0);
}

TEST(Cli, DivergentNormIsReportedNotFailed) {
  const auto r = run("norm --p 2 --theta 1 --f power:-0.7 --format json");
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["divergent"].get<bool>());
  EXPECT_TRUE(j["value"].is_null());
}

TEST(Cli, PotentialExamples) {
  auto value = [](const std::string& args) {
    return nlohmann::json::parse(run("potential " + args + " --format json").out)["value"].get<double>();
  };
  EXPECT_NEAR(value("--kind riesz --alpha 0.5 --x 0.5 --f one"), 2.8284271247461903, 1e-14);
  EXPECT_NEAR(value("--kind maximal --x 0.75 --f indicator:0,0.5 --alpha 0.5"), 0.5773502691896258, 1e-12);
  EXPECT_NEAR(value("--kind left --alpha 0.5 --x 0.25 --f one"), 1.0, 1e-14);
  EXPECT_NEAR(value("--kind kalpha --alpha 0.5 --p 1.5 --weight power:1 --x 0 --f one"), 1.0, 1e-9);
}

TEST(Cli, ApconstExamples) {
  auto j = nlohmann::json::parse(run("apconst --r 2 --weight one --format json").out);
  EXPECT_DOUBLE_EQ(j["constant_estimate"].get<double>(), 1.0);
  j = nlohmann::json::parse(run("apconst --r 2 --weight power:0.5 --format json").out);
  EXPECT_NEAR(j["constant_estimate"].get<double>(), 1.1547005383792515, 1e-9);
  j = nlohmann::json::parse(run("apconst --r 2 --weight power:2 --format json").out);
  EXPECT_EQ(j["verdict"].get<std::string>(), "INF");
  EXPECT_TRUE(j["constant_estimate"].is_null());
  j = nlohmann::json::parse(run("apconst --sobolev --p 2 --alpha 0.25 --weight power:1 --format json").out);
  EXPECT_NEAR(j["constant_estimate"].get<double>(), 1.189207115002721, 1e-9);
}

TEST(Cli, BlowupCsvContract) {
  const auto r = run("blowup --op riesz --p 2 --alpha 0.25 --theta1 1 --theta2 1 --k 10,30 --format csv");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,absJ,eps_J,eta_J,norm_p,norm_q,ratio,dfactor");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("10,", 0), 0u);
  // ratio is the seventh column
  std::string cell;
  std::istringstream row(line);
  for (int i = 0; i < 7; ++i) std::getline(row, cell, ',');
  EXPECT_NEAR(std::stod(cell), 2.4685846669971494, 1e-12);
  std::getline(in, line);
  EXPECT_EQ(line.rfind("30,", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "verdict=diverging");

  const auto b = run("blowup --op riesz --p 2 --alpha 0.25 --theta1 1 --theta2 2 --format csv");
  EXPECT_NE(b.out.find("\nverdict=bounded"), std::string::npos);
}

TEST(Cli, SobolevRemark51) {
  const auto j = nlohmann::json::parse(run("sobolev --remark51 --p 2 --alpha 0.25 --format json").out);
  EXPECT_NEAR(j["grand_norm_f"].get<double>(), 2.0, 1e-9);
  EXPECT_LT(j["c2"].get<double>() / j["c1"].get<double>(), 10.0);
}

TEST(Cli, SobolevNecessityProbe) {
  const auto r = run("sobolev --p 2 --alpha 0.25 --theta 1 --weight power:2.2 --probe necessity --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"].get<std::string>(), "diverging");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("norm --p 2 --theta 1 --f one").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("norm --p 2 --f cube:3").code, 2);
  EXPECT_EQ(run("norm --p 2 --theta -1 --f one").code, 2);
  EXPECT_EQ(run("potential --kind riesz --alpha 1.5 --x 0.5 --f one").code, 2);
  EXPECT_EQ(run("apconst --r 2 --weight power:-2").code, 2);
  EXPECT_EQ(run("blowup --op hilbert --p 2 --alpha 0.25").code, 2);
  EXPECT_EQ(run("norm --p 2 --f one --format xml").code, 2);
  // eps_J drops below the solver bracket: a numerical failure, not a usage error.
  const auto r = run("blowup --op riesz --p 2 --alpha 0.25 --theta1 1e-6 --theta2 1 --k 10,10000000", true);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("numerical failure"), std::string::npos);
}

TEST(Cli, JsonRoundTrip) {
  for (const char* args : {"norm --p 2 --theta 1 --f power:-0.5 --format json",
                           "blowup --op left --p 2 --alpha 0.25 --kmin 8 --kmax 24 --format json",
                           "apconst --r 3 --weight power:0.7 --grid-n 128 --format json"}) {
    std::string text = run(args).out;
    while (!text.empty() && text.back() == '\n') text.pop_back();
    // Numbers are emitted in shortest round-trip form, so re-serializing
    // the parsed document reproduces it exactly.
    EXPECT_EQ(nlohmann::json::parse(text).dump(2), text) << args;
  }
  const auto j = nlohmann::json::parse(run("norm --p 2 --theta 1 --f power:-0.5 --format json").out);
  const double v = j["value"].get<double>();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  EXPECT_EQ(std::stod(buf), v);
}

TEST(Cli, Deterministic) {
  for (const char* args : {"blowup --op maximal --p 3 --alpha 0.2 --format csv",
                           "potential --kind right --alpha 0.3 --x 0.2 --f power:-0.4 --format json",
                           "apconst --r 2 --weight twopower:0.3,-0.2 --grid-n 128"}) {
    const auto a = run(args);
    const auto b = run(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, ConfigFileWithFlagPrecedence) {
  const auto cfg = scratch("norm.cfg");
  std::ofstream(cfg) << "# norm settings\np = 3\ntheta=1\nf=one\nformat=json\n";
  auto j = nlohmann::json::parse(run("norm --config " + cfg.string()).out);
  EXPECT_DOUBLE_EQ(j["p"].get<double>(), 3.0);
  j = nlohmann::json::parse(run("norm --config " + cfg.string() + " --p 2").out);
  EXPECT_DOUBLE_EQ(j["p"].get<double>(), 2.0);

  const auto sub = scratch("sub.cfg");
  std::ofstream(sub) << "subcommand=potential\nkind=left\nalpha=0.5\nx=0.25\nf=one\nformat=csv\n";
  const auto r = run("--config " + sub.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("left,1,0.25\n"), std::string::npos) << r.out;

  EXPECT_EQ(run("norm --config " + scratch("missing.cfg").string()).code, 2);
}

TEST(Cli, OutFile) {
  const auto path = scratch("out.csv");
  const std::string args = "blowup --op riesz --p 2 --alpha 0.25 --k 10,30 --format csv";
  const auto r = run(args + " --out " + path.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(path), run(args).out);
}

TEST(Cli, CsvQuotesTermsWithCommas) {
  const auto r = run("norm --p 2 --theta 1 --f \"sum:(one),(indicator:0,0.5)\" --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(",\"sum:(one),(indicator:0,0.5)\","), std::string::npos) << r.out;
}
