#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"

namespace fs = std::filesystem;
using fraxonium::cli::run;

namespace {

struct Result {
  int code = 0;
  std::string err;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fraxonium_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Result call(std::vector<std::string> args, const std::string& out_name = "out.txt") {
    const std::string out = path(out_name);
    fs::remove(out);
    args.insert(args.begin(), "fraxonium");
    args.push_back("--out");
    args.push_back(out);
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream err;
    Result r;
    r.code = run(static_cast<int>(argv.size()), argv.data(), err);
    r.err = err.str();
    std::ifstream in(out, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  static std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> lines;
    std::istringstream is(csv);
    std::string line;
    while (std::getline(is, line)) {
      if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    return lines;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, EngineerQutrit) {
  const auto r = call({"engineer", "--d", "3", "--eta", "0.04"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("a,1,2.46740110027\n"), std::string::npos);
  EXPECT_NE(r.out.find("# eta=0.04\n"), std::string::npos);
  EXPECT_NE(r.out.find("# degeneracy_residual="), std::string::npos);
}

TEST_F(Cli, EngineerQuquint) {
  const auto r = call({"engineer", "--d", "5", "--eta", "0.04"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("a,1,2.46740110027\n"), std::string::npos);
  EXPECT_NE(r.out.find("a,2,-0.616850275068\n"), std::string::npos);
}

TEST_F(Cli, EngineerRejectsFluxoniumDimension) {
  const auto r = call({"engineer", "--d", "2", "--eta", "0.04"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("d >= 3 required"), std::string::npos);
  EXPECT_NE(r.err.find("fluxonium preset"), std::string::npos);
}

TEST_F(Cli, SpectrumIsByteStable) {
  const std::vector<std::string> args{"spectrum", "--preset", "qutrit", "--points", "5",
                                      "--levels", "4", "--parity"};
  const auto a = call(args, "a.csv");
  const auto b = call(args, "b.csv");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto lines = data_lines(a.out);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "phix,E0,E1,E2,E3,P0,P1,P2,P3");
  EXPECT_NE(a.out.find("# e_c=0.08\n"), std::string::npos);
  EXPECT_NE(a.out.find("# n_fock=100\n"), std::string::npos);
}

TEST_F(Cli, CustomPresetWithoutHarmonicsIsEquallySpaced) {
  const auto r = call({"spectrum", "--preset", "custom", "--ec", "0.1", "--el", "0.4", "--points",
                       "1", "--levels", "4", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  const auto row = doc["rows"][0];
  const double w = std::sqrt(8.0 * 0.1 * 0.4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(row[i + 1].get<double>(), w * (i + 0.5), 1e-11);
  EXPECT_EQ(doc["config"]["preset"], "custom");
  EXPECT_TRUE(doc["config"]["harmonics"].empty());
}

TEST_F(Cli, HarmonicParsing) {
  EXPECT_EQ(call({"spectrum", "--preset", "custom", "--ec", "0.1", "--el", "0.1", "--harmonic",
                  "1:-1", "--points", "1"})
                .code,
            0);
  EXPECT_EQ(call({"spectrum", "--preset", "custom", "--ec", "0.1", "--el", "0.1", "--harmonic",
                  "x:1", "--points", "1"})
                .code,
            2);
  EXPECT_EQ(call({"spectrum", "--preset", "qutrit", "--harmonic", "1:1", "--points", "1"}).code, 2);
  EXPECT_EQ(call({"spectrum", "--preset", "custom", "--points", "1"}).code, 2);
}

TEST_F(Cli, UnknownPresetIsConfigError) {
  EXPECT_EQ(call({"spectrum", "--preset", "heptonium"}).code, 2);
  EXPECT_EQ(call({"spectrum", "--bogus", "1"}).code, 2);
  EXPECT_EQ(call({"tb-compare", "--preset", "fluxonium"}).code, 2);
}

TEST_F(Cli, ConfigFileWithOverride) {
  write("run.ini", "[spectrum]\npreset=fluxonium\npoints=3\nlevels=2\n");
  const auto a = call({"--config", path("run.ini"), "spectrum"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("# preset=fluxonium\n"), std::string::npos);
  EXPECT_EQ(data_lines(a.out).size(), 4u);
  EXPECT_EQ(data_lines(a.out)[0], "phix,E0,E1");

  const auto b = call({"--config", path("run.ini"), "spectrum", "--points", "6"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(data_lines(b.out).size(), 7u);
}

TEST_F(Cli, ConfigFileRejectsUnknownKeys) {
  write("bad.ini", "[spectrum]\nlevelz=3\n");
  const auto r = call({"--config", path("bad.ini"), "spectrum"});
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, DipolesTable) {
  const auto r = call({"dipoles", "--preset", "qutrit", "--phix", "0", "--levels", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = data_lines(r.out);
  EXPECT_EQ(lines[0], "alpha,beta,abs_phi,abs_n,omega_over_wp");
  EXPECT_EQ(lines.size(), 1u + 15u);
}

TEST_F(Cli, KiteOutputAndFailure) {
  const auto ok = call({"kite", "--ej1", "0.1", "--ej2", "0.15"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(data_lines(ok.out)[0], "n,epsilon_n,sin_n");
  EXPECT_NE(ok.out.find("# e_k_tilde="), std::string::npos);
  const auto bad = call({"kite", "--ej1", "0.9", "--ej2", "0.5", "--tol", "1e-9"});
  EXPECT_EQ(bad.code, 3);
}

TEST_F(Cli, TbCompareColumns) {
  const auto r = call({"tb-compare", "--preset", "qutrit", "--el", "0.06", "--ec", "0.08",
                       "--points", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_lines(r.out)[0], "phix,tb_E0,tb_E1,tb_E2,exact_E0,exact_E1,exact_E2");
  EXPECT_NE(r.out.find("# e_l=0.06\n"), std::string::npos);
  EXPECT_NE(r.out.find("# splitting_ratio="), std::string::npos);
}

TEST_F(Cli, StirapSummary) {
  const auto r = call({"stirap", "--T", "500", "--cycle", "default", "--trace-points", "11",
                       "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["columns"], nlohmann::json({"t", "P0", "P1", "P2", "Pu"}));
  EXPECT_EQ(doc["rows"].size(), 11u);
  EXPECT_NEAR(doc["summary"]["P0"].get<double>(), 0.5, 0.01);
  EXPECT_NEAR(doc["summary"]["P2"].get<double>(), 0.5, 0.01);
  EXPECT_GT(doc["summary"]["fidelity_vs_holonomy"].get<double>(), 0.999);
  EXPECT_EQ(doc["config"]["cycle"], "default");
}

TEST_F(Cli, CheckExitCodes) {
  EXPECT_EQ(call({"check", "--preset", "fluxonium"}).code, 0);
  EXPECT_EQ(call({"check", "--preset", "qutrit", "--n1", "100", "--n2", "140"}).code, 3);
}
