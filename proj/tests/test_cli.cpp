#include <gtest/gtest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = ZOLL_CLI_PATH;
const std::string kSamples = ZOLL_SAMPLES_DIR;

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  std::string cmd = kCli + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  Result r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string sample(const std::string& name) { return kSamples + "/" + name; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("zoll_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string at(const std::string& name) const { return (dir / name).string(); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, KeplerIsZoll) {
  auto r = run("verify-zoll --profile " + sample("kepler.json") + " --out " + at("k"));
  EXPECT_EQ(r.code, 0) << r.out;
  auto rep = nlohmann::json::parse(slurp(dir / "k/zoll_report.json"));
  EXPECT_EQ(rep["verdict"], "zoll");
  EXPECT_EQ(rep["method"], "quadrature");
  EXPECT_LT(rep["max_dtheta_dev"].get<double>(), 1e-9);
  EXPECT_EQ(rep["grid"], 32);
  EXPECT_TRUE(rep.contains("version"));
  EXPECT_TRUE(rep.contains("config"));
  EXPECT_TRUE(rep.contains("energy_drift"));
  EXPECT_EQ(slurp(dir / "k/zoll_samples.csv").substr(0, 42), "c,p_theta,dtheta,period,energy_drift\n0.035");
}

TEST_F(Cli, EvenPerturbationIsNotZoll) {
  auto r = run("verify-zoll --profile " + sample("even_perturbation.json") + " --out " + at("e"));
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "e/zoll_report.json"))["verdict"], "non-zoll");
}

TEST_F(Cli, IntegrationMethod) {
  auto r = run("verify-zoll --profile " + sample("odd_bump.json") + " --method integration --grid 8 --out " + at("i"));
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST_F(Cli, InvalidInputsExitTwo) {
  EXPECT_EQ(run("verify-zoll --profile " + sample("malformed.json") + " --out " + at("m")).code, 2);
  EXPECT_EQ(run("verify-zoll --profile " + at("missing.json") + " --out " + at("m")).code, 2);
  EXPECT_EQ(run("verify-zoll --profile " + sample("kepler.json") + " --h -1 --out " + at("m")).code, 2);
  EXPECT_EQ(run("verify-zoll --profile " + sample("kepler.json") + " --method simplex --out " + at("m")).code, 2);
  EXPECT_EQ(run("extend --energies 2,3 --seed-file " + sample("core_odd_bump.json") + " --out " + at("x.json")).code,
            2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("rigidity --mode matrix --order 0 --out " + at("r")).code, 2);
}

TEST_F(Cli, ExtendRationalPrintsGamma) {
  auto r = run("extend --energies 15,12,10 --seed-file " + sample("seed_quarter.json") + " --out " + at("x.json") +
               " --verify");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("gamma = 1/4"), std::string::npos) << r.out;
  auto j = nlohmann::json::parse(slurp(dir / "x.json"));
  EXPECT_EQ(j["kind"], "extended");
  EXPECT_EQ(j["gamma"], "1/4");
  EXPECT_EQ(j["construction"], "rational");
  // The written profile verifies level by level.
  auto v = run("verify-zoll --profile " + at("x.json") + " --out " + at("v"));
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_TRUE(fs::exists(dir / "v/zoll_report_level3.json"));
}

TEST_F(Cli, ExtendIrrationalIsRigid) {
  auto r = run("extend --energies 1.4142135623730951,1.1,1 --seed-file " + sample("seed_quarter.json") + " --out " +
               at("x.json"));
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("rigidity"), std::string::npos) << r.out;
  EXPECT_FALSE(fs::exists(dir / "x.json"));
}

TEST_F(Cli, ExtendIrrationalWithoutSmallnessIsInvalid) {
  // xi = (0, sqrt 2, 3): irrational ratio but xi_2 + xi_3 > 1.
  auto r = run("extend --energies 4,1.6568542494923801,1 --seed-file " + sample("seed_quarter.json") + " --out " +
               at("x.json"));
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST_F(Cli, SnapRationalRecovers) {
  std::string args = "extend --energies 15.000437,12,10 --seed-file " + sample("seed_rational.json") + " --out " +
                     at("x.json");
  // Too close to a rational ladder to call either way without snapping.
  EXPECT_EQ(run(args).code, 2);
  auto r = run(args + " --snap-rational 0.01");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("snapped energies: 15 12 10"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("gamma = 1/4"), std::string::npos) << r.out;
}

TEST_F(Cli, ExtendChain) {
  auto r = run("extend --energies 8,4,2 --seed-file " + sample("core_odd_bump.json") + " --out " + at("x.json") +
               " --verify");
  EXPECT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(slurp(dir / "x.json"));
  EXPECT_EQ(j["construction"], "chain");
  EXPECT_EQ(j["segments"].size(), 3u);
  for (const auto& z : j["checks"]["zoll"]) EXPECT_EQ(z["verdict"], "zoll");
}

TEST_F(Cli, ExtendCase3Pair) {
  auto r = run("extend --energies 15,10 --case 3 --seed-file " + sample("seed_case3.json") + " --out " + at("x.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  auto bad = run("extend --energies 15,10 --case 1 --seed-file " + sample("seed_case3.json") + " --out " + at("y.json"));
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("case mismatch"), std::string::npos);
}

TEST_F(Cli, FiguresThree) {
  auto r = run("figures --which 3 --out " + at("f"));
  EXPECT_EQ(r.code, 0) << r.out;
  for (const char* f : {"fig3_left.csv", "fig3_right.csv", "fig3_left.svg", "fig3_right.svg"}) {
    EXPECT_TRUE(fs::exists(dir / "f" / f)) << f;
  }
  EXPECT_EQ(slurp(dir / "f/fig3_left.csv").substr(0, 25), "x,stage1,stage2,stage3\n-2");
  EXPECT_EQ(slurp(dir / "f/fig3_right.csv").substr(0, 7), "y,F2,f\n");
  EXPECT_NE(slurp(dir / "f/fig3_left.svg").find("<polyline"), std::string::npos);
  EXPECT_EQ(run("figures --which 5 --out " + at("g")).code, 2);
}

TEST_F(Cli, FlatPotential) {
  auto r = run("flat-potential --h 2 --profile " + sample("flat_profile.json") + " --verify --out " + at("p"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(slurp(dir / "p/potential.csv").substr(0, 17), "sigma,P,dP_dsigma");
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "p/flat_zoll_report.json"))["verdict"], "zoll");
  // A profile reaching x = 1 has no flat potential.
  EXPECT_EQ(run("flat-potential --h 2 --profile " + sample("even_perturbation.json") + " --out " + at("q")).code, 2);
}

TEST_F(Cli, RigidityMatrixAndOrbit) {
  auto r = run("rigidity --mode matrix --order 40 --out " + at("r"));
  EXPECT_EQ(r.code, 0) << r.out;
  auto rep = nlohmann::json::parse(slurp(dir / "r/rigidity_report.json"));
  EXPECT_EQ(rep["upper_triangular"], true);
  EXPECT_EQ(rep["kernel_trivial"], true);
  EXPECT_TRUE(fs::exists(dir / "r/rigidity_matrix.csv"));

  auto o = run("rigidity --mode orbit --xi 0.5,0.25 --out " + at("o"));
  EXPECT_EQ(o.code, 0) << o.out;
  auto orb = nlohmann::json::parse(slurp(dir / "o/orbit_report.json"));
  EXPECT_EQ(orb["points"], 5);
  EXPECT_EQ(orb["exhausted"], true);
}

TEST_F(Cli, DeterministicOutputs) {
  for (const char* tag : {"a", "b"}) {
    std::string d = at(tag);
    ASSERT_EQ(run("make-profile --kind random --rng-seed 7 --out " + d + "/p.json").code, 0);
    ASSERT_EQ(run("verify-zoll --profile " + d + "/p.json --h 3 --out " + d).code, 0);
    ASSERT_EQ(run("figures --which 2 --samples 201 --out " + d).code, 0);
    ASSERT_EQ(run("rigidity --mode orbit --xi 0.35355339059327373,0.3 --out " + d).code, 0);
  }
  for (const char* f : {"zoll_samples.csv", "fig2_left.csv", "fig2_right.csv", "orbit.csv"}) {
    std::string a = slurp(dir / "a" / f), b = slurp(dir / "b" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, b) << f;
  }
  // The seed is recorded.
  auto p = nlohmann::json::parse(slurp(dir / "a/p.json"));
  EXPECT_EQ(p["generator"]["rng_seed"], 7);
}

TEST_F(Cli, HelpAndVersion) {
  auto h = run("--help");
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("verify-zoll"), std::string::npos);
  auto v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("1.0.0"), std::string::npos);
}
