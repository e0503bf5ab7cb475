#include <filesystem>
#include <fstream>
#include <gtest/gtest.h>
#include <json.hpp>
#include <sstream>

#include "geomom/cli.hpp"

using geomom::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "geomom");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content = "") {
  const auto p = std::filesystem::temp_directory_path() / ("geomom_test_" + name);
  if (!content.empty()) std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"check", "helicoid", "--fcc", "--samples", "10"}).code, 0);
  const auto bad = run({"check", "helicoid", "--dqc", "--vg", "sigma_x", "--samples", "10"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("check failed: dqc"), std::string::npos);
  EXPECT_EQ(run({"check", "nosuchsurface"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"geometry", "plane", "--convention", "+1,+1"}).code, 2);
  EXPECT_EQ(run({"geometry", "plane", "--gamma-rep", "sigma_x,sigma_x,sigma_z"}).code, 2);
  EXPECT_EQ(run({"hamiltonian", "plane", "--vg", "u + sigma_z"}).code, 2);
  EXPECT_EQ(run({"surfaces", "export", "klein"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, CheckJsonShape) {
  const auto r = run({"--json", "check", "pseudosphere", "--samples", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  ASSERT_EQ(j["reports"].size(), 4u);
  for (const auto& rep : j["reports"]) {
    for (const char* key : {"check", "surface", "convention", "seed", "points", "tolerance", "max_residual",
                            "per_component", "pass"})
      EXPECT_TRUE(rep.contains(key)) << key;
    EXPECT_EQ(rep["seed"], 42);
    EXPECT_EQ(rep["points"], 8);
  }
}

TEST(Cli, TextMirrorsJson) {
  const auto text = run({"check", "torus", "--tangency", "--samples", "5"}).out;
  const auto j = nlohmann::json::parse(run({"--json", "check", "torus", "--tangency", "--samples", "5"}).out);
  EXPECT_NE(text.find("check: tangency"), std::string::npos);
  EXPECT_NE(text.find("max_residual: " + j["reports"][0]["max_residual"].dump()), std::string::npos);
}

TEST(Cli, Deterministic) {
  for (const auto& cmd : std::vector<std::vector<std::string>>{
           {"--json", "check", "catenoid", "--samples", "6"},
           {"--json", "solve-vg", "helicoid", "--samples", "6"},
           {"momentum", "sphere", "--seed", "7"}}) {
    EXPECT_EQ(run(cmd).out, run(cmd).out);
  }
  EXPECT_NE(run({"momentum", "sphere", "--seed", "7"}).out, run({"momentum", "sphere", "--seed", "8"}).out);
}

TEST(Cli, OutputFile) {
  const auto path = temp_file("out.json");
  std::filesystem::remove(path);
  const auto r = run({"--json", "--output", path.string(), "geometry", "cylinder"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["surface"], "cylinder");
}

TEST(Cli, ExportedSpecLoadsBack) {
  const auto path = temp_file("torus.json", run({"surfaces", "export", "torus"}).out);
  const auto a = run({"--json", "geometry", "torus"});
  const auto b = run({"--json", "geometry", path.string()});
  EXPECT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SurfacesList) {
  const auto r = run({"surfaces", "list"});
  EXPECT_EQ(r.out, "plane\ncylinder\nsphere\ntorus\ncatenoid\npseudosphere\nhelicoid\n");
}

TEST(Cli, HelicoidIsMinimal) {
  const auto j = nlohmann::json::parse(run({"--json", "geometry", "helicoid"}).out);
  EXPECT_EQ(j["mean_curvature"], "0");
}

TEST(Cli, SolveVgSummary) {
  const auto r = run({"solve-vg", "pseudosphere", "--samples", "10"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("summary: dimension 2: span{I, sigma_z}"), std::string::npos);
  const auto plane = nlohmann::json::parse(run({"--json", "solve-vg", "plane", "--samples", "5"}).out);
  EXPECT_EQ(plane["dimension"], 4);
}

TEST(Cli, ApplyMomentumToSpinor) {
  const auto path = temp_file("spinor.json", R"({"psi1": "u^2", "psi2": "v"})");
  const auto r = run({"--json", "--hbar", "0.5", "apply", "plane", "--op", "Pi_x", "--spinor", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& row : j["samples"]) {
    const double u = row["u"];
    EXPECT_NEAR(row["psi1"][0].get<double>(), 0.0, 1e-15);
    EXPECT_NEAR(row["psi1"][1].get<double>(), -u, 1e-14);  // -i hbar 2u
    EXPECT_NEAR(row["psi2"][1].get<double>(), 0.0, 1e-15);
  }
}

TEST(Cli, BadSpinorFile) {
  const auto bad = temp_file("bad.json", R"({"psi1": "u +", "psi2": "v"})");
  const auto r = run({"apply", "plane", "--op", "x", "--spinor", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("offset"), std::string::npos);
  EXPECT_EQ(run({"apply", "plane", "--op", "x", "--spinor", "/nonexistent/spinor.json"}).code, 2);
  const auto missing = temp_file("missing.json", R"({"psi1": "u"})");
  EXPECT_EQ(run({"apply", "plane", "--op", "x", "--spinor", missing.string()}).code, 2);
  const auto ok = temp_file("ok.json", R"({"psi1": "u", "psi2": "v"})");
  EXPECT_EQ(run({"apply", "plane", "--op", "q", "--spinor", ok.string()}).code, 2);
}

TEST(Cli, ToleranceOverride) {
  const auto r = run({"check", "sphere", "--fcc", "--samples", "5", "--tol", "0"});
  EXPECT_EQ(r.code, 1);
}
