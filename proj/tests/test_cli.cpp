#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "srgkit/io.hpp"

namespace fs = std::filesystem;
using srg::io::Json;

namespace {

const fs::path kDir = fs::current_path() / "cli_tmp";

int run(const std::string& args, std::string* out = nullptr) {
  fs::create_directories(kDir);
  const fs::path log = kDir / "stdout.txt";
  const std::string cmd = std::string(SRGKIT_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write(const std::string& name, const std::string& body) {
  fs::create_directories(kDir);
  const fs::path p = kDir / name;
  std::ofstream(p) << body;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("malformed JSON exits with 2") {
  const auto f = write("broken.json", "{\"A\": [[-1]], ");
  CHECK(run("srg-lti " + f + " -o " + (kDir / "o1").string()) == 2);
  CHECK(run("srg-lti " + (kDir / "missing.json").string()) == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("unstable model exits with 3") {
  const auto f = write("unstable.json", R"({"A": [[1]], "B": [[1]], "C": [[1]], "D": [[0]]})");
  CHECK(run("srg-lti " + f + " -o " + (kDir / "o2").string()) == 3);
}

TEST_CASE("srg-lti writes region, CSV, SVG and manifest") {
  const auto f = write("lag.json", R"({"A": [[-1]], "B": [[1]], "C": [[1]], "D": [[0]]})");
  const fs::path out = kDir / "lag";
  REQUIRE(run("srg-lti " + f + " --upsilon 0.5 --lambda '' -o " + out.string()) == 0);
  for (const char* name : {"region.json", "boundary.csv", "region.svg", "sigma.csv", "manifest.json"})
    CHECK(fs::exists(out / name));
  const auto j = Json::parse(slurp(out / "region.json"));
  REQUIRE(j["upper"].size() == 1);
  CHECK(j["upper"][0][0].get<double>() == doctest::Approx(0.5));
  CHECK(j["upper"][0][1].get<double>() == doctest::Approx(0.5).epsilon(0.002));
  const auto m = Json::parse(slurp(out / "manifest.json"));
  CHECK(m["command"] == "srg-lti");
  CHECK(m["outputs"].size() == 5);
}

TEST_CASE("region calculus from the command line") {
  const auto d12 = write("d12.json", R"({"kind": "disk_algebra", "upper": [[1.5, 0.5]]})");
  std::string out;
  REQUIRE(run("region inverse " + d12, &out) == 0);
  const auto j = Json::parse(out);
  CHECK(j["upper"][0][0].get<double>() == doctest::Approx(0.75));
  CHECK(j["upper"][0][1].get<double>() == doctest::Approx(0.25));
  REQUIRE(run("region rmin " + d12, &out) == 0);
  CHECK(std::stod(out) == doctest::Approx(2.0));
  CHECK(run("region inverse", &out) == 2);
  CHECK(run("region sum " + d12, &out) == 2);
  CHECK(run("region frobnicate " + d12, &out) == 2);
  const fs::path f = kDir / "isum.json";
  REQUIRE(run("region improved-sum " + d12 + " " + d12 + " -o " + f.string(), &out) == 0);
  CHECK(fs::exists(f));
  CHECK(fs::exists(f.string() + ".manifest.json"));
}

TEST_CASE("feedback analysis exit codes") {
  const auto ok = write("fb_ok.json", R"({"h1": {"sector": [0.5, 1]}, "h2": {"sector": [0, 1]}})");
  const auto bad = write("fb_bad.json", R"({"h1": {"sector": [-2, 2]}, "h2": {"sector": [-1, 1]}})");
  CHECK(run("analyze-feedback " + ok + " --resolution 0.01 -o " + (kDir / "fb1").string()) == 0);
  CHECK(run("analyze-feedback " + bad + " --resolution 0.01 -o " + (kDir / "fb2").string()) == 4);
  CHECK(run("analyze-feedback " + ok + " --non-incremental --resolution 0.01 -o " + (kDir / "fb3").string()) == 3);
  CHECK(run("analyze-feedback " + ok + " --non-incremental --assume-wellposed --resolution 0.01 -o " +
            (kDir / "fb4").string()) == 0);
}

TEST_CASE("environment fallback for flags") {
  const auto ok = write("fb_env.json", R"({"h1": {"sector": [0.5, 1]}, "h2": {"sector": [0, 1]}})");
  const std::string cmd = "env SRGKIT_RESOLUTION=0.02 SRGKIT_TAU_POINTS=7 " + std::string(SRGKIT_CLI_PATH) +
                          " analyze-feedback " + ok + " -o " + (kDir / "env").string() + " > /dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto m = Json::parse(slurp(kDir / "env" / "manifest.json"));
  CHECK(m["settings"]["resolution"].get<double>() == doctest::Approx(0.02));
  CHECK(m["settings"]["tau_points"].get<int>() == 7);
}

TEST_CASE("sector command verifies declared sectors") {
  const auto good = write("sat.json", R"({"kind": "saturation", "params": [1, 1, 0]})");
  const auto lie = write("lie.json",
                         R"({"kind": "custom_pointwise", "table": [[-1, -2], [0, 0], [1, 1]], "declared_sector": [0.5, 1.5]})");
  CHECK(run("sector " + good + " --verify --samples 20000 -o " + (kDir / "s1").string()) == 0);
  CHECK(run("sector " + lie + " --verify --samples 20000 -o " + (kDir / "s2").string()) == 3);
  const auto sb = write("sb.json", R"({"channels": [[-1, 0], [-1, 1]], "incremental": true})");
  CHECK(run("sector " + sb + " -o " + (kDir / "s3").string()) == 0);
  CHECK(fs::exists(kDir / "s3" / "normalization.json"));
}

TEST_CASE("analysis output is byte-identical across runs") {
  const auto ok = write("fb_det.json", R"({"h1": {"sector": [0.5, 1]}, "h2": {"A": [[-1]], "B": [[1]], "C": [[1]], "D": [[0]]}})");
  REQUIRE(run("analyze-feedback " + ok + " --resolution 0.01 -o " + (kDir / "d1").string()) == 0);
  REQUIRE(run("analyze-feedback " + ok + " --resolution 0.01 -o " + (kDir / "d2").string()) == 0);
  CHECK(slurp(kDir / "d1" / "report.json") == slurp(kDir / "d2" / "report.json"));
  CHECK(slurp(kDir / "d1" / "manifest.json") == slurp(kDir / "d2" / "manifest.json"));
}

TEST_CASE("simulate writes outputs and a seeded gain estimate") {
  const auto model = write("lag_lfr.json", R"({
    "A": [[-1]], "B": [[0, 1]], "C": [[1], [1]], "D": [[0, 0], [0, 0]],
    "partition": {"z_rows": [0], "y_rows": [1], "w_cols": [0], "u_cols": [1]},
    "phi": {"sector": {"channels": [[0, 1]], "incremental": true}},
    "nonlinearities": [{"kind": "tanh", "params": [1, 0]}]})");
  const auto input = write("u.csv", "t,u\n0,1\n0.01,1\n0.02,1\n0.03,1\n");
  REQUIRE(run("simulate " + model + " --input " + input + " -o " + (kDir / "sim").string()) == 0);
  CHECK(fs::exists(kDir / "sim" / "output.csv"));
  REQUIRE(run("simulate " + model + " --gain --multisines 2 --noise 2 -o " + (kDir / "g1").string()) == 0);
  REQUIRE(run("simulate " + model + " --gain --multisines 2 --noise 2 -o " + (kDir / "g2").string()) == 0);
  CHECK(slurp(kDir / "g1" / "gain.json") == slurp(kDir / "g2" / "gain.json"));
  const auto g = Json::parse(slurp(kDir / "g1" / "gain.json"));
  CHECK(g["value"].get<double>() <= 1.0 + 1e-6);
}

TEST_CASE("an unstable LFR points at the loop transformation") {
  const auto model = write("unstable_lfr.json", R"({
    "A": [[1]], "B": [[1, 1]], "C": [[1], [1]], "D": [[0, 0], [0, 0]],
    "partition": {"z_rows": [0], "y_rows": [1], "w_cols": [0], "u_cols": [1]},
    "phi": {"sector": {"channels": [[0, 1]]}}})");
  std::string out;
  CHECK(run("analyze-lfr " + model + " -o " + (kDir / "u").string(), &out) == 3);
  CHECK(out.find("sweep-transform") != std::string::npos);
}
