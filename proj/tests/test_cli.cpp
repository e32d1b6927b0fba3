#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("planetspec_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write(const std::string& name, const std::string& body) {
  auto p = scratch() / name;
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Runs the CLI with stdout sent to `out` and stderr discarded.
int run(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("\"") + PLANETSPEC_CLI_PATH + "\" " + args + " > \"" + out.string() +
                          "\" 2> /dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

const std::string kDisk =
    R"({"inner_radius": 0.0, "interfaces": [], "layers": [{"model": "constant", "c": 1.0}],
        "density": [{"rho": 1.0}]})";
const std::string kHeadWave =
    R"({"inner_radius": 0.0, "interfaces": [0.6],
        "layers": [{"model": "constant", "c": 1.0}, {"model": "constant", "c": 1.5}],
        "density": [{"rho": 1.0}, {"rho": 1.0}]})";

}  // namespace

TEST_CASE("cli exit codes") {
  const auto disk = write("disk.json", kDisk);
  const auto out = scratch() / "out.txt";
  CHECK(run("profile-check --profile " + disk.string(), out) == 0);
  CHECK(run("blsp --profile " + disk.string() + " --cutoff 6.5", out) == 0);
  auto j = nlohmann::json::parse(slurp(out));
  CHECK(j.at("entries").size() == 11);

  CHECK(run("disk --qmax 1", out) == 2);
  CHECK(run("disk --qmax 8", out) == 0);
  CHECK(run("modesum --profile " + disk.string() + " --sigma 0 --cutoff 6", out) == 2);
  CHECK(run("blsp --profile " + disk.string() + " --bogus", out) == 2);
  CHECK(run("blsp --profile " + (scratch() / "missing.json").string(), out) == 2);
  CHECK(run("", out) == 2);

  const auto hw = write("hw.json", kHeadWave);
  CHECK(run("gliding --profile " + hw.string() + " --interface 3", out) == 2);
  CHECK(run("gliding --profile " + hw.string() + " --interface 0 --count 12", out) == 0);
  CHECK(nlohmann::json::parse(slurp(out)).contains("decay"));
}

TEST_CASE("cli rejects malformed and non-Herglotz profiles") {
  const auto out = scratch() / "bad.txt";
  const auto broken = write("broken.json", R"({"inner_radius": 0.0, "layers": [)");
  CHECK(run("profile-check --profile " + broken.string(), out) == 2);
  const auto unknown = write("unknown.json", R"({"inner_radius": 0.0, "interfaces": [],
      "layers": [{"model": "cubic", "c": 1.0}]})");
  CHECK(run("blsp --profile " + unknown.string(), out) == 2);
  // c = r^2 gives rho = 1 / r, decreasing everywhere.
  const auto falling = write("falling.json", R"({"inner_radius": 0.2, "interfaces": [],
      "layers": [{"model": "power", "c0": 1.0, "exponent": 2.0}]})");
  CHECK(run("profile-check --profile " + falling.string(), out) == 1);
}

TEST_CASE("cli output is deterministic") {
  const auto disk = write("disk.json", kDisk);
  const auto a = scratch() / "a.json", b = scratch() / "b.json";
  for (const std::string cmd : {"blsp --profile " + disk.string() + " --cutoff 12 --harmonics",
                                "trace-amplitudes --profile " + disk.string() + " --cutoff 9",
                                std::string("disk --qmax 10 --format csv")}) {
    CAPTURE(cmd);
    const int ca = run(cmd, a), cb = run(cmd, b);
    CHECK(ca == cb);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
  }
}

TEST_CASE("cli modesum reuses its cache") {
  const auto disk = write("disk.json", kDisk);
  const auto cache = scratch() / "modes.csv";
  fs::remove(cache);
  const auto out1 = scratch() / "m1.json", out2 = scratch() / "m2.json";
  const std::string args = "modesum --profile " + disk.string() +
                           " --lmax 20 --omegamax 60 --sigma 0.05 --cutoff 6.5 --cache " + cache.string();
  REQUIRE(run(args, out1) == 0);
  REQUIRE(run(args, out2) == 0);
  auto j1 = nlohmann::json::parse(slurp(out1)), j2 = nlohmann::json::parse(slurp(out2));
  CHECK(j1.at("cache") == "miss");
  CHECK(j2.at("cache") == "hit");
  CHECK(j1.at("candidates") == j2.at("candidates"));
  CHECK(j1.at("modes") == j2.at("modes"));

  // A wider request than the cache holds recomputes.
  const auto out3 = scratch() / "m3.json";
  REQUIRE(run("modesum --profile " + disk.string() +
                  " --lmax 25 --omegamax 60 --sigma 0.05 --cutoff 6.5 --cache " + cache.string(),
              out3) == 0);
  CHECK(nlohmann::json::parse(slurp(out3)).at("cache") == "miss");

  write("modes.csv", "not a mode table\n");
  REQUIRE(run(args, out1) == 0);
  CHECK(nlohmann::json::parse(slurp(out1)).at("cache") == "miss");
}

TEST_CASE("cli modesum smoothing defaults to the shortest basic length") {
  const auto disk = write("disk.json", kDisk);
  const auto out = scratch() / "sigma.json";
  REQUIRE(run("modesum --profile " + disk.string() + " --lmax 10 --omegamax 30 --cutoff 4.5", out) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  // The diameter, length 4, is the shortest ray.
  CHECK(j.at("tolerances").at("sigma").get<double>() == doctest::Approx(4e-3).epsilon(1e-12));
  CHECK(run("modesum --profile " + disk.string() + " --lmax 10 --omegamax 30 --cutoff 1", out) == 2);
}
