// End-to-end driver checks: exit codes, report files, and byte determinism.
// The driver path arrives via the WARPEDLAB_CLI_PATH compile definition.

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef WARPEDLAB_CLI_PATH
#error "WARPEDLAB_CLI_PATH must point at the driver binary"
#endif

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + WARPEDLAB_CLI_PATH + "\" " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef _WIN32
  return status;
#else
  return (status & 0x7f) == 0 ? (status >> 8) & 0xff : -1;
#endif
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("weyl quick run passes and writes both reports") {
  const std::string out = "/tmp/wl_cli_weyl";
  REQUIRE(run_cli("weyl --rmax 986960 --grid 16 --out " + out) == 0);
  const std::string csv = slurp(out + "/weyl.csv");
  const std::string json = slurp(out + "/weyl.json");
  CHECK(csv.find("# version") != std::string::npos);
  CHECK(csv.find("R,count,fit_count") != std::string::npos);
  CHECK(json.find("\"pass\": true") != std::string::npos);
  CHECK(json.find("\"command\": \"weyl\"") != std::string::npos);
}

TEST_CASE("sweep on the digit family is byte-deterministic") {
  const std::string out = "/tmp/wl_cli_sweep";
  REQUIRE(run_cli("sweep --action odometer --levels 8,16,32 --out " + out) == 0);
  const std::string csv1 = slurp(out + "/sweep.csv");
  const std::string json1 = slurp(out + "/sweep.json");
  REQUIRE(run_cli("sweep --action odometer --levels 8,16,32 --out " + out) == 0);
  CHECK(slurp(out + "/sweep.csv") == csv1);
  CHECK(slurp(out + "/sweep.json") == json1);
  CHECK(!csv1.empty());
}

TEST_CASE("greedy runs are byte-deterministic in the seed") {
  const std::string out = "/tmp/wl_cli_net";
  const std::string args =
      "net --action torus-translation --levels 4 --epsilon 0.6 --seed 99 --out " + out;
  REQUIRE(run_cli(args) == 0);
  const std::string csv1 = slurp(out + "/net.csv");
  REQUIRE(run_cli(args) == 0);
  CHECK(slurp(out + "/net.csv") == csv1);
  CHECK(csv1.find("t,index,weight") != std::string::npos);
}

TEST_CASE("config errors exit with code 1") {
  CHECK(run_cli("sweep --levels 10,5 --out /tmp/wl_cli_err") == 1);
  CHECK(run_cli("net --action warp-drive --out /tmp/wl_cli_err") == 1);
  CHECK(run_cli("net --config /tmp/wl_cli_missing_config.json --out /tmp/wl_cli_err") ==
        1);
  CHECK(run_cli("spectrum --operator banana --out /tmp/wl_cli_err") == 1);
  CHECK(run_cli("") == 1);  // a subcommand is required
}

TEST_CASE("numerical failures exit with code 2 and name the worst datum") {
  // Two grid points on a tiny window cannot reproduce the counting constant.
  const std::string out = "/tmp/wl_cli_fail";
  CHECK(run_cli("weyl --rmax 40 --grid 2 --out " + out) == 2);
  const std::string json = slurp(out + "/weyl.json");
  CHECK(json.find("\"pass\": false") != std::string::npos);
  CHECK(json.find("failures") != std::string::npos);
  CHECK(json.find("worst datum") != std::string::npos);
}

TEST_CASE("box comparison stays bi-Lipschitz and reports rows") {
  const std::string out = "/tmp/wl_cli_box";
  REQUIRE(run_cli("boxcompare --depth-min 3 --depth-max 5 --out " + out) == 0);
  const std::string json = slurp(out + "/boxcompare.json");
  CHECK(json.find("\"worst_L\": 1.0") != std::string::npos);
  CHECK(json.find("\"worst_C\": 0.0") != std::string::npos);
}

TEST_CASE("accumulate reports the threshold without failing") {
  const std::string out = "/tmp/wl_cli_acc";
  REQUIRE(run_cli("accumulate --levels 5,10,20,22,30,40 --out " + out) == 0);
  const std::string json = slurp(out + "/accumulate.json");
  CHECK(json.find("\"threshold_t0\": 20.0") != std::string::npos);
}

TEST_CASE("config file plus flag overrides compose") {
  const std::string cfg = "/tmp/wl_cli_compose.json";
  {
    std::ofstream out(cfg, std::ios::trunc);
    out << R"({"action": "odometer", "levels": [8, 16], "out": "/tmp/wl_cli_cfg_a"})";
  }
  REQUIRE(run_cli("sweep --config " + std::string(cfg) +
                  " --out /tmp/wl_cli_cfg_b") == 0);
  // The flag override wins for the output directory.
  CHECK(!slurp("/tmp/wl_cli_cfg_b/sweep.json").empty());
  const std::string json = slurp("/tmp/wl_cli_cfg_b/sweep.json");
  CHECK(json.find("\"action\": \"odometer\"") != std::string::npos);
}
