#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

// Exercises the installed binary end to end. ctest runs these from the build
// directory, where ./cqedlab and ../configs both resolve.

namespace {

namespace fs = std::filesystem;

int run(const std::string& cmd) {
  int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::path("cli_test_out") / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  REQUIRE(out.good());
  out << body;
}

const char* kSmallScenario = R"({
  "seed": 42,
  "device": {
    "omega_q_MHz": 4593.0,
    "alpha_MHz": 113.0,
    "beta_photons_per_nW": 18.23,
    "zeta_MHz2_per_nW": 0.0456,
    "modes": [
      {"name": "B", "omega_MHz": 4969.0, "g_MHz": 14.2, "kappa_MHz": 0.1},
      {"name": "A", "omega_MHz": 4960.0, "g_MHz": 13.4, "kappa_MHz": 0.1}
    ]
  },
  "scans": [
    {
      "kind": "stark",
      "target": "B",
      "powers_nW": [0.5, 1.0, 1.5],
      "pump_grid_MHz": {"start": 4580.0, "stop": 4600.0, "points": 101},
      "noise_sigma": 0.02
    }
  ]
})";

}  // namespace

TEST_CASE("argument errors exit with code 2") {
  CHECK(run("./cqedlab") == 2);
  CHECK(run("./cqedlab frobnicate") == 2);
  CHECK(run("./cqedlab paper-numbers --no-such-flag") == 2);
  CHECK(run("./cqedlab simulate") == 2);  // --config is required
}

TEST_CASE("missing config file produces error.json and exit 2") {
  fs::path out = fresh_dir("missing_cfg");
  CHECK(run("./cqedlab simulate --config no/such/file.json --out " +
            out.string()) == 2);
  auto err = nlohmann::json::parse(slurp(out / "error.json"));
  CHECK(err.at("error_type") == "config");
  CHECK(err.at("message").get<std::string>().find("cannot open config file") !=
        std::string::npos);
}

TEST_CASE("unknown scenario keys are rejected by name") {
  fs::path out = fresh_dir("bad_key");
  auto cfg = nlohmann::json::parse(kSmallScenario);
  cfg["extra_knob"] = 1;
  write_file(out / "bad.json", cfg.dump(2));
  CHECK(run("./cqedlab simulate --config " + (out / "bad.json").string() +
            " --out " + out.string()) == 2);
  auto err = nlohmann::json::parse(slurp(out / "error.json"));
  CHECK(err.at("message").get<std::string>().find("unknown key 'extra_knob'") !=
        std::string::npos);
}

TEST_CASE("paper-numbers artifacts are reproducible byte for byte") {
  fs::path a = fresh_dir("pn_a"), b = fresh_dir("pn_b");
  CHECK(run("./cqedlab paper-numbers --out " + a.string()) == 0);
  CHECK(run("./cqedlab paper-numbers --out " + b.string()) == 0);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "paper_numbers.csv") == slurp(b / "paper_numbers.csv"));
  CHECK(fs::exists(a / "metadata.json"));
}

TEST_CASE("simulate is seed-deterministic and seed-sensitive") {
  fs::path cfg_dir = fresh_dir("sim_cfg");
  write_file(cfg_dir / "scenario.json", kSmallScenario);
  std::string cfg = (cfg_dir / "scenario.json").string();

  fs::path s1 = fresh_dir("sim_1"), s2 = fresh_dir("sim_2"),
           s3 = fresh_dir("sim_3");
  CHECK(run("./cqedlab simulate --config " + cfg + " --out " + s1.string()) ==
        0);
  CHECK(run("./cqedlab simulate --config " + cfg + " --out " + s2.string()) ==
        0);
  CHECK(run("./cqedlab simulate --config " + cfg + " --seed 43 --out " +
            s3.string()) == 0);

  std::string t1 = slurp(s1 / "scan0_stark_traces.csv");
  CHECK(t1 == slurp(s2 / "scan0_stark_traces.csv"));
  CHECK(t1 != slurp(s3 / "scan0_stark_traces.csv"));

  auto rep = nlohmann::json::parse(slurp(s3 / "report.json"));
  CHECK(rep.at("seed") == 43);
  CHECK(rep.at("subcommand") == "simulate");
}

TEST_CASE("lattice subcommand writes the mode table") {
  fs::path out = fresh_dir("lat");
  CHECK(run("./cqedlab lattice --config ../configs/lattice_chain.json --out " +
            out.string()) == 0);
  std::string modes = slurp(out / "modes.csv");
  CHECK(modes.rfind("mode_index,freq_MHz,g_MHz\n", 0) == 0);
  auto rep = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(rep.at("subcommand") == "lattice");
  CHECK(fs::exists(out / "dos.csv"));
}
