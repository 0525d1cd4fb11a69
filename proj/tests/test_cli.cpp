#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "degenlab/cli.hpp"
#include "doctest.h"

#ifndef DEGENLAB_CLI_PATH
#error "DEGENLAB_CLI_PATH must point at the command-line driver"
#endif

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("degenlab_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_file(const fs::path& dir, const std::string& name,
                    const std::string& body) {
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(DEGENLAB_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

const char* kEulerConfig = R"({
  "experiment": "euler-exact",
  "params": {
    "problem": {"n_b": 0.0, "n_bhat": 0.0, "n_c": 2.0,
                "data": {"f": [{"lo": 1.0, "hi": 2.0, "coef": 1.0, "exponent": 0.0}]}},
    "p": 2.0,
    "theta": 0.0,
    "eval_points": [0.5]
  }
})";

}  // namespace

TEST_CASE("cli run produces deterministic exact results") {
  TempDir tmp("cli_run");
  const fs::path cfg = write_file(tmp.path, "cfg.json", kEulerConfig);
  const fs::path log = tmp.path / "log.txt";

  const int rc1 =
      run_cli("run " + cfg.string() + " --out " + (tmp.path / "a").string(), log);
  REQUIRE(rc1 == 0);
  const int rc2 =
      run_cli("run " + cfg.string() + " --out " + (tmp.path / "b").string(), log);
  REQUIRE(rc2 == 0);

  const std::string csv_a = read_file(tmp.path / "a" / "results.csv");
  const std::string csv_b = read_file(tmp.path / "b" / "results.csv");
  CHECK(csv_a == csv_b);
  CHECK(csv_a.rfind("experiment,config_hash,row,key,metric,value\n", 0) == 0);
  CHECK(csv_a.find(",u,0.03125\n") != std::string::npos);
  CHECK(csv_a.find(",alpha,-2\n") != std::string::npos);
  CHECK(fs::exists(tmp.path / "a" / "summary.json"));
}

TEST_CASE("cli rejects malformed configs with exit code 2") {
  TempDir tmp("cli_bad");
  const fs::path log = tmp.path / "log.txt";

  const fs::path unknown = write_file(tmp.path, "unknown.json", R"({
    "experiment": "hardy",
    "params": {"function": {"kind": "xexp"}, "p": 2.0, "theta": 1.0,
               "grid": {"s_min": -8.0, "s_max": 2.0, "n": 129}, "typo": true}
  })");
  CHECK(run_cli("run " + unknown.string() + " --out " +
                    (tmp.path / "out").string(),
                log) == 2);
  CHECK(read_file(log).find("unknown key") != std::string::npos);

  CHECK(run_cli("validate " + unknown.string(), log) == 2);
  CHECK(read_file(log).find("params.typo") != std::string::npos);

  const fs::path missing = write_file(tmp.path, "missing.json", R"({
    "experiment": "hardy",
    "params": {"function": {"kind": "xexp"}, "p": 2.0,
               "grid": {"s_min": -8.0, "s_max": 2.0, "n": 129}}
  })");
  CHECK(run_cli("validate " + missing.string(), log) == 2);
  CHECK(read_file(log).find("params.theta") != std::string::npos);

  const fs::path garbled = write_file(tmp.path, "garbled.json", "{not json");
  CHECK(run_cli("run " + garbled.string(), log) == 2);

  CHECK(run_cli("run " + (tmp.path / "absent.json").string(), log) == 2);
}

TEST_CASE("cli surfaces module failures with exit code 3") {
  TempDir tmp("cli_mod");
  const fs::path log = tmp.path / "log.txt";
  const fs::path degenerate = write_file(tmp.path, "degenerate.json", R"({
    "experiment": "euler-exact",
    "params": {"problem": {"n_b": 0.0, "n_bhat": 0.0, "n_c": -0.25},
               "p": 2.0, "theta": 0.0}
  })");
  CHECK(run_cli("run " + degenerate.string() + " --out " +
                    (tmp.path / "out").string(),
                log) == 3);
  CHECK(read_file(log).find("DegenerateRoots") != std::string::npos);
}

TEST_CASE("cli validate accepts a correct config") {
  TempDir tmp("cli_ok");
  const fs::path cfg = write_file(tmp.path, "cfg.json", kEulerConfig);
  const fs::path log = tmp.path / "log.txt";
  CHECK(run_cli("validate " + cfg.string(), log) == 0);
  CHECK(read_file(log).find("ok") != std::string::npos);
}

TEST_CASE("cli honours format, seed, and thread controls") {
  TempDir tmp("cli_fmt");
  const fs::path log = tmp.path / "log.txt";
  const fs::path cfg = write_file(tmp.path, "cfg.json", kEulerConfig);

  REQUIRE(run_cli("run " + cfg.string() + " --out " +
                      (tmp.path / "json_out").string() + " --format json",
                  log) == 0);
  const std::string json_body = read_file(tmp.path / "json_out" / "results.json");
  CHECK(json_body.rfind("[", 0) == 0);
  CHECK(json_body.find("\"metric\": \"alpha\"") != std::string::npos);

  const fs::path ap = write_file(tmp.path, "ap.json", R"({
    "experiment": "ap-weight",
    "params": {"weight": {"kind": "power", "a": 0.5}, "p": 2.0,
               "resolution": 64, "doubling": false, "comparison": true}
  })");
  REQUIRE(run_cli("run " + ap.string() + " --out " + (tmp.path / "s1").string() +
                      " --seed 11",
                  log) == 0);
  REQUIRE(run_cli("run " + ap.string() + " --out " + (tmp.path / "s2").string() +
                      " --seed 11",
                  log) == 0);
  REQUIRE(run_cli("run " + ap.string() + " --out " + (tmp.path / "s3").string() +
                      " --seed 12",
                  log) == 0);
  const std::string s1 = read_file(tmp.path / "s1" / "results.csv");
  const std::string s2 = read_file(tmp.path / "s2" / "results.csv");
  const std::string s3 = read_file(tmp.path / "s3" / "results.csv");
  CHECK(s1 == s2);
  CHECK(s1 != s3);

  const std::string cmd = "DEGENLAB_THREADS=3 " + std::string(DEGENLAB_CLI_PATH) +
                          " run " + cfg.string() + " --out " +
                          (tmp.path / "thr").string() + " >" +
                          (tmp.path / "log2.txt").string() + " 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  const std::string summary = read_file(tmp.path / "thr" / "summary.json");
  CHECK(summary.find("\"threads\": 3") != std::string::npos);
}

TEST_CASE("run_config_file is callable in-process") {
  TempDir tmp("cli_lib");
  const fs::path cfg = write_file(tmp.path, "cfg.json", kEulerConfig);
  degenlab::cli::Overrides overrides;
  overrides.out_dir = (tmp.path / "out").string();
  const degenlab::cli::RunOutput out =
      degenlab::cli::run_config_file(cfg.string(), overrides);
  CHECK(out.rows == 13);
  CHECK(fs::exists(out.csv_path));
  CHECK(fs::exists(out.summary_path));

  const auto diags = degenlab::cli::validate_file(cfg.string());
  CHECK(diags.empty());
}
