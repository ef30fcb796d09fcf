#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mhd1d/config.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace mhd1d;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mhd1d-cli-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

fs::path write_file(const fs::path& dir, const std::string& name,
                    const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream out(p);
  out << text;
  return p;
}

struct CmdResult {
  int exit_code;
  std::string output;  // stdout only
};

CmdResult run_cmd(const std::string& args) {
  const std::string cmd = std::string(MHD1D_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (std::fgets(buf, sizeof(buf), pipe)) out += buf;
  const int status = ::pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kQuietRun = R"(
[grid]
domain = full-line
L = 10
n_cells = 100

[scheme]
t_end = 0.1
dt_max = 2e-3

[init]
profile = gaussian
amp_theta = 0.3
amp_v = 0.2
)";

}  // namespace

TEST_CASE("parse_config: minimal file fills documented defaults") {
  TempDir tmp;
  const fs::path cfg = write_file(tmp.path, "min.cfg",
                                  "[grid]\nL = 10\nn_cells = 100\n"
                                  "[scheme]\nt_end = 1\n");
  const RunConfig c = parse_config(cfg.string());
  CHECK(c.domain == DomainKind::FullLine);
  CHECK(c.problem == ProblemType::Cauchy);
  CHECK(c.n_cells == 100);
  CHECK(c.scheme.cfl == doctest::Approx(0.5));
  CHECK(c.params.mu1 == doctest::Approx(1.0));
  CHECK(c.params.R == doctest::Approx(1.0));
  CHECK(c.profile.kind == Profile::Kind::Constant);
  CHECK(c.checks.entropy);
  CHECK_FALSE(c.checks.reconstruct);
}

TEST_CASE("parse_config: semantic errors name the offending key") {
  TempDir tmp;
  {
    const fs::path cfg = write_file(tmp.path, "bad_n.cfg",
                                    "[grid]\nL = 10\nn_cells = -5\n"
                                    "[scheme]\nt_end = 1\n");
    try {
      parse_config(cfg.string());
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("grid.n_cells") != std::string::npos);
    }
  }
  {
    const fs::path cfg = write_file(tmp.path, "typo.cfg",
                                    "[grid]\nL = 10\nn_cells = 100\n"
                                    "[scheme]\nt_end = 1\n"
                                    "[params]\nviscocity = 2\n");
    try {
      parse_config(cfg.string());
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("viscocity") != std::string::npos);
    }
  }
  {
    const fs::path cfg = write_file(tmp.path, "noprobe.cfg",
                                    "[grid]\nL = 10\nn_cells = 100\n"
                                    "[scheme]\nt_end = 1\n"
                                    "[checks]\nreconstruct = true\n");
    try {
      parse_config(cfg.string());
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("probes") != std::string::npos);
    }
  }
}

TEST_CASE("parse_config: mismatched regime and domain rejected") {
  TempDir tmp;
  const fs::path cfg = write_file(tmp.path, "mismatch.cfg",
                                  "[grid]\ndomain = full-line\nL = 10\nn_cells = 100\n"
                                  "[problem]\nregime = neumann-theta\n"
                                  "[scheme]\nt_end = 1\n");
  CHECK_THROWS_AS(parse_config(cfg.string()), ConfigError);
}

TEST_CASE("roots subcommand: printed digits and exit codes") {
  const CmdResult zero = run_cmd("roots 0");
  CHECK(zero.exit_code == 0);
  CHECK(zero.output == "1.000000000000 1.000000000000 0\n");

  const CmdResult half = run_cmd("roots 0.5");
  CHECK(half.exit_code == 0);
  double a1 = 0, a2 = 0, bound = 0;
  REQUIRE(std::sscanf(half.output.c_str(), "%lf %lf %lf", &a1, &a2, &bound) == 3);
  CHECK(a1 == doctest::Approx(0.3017).epsilon(1e-3));
  CHECK(a2 == doctest::Approx(2.3575).epsilon(1e-3));
  CHECK(bound == doctest::Approx(1.0 / (2.0 * std::log(2.0) - 1.0)).epsilon(1e-10));

  CHECK(run_cmd("roots -1").exit_code == 2);
}

TEST_CASE("run subcommand: output files, checks, and determinism") {
  TempDir tmp;
  const fs::path cfg = write_file(tmp.path, "run.cfg", kQuietRun);
  const fs::path out1 = tmp.path / "out1";
  const fs::path out2 = tmp.path / "out2";

  const CmdResult r1 = run_cmd("run " + cfg.string() + " --quiet --out " + out1.string());
  CHECK(r1.exit_code == 0);
  REQUIRE(fs::exists(out1 / "series.csv"));
  REQUIRE(fs::exists(out1 / "snapshots.csv"));
  REQUIRE(fs::exists(out1 / "reports.jsonl"));

  const std::string series = read_file(out1 / "series.csv");
  CHECK(series.rfind("t,E_total,G_entropy,W,", 0) == 0);
  // one header plus one row per record time
  CHECK(std::count(series.begin(), series.end(), '\n') >= 2);

  const CmdResult r2 = run_cmd("run " + cfg.string() + " --quiet --out " + out2.string());
  CHECK(r2.exit_code == 0);
  CHECK(read_file(out2 / "series.csv") == series);
  CHECK(read_file(out2 / "snapshots.csv") == read_file(out1 / "snapshots.csv"));
}

TEST_CASE("run subcommand: exit codes for config and solver failures") {
  TempDir tmp;
  CHECK(run_cmd("run " + (tmp.path / "missing.cfg").string()).exit_code == 2);

  const fs::path bad = write_file(tmp.path, "bad.cfg",
                                  "[grid]\nL = 10\nn_cells = 100\n"
                                  "[scheme]\nt_end = 1\n"
                                  "[unknown]\nkey = 1\n");
  CHECK(run_cmd("run " + bad.string()).exit_code == 2);

  // hostile run: violent rarefaction against a high positivity floor
  const fs::path hostile = write_file(tmp.path, "hostile.cfg",
                                      "[grid]\nL = 10\nn_cells = 100\n"
                                      "[params]\nkappa0 = 0.02\n"
                                      "[scheme]\nt_end = 0.5\npositivity_floor = 0.5\n"
                                      "[init]\nprofile = gaussian\namp_u = 6\n"
                                      "amp_theta = -0.48\nwidth = 3\n");
  const fs::path out = tmp.path / "hout";
  CHECK(run_cmd("run " + hostile.string() + " --quiet --out " + out.string()).exit_code == 1);
}

TEST_CASE("mms subcommand: convergence table and unknown case") {
  TempDir tmp;
  const fs::path cfg = write_file(tmp.path, "mms.cfg",
                                  "[grid]\nL = 10\nn_cells = 50\n"
                                  "[scheme]\nt_end = 0.1\ndt_max = 4e-3\ncfl = 0.9\n"
                                  "[mms]\ncase = gaussian-decay\n");
  const fs::path out = tmp.path / "mout";
  const CmdResult r = run_cmd("mms " + cfg.string() + " --levels 2 --quiet --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "convergence.csv"));

  const fs::path bad = write_file(tmp.path, "mms_bad.cfg",
                                  "[grid]\nL = 10\nn_cells = 50\n"
                                  "[scheme]\nt_end = 0.1\n"
                                  "[mms]\ncase = foo\n");
  CHECK(run_cmd("mms " + bad.string() + " --quiet").exit_code == 2);
}

TEST_CASE("reconstruct subcommand: far-field run reproduces v") {
  TempDir tmp;
  const fs::path cfg = write_file(tmp.path, "rec.cfg",
                                  "[grid]\nL = 10\nn_cells = 100\n"
                                  "[scheme]\nt_end = 0.5\ndt_max = 2e-3\n");
  const CmdResult r = run_cmd("reconstruct " + cfg.string() + " --probe 0 --at 0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("max_rel_error=") != std::string::npos);
}
