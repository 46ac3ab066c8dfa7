#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#ifndef XCHAN_CLI_PATH
#define XCHAN_CLI_PATH "./xchan"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(XCHAN_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
  int st = pclose(pipe);
  r.exit_code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST_CASE("rates command reports a reference configuration") {
  RunResult r = run_cli("rates --n 10,8,4,13");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"case\":\"II\"") != std::string::npos);
  CHECK(r.out.find("\"D_exact\":\"13\"") != std::string::npos);
  CHECK(r.out.find("\"r11p\":6") != std::string::npos);
  CHECK(r.out.find("\"r22p\":5") != std::string::npos);
  CHECK(r.out.find("\"r22c\":2") != std::string::npos);

  r = run_cli("rates --n 9,9,9,9");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"D_exact\":\"12\"") != std::string::npos);
}

TEST_CASE("usage failures exit with code 2") {
  CHECK(run_cli("rates --n 3,5,5,3").exit_code == 2);   // weak direct links
  CHECK(run_cli("rates --n 1,2,3").exit_code == 2);     // malformed tuple
  CHECK(run_cli("det-sim --n 6,6,6,6").exit_code == 2); // missing --seed
  CHECK(run_cli("nonsense").exit_code != 0);
}

TEST_CASE("budget exhaustion exits with code 3") {
  RunResult r = run_cli("mindist --n 34,28,28,34 --delta 0.5 --seed 3 --budget 2");
  CHECK(r.exit_code == 3);
}

TEST_CASE("stochastic commands are byte-stable across runs and thread counts") {
  const std::string cmd =
      "outage --model det --n 9,9,9,9 --delta 0.5 --samples 4000 --seed 1";
  setenv("XCHAN_THREADS", "1", 1);
  RunResult a = run_cli(cmd);
  setenv("XCHAN_THREADS", "3", 1);
  RunResult b = run_cli(cmd);
  unsetenv("XCHAN_THREADS");
  RunResult c = run_cli(cmd);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.out.find("\"within_delta\":true") != std::string::npos);
}

TEST_CASE("outage command respects the budget it was given") {
  RunResult r = run_cli(
      "outage --model gauss --n 34,28,28,34 --delta 0.5 --samples 10 --seed 2 "
      "--budget 2");
  CHECK(r.exit_code == 3);
}

TEST_CASE("mac-map writes a PGM file and a JSON summary") {
  const char* path = "/tmp/xchan_cli_map.pgm";
  std::remove(path);
  RunResult r = run_cli(std::string("mac-map --n 7 --grid 64 --out ") + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("black_fraction") != std::string::npos);
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::string magic;
  f >> magic;
  CHECK(magic == "P5");
}

TEST_CASE("dof-table emits one row per level with the limit column") {
  RunResult r = run_cli("dof-table --n-min 6 --n-max 12 --delta 0.5 --samples 0 --seed 7");
  CHECK(r.exit_code == 0);
  int rows = 0;
  for (char ch : r.out)
    if (ch == '\n') ++rows;
  CHECK(rows == 8);  // header + 7 levels
  CHECK(r.out.find("1.333333") != std::string::npos);
}

TEST_CASE("stochastic outputs embed their full run configuration") {
  RunResult r = run_cli("det-sim --n 9,9,9,9 --delta 0.5 --samples 200 --seed 5");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"config\"") != std::string::npos);
  CHECK(r.out.find("\"seed\":5") != std::string::npos);
  CHECK(r.out.find("\"samples\":200") != std::string::npos);
  CHECK(r.out.find("\"delta\":0.5") != std::string::npos);
}

TEST_CASE("bounds command reports the LP and sandwich verdict") {
  RunResult r = run_cli("bounds --n 10,8,4,13 --gains 2,2,2,2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"lp_optimum\":\"13\"") != std::string::npos);
  CHECK(r.out.find("\"sandwich_ok\":true") != std::string::npos);
  CHECK(r.out.find("gauss_within_D_plus_4") != std::string::npos);
}
