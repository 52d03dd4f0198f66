#include "lolab/report.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("lo_lab_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = "cd '" + scratch().string() + "' && " + env + " '" LO_LAB_BINARY "' " + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void write(const std::string& name, const std::string& text) { std::ofstream(scratch() / name) << text << '\n'; }

lolab::Json load(const std::string& name) {
  return lolab::parse_json_exact(lolab::read_text_file((scratch() / name).string()));
}

}  // namespace

TEST_CASE("exact reports the counterexample") {
  write("cex.json", R"({"dim": 2, "delta": "3/2", "vectors": [[1,0],[1,0],[1,0],[0,1]]})");
  const auto r = run("exact cex.json --report cex_report.json --csv cex.csv");
  CHECK(r.code == 0);
  CHECK(r.out.find("12/16") != std::string::npos);
  CHECK(r.out.find("10/16") != std::string::npos);
  CHECK(r.out.find("VIOLATION") != std::string::npos);
  const auto rep = load("cex_report.json");
  CHECK(rep["manifest"]["command"] == "exact");
  const auto csv = lolab::read_text_file((scratch() / "cex.csv").string());
  CHECK(csv.rfind("n,delta,regime,p_exact,erdos,Q,k", 0) == 0);
  CHECK(csv.find("4,3/2,counterexample,12/16,10/16") != std::string::npos);

  const auto v = run("--verify cex_report.json");
  CHECK(v.code == 0);
}

TEST_CASE("erdos prints the exact bound") {
  const auto r = run("erdos --n 4 --delta 1.5 --report e.json --csv e.csv");
  CHECK(r.code == 0);
  CHECK(r.out.find("10/16") != std::string::npos);
}

TEST_CASE("invalid input exits with 1") {
  write("empty.json", R"({"dim": 2, "vectors": []})");
  CHECK(run("exact empty.json --report x.json --csv x.csv").code == 1);
  write("short.json", R"({"dim": 2, "delta": 1, "vectors": [["1/2", 0]]})");
  CHECK(run("exact short.json --report x.json --csv x.csv").code == 1);
  CHECK(run("exact missing.json").code == 1);
  CHECK(run("exact --bogus").code == 1);
  CHECK(run("erdos --n 4 --delta 1 --quiet --report x.json --csv x.csv", "LO_LAB_THREADS=zero").code == 1);
}

TEST_CASE("cap exceeded exits with 2") {
  write("five.json", R"({"dim": 1, "delta": 1, "vectors": [[1],[1],[1],[1],[1]]})");
  CHECK(run("exact five.json --max-n 4 --report x.json --csv x.csv").code == 2);
}

TEST_CASE("tampered report fails verification with 3") {
  write("cex2.json", R"({"dim": 2, "delta": "3/2", "vectors": [[1,0],[1,0],[1,0],[0,1]]})");
  REQUIRE(run("exact cex2.json --quiet --report t.json --csv t.csv").code == 0);
  auto text = lolab::read_text_file((scratch() / "t.json").string());
  const auto pos = text.find("\"12\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 4, "\"13\"");
  write("t.json", text);
  CHECK(run("--verify t.json").code == 3);
}

TEST_CASE("reports round-trip for every command") {
  write("w.json", R"({"dim": 2, "delta": 1, "vectors": [["2",0],[0,"2"],[1,1]]})");
  const char* cmds[] = {
      "exact w.json",
      "fourier w.json --points 16 --doublings 2",
      "spread w.json --net 0.01",
      "scan --ns 4 --deltas 1.5 --restarts 2 --steps 10",
      "mc w.json --samples 5000 --seed 3",
  };
  for (const char* c : cmds) {
    CAPTURE(c);
    const auto r = run(std::string(c) + " --quiet --report rt.json --csv rt.csv", "LO_LAB_THREADS=2");
    CHECK(r.code == 0);
    const auto rep = load("rt.json");
    CHECK(rep.contains("manifest"));
    CHECK(rep["manifest"]["version"] == lolab::tool_version());
    CHECK(run("--verify rt.json --threads 1").code == 0);
  }
}

TEST_CASE("scan output is deterministic for a fixed manifest") {
  REQUIRE(run("scan --ns 4 --deltas 1.2 --restarts 2 --steps 10 --seed 4 --quiet --report a.json --csv a.csv").code == 0);
  REQUIRE(run("scan --ns 4 --deltas 1.2 --restarts 2 --steps 10 --seed 4 --quiet --report b.json --csv b.csv --threads 3").code == 0);
  CHECK(load("a.json")["results"] == load("b.json")["results"]);
  CHECK(lolab::read_text_file((scratch() / "a.csv").string()) == lolab::read_text_file((scratch() / "b.csv").string()));
}
