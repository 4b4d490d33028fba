// End-to-end checks of the command-line tool: exit codes, output files,
// and byte-identical reruns. Takes the tool path as argv[1].
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
int g_failures = 0;

void expect(bool ok, const std::string& what) {
  std::cout << (ok ? "ok   " : "FAIL ") << what << '\n';
  if (!ok) ++g_failures;
}

int run(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <path-to-tool>\n";
    return 2;
  }
  g_cli = argv[1];
  const fs::path base = fs::temp_directory_path() / "aggcli_test";
  fs::remove_all(base);
  fs::create_directories(base);

  // Happy path: every subcommand succeeds and writes its files + manifest.
  const fs::path d1 = base / "mix";
  expect(run("mixture --spec fi:d=0.3 --out " + d1.string()) == 0,
         "mixture exits 0");
  expect(fs::exists(d1 / "mixture.csv"), "mixture.csv written");
  expect(fs::exists(d1 / "manifest.json"), "manifest.json written");

  const fs::path d2 = base / "spec";
  expect(run("spectrum --mixture fi:d=0.25 --grid 64 --out " + d2.string()) == 0,
         "spectrum exits 0");
  expect(fs::exists(d2 / "spectrum.csv"), "spectrum.csv written");

  const fs::path d3 = base / "acvf";
  expect(run("acvf --mixture uniform:a=-0.5,b=0.5 --lags 16 --out " +
             d3.string()) == 0,
         "acvf exits 0");
  expect(fs::exists(d3 / "acvf.csv"), "acvf.csv written");

  const fs::path d4 = base / "dis";
  expect(run("disaggregate --f1 fi:d=0.2 --f2 sfi:d=0.3 --out " + d4.string()) ==
             0,
         "disaggregate exits 0");
  expect(fs::exists(d4 / "mixture.csv"), "disaggregated mixture.csv written");

  const fs::path d5 = base / "wold";
  expect(run("wold --spectrum fi:d=0.3 -J 256 --grid 4096 --out " +
             d5.string()) == 0,
         "wold exits 0");
  expect(fs::exists(d5 / "ma.csv"), "ma.csv written");

  const fs::path d6 = base / "sim";
  expect(run("simulate --mixture uniform:a=-0.5,b=0.5 -N 64 -T 512 --seed 9 "
             "--replicates 3 --lags 10 --threads 2 --out " +
             d6.string()) == 0,
         "simulate exits 0");
  expect(fs::exists(d6 / "aggregate.csv"), "aggregate.csv written");
  expect(fs::exists(d6 / "acf_comparison.csv"), "acf_comparison.csv written");
  expect(fs::exists(d6 / "periodogram.csv"), "periodogram.csv written");

  expect(run("verify --suite cd-identity") == 0, "verify cd-identity exits 0");
  expect(run("verify --suite asymptotics --d1 0.2 --d2 0.3") == 0,
         "verify asymptotics exits 0");

  // Idempotence: rerunning a deterministic command reproduces every byte.
  const fs::path d2b = base / "spec_rerun";
  expect(run("spectrum --mixture fi:d=0.25 --grid 64 --out " + d2b.string()) ==
             0,
         "spectrum rerun exits 0");
  expect(slurp(d2 / "spectrum.csv") == slurp(d2b / "spectrum.csv"),
         "spectrum.csv byte-identical across reruns");

  const fs::path d6b = base / "sim_rerun";
  expect(run("simulate --mixture uniform:a=-0.5,b=0.5 -N 64 -T 512 --seed 9 "
             "--replicates 3 --lags 10 --threads 1 --out " +
             d6b.string()) == 0,
         "simulate rerun exits 0");
  expect(slurp(d6 / "aggregate.csv") == slurp(d6b / "aggregate.csv"),
         "aggregate.csv byte-identical across thread counts");

  // Validation failures exit 1.
  expect(run("mixture --spec nosuchkind:d=0.3 --out " +
             (base / "bad1").string()) == 1,
         "unknown mixture kind exits 1");
  expect(run("mixture --spec fi:d=0.9 --out " + (base / "bad2").string()) == 1,
         "out-of-range parameter exits 1");
  expect(run("disaggregate --f1 uniform:a=-0.5,b=0.5 --f2 sfi:d=0.3 --out " +
             (base / "bad3").string()) == 1,
         "unsupported factor support exits 1");
  expect(run("acvf") == 1, "missing required options exits 1");

  std::cout << (g_failures ? "CLI TESTS FAILED\n" : "CLI TESTS PASSED\n");
  return g_failures ? 1 : 0;
}
