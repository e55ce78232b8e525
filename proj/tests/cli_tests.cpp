// Exercises the command-line interface end to end: exit codes, output
// formats, and the file formats shared with the library.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "jgrass/serialize.hpp"

namespace {

using jgrass::json;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(JGRASS_CLI_PATH) + " " + args + " 2>&1";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::cerr << "[FAIL] popen failed for: " << cmd << "\n";
    std::exit(1);
  }
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    std::cerr << "[FAIL] " << what << "\n";
    ++failures;
  }
}

void expect_exit(const RunResult& res, int want, const std::string& what) {
  if (res.exit_code != want) {
    std::cerr << "[FAIL] " << what << ": exit " << res.exit_code << ", wanted " << want
              << "\noutput:\n"
              << res.output << "\n";
    ++failures;
  }
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

int main() {
  using namespace jgrass;

  // sigma: correct cells, deterministic output, json agreement.
  {
    const RunResult a = run_cli("sigma --kmax 3 --nmax 5");
    expect_exit(a, 0, "sigma text");
    expect(a.output.find("k\\n") != std::string::npos, "sigma prints a header");
    const RunResult b = run_cli("sigma --kmax 3 --nmax 5");
    expect(a.output == b.output, "sigma output is byte-identical across runs");

    const RunResult j = run_cli("sigma --kmax 3 --nmax 5 --format json");
    expect_exit(j, 0, "sigma json");
    const json doc = json::parse(j.output);
    for (int k = 0; k <= 3; ++k)
      for (int n = k; n <= 5; ++n)
        expect(doc["rows"][k][n].get<std::int64_t>() == sigma(k, n),
               "sigma json cell (" + std::to_string(k) + "," + std::to_string(n) + ")");

    expect_exit(run_cli("sigma --kmax 7 --nmax 3"), 1, "sigma with kmax > nmax");
    expect_exit(run_cli("sigma --format yaml"), 1, "sigma with unknown format");

    const RunResult row0 = run_cli("sigma --kmax 0 --nmax 3");
    expect_exit(row0, 0, "sigma single row");
    expect(row0.output.find("1 1 1 1") != std::string::npos, "sigma row of ones");
  }

  // canonical -> classify round trip through a pair file.
  {
    const std::string path = temp_path("jgrass_cli_h.json");
    const RunResult w = run_cli("canonical --signature \"1.5708:1;l=1;s=0\" --out " + path);
    expect_exit(w, 0, "canonical writes a pair");
    const RunResult c = run_cli("classify --pair " + path);
    expect_exit(c, 0, "classify the canonical pair");
    expect(c.output.find("theta=1.5708 (mult 1)") != std::string::npos, "classify prints theta");
    expect(c.output.find("l=1, s=0") != std::string::npos, "classify prints l and s");
    expect(c.output.find("orientation: same") != std::string::npos, "classify prints orientation");

    // The written file parses with the library too.
    std::ifstream in(path);
    json doc;
    in >> doc;
    const StructurePair pair = pair_from_json(doc);
    expect(pair.isOrthogonal, "written canonical pair is orthogonal");
    expect(pair.dim() == 6, "written canonical pair has dim 6");

    expect_exit(run_cli("canonical --signature \"nonsense\" --out " + path), 1,
                "canonical rejects a malformed signature");
  }

  // classify: error paths.
  {
    expect_exit(run_cli("classify --pair /nonexistent.json"), 1, "classify missing file");

    const std::string bad = temp_path("jgrass_cli_bad.json");
    std::ofstream(bad) << "{ not json";
    expect_exit(run_cli("classify --pair " + bad), 1, "classify unparseable file");

    // A non-orthogonal pair must exit 2 with a NotOrthogonal message.
    const std::string gen = temp_path("jgrass_cli_general.json");
    const StructurePair pair = make_structure_pair(
        standard_structure(2), random_general_structure(2, 1, 404, 50.0));
    std::ofstream(gen) << pair_to_json(pair).dump();
    const RunResult r = run_cli("classify --pair " + gen);
    expect_exit(r, 2, "classify a non-orthogonal pair");
    expect(r.output.find("NotOrthogonal") != std::string::npos, "classify names the error");
  }

  // intersect: continuum flag sets exit 2; json round-trips.
  {
    const std::string path = temp_path("jgrass_cli_std.json");
    const StructurePair trivial =
        make_structure_pair(standard_structure(2), standard_structure(2));
    std::ofstream(path) << pair_to_json(trivial).dump();
    const RunResult r = run_cli("intersect --pair " + path + " --k 1");
    expect_exit(r, 2, "intersect the standard pair at k=1");
    expect(r.output.find("continuum") != std::string::npos, "intersect reports the continuum");

    const std::string hpath = temp_path("jgrass_cli_h2.json");
    run_cli("canonical --signature \"0.9:1;l=1;s=0\" --out " + hpath);
    const RunResult t = run_cli("intersect --pair " + hpath + " --k 1");
    expect_exit(t, 0, "intersect a generic canonical pair");
    const RunResult tj = run_cli("intersect --pair " + hpath + " --k 1 --json");
    expect_exit(tj, 0, "intersect --json");
    const json doc = json::parse(tj.output);
    expect(doc["counts"]["rawSame"].get<int>() == 1, "intersect json raw count");
    expect(doc["counts"]["expectedSame"].get<int>() == 1, "intersect json expected count");
    expect(doc["points"].size() == 1, "intersect json points");
  }

  // verify: pass, missing seed, unknown mode, json shape.
  {
    const RunResult ok = run_cli("verify --mode orth-same --n 2 --k 1 --trials 5 --seed 9");
    expect_exit(ok, 0, "verify orth-same");
    expect(ok.output.find("pass=5") != std::string::npos, "verify prints the pass count");

    expect_exit(run_cli("verify --mode orth-same --n 2 --k 1 --trials 5"), 1,
                "verify without --seed");
    expect_exit(run_cli("verify --mode bogus --n 2 --k 1 --trials 5 --seed 9"), 1,
                "verify with unknown mode");

    const RunResult j = run_cli("verify --mode orth-opposite --n 2 --k 1 --trials 4 --seed 3 --json");
    expect_exit(j, 0, "verify --json");
    const json doc = json::parse(j.output);
    expect(doc["passCount"].get<int>() == 4, "verify json passCount");
    expect(doc["outcomes"].size() == 4, "verify json outcomes");

    // An absurd transversality threshold makes every orthogonal trial fail.
    expect_exit(run_cli("verify --mode orth-same --n 3 --k 1 --trials 2 --seed 1 --trans-tol 100"),
                3, "verify exits 3 on failing trials");
  }

  // example-r4 and the boundary latitude.
  {
    const RunResult r = run_cli("example-r4 --a 1.2 --b 0.8");
    expect_exit(r, 0, "example-r4 generic");
    expect(r.output.find("2 points, signs") != std::string::npos, "example-r4 prints the points");
    expect(r.output.find("signed total 0") != std::string::npos, "example-r4 prints the total");

    expect_exit(run_cli("example-r4 --a 1 --b 1"), 2, "example-r4 degenerate parameters");

    const RunResult b = run_cli("example-r4-boundary --b 0.7071067811865476");
    expect_exit(b, 0, "example-r4-boundary");
    expect(b.output.find("u_max = 0.6") != std::string::npos, "boundary latitude 0.6");

    const RunResult bj = run_cli("example-r4 --a 1.2 --b 0.8 --json");
    const json doc = json::parse(bj.output);
    expect(doc["signedTotal"].get<int>() == 0, "example-r4 json signed total");
  }

  if (failures) {
    std::cerr << failures << " CLI check(s) failed\n";
    return 1;
  }
  std::cout << "all CLI checks passed\n";
  return 0;
}
