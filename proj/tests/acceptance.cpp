// Acceptance suite: runs every top-level requirement at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jgrass/jgrass.hpp"
#include "test_helpers.hpp"

namespace {

using namespace jgrass;
using Clock = std::chrono::steady_clock;

int failures = 0;

struct Criterion {
  std::string detail;
  bool ok = true;
  Clock::time_point start = Clock::now();

  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      detail = why;
    }
  }
  void finish(int index, const std::string& title) {
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", index,
                title.c_str(), secs, ok ? "" : " -- ", ok ? "" : detail.c_str());
    if (!ok) ++failures;
  }
};

// The reference grid of generic plane counts, 0 <= k <= 10, k <= n <= 15.
const std::vector<std::vector<long long>> kReferenceTable = {
    {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
    {1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1},
    {1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7},
    {1, 0, 2, 0, 3, 0, 4, 0, 5, 0, 6, 0, 7},
    {1, 1, 3, 3, 6, 6, 10, 10, 15, 15, 21, 21},
    {1, 0, 3, 0, 6, 0, 10, 0, 15, 0, 21},
    {1, 1, 4, 4, 10, 10, 20, 20, 35, 35},
    {1, 0, 4, 0, 10, 0, 20, 0, 35},
    {1, 1, 5, 5, 15, 15, 35, 35},
    {1, 0, 5, 0, 15, 0, 35},
    {1, 1, 6, 6, 21, 21},
};

std::string run_cli_capture(const std::string& args, int* exit_code) {
  const std::string cmd = std::string(JGRASS_CLI_PATH) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    *exit_code = -1;
    return out;
  }
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

StructurePair sample_orth_pair(int n, int orientation1, std::uint64_t seed) {
  return make_structure_pair(random_orthogonal_structure(n, 1, Rng::derive(seed, 0)),
                             random_orthogonal_structure(n, orientation1, Rng::derive(seed, 1)));
}

void criterion_table() {
  Criterion c;
  // The CLI table must match the reference grid cell for cell.
  int exit_code = 0;
  const std::string text = run_cli_capture("sigma --kmax 10 --nmax 15", &exit_code);
  c.require(exit_code == 0, "sigma exited nonzero");
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);  // header
  for (int k = 0; k <= 10 && c.ok; ++k) {
    if (!std::getline(lines, line)) {
      c.require(false, "table row missing");
      break;
    }
    const std::size_t bar = line.find('|');
    c.require(bar != std::string::npos, "table row lacks a separator");
    if (!c.ok) break;
    std::istringstream cells(line.substr(bar + 1));
    long long value = 0;
    int n = k;
    while (cells >> value) {
      c.require(n <= 15, "too many cells in row " + std::to_string(k));
      if (!c.ok) break;
      c.require(value == kReferenceTable[k][n - k],
                "cell (" + std::to_string(k) + "," + std::to_string(n) + ") = " +
                    std::to_string(value));
      ++n;
    }
    c.require(n == 16, "row " + std::to_string(k) + " has " + std::to_string(n - k) + " cells");
  }
  // The table computation itself is instantaneous.
  const auto t0 = Clock::now();
  const CountTable t = sigma_table(10, 15);
  const std::string rendered = t.render_text();
  c.require(!rendered.empty(), "render failed");
  c.require(std::chrono::duration<double>(Clock::now() - t0).count() < 0.1, "table too slow");
  c.finish(1, "sigma table matches the reference grid");
}

void criterion_recursion() {
  Criterion c;
  const auto t0 = Clock::now();
  for (int n = 0; n <= 30 && c.ok; ++n)
    for (int k = 0; k <= n; ++k)
      c.require(s_recursive(k, n) == sigma(k, n),
                "mismatch at k=" + std::to_string(k) + " n=" + std::to_string(n));
  c.require(std::chrono::duration<double>(Clock::now() - t0).count() < 0.1, "recursion too slow");
  c.finish(2, "recursion and closed formula agree for 0 <= k <= n <= 30");
}

void criterion_roundtrip() {
  Criterion c;
  Rng rng(90001);
  for (int i = 0; i < 500 && c.ok; ++i) {
    const int n = 1 + i % 8;
    const PairSignature sig = testing::random_signature(rng, n);
    const StructurePair pair = construct_canonical_pair(sig);
    const PairSignature back = classify_orthogonal_pair(pair);
    c.require(testing::signatures_close(sig, back, 1e-9),
              "signature not recovered at trial " + std::to_string(i));
  }
  c.finish(3, "500 construct/classify round trips (n <= 8, angles to 1e-9)");
}

void run_count_criterion(int index, const std::string& title, ExperimentMode mode) {
  Criterion c;
  for (int n = 2; n <= 6 && c.ok; ++n)
    for (int k = 1; k <= n && c.ok; ++k) {
      ExperimentConfig cfg;
      cfg.mode = mode;
      cfg.n = n;
      cfg.k = k;
      cfg.trials = 100;
      cfg.seed = Rng::derive(0xacce97, n * 100 + k);
      const ExperimentReport rep = run_trials(cfg);
      c.require(rep.skippedCount == 0, "skipped trials at n=" + std::to_string(n) +
                                           " k=" + std::to_string(k));
      if (rep.failCount > 0) {
        std::string msg;
        for (const auto& t : rep.trials)
          if (t.status == TrialStatus::Fail) {
            msg = t.message;
            break;
          }
        c.require(false,
                  "n=" + std::to_string(n) + " k=" + std::to_string(k) + ": " + msg);
      }
    }
  const double secs = std::chrono::duration<double>(Clock::now() - c.start).count();
  c.require(secs < 60.0, "runtime exceeded a minute");
  c.finish(index, title);
}

void criterion_antiholomorphic() {
  Criterion c;
  for (int i = 0; i < 200 && c.ok; ++i) {
    const int n = 1 + i % 6;
    const StructurePair pair = sample_orth_pair(n, -1, Rng::derive(0x11e7, i));
    const AntiholomorphicSubspace sub = find_antiholomorphic_subspace(pair);
    c.require(sub.complexDim >= 1, "empty antiholomorphic subspace at trial " + std::to_string(i));
    // || (J0 + J1) v || <= 1e-8 for unit vectors of the plane.
    const Mat applied = (pair.j0.J + pair.j1.J) * sub.plane.frame;
    for (int j = 0; j < applied.cols(); ++j)
      c.require(column_norm(applied, j) <= 1e-8,
                "residual above 1e-8 at trial " + std::to_string(i));
  }
  c.finish(6, "antiholomorphic planes of 200 opposite-orientation pairs (residual 1e-8)");
}

void criterion_general_signed() {
  Criterion c;
  int total_skipped = 0, total_trials = 0;
  for (int n = 2; n <= 4 && c.ok; ++n)
    for (int k = 1; k <= n && c.ok; ++k) {
      ExperimentConfig cfg;
      cfg.mode = ExperimentMode::GeneralSame;
      cfg.n = n;
      cfg.k = k;
      cfg.trials = 100;
      cfg.seed = Rng::derive(0x9e4e6a1, n * 100 + k);
      cfg.condBound = 50.0;
      const ExperimentReport rep = run_trials(cfg);
      total_skipped += rep.skippedCount;
      total_trials += cfg.trials;
      if (rep.failCount > 0) {
        std::string msg;
        for (const auto& t : rep.trials)
          if (t.status == TrialStatus::Fail) {
            msg = t.message;
            break;
          }
        c.require(false, "n=" + std::to_string(n) + " k=" + std::to_string(k) + ": " + msg);
      }
      c.require(rep.skippedCount <= 5, "skip rate above 5% at n=" + std::to_string(n) +
                                           " k=" + std::to_string(k));
    }
  std::printf("    (general-same: %d/%d trials skipped as non-generic)\n", total_skipped,
              total_trials);
  c.finish(7, "general pairs: signed counts match and raw counts respect the lower bound");
}

void criterion_two_oracles() {
  Criterion c;
  for (int i = 0; i < 100 && c.ok; ++i) {
    const int n = 1 + i % 5;
    const int orientation = i % 2 == 0 ? 1 : -1;
    const StructurePair pair = sample_orth_pair(n, orientation, Rng::derive(0x2a0c1e, i));
    for (int k = 1; k <= n && c.ok; ++k) {
      const IntersectionReport a = common_invariant_planes(pair, k);
      IntersectOptions opts;
      opts.forceGeneralPath = true;
      const IntersectionReport b = common_invariant_planes(pair, k, opts);
      c.require(a.rawCountSame.infinite == b.rawCountSame.infinite &&
                    a.rawCountSame.value == b.rawCountSame.value &&
                    a.rawCountOpposite.infinite == b.rawCountOpposite.infinite &&
                    a.rawCountOpposite.value == b.rawCountOpposite.value,
                "counts disagree at trial " + std::to_string(i) + " k=" + std::to_string(k));
      c.require(a.signedCountSame == b.signedCountSame &&
                    a.signedCountOpposite == b.signedCountOpposite,
                "signed counts disagree at trial " + std::to_string(i));
      c.require(testing::plane_sets_match(a, b, 1e-7),
                "plane sets disagree at trial " + std::to_string(i) + " k=" + std::to_string(k));
    }
  }
  c.finish(8, "signature path and spectral path agree on 100 orthogonal pairs");
}

void criterion_r4_example() {
  Criterion c;
  const R4ExampleReport rep = example_r4(1.2, 0.8);
  c.require(!rep.degenerateParameters, "parameters flagged degenerate");
  c.require(rep.intersection.isolatedPoints.size() == 2, "plane count is not 2");
  Mat first(4, 2), second(4, 2);
  first(0, 0) = first(1, 1) = 1.0;
  second(2, 0) = second(3, 1) = 1.0;
  int plus = 0, minus = 0;
  for (const auto& pt : rep.intersection.isolatedPoints) {
    c.require(pt.transverse, "a plane is not transverse");
    (pt.localSign == 1 ? plus : minus) += 1;
    const double d = std::min(projector_distance(pt.plane.frame, first),
                              projector_distance(pt.plane.frame, second));
    c.require(d <= 1e-9, "a plane is not a coordinate complex line");
  }
  c.require(plus == 1 && minus == 1, "signs are not {+1, -1}");
  c.require(rep.signedTotal && *rep.signedTotal == 0, "signed total is not 0");
  for (const auto& q : rep.fiberCoords)
    c.require(std::abs(q.x - 1.0) <= 1e-9 &&
                  std::abs(q.w) + std::abs(q.y) + std::abs(q.z) <= 1e-9,
              "a plane does not project to i");
  const double u = example_r4_boundary(1.0 / std::sqrt(2.0)).uMax;
  c.require(std::abs(u - 0.6) <= 1e-6, "boundary latitude " + std::to_string(u) + " != 0.6");
  const double secs = std::chrono::duration<double>(Clock::now() - c.start).count();
  c.require(secs < 1.0, "runtime exceeded one second");
  c.finish(9, "R^4 example: two coordinate lines, signs {+1,-1}, boundary latitude 0.6");
}

void criterion_invariance() {
  Criterion c;
  // Conjugation by Haar-orthogonal maps, orthogonal pairs.
  for (int i = 0; i < 20 && c.ok; ++i) {
    const int n = 2 + i % 3;
    const int k = 1 + i % n;
    c.require(verify_conjugation_invariance(Rng::derive(0xc0471, i), Rng::derive(0xc0472, i), n,
                                            k, true, true),
              "orthogonal conjugation changed the report at trial " + std::to_string(i));
  }
  // Conjugation by invertible maps (condition <= 20), general pairs.
  for (int i = 0; i < 20 && c.ok; ++i) {
    const int n = 2 + i % 2;
    const int k = 1 + i % n;
    c.require(verify_conjugation_invariance(Rng::derive(0xc0473, i), Rng::derive(0xc0474, i), n,
                                            k, false, false),
              "invertible conjugation changed the report at trial " + std::to_string(i));
  }
  // Negating both structures preserves the planes and their relative
  // orientations.
  for (int i = 0; i < 20 && c.ok; ++i) {
    const int n = 2 + i % 3;
    const int k = 1 + i % n;
    const StructurePair pair = sample_orth_pair(n, i % 2 == 0 ? 1 : -1, Rng::derive(0xc0475, i));
    const StructurePair neg = make_structure_pair(negated(pair.j0), negated(pair.j1));
    const IntersectionReport a = common_invariant_planes(pair, k);
    const IntersectionReport b = common_invariant_planes(neg, k);
    c.require(a.rawCountSame.value == b.rawCountSame.value &&
                  a.rawCountOpposite.value == b.rawCountOpposite.value &&
                  a.rawCountSame.infinite == b.rawCountSame.infinite,
              "negation changed the counts at trial " + std::to_string(i));
    c.require(testing::plane_sets_match(a, b, 1e-7),
              "negation changed the planes at trial " + std::to_string(i));
  }
  c.finish(10, "conjugation and negation invariance (20 trials each)");
}

}  // namespace

int main() {
  criterion_table();
  criterion_recursion();
  criterion_roundtrip();
  run_count_criterion(4, "orthogonal same-orientation counts, 100 trials per (n, k), n <= 6",
                      ExperimentMode::OrthSame);
  run_count_criterion(5, "orthogonal opposite-orientation counts, 100 trials per (n, k), n <= 6",
                      ExperimentMode::OrthOpposite);
  criterion_antiholomorphic();
  criterion_general_signed();
  criterion_two_oracles();
  criterion_r4_example();
  criterion_invariance();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
