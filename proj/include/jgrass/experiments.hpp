#ifndef JGRASS_EXPERIMENTS_HPP
#define JGRASS_EXPERIMENTS_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jgrass/counts.hpp"
#include "jgrass/intersection.hpp"
#include "jgrass/structures.hpp"

namespace jgrass {

enum class ExperimentMode { OrthSame, OrthOpposite, GeneralSame, GeneralOpposite };

inline const char* to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::OrthSame: return "orth-same";
    case ExperimentMode::OrthOpposite: return "orth-opposite";
    case ExperimentMode::GeneralSame: return "general-same";
    case ExperimentMode::GeneralOpposite: return "general-opposite";
  }
  return "?";
}

inline std::optional<ExperimentMode> parse_mode(const std::string& s) {
  if (s == "orth-same") return ExperimentMode::OrthSame;
  if (s == "orth-opposite") return ExperimentMode::OrthOpposite;
  if (s == "general-same") return ExperimentMode::GeneralSame;
  if (s == "general-opposite") return ExperimentMode::GeneralOpposite;
  return std::nullopt;
}

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::OrthSame;
  int n = 2;
  int k = 1;
  int trials = 100;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  double clusterTol = kDefaultClusterTol;
  double transTol = kDefaultTransTol;
  double condBound = 50.0;  // general modes only
};

enum class TrialStatus { Pass, Fail, Skipped };

struct TrialOutcome {
  int index = 0;
  TrialStatus status = TrialStatus::Pass;
  std::string message;  // failure or skip reason
  PlaneCount rawSame;
  PlaneCount rawOpposite;
  std::optional<std::int64_t> signedSame;
  std::optional<std::int64_t> signedOpposite;
  bool allTransverse = false;
  bool allSignsPositive = false;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialOutcome> trials;
  int passCount = 0;
  int failCount = 0;
  int skippedCount = 0;
  double durationSeconds = 0.0;

  bool all_passed() const { return failCount == 0; }
};

namespace detail {

inline StructurePair sample_pair(const ExperimentConfig& cfg, int trial) {
  const std::uint64_t s0 = Rng::derive(cfg.seed, 2 * static_cast<std::uint64_t>(trial));
  const std::uint64_t s1 = Rng::derive(cfg.seed, 2 * static_cast<std::uint64_t>(trial) + 1);
  switch (cfg.mode) {
    case ExperimentMode::OrthSame:
      return make_structure_pair(random_orthogonal_structure(cfg.n, +1, s0),
                                 random_orthogonal_structure(cfg.n, +1, s1));
    case ExperimentMode::OrthOpposite:
      return make_structure_pair(random_orthogonal_structure(cfg.n, +1, s0),
                                 random_orthogonal_structure(cfg.n, -1, s1));
    case ExperimentMode::GeneralSame:
      return make_structure_pair(random_general_structure(cfg.n, +1, s0, cfg.condBound),
                                 random_general_structure(cfg.n, +1, s1, cfg.condBound));
    case ExperimentMode::GeneralOpposite: {
      ComplexStructure a = random_general_structure(cfg.n, +1, s0, cfg.condBound);
      ComplexStructure b = random_general_structure(cfg.n, +1, s1, cfg.condBound);
      if (cfg.n % 2 == 1) {
        // Negation flips the orientation class in odd complex dimension.
        b = negated(b);
      } else {
        const int d = 2 * cfg.n;
        Mat refl = Mat::identity(d);
        refl(d - 2, d - 2) = 0.0;
        refl(d - 1, d - 1) = 0.0;
        refl(d - 2, d - 1) = 1.0;
        refl(d - 1, d - 2) = 1.0;
        b = conjugated(b, refl);
      }
      return make_structure_pair(std::move(a), std::move(b));
    }
  }
  throw Error("sample_pair: unreachable");
}

inline void judge_trial(const ExperimentConfig& cfg, bool same_orientation_pair,
                        const IntersectionReport& rep, TrialOutcome& out) {
  out.rawSame = rep.rawCountSame;
  out.rawOpposite = rep.rawCountOpposite;
  out.signedSame = rep.signedCountSame;
  out.signedOpposite = rep.signedCountOpposite;
  out.allTransverse = true;
  out.allSignsPositive = true;
  for (const auto& pt : rep.isolatedPoints) {
    out.allTransverse = out.allTransverse && pt.transverse;
    out.allSignsPositive = out.allSignsPositive && pt.localSign == 1;
  }
  const bool orth_mode =
      cfg.mode == ExperimentMode::OrthSame || cfg.mode == ExperimentMode::OrthOpposite;
  const auto fail = [&](std::string why) {
    out.status = TrialStatus::Fail;
    out.message = std::move(why);
  };
  const auto expected_signed = expected_signed_counts(same_orientation_pair, cfg.n, cfg.k);
  if (orth_mode) {
    if (rep.continuumPresent) return fail("continuum present for a generically sampled pair");
    if (rep.rawCountSame.value != rep.expectedSame ||
        rep.rawCountOpposite.value != rep.expectedOpposite)
      return fail("raw counts (" + std::to_string(rep.rawCountSame.value) + ", " +
                  std::to_string(rep.rawCountOpposite.value) + ") differ from expected (" +
                  std::to_string(rep.expectedSame) + ", " + std::to_string(rep.expectedOpposite) +
                  ")");
    if (!out.allTransverse) return fail("a plane of an orthogonal pair was not transverse");
    // Local signs of an orthogonal pair are fixed by the chart conventions:
    // +1 at every point except the same-class points of opposite-orientation
    // pairs with k odd, which all carry (-1)^k = -1.
    for (const auto& pt : rep.isolatedPoints) {
      const int want = (!same_orientation_pair && cfg.k % 2 == 1 &&
                        pt.relativeOrientation == RelOrientation::Same)
                           ? -1
                           : 1;
      if (pt.localSign != want)
        return fail("a local sign of an orthogonal pair was " + std::to_string(pt.localSign) +
                    ", expected " + std::to_string(want));
    }
    out.status = TrialStatus::Pass;
    return;
  }
  // General modes. Non-transverse or continuum configurations are the
  // measure-zero non-generic cases: skipped, not failed.
  if (rep.continuumPresent) {
    out.status = TrialStatus::Skipped;
    out.message = "continuum present";
    return;
  }
  if (!out.allTransverse) {
    out.status = TrialStatus::Skipped;
    out.message = "non-transverse intersection point";
    return;
  }
  if (!out.signedSame || !out.signedOpposite) return fail("signed counts undefined");
  if (*out.signedSame != expected_signed.first)
    return fail("signed same-orientation count " + std::to_string(*out.signedSame) +
                " != " + std::to_string(expected_signed.first));
  if (*out.signedOpposite != expected_signed.second)
    return fail("signed opposite-orientation count " + std::to_string(*out.signedOpposite) +
                " != " + std::to_string(expected_signed.second));
  if (rep.rawCountSame.value < rep.expectedSame)
    return fail("raw same-orientation count below the homological lower bound");
  if ((rep.rawCountSame.value - rep.expectedSame) % 2 != 0)
    return fail("raw excess over the signed count is not an even number of cancelling planes");
  out.status = TrialStatus::Pass;
}

}  // namespace detail

// Runs `trials` independent sampled intersections and compares each against
// the expected counts. Trial seeds are derived from the master seed by a
// counter split, so the report is reproducible and order-insensitive.
inline ExperimentReport run_trials(const ExperimentConfig& cfg) {
  if (cfg.k < 1 || cfg.k > cfg.n || cfg.trials < 1) throw Error("run_trials: invalid config");
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = cfg;
  IntersectOptions opts;
  opts.tol = cfg.tol;
  opts.clusterTol = cfg.clusterTol;
  opts.transTol = cfg.transTol;
  for (int t = 0; t < cfg.trials; ++t) {
    TrialOutcome out;
    out.index = t;
    try {
      const StructurePair pair = detail::sample_pair(cfg, t);
      const IntersectionReport rep = common_invariant_planes(pair, cfg.k, opts);
      detail::judge_trial(cfg, pair.sameOrientation, rep, out);
    } catch (const NonGenericSpectrum& e) {
      out.status = TrialStatus::Skipped;
      out.message = e.what();
    } catch (const NoConvergence& e) {
      out.status = TrialStatus::Skipped;
      out.message = e.what();
    }
    switch (out.status) {
      case TrialStatus::Pass: ++report.passCount; break;
      case TrialStatus::Fail: ++report.failCount; break;
      case TrialStatus::Skipped: ++report.skippedCount; break;
    }
    report.trials.push_back(std::move(out));
  }
  report.durationSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// Conjugating both structures by the same invertible map must carry the
// plane set across bijectively (P -> gP) and preserve raw counts, the
// orientation split, and signed counts.
inline bool conjugation_invariance_holds(const StructurePair& pair, const Mat& g, int k) {
  const StructurePair moved = make_structure_pair(conjugated(pair.j0, g), conjugated(pair.j1, g));
  const IntersectionReport before = common_invariant_planes(pair, k);
  const IntersectionReport after = common_invariant_planes(moved, k);

  if (before.rawCountSame.infinite != after.rawCountSame.infinite ||
      before.rawCountOpposite.infinite != after.rawCountOpposite.infinite)
    return false;
  if (before.rawCountSame.value != after.rawCountSame.value ||
      before.rawCountOpposite.value != after.rawCountOpposite.value)
    return false;
  if (before.signedCountSame != after.signedCountSame ||
      before.signedCountOpposite != after.signedCountOpposite)
    return false;
  // Planes must match under P -> gP, with relative orientations intact.
  for (const auto& pt : before.isolatedPoints) {
    const Mat image = orthonormalize(g * pt.plane.frame, 1e-10);
    bool matched = false;
    for (const auto& qt : after.isolatedPoints) {
      if (projector_distance(image, qt.plane.frame) > 1e-6) continue;
      if (qt.relativeOrientation != pt.relativeOrientation) return false;
      matched = true;
      break;
    }
    if (!matched) return false;
  }
  return true;
}

inline bool verify_conjugation_invariance(std::uint64_t pair_seed, std::uint64_t g_seed, int n,
                                          int k, bool orthogonal_pair = true,
                                          bool orthogonal_g = true, double cond_bound = 20.0) {
  const std::uint64_t s0 = Rng::derive(pair_seed, 0);
  const std::uint64_t s1 = Rng::derive(pair_seed, 1);
  const StructurePair pair =
      orthogonal_pair
          ? make_structure_pair(random_orthogonal_structure(n, +1, s0),
                                random_orthogonal_structure(n, +1, s1))
          : make_structure_pair(random_general_structure(n, +1, s0, cond_bound),
                                random_general_structure(n, +1, s1, cond_bound));

  Rng grng(g_seed);
  const int d = 2 * n;
  Mat g(d, d);
  for (;;) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = grng.gaussian();
    if (orthogonal_g) {
      g = orthonormalize(g, 1e-12);
      break;
    }
    const Svd s = svd(g);
    if (s.sigma.back() > 0.0 && s.sigma.front() / s.sigma.back() <= cond_bound) break;
  }
  return conjugation_invariance_holds(pair, g, k);
}

// ---------------------------------------------------------------------------
// The R^4 example: Gr_2^J(R^4) meeting the standard fiber CP^1.
// ---------------------------------------------------------------------------

struct R4ExampleReport {
  double a = 0.0;
  double b = 0.0;
  bool degenerateParameters = false;  // a = b or a = 1/b: not computed
  IntersectionReport intersection;
  std::vector<Quaternion> fiberCoords;  // alpha = v2 conj(v1) per isolated plane
  std::optional<std::int64_t> signedTotal;
};

// J = g J0 g^{-1} for g = diag(1/a, a, 1/b, b), intersected with the
// standard structure at k = 1. For a != b, 1/b the two coordinate complex
// lines are the only common planes; they are transverse with opposite signs
// and both sit in the fiber over i.
inline R4ExampleReport example_r4(double a, double b, double tol = kDefaultTol) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error("example_r4: parameters must be positive");
  R4ExampleReport rep;
  rep.a = a;
  rep.b = b;
  const double param_tol = std::max(tol, 1e-12);
  rep.degenerateParameters = std::abs(a - b) <= param_tol || std::abs(a - 1.0 / b) <= param_tol;

  Mat j(4, 4);
  j(0, 1) = -1.0 / (a * a);
  j(1, 0) = a * a;
  j(2, 3) = -1.0 / (b * b);
  j(3, 2) = b * b;
  const StructurePair pair = make_structure_pair(standard_structure(2), ComplexStructure{j, 1});

  if (rep.degenerateParameters) {
    if (pair.isOrthogonal) {
      // a = b = 1 is the standard pair; report its continuum.
      rep.intersection = common_invariant_planes(pair, 1);
    }
    return rep;
  }

  rep.intersection = common_invariant_planes(pair, 1);
  std::int64_t total = 0;
  bool total_defined = true;
  for (const auto& pt : rep.intersection.isolatedPoints) {
    rep.fiberCoords.push_back(plane_to_unit_quaternion(pt.plane));
    if (pt.transverse)
      total += pt.localSign;
    else
      total_defined = false;
  }
  if (total_defined) rep.signedTotal = total;
  return rep;
}

struct R4BoundaryResult {
  double uMax = 0.0;
  double xAtMax = 0.0;
  double yAtMax = 0.0;
  // Correctness of the boundary-latitude reading is only claimed for b in
  // [0.5, 1); outside, the value is reported as-is.
  bool inSafeInterval = false;
};

// For a = b the fiber-latitude equation reduces to the scalar condition
//   u / sqrt(1 - u^2) = (1/b^2 - b^2) * y / (x^2 + y^2 + 1),
// so the boundary latitude of the image on S^2 comes from maximizing the
// right-hand side. Coarse grid over [-10, 10]^2, then local refinement.
inline R4BoundaryResult example_r4_boundary(double b) {
  if (!(b > 0.0) || !(b < 1.0)) throw Error("example_r4_boundary: requires 0 < b < 1");
  const auto f = [](double x, double y) { return y / (x * x + y * y + 1.0); };
  double best_x = 0.0, best_y = 0.0, best = -1.0;
  for (double x = -10.0; x <= 10.0; x += 0.25)
    for (double y = -10.0; y <= 10.0; y += 0.25) {
      const double v = f(x, y);
      if (v > best) {
        best = v;
        best_x = x;
        best_y = y;
      }
    }
  double window = 0.25;
  for (int round = 0; round < 60; ++round) {
    const double cx = best_x, cy = best_y;
    for (int i = -2; i <= 2; ++i)
      for (int j = -2; j <= 2; ++j) {
        const double x = cx + window * i / 2.0;
        const double y = cy + window * j / 2.0;
        const double v = f(x, y);
        if (v > best) {
          best = v;
          best_x = x;
          best_y = y;
        }
      }
    window *= 0.5;
  }
  const double r = (1.0 / (b * b) - b * b) * best;
  R4BoundaryResult out;
  out.uMax = r / std::sqrt(1.0 + r * r);
  out.xAtMax = best_x;
  out.yAtMax = best_y;
  out.inSafeInterval = b >= 0.5;
  return out;
}

}  // namespace jgrass

#endif  // JGRASS_EXPERIMENTS_HPP
