// Command-line front end: sigma tables, pair classification, common-plane
// reports, Monte Carlo verification runs, and the R^4 example.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jgrass/serialize.hpp"

namespace {

using namespace jgrass;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error("cannot parse " + path + ": " + e.what());
  }
  return doc;
}

std::string sign_string(int s) { return s >= 0 ? "+" + std::to_string(s) : std::to_string(s); }

std::string count_string(const PlaneCount& c) {
  return c.infinite ? std::string("infinite") : std::to_string(c.value);
}

int run_sigma(int kmax, int nmax, const std::string& format) {
  if (kmax < 0 || nmax < 0 || kmax > nmax) {
    std::cerr << "sigma: need 0 <= kmax <= nmax\n";
    return 1;
  }
  const CountTable t = sigma_table(kmax, nmax);
  if (format == "json")
    std::cout << sigma_table_to_json(t).dump(2) << "\n";
  else
    std::cout << t.render_text();
  return 0;
}

int run_classify(const std::string& path, double tol) {
  const StructurePair pair = pair_from_json(load_json_file(path), tol);
  const PairSignature sig = classify_orthogonal_pair(pair, tol);
  std::cout << "signature: " << format_signature(sig) << "\n";
  for (const auto& b : sig.blocks)
    std::cout << "theta=" << format_angle(b.theta) << " (mult " << b.mult << ")\n";
  std::cout << "l=" << sig.holoCount << ", s=" << sig.antiholoCount << "\n";
  std::cout << "orientation: " << (sig.same_orientation() ? "same" : "opposite") << " (s "
            << (sig.antiholoCount % 2 == 0 ? "even" : "odd") << ")\n";
  if (sig.nearDegenerate) std::cerr << "warning: angle cluster close to 0 or pi\n";
  return 0;
}

int run_canonical(const std::string& spec, const std::string& out_path) {
  const PairSignature sig = parse_signature_spec(spec);
  const StructurePair pair = construct_canonical_pair(sig);
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write file: " + out_path);
  out << pair_to_json(pair).dump(2) << "\n";
  std::cout << "wrote canonical pair (dim " << pair.dim() << ") for " << format_signature(sig)
            << " to " << out_path << "\n";
  return 0;
}

int run_intersect(const std::string& path, int k, bool as_json, const IntersectOptions& opts,
                  double tol) {
  const StructurePair pair = pair_from_json(load_json_file(path), tol);
  const IntersectionReport rep = common_invariant_planes(pair, k, opts);
  if (as_json) {
    std::cout << report_to_json(rep).dump(2) << "\n";
  } else {
    std::cout << "n=" << rep.n << " k=" << rep.k << " mode="
              << (rep.orthogonalMode ? "orthogonal" : "general") << "\n";
    if (!rep.components.empty()) {
      std::cout << "components:\n";
      for (const auto& c : rep.components) {
        std::cout << "  t=(";
        for (std::size_t i = 0; i < c.tTuple.size(); ++i)
          std::cout << (i ? "," : "") << c.tTuple[i];
        std::cout << ") l'=" << c.lPrime << " s'=" << c.sPrime << " dim=" << c.realDim
                  << " orientation=" << to_string(c.orientationClass) << "\n";
      }
    }
    for (std::size_t i = 0; i < rep.isolatedPoints.size(); ++i) {
      const auto& pt = rep.isolatedPoints[i];
      std::cout << "plane " << i << ": orientation=" << to_string(pt.relativeOrientation)
                << " transverse=" << (pt.transverse ? "yes" : "no");
      if (pt.transverse) std::cout << " sign=" << sign_string(pt.localSign);
      std::cout << " gap=" << pt.transversalityGap << (pt.marginal ? " (marginal)" : "") << "\n";
    }
    std::cout << "raw counts: same=" << count_string(rep.rawCountSame)
              << " opposite=" << count_string(rep.rawCountOpposite) << "\n";
    std::cout << "signed counts: same="
              << (rep.signedCountSame ? std::to_string(*rep.signedCountSame) : "undefined")
              << " opposite="
              << (rep.signedCountOpposite ? std::to_string(*rep.signedCountOpposite) : "undefined")
              << "\n";
    std::cout << "expected counts: same=" << rep.expectedSame
              << " opposite=" << rep.expectedOpposite << "\n";
    if (rep.continuumPresent) std::cout << "continuum present\n";
  }
  return rep.continuumPresent ? 2 : 0;
}

int run_verify(const ExperimentConfig& cfg, bool as_json) {
  const ExperimentReport rep = run_trials(cfg);
  if (as_json) {
    std::cout << experiment_report_to_json(rep).dump(2) << "\n";
  } else {
    std::cout << "mode=" << to_string(cfg.mode) << " n=" << cfg.n << " k=" << cfg.k
              << " trials=" << cfg.trials << " seed=" << cfg.seed << "\n";
    std::cout << "pass=" << rep.passCount << " fail=" << rep.failCount
              << " skipped=" << rep.skippedCount << " (" << rep.durationSeconds << " s)\n";
    for (const auto& t : rep.trials)
      if (t.status == TrialStatus::Fail)
        std::cout << "trial " << t.index << " FAILED: " << t.message << "\n";
      else if (t.status == TrialStatus::Skipped)
        std::cout << "trial " << t.index << " skipped: " << t.message << "\n";
  }
  return rep.failCount > 0 ? 3 : 0;
}

int run_example_r4(double a, double b, bool as_json) {
  const R4ExampleReport rep = example_r4(a, b);
  if (as_json) {
    std::cout << r4_example_to_json(rep).dump(2) << "\n";
    return rep.degenerateParameters ? 2 : 0;
  }
  if (rep.degenerateParameters) {
    std::cout << "degenerate parameters (a = b or a = 1/b): "
              << (rep.intersection.continuumPresent ? "continuum of planes"
                                                    : "not computed")
              << "\n";
    return 2;
  }
  const auto& pts = rep.intersection.isolatedPoints;
  std::cout << pts.size() << " points, signs";
  for (const auto& pt : pts) std::cout << " " << sign_string(pt.localSign);
  std::cout << ", signed total " << (rep.signedTotal ? std::to_string(*rep.signedTotal) : "undefined")
            << "\n";
  for (std::size_t i = 0; i < rep.fiberCoords.size(); ++i) {
    const Quaternion& q = rep.fiberCoords[i];
    std::cout << "plane " << i << " fiber coordinate: " << q.w << " + " << q.x << "i + " << q.y
              << "j + " << q.z << "k\n";
  }
  return 0;
}

int run_example_r4_boundary(double b, bool as_json) {
  const R4BoundaryResult res = example_r4_boundary(b);
  if (as_json) {
    std::cout << json{{"b", b},
                      {"uMax", res.uMax},
                      {"xAtMax", res.xAtMax},
                      {"yAtMax", res.yAtMax},
                      {"inSafeInterval", res.inSafeInterval}}
                     .dump(2)
              << "\n";
    return 0;
  }
  std::cout << "u_max = " << res.uMax << " (at x=" << res.xAtMax << ", y=" << res.yAtMax << ")\n";
  if (!res.inSafeInterval)
    std::cout << "note: b outside [0.5, 1); the value is reported without a correctness claim\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pairs of linear complex structures on R^{2n}: classification, jointly "
               "stabilised planes, signed counts"};
  app.require_subcommand(1);
  int rc = 0;

  auto* sigma_cmd = app.add_subcommand("sigma", "print the table of generic plane counts");
  int kmax = 10, nmax = 15;
  std::string format = "text";
  sigma_cmd->add_option("--kmax", kmax, "largest k row");
  sigma_cmd->add_option("--nmax", nmax, "largest n column");
  sigma_cmd->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  sigma_cmd->callback([&]() { rc = run_sigma(kmax, nmax, format); });

  auto* classify_cmd = app.add_subcommand("classify", "signature of an orthogonal pair");
  std::string pair_path;
  double tol = kDefaultTol;
  classify_cmd->add_option("--pair", pair_path, "pair file (json)")->required();
  classify_cmd->add_option("--tol", tol, "tolerance");
  classify_cmd->callback([&]() { rc = run_classify(pair_path, tol); });

  auto* canonical_cmd = app.add_subcommand("canonical", "write a canonical pair for a signature");
  std::string signature_spec, out_path;
  canonical_cmd->add_option("--signature", signature_spec, "theta:mult[,...];l=L;s=S")->required();
  canonical_cmd->add_option("--out", out_path, "output pair file")->required();
  canonical_cmd->callback([&]() { rc = run_canonical(signature_spec, out_path); });

  auto* intersect_cmd = app.add_subcommand("intersect", "jointly stabilised 2k-planes of a pair");
  std::string ipair_path;
  int k = 1;
  bool ijson = false;
  IntersectOptions iopts;
  double itol = kDefaultTol;
  intersect_cmd->add_option("--pair", ipair_path, "pair file (json)")->required();
  intersect_cmd->add_option("--k", k, "complex dimension of the planes")->required();
  intersect_cmd->add_flag("--json", ijson, "emit json");
  intersect_cmd->add_option("--tol", itol, "validation tolerance");
  intersect_cmd->add_option("--cluster-tol", iopts.clusterTol, "eigenvalue clustering tolerance");
  intersect_cmd->add_option("--trans-tol", iopts.transTol, "transversality threshold");
  intersect_cmd->callback([&]() {
    iopts.tol = itol;
    rc = run_intersect(ipair_path, k, ijson, iopts, itol);
  });

  auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo verification of the counts");
  ExperimentConfig cfg;
  std::string mode_name;
  bool vjson = false;
  verify_cmd->add_option("--mode", mode_name, "orth-same | orth-opposite | general-same | general-opposite")
      ->required()
      ->check(CLI::IsMember({"orth-same", "orth-opposite", "general-same", "general-opposite"}));
  verify_cmd->add_option("--n", cfg.n, "half-dimension n")->required();
  verify_cmd->add_option("--k", cfg.k, "plane complex dimension")->required();
  verify_cmd->add_option("--trials", cfg.trials, "number of trials")->required();
  verify_cmd->add_option("--seed", cfg.seed, "master seed (required for reproducibility)")
      ->required();
  verify_cmd->add_option("--tol", cfg.tol, "tolerance");
  verify_cmd->add_option("--cluster-tol", cfg.clusterTol, "eigenvalue clustering tolerance");
  verify_cmd->add_option("--trans-tol", cfg.transTol, "transversality threshold");
  verify_cmd->add_option("--cond-bound", cfg.condBound, "condition bound for general sampling");
  verify_cmd->add_flag("--json", vjson, "emit json");
  verify_cmd->callback([&]() {
    cfg.mode = *parse_mode(mode_name);
    rc = run_verify(cfg, vjson);
  });

  auto* r4_cmd = app.add_subcommand("example-r4", "two complex structures on R^4 meeting a fiber");
  double a = 1.2, b = 0.8;
  bool rjson = false;
  r4_cmd->add_option("--a", a, "first stretch parameter")->required();
  r4_cmd->add_option("--b", b, "second stretch parameter")->required();
  r4_cmd->add_flag("--json", rjson, "emit json");
  r4_cmd->callback([&]() { rc = run_example_r4(a, b, rjson); });

  auto* r4b_cmd = app.add_subcommand("example-r4-boundary",
                                     "boundary latitude of the fiber image for a = b");
  double bb = 0.7071067811865476;
  bool rbjson = false;
  r4b_cmd->add_option("--b", bb, "stretch parameter in (0, 1)")->required();
  r4b_cmd->add_flag("--json", rbjson, "emit json");
  r4b_cmd->callback([&]() { rc = run_example_r4_boundary(bb, rbjson); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const NotOrthogonal& e) {
    std::cerr << "NotOrthogonal: " << e.what() << "\n";
    return 2;
  } catch (const NonGenericSpectrum& e) {
    std::cerr << "NonGenericSpectrum: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
