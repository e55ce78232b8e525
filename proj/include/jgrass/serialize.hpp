#ifndef JGRASS_SERIALIZE_HPP
#define JGRASS_SERIALIZE_HPP

#include <cstdio>
#include <string>

#include <json.hpp>

#include "jgrass/experiments.hpp"
#include "jgrass/intersection.hpp"
#include "jgrass/structures.hpp"

namespace jgrass {

using nlohmann::json;

inline json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Mat mat_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw Error("matrix json: expected a non-empty array of rows");
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows[0].size());
  Mat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != c)
      throw Error("matrix json: ragged rows");
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

// Pair file format: {"dim": 2n, "J0": [[...]], "J1": [[...]]}, row-major.
inline json pair_to_json(const StructurePair& p) {
  return json{{"dim", p.dim()}, {"J0", mat_to_json(p.j0.J)}, {"J1", mat_to_json(p.j1.J)}};
}

inline StructurePair pair_from_json(const json& j, double tol = kDefaultTol) {
  if (!j.contains("dim") || !j.contains("J0") || !j.contains("J1"))
    throw Error("pair json: expected fields dim, J0, J1");
  const int dim = j["dim"].get<int>();
  Mat j0 = mat_from_json(j["J0"]);
  Mat j1 = mat_from_json(j["J1"]);
  if (j0.rows() != dim || j0.cols() != dim || j1.rows() != dim || j1.cols() != dim)
    throw Error("pair json: matrix dimensions disagree with dim");
  return make_structure_pair(make_structure(std::move(j0), tol), make_structure(std::move(j1), tol));
}

inline json signature_to_json(const PairSignature& sig) {
  json blocks = json::array();
  for (const auto& b : sig.blocks) blocks.push_back(json{{"theta", b.theta}, {"mult", b.mult}});
  return json{{"blocks", std::move(blocks)}, {"l", sig.holoCount}, {"s", sig.antiholoCount}};
}

inline PairSignature signature_from_json(const json& j) {
  PairSignature sig;
  if (!j.contains("blocks") || !j.contains("l") || !j.contains("s"))
    throw Error("signature json: expected fields blocks, l, s");
  for (const auto& b : j["blocks"])
    sig.blocks.push_back({b.at("theta").get<double>(), b.at("mult").get<int>()});
  sig.holoCount = j["l"].get<int>();
  sig.antiholoCount = j["s"].get<int>();
  validate_signature(sig);
  return sig;
}

// Signature spec grammar for the command line:
//   "theta:mult[,theta:mult...];l=L;s=S"
// with theta in radians as a decimal. The theta list may be empty, e.g.
// "l=2;s=0".
inline PairSignature parse_signature_spec(const std::string& spec) {
  PairSignature sig;
  bool saw_l = false, saw_s = false;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t end = spec.find(';', start);
    if (end == std::string::npos) end = spec.size();
    const std::string seg = spec.substr(start, end - start);
    if (!seg.empty()) {
      if (seg.rfind("l=", 0) == 0) {
        sig.holoCount = std::stoi(seg.substr(2));
        saw_l = true;
      } else if (seg.rfind("s=", 0) == 0) {
        sig.antiholoCount = std::stoi(seg.substr(2));
        saw_s = true;
      } else {
        std::size_t bstart = 0;
        while (bstart <= seg.size()) {
          std::size_t bend = seg.find(',', bstart);
          if (bend == std::string::npos) bend = seg.size();
          const std::string item = seg.substr(bstart, bend - bstart);
          const std::size_t colon = item.find(':');
          if (colon == std::string::npos)
            throw InvalidSignature("signature spec: expected theta:mult in '" + item + "'");
          QuaternionBlockSpec b;
          b.theta = std::stod(item.substr(0, colon));
          b.mult = std::stoi(item.substr(colon + 1));
          sig.blocks.push_back(b);
          bstart = bend + 1;
        }
      }
    }
    start = end + 1;
  }
  if (!saw_l || !saw_s) throw InvalidSignature("signature spec: l= and s= are both required");
  validate_signature(sig);
  return sig;
}

inline std::string format_angle(double theta) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", theta);
  return buf;
}

inline std::string format_signature(const PairSignature& sig) {
  std::string out;
  for (const auto& b : sig.blocks) {
    if (!out.empty()) out += ",";
    out += format_angle(b.theta) + ":" + std::to_string(b.mult);
  }
  if (!out.empty()) out += ";";
  out += "l=" + std::to_string(sig.holoCount) + ";s=" + std::to_string(sig.antiholoCount);
  return out;
}

inline json count_to_json(const PlaneCount& c) {
  if (c.infinite) return json("infinite");
  return json(c.value);
}

inline json report_to_json(const IntersectionReport& rep) {
  json components = json::array();
  for (const auto& c : rep.components) {
    components.push_back(json{{"t", c.tTuple},
                              {"lPrime", c.lPrime},
                              {"sPrime", c.sPrime},
                              {"dim", c.realDim},
                              {"orientation", to_string(c.orientationClass)}});
  }
  json points = json::array();
  for (const auto& pt : rep.isolatedPoints) {
    json p{{"frame", mat_to_json(pt.plane.frame)},
           {"relativeOrientation", to_string(pt.relativeOrientation)},
           {"transverse", pt.transverse},
           {"gap", pt.transversalityGap},
           {"marginal", pt.marginal}};
    p["sign"] = pt.transverse ? json(pt.localSign) : json(nullptr);
    points.push_back(std::move(p));
  }
  json counts{{"rawSame", count_to_json(rep.rawCountSame)},
              {"rawOpposite", count_to_json(rep.rawCountOpposite)},
              {"expectedSame", rep.expectedSame},
              {"expectedOpposite", rep.expectedOpposite}};
  counts["signedSame"] = rep.signedCountSame ? json(*rep.signedCountSame) : json(nullptr);
  counts["signedOpposite"] = rep.signedCountOpposite ? json(*rep.signedCountOpposite) : json(nullptr);
  return json{{"n", rep.n},
              {"k", rep.k},
              {"orthogonal", rep.orthogonalMode},
              {"generic", rep.generic},
              {"continuum", rep.continuumPresent},
              {"components", std::move(components)},
              {"points", std::move(points)},
              {"counts", std::move(counts)}};
}

inline json experiment_report_to_json(const ExperimentReport& rep) {
  json trials = json::array();
  for (const auto& t : rep.trials) {
    json jt{{"index", t.index},
            {"status", t.status == TrialStatus::Pass
                           ? "pass"
                           : t.status == TrialStatus::Fail ? "fail" : "skipped"},
            {"rawSame", count_to_json(t.rawSame)},
            {"rawOpposite", count_to_json(t.rawOpposite)},
            {"allTransverse", t.allTransverse},
            {"allSignsPositive", t.allSignsPositive}};
    jt["signedSame"] = t.signedSame ? json(*t.signedSame) : json(nullptr);
    jt["signedOpposite"] = t.signedOpposite ? json(*t.signedOpposite) : json(nullptr);
    if (!t.message.empty()) jt["message"] = t.message;
    trials.push_back(std::move(jt));
  }
  return json{{"mode", to_string(rep.config.mode)},
              {"n", rep.config.n},
              {"k", rep.config.k},
              {"trials", rep.config.trials},
              {"seed", rep.config.seed},
              {"passCount", rep.passCount},
              {"failCount", rep.failCount},
              {"skippedCount", rep.skippedCount},
              {"durationSeconds", rep.durationSeconds},
              {"outcomes", std::move(trials)}};
}

inline json quaternion_to_json(const Quaternion& q) {
  return json{{"w", q.w}, {"x", q.x}, {"y", q.y}, {"z", q.z}};
}

inline json r4_example_to_json(const R4ExampleReport& rep) {
  json out{{"a", rep.a},
           {"b", rep.b},
           {"degenerateParameters", rep.degenerateParameters},
           {"intersection", report_to_json(rep.intersection)}};
  json fibers = json::array();
  for (const auto& q : rep.fiberCoords) fibers.push_back(quaternion_to_json(q));
  out["fiberCoords"] = std::move(fibers);
  out["signedTotal"] = rep.signedTotal ? json(*rep.signedTotal) : json(nullptr);
  return out;
}

inline json sigma_table_to_json(const CountTable& t) {
  json rows = json::array();
  for (int k = 0; k <= t.kmax; ++k) {
    json row = json::array();
    for (int n = 0; n <= t.nmax; ++n) row.push_back(n < k ? json(nullptr) : json(t.values[k][n]));
    rows.push_back(std::move(row));
  }
  return json{{"kmax", t.kmax}, {"nmax", t.nmax}, {"rows", std::move(rows)}};
}

}  // namespace jgrass

#endif  // JGRASS_SERIALIZE_HPP
