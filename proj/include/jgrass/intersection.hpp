#ifndef JGRASS_INTERSECTION_HPP
#define JGRASS_INTERSECTION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "jgrass/counts.hpp"
#include "jgrass/eig.hpp"
#include "jgrass/errors.hpp"
#include "jgrass/matrix.hpp"
#include "jgrass/plane.hpp"
#include "jgrass/quaternion.hpp"
#include "jgrass/structures.hpp"
#include "jgrass/sylvester.hpp"

namespace jgrass {

inline constexpr double kDefaultTransTol = 1e-7;

enum class RelOrientation { Same, Opposite };

inline const char* to_string(RelOrientation r) {
  return r == RelOrientation::Same ? "same" : "opposite";
}

// One connected component of the space of jointly stabilised oriented
// 2k-planes of an orthogonal pair: a choice of t_i quaternionic summands per
// angle block plus l' holomorphic and s' antiholomorphic complex summands.
struct IntersectionComponent {
  std::vector<int> tTuple;
  int lPrime = 0;
  int sPrime = 0;
  int realDim = 0;
  RelOrientation orientationClass = RelOrientation::Same;
};

struct IntersectionPoint {
  OrientedPlane plane;  // carries the J0-induced orientation
  RelOrientation relativeOrientation = RelOrientation::Same;
  bool transverse = false;
  double transversalityGap = 0.0;
  bool marginal = false;
  int localSign = 0;  // +1 or -1 when transverse, 0 when undefined
};

// Raw plane count of one orientation class: `value` counts the isolated
// planes; `infinite` is set when a positive-dimensional family exists on top
// of them (the count serializes as "infinite" in that case).
struct PlaneCount {
  bool infinite = false;
  std::int64_t value = 0;

  void bump() { ++value; }
};

struct IntersectionReport {
  int n = 0;
  int k = 0;
  bool orthogonalMode = false;
  std::vector<IntersectionComponent> components;  // populated in orthogonal mode
  std::vector<IntersectionPoint> isolatedPoints;
  PlaneCount rawCountSame;
  PlaneCount rawCountOpposite;
  std::optional<std::int64_t> signedCountSame;
  std::optional<std::int64_t> signedCountOpposite;
  std::int64_t expectedSame = 0;
  std::int64_t expectedOpposite = 0;
  bool generic = false;
  bool continuumPresent = false;
};

struct IntersectOptions {
  double tol = kDefaultTol;
  double clusterTol = kDefaultClusterTol;
  double transTol = kDefaultTransTol;
  bool forceGeneralPath = false;  // run the spectral route even when orthogonal
};

// ---------------------------------------------------------------------------
// Component enumeration for orthogonal pairs (exact, from the signature).
// ---------------------------------------------------------------------------

inline std::vector<IntersectionComponent> enumerate_components_orthogonal(const PairSignature& sig,
                                                                          int k) {
  std::vector<IntersectionComponent> out;
  const int m = static_cast<int>(sig.blocks.size());
  std::vector<int> t(m, 0);
  const auto emit = [&](int used) {
    const int remaining = k - used;
    for (int lp = 0; lp <= sig.holoCount; ++lp) {
      const int sp = remaining - lp;
      if (sp < 0 || sp > sig.antiholoCount) continue;
      IntersectionComponent c;
      c.tTuple = t;
      c.lPrime = lp;
      c.sPrime = sp;
      c.realDim = 2 * lp * (sig.holoCount - lp) + 2 * sp * (sig.antiholoCount - sp);
      for (int i = 0; i < m; ++i) c.realDim += 4 * t[i] * (sig.blocks[i].mult - t[i]);
      c.orientationClass = sp % 2 == 0 ? RelOrientation::Same : RelOrientation::Opposite;
      out.push_back(std::move(c));
    }
  };
  const auto rec = [&](auto&& self, int level, int used) -> void {
    if (used > k) return;
    if (level == m) {
      emit(used);
      return;
    }
    for (int ti = 0; ti <= sig.blocks[level].mult; ++ti) {
      t[level] = ti;
      self(self, level + 1, used + 2 * ti);
    }
    t[level] = 0;
  };
  rec(rec, 0, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Spectral blocks: minimal jointly invariant subspaces from the spectrum of
// K = -J0 J1, grouped by the symmetries lambda ~ conj(lambda) ~ 1/lambda.
// ---------------------------------------------------------------------------

struct SpectralBlock {
  enum class Kind {
    Holo,               // ker(K - I): J1 = J0 here; complex dimension `mult`
    Antiholo,           // ker(K + I): J1 = -J0 here; complex dimension `mult`
    QuaternionCluster,  // e^{+-i theta}, multiplicity 2r each; dim 4r
    RealPair,           // simple {lambda, 1/lambda}, lambda real; dim 2
    Quartet             // simple {lambda, conj, 1/lambda, 1/conj}; dim 4
  };

  Kind kind = Kind::Quartet;
  Mat frame;         // orthonormal columns spanning the block
  double theta = 0;  // angle for quaternionic clusters
  int mult = 1;      // r for quaternionic clusters, complex dim for holo/antiholo

  int dim() const { return frame.cols(); }
  // Whether subset enumeration may take a proper part of this block (a
  // Grassmannian worth of choices) rather than all or nothing.
  bool is_cluster() const {
    return kind == Kind::Holo || kind == Kind::Antiholo || kind == Kind::QuaternionCluster;
  }
  // Real dimension contributed per selected summand of a cluster block.
  int step() const { return kind == Kind::QuaternionCluster ? 4 : 2; }
};

namespace detail {

struct EigenCluster {
  std::complex<double> mean;
  int size = 0;
  std::vector<std::complex<double>> members;
};

inline std::vector<EigenCluster> cluster_eigenvalues(const std::vector<std::complex<double>>& vals,
                                                     double cluster_tol) {
  const int m = static_cast<int>(vals.size());
  std::vector<int> group(m, -1);
  int ngroups = 0;
  for (int i = 0; i < m; ++i) {
    if (group[i] >= 0) continue;
    group[i] = ngroups++;
    // single-link closure
    bool grew = true;
    while (grew) {
      grew = false;
      for (int a = 0; a < m; ++a) {
        if (group[a] != group[i]) continue;
        for (int b = 0; b < m; ++b) {
          if (group[b] >= 0) continue;
          if (std::abs(vals[a] - vals[b]) <= cluster_tol) {
            group[b] = group[i];
            grew = true;
          }
        }
      }
    }
  }
  std::vector<EigenCluster> out(ngroups);
  for (int i = 0; i < m; ++i) {
    out[group[i]].members.push_back(vals[i]);
    out[group[i]].mean += vals[i];
    out[group[i]].size += 1;
  }
  for (auto& c : out) c.mean /= static_cast<double>(c.size);
  return out;
}

}  // namespace detail

// Decomposes R^{2n} into minimal subspaces invariant under both structures.
// Quartet classes {lambda, conj, 1/lambda, 1/conj} give 4-dimensional blocks
// and real classes {lambda, 1/lambda} give 2-dimensional ones; unimodular
// classes always carry even multiplicity and form quaternionic isotypic
// summands of dimension 4r; clusters at exactly +-1 are the holomorphic and
// antiholomorphic summands. Anything else is NonGenericSpectrum.
inline std::vector<SpectralBlock> spectral_blocks(const StructurePair& pair,
                                                  double tol = kDefaultTol,
                                                  double cluster_tol = kDefaultClusterTol) {
  const int d = pair.dim();
  const Mat k = pair.k_operator();
  const Mat id = Mat::identity(d);
  const std::vector<std::complex<double>> vals = eigenvalues(k);
  std::vector<detail::EigenCluster> clusters = detail::cluster_eigenvalues(vals, cluster_tol);

  // Merge clusters into classes closed under conjugation and inversion.
  const int nc = static_cast<int>(clusters.size());
  std::vector<int> cls(nc, -1);
  const auto find_cluster = [&](std::complex<double> target) -> int {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nc; ++i) {
      const double dist = std::abs(clusters[i].mean - target);
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    const double match_tol = 100.0 * cluster_tol * std::max(1.0, std::norm(target));
    if (best < 0 || best_dist > match_tol)
      throw NonGenericSpectrum("spectral_blocks: spectrum symmetry match failed at tolerance");
    return best;
  };
  int nclasses = 0;
  for (int i = 0; i < nc; ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = nclasses++;
    std::vector<int> todo{i};
    while (!todo.empty()) {
      const int c = todo.back();
      todo.pop_back();
      const std::complex<double> mu = clusters[c].mean;
      for (const std::complex<double> target : {std::conj(mu), 1.0 / mu, 1.0 / std::conj(mu)}) {
        const int other = find_cluster(target);
        if (cls[other] < 0) {
          cls[other] = cls[i];
          todo.push_back(other);
        } else if (cls[other] != cls[i]) {
          throw NonGenericSpectrum("spectral_blocks: eigenvalue classes overlap ambiguously");
        }
      }
    }
  }

  std::vector<SpectralBlock> blocks;
  const double res_scale =
      std::max({1.0, pair.j0.J.frobenius_norm(), pair.j1.J.frobenius_norm()});
  const double res_tol = std::max(tol, 1e-10) * res_scale * d;

  for (int c = 0; c < nclasses; ++c) {
    std::vector<int> members;
    int total = 0;
    for (int i = 0; i < nc; ++i)
      if (cls[i] == c) {
        members.push_back(i);
        total += clusters[i].size;
      }
    // Locate the representative with the largest imaginary part.
    std::complex<double> rep = clusters[members[0]].mean;
    for (int i : members)
      if (clusters[i].mean.imag() > rep.imag()) rep = clusters[i].mean;

    SpectralBlock b;
    const bool at_plus_one = std::abs(rep - 1.0) <= cluster_tol * 10.0;
    const bool at_minus_one = std::abs(rep + 1.0) <= cluster_tol * 10.0;
    if (at_plus_one || at_minus_one) {
      if (members.size() != 1 || total % 2 != 0)
        throw NonGenericSpectrum("spectral_blocks: malformed cluster at +-1");
      b.kind = at_plus_one ? SpectralBlock::Kind::Holo : SpectralBlock::Kind::Antiholo;
      b.mult = total / 2;
      const Mat shifted = at_plus_one ? k - id : k + id;
      auto [frame, worst] = smallest_singular_subspace(shifted, total);
      if (worst > res_tol)
        throw NonGenericSpectrum("spectral_blocks: defective eigenvalue cluster at +-1");
      b.frame = std::move(frame);
    } else if (members.size() == 2 && std::abs(rep.imag()) > cluster_tol) {
      // {lambda, conj(lambda)} with 1/lambda falling back on the conjugate:
      // unimodular angles. v -> conj(J0 v) is a conjugate-linear involution
      // squaring to -I on each such eigenspace, so the multiplicity is even
      // and the cluster is a quaternionic isotypic summand (for any pair,
      // orthogonal or not). Odd totals are numerical artifacts.
      b.theta = std::abs(std::arg(rep));
      if (total % 4 != 0)
        throw NonGenericSpectrum(
            "spectral_blocks: unimodular cluster with odd complex multiplicity");
      b.kind = SpectralBlock::Kind::QuaternionCluster;
      b.mult = total / 4;
      // ker(K^2 - 2 cos(theta) K + I), the isotypic quaternionic summand.
      const Mat p = k * k - (2.0 * std::cos(b.theta)) * k + id;
      auto [frame, worst] = smallest_singular_subspace(p, total);
      if (worst > res_tol)
        throw NonGenericSpectrum("spectral_blocks: quaternionic cluster is not semisimple");
      b.frame = std::move(frame);
    } else if (members.size() == 2 && std::abs(rep.imag()) <= cluster_tol) {
      // {lambda, 1/lambda} real. J0 maps the lambda eigenvector to one for
      // 1/lambda, so the block is spanned by (u, J0 u).
      if (total != 2)
        throw NonGenericSpectrum("spectral_blocks: repeated real eigenvalue pair");
      b.kind = SpectralBlock::Kind::RealPair;
      const CMat v = eigenvector_for(k, rep.real(), std::max(tol, 1e-10));
      Mat u(d, 1);
      for (int r = 0; r < d; ++r) u(r, 0) = v(r, 0).real();
      if (column_norm(u, 0) < 0.5) {
        for (int r = 0; r < d; ++r) u(r, 0) = v(r, 0).imag();
      }
      b.frame = orthonormalize(hcat(u, pair.j0.J * u), 1e-10);
    } else if (members.size() == 4) {
      if (total != 4)
        throw NonGenericSpectrum("spectral_blocks: repeated eigenvalues in a quartet class");
      b.kind = SpectralBlock::Kind::Quartet;
      const CMat v = eigenvector_for(k, rep, std::max(tol, 1e-10));
      Mat span(d, 4);
      for (int r = 0; r < d; ++r) {
        span(r, 0) = v(r, 0).real();
        span(r, 1) = v(r, 0).imag();
      }
      const Mat jv = pair.j0.J * span.block(0, 0, d, 2);
      span.set_block(0, 2, jv);
      b.frame = orthonormalize(span, 1e-10);
    } else {
      throw NonGenericSpectrum("spectral_blocks: eigenvalue class has an unexpected shape");
    }
    blocks.push_back(std::move(b));
  }

  // Every block must be invariant under both structures, and together they
  // must span the whole space.
  int span_total = 0;
  for (const auto& b : blocks) {
    span_total += b.dim();
    if (invariance_residual(pair.j0.J, b.frame) > res_tol ||
        invariance_residual(pair.j1.J, b.frame) > res_tol)
      throw NonGenericSpectrum("spectral_blocks: block failed the invariance residual check");
  }
  if (span_total != d)
    throw NonGenericSpectrum("spectral_blocks: blocks do not add up to the full space");
  std::sort(blocks.begin(), blocks.end(), [](const SpectralBlock& a, const SpectralBlock& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    return a.theta < b.theta;
  });
  return blocks;
}

// ---------------------------------------------------------------------------
// Per-plane analysis: relative orientation, transversality, local sign.
// ---------------------------------------------------------------------------

inline void require_invariant(const StructurePair& pair, const Mat& frame, double tol) {
  const double scale = std::max({1.0, pair.j0.J.frobenius_norm(), pair.j1.J.frobenius_norm()});
  if (invariance_residual(pair.j0.J, frame) > tol * scale ||
      invariance_residual(pair.j1.J, frame) > tol * scale)
    throw NotInvariant("plane is not invariant under both structures at tolerance");
}

// Same orientation iff the change of basis between a J0-adapted and a
// J1-adapted oriented basis of the plane has positive determinant.
inline RelOrientation relative_orientation(const StructurePair& pair, const OrientedPlane& p,
                                           double tol = 1e-7) {
  if (p.plane_dim() == 0) return RelOrientation::Same;
  require_invariant(pair, p.frame, tol);
  const Mat f0 = j_adapted_oriented_frame(pair.j0.J, p.frame);
  const Mat f1 = j_adapted_oriented_frame(pair.j1.J, p.frame);
  return determinant(f0.transposed() * f1) > 0.0 ? RelOrientation::Same : RelOrientation::Opposite;
}

// Orthonormal basis of the tangent space to Gr^J at P inside Hom(P, P^perp):
// the kernel of A -> dA - Aa with a = J restricted to P and d the (2,2)
// block of J with respect to P + P^perp. Dimension 2k(n-k).
inline std::vector<Mat> tangent_space(const Mat& j, const OrientedPlane& p, double tol = 1e-7) {
  const double scale = std::max(1.0, j.frobenius_norm());
  if (invariance_residual(j, p.frame) > tol * scale)
    throw NotInvariant("tangent_space: plane is not J-invariant at tolerance");
  const Mat f = p.frame;
  const Mat g = orthonormal_complement(f);
  const Mat a = f.transposed() * (j * f);
  const Mat dd = g.transposed() * (j * g);
  return sylvester_kernel(a, dd, 1e-8);
}

struct Transversality {
  bool transverse = false;
  double gap = 0.0;
  bool marginal = false;
};

namespace detail {

// Shared workhorse for transversality and local signs. Builds the chart at P
// with P oriented by J0 and P^perp carrying the complementary orientation,
// stacks the two tangent spaces in the tensor-basis coordinates, and reads
// the gap (smallest singular value) and, on demand, the sign of the oriented
// determinant.
struct ChartAnalysis {
  RelOrientation rel = RelOrientation::Same;
  Transversality trans;
  int sign = 0;  // 0 until computed
};

inline ChartAnalysis analyze_chart(const StructurePair& pair, const Mat& frame_in, double tol,
                                   double trans_tol, bool want_sign) {
  ChartAnalysis out;
  const int d = pair.dim();
  const int pdim = frame_in.cols();
  if (pdim == 0) {
    out.rel = RelOrientation::Same;
    out.trans = {true, std::numeric_limits<double>::infinity(), false};
    out.sign = 1;
    return out;
  }
  require_invariant(pair, frame_in, tol);
  const Mat f = j_adapted_oriented_frame(pair.j0.J, frame_in);
  const Mat f1 = j_adapted_oriented_frame(pair.j1.J, frame_in);
  out.rel = determinant(f.transposed() * f1) > 0.0 ? RelOrientation::Same : RelOrientation::Opposite;

  if (pdim == d) {
    // Full-dimensional plane: the chart is zero-dimensional.
    out.trans = {true, std::numeric_limits<double>::infinity(), false};
    out.sign = 1;
    return out;
  }

  Mat g = orthonormal_complement(f);
  if (determinant(hcat(f, g)) < 0.0) {
    const int gc = g.cols();
    for (int r = 0; r < d; ++r) std::swap(g(r, gc - 2), g(r, gc - 1));
  }
  const Mat a0 = f.transposed() * (pair.j0.J * f);
  const Mat d0 = g.transposed() * (pair.j0.J * g);
  const Mat a1 = f.transposed() * (pair.j1.J * f);
  const Mat d1 = g.transposed() * (pair.j1.J * g);
  const std::vector<Mat> t0 = sylvester_kernel(a0, d0, 1e-8);
  const std::vector<Mat> t1 = sylvester_kernel(a1, d1, 1e-8);
  const int expected = pdim * (d - pdim) / 2;  // 2k(n-k)
  if (static_cast<int>(t0.size()) != expected || static_cast<int>(t1.size()) != expected)
    throw NonGenericSpectrum("analyze_chart: tangent space has unexpected dimension");

  const int chart_dim = pdim * (d - pdim);
  Mat m0(chart_dim, expected), m1(chart_dim, expected);
  for (int c = 0; c < expected; ++c) {
    m0.set_col(c, vec_cm(t0[c]));
    m1.set_col(c, vec_cm(t1[c]));
  }
  const Mat stacked = hcat(m0, m1);
  const double gap = smallest_singular_value(stacked);
  out.trans.gap = gap;
  out.trans.transverse = gap > trans_tol;
  out.trans.marginal = gap >= trans_tol / 10.0 && gap <= trans_tol;
  if (!want_sign || !out.trans.transverse) return out;

  // Orient each tangent space by its complex structure A -> dA and compare
  // the concatenation with the chart orientation.
  const Mat op0 = kron(Mat::identity(pdim), d0);
  const Mat op1 = kron(Mat::identity(pdim), d1);
  const Mat o0 = j_adapted_oriented_frame(op0, m0);
  const Mat o1 = j_adapted_oriented_frame(op1, m1);
  out.sign = determinant(hcat(o0, o1)) > 0.0 ? 1 : -1;
  return out;
}

}  // namespace detail

// Transversality of the two complex Grassmannians at a jointly invariant
// plane: the stacked tangent bases must have no kernel. The gap is the
// smallest singular value of the stacked basis matrix.
inline Transversality is_transverse(const StructurePair& pair, const OrientedPlane& p,
                                    double trans_tol = kDefaultTransTol, double tol = 1e-7) {
  return detail::analyze_chart(pair, p.frame, tol, trans_tol, false).trans;
}

// Local intersection sign at a transverse point: orient both tangent spaces
// by their complex structures, concatenate, and take the determinant sign in
// the oriented chart basis.
inline int local_intersection_sign(const StructurePair& pair, const OrientedPlane& p,
                                   double trans_tol = kDefaultTransTol, double tol = 1e-7) {
  const auto a = detail::analyze_chart(pair, p.frame, tol, trans_tol, true);
  if (!a.trans.transverse)
    throw NotTransverse("local_intersection_sign: intersection is not transverse at tolerance");
  return a.sign;
}

// The unit imaginary quaternion alpha = v2 conj(v1) attached to an oriented
// 2-plane in R^4 = H; left multiplication by alpha is the complex structure
// the plane's orientation selects.
inline Quaternion plane_to_unit_quaternion(const OrientedPlane& p) {
  if (p.ambient_dim() != 4 || p.plane_dim() != 2)
    throw Error("plane_to_unit_quaternion: needs an oriented 2-plane in R^4");
  if (orthonormality_defect(p.frame) > 1e-8)
    throw NotOrthonormal("plane_to_unit_quaternion: frame is not orthonormal");
  const Quaternion v1 = from_coords(p.frame.col(0));
  const Quaternion v2 = from_coords(p.frame.col(1));
  return quat_mul(v2, v1.conjugate());
}

// ---------------------------------------------------------------------------
// The full intersection computation.
// ---------------------------------------------------------------------------

namespace detail {

inline void account_point(IntersectionReport& rep, IntersectionPoint pt) {
  (pt.relativeOrientation == RelOrientation::Same ? rep.rawCountSame : rep.rawCountOpposite).bump();
  rep.isolatedPoints.push_back(std::move(pt));
}

inline void finalize_counts(IntersectionReport& rep) {
  bool same_ok = !rep.rawCountSame.infinite;
  bool opp_ok = !rep.rawCountOpposite.infinite;
  std::int64_t same_sum = 0, opp_sum = 0;
  for (const auto& pt : rep.isolatedPoints) {
    if (!pt.transverse) {
      (pt.relativeOrientation == RelOrientation::Same ? same_ok : opp_ok) = false;
      continue;
    }
    (pt.relativeOrientation == RelOrientation::Same ? same_sum : opp_sum) += pt.localSign;
  }
  if (same_ok) rep.signedCountSame = same_sum;
  if (opp_ok) rep.signedCountOpposite = opp_sum;
  bool all_transverse = true;
  for (const auto& pt : rep.isolatedPoints) all_transverse = all_transverse && pt.transverse;
  rep.generic = !rep.continuumPresent && all_transverse;
}

inline bool already_reported(const IntersectionReport& rep, const Mat& frame, double tol) {
  for (const auto& pt : rep.isolatedPoints)
    if (pt.plane.plane_dim() == frame.cols() &&
        projector_distance(pt.plane.frame, frame) < 10.0 * tol)
      return true;
  return false;
}

inline void add_isolated_plane(IntersectionReport& rep, const StructurePair& pair, Mat span,
                               const IntersectOptions& opts) {
  Mat frame = std::move(span);
  if (frame.cols() > 0) {
    try {
      frame = orthonormalize(frame, 1e-10);
    } catch (const RankDeficient&) {
      throw NonGenericSpectrum("common_invariant_planes: selected blocks are numerically dependent");
    }
    frame = j_adapted_oriented_frame(pair.j0.J, frame);
  }
  if (already_reported(rep, frame, std::max(opts.tol, 1e-9))) return;
  ChartAnalysis chart;
  try {
    chart = analyze_chart(pair, frame, opts.tol, opts.transTol, true);
  } catch (const NotInvariant& e) {
    // A synthesised candidate that misses its own invariance residual is a
    // numerical breakdown of the block decomposition, not a caller error.
    throw NonGenericSpectrum(std::string("common_invariant_planes: ") + e.what());
  }
  IntersectionPoint pt;
  pt.plane = OrientedPlane{std::move(frame)};
  pt.relativeOrientation = chart.rel;
  pt.transverse = chart.trans.transverse;
  pt.transversalityGap = chart.trans.gap;
  pt.marginal = chart.trans.marginal;
  pt.localSign = chart.trans.transverse ? chart.sign : 0;
  account_point(rep, std::move(pt));
}

}  // namespace detail

// Computes the set of oriented 2k-planes stabilised by both structures. For
// orthogonal pairs the components come exactly from the signature; isolated
// components are synthesised from the spectral blocks and analysed for
// orientation, transversality and local signs. Positive-dimensional
// components are reported descriptively and make the raw count of their
// orientation class infinite. General pairs run entirely on the spectral
// blocks, which requires a generic spectrum (NonGenericSpectrum otherwise).
inline IntersectionReport common_invariant_planes(const StructurePair& pair, int k,
                                                  const IntersectOptions& opts = {}) {
  const int n = pair.n();
  if (k < 0 || k > n) throw Error("common_invariant_planes: k out of range");
  IntersectionReport rep;
  rep.n = n;
  rep.k = k;
  const auto expected = expected_counts(pair.sameOrientation, n, k);
  rep.expectedSame = expected.first;
  rep.expectedOpposite = expected.second;
  rep.orthogonalMode = pair.isOrthogonal && !opts.forceGeneralPath;

  if (rep.orthogonalMode) {
    const PairSignature sig = classify_orthogonal_pair(pair, opts.tol, opts.clusterTol);
    rep.components = enumerate_components_orthogonal(sig, k);
    bool any_isolated = false;
    for (const auto& c : rep.components) any_isolated = any_isolated || c.realDim == 0;
    std::vector<SpectralBlock> blocks;
    if (any_isolated) blocks = spectral_blocks(pair, opts.tol, opts.clusterTol);
    // Match quaternionic blocks with the signature's angle list.
    std::vector<const SpectralBlock*> theta_blocks;
    const SpectralBlock* holo = nullptr;
    const SpectralBlock* antiholo = nullptr;
    for (const auto& b : blocks) {
      switch (b.kind) {
        case SpectralBlock::Kind::Holo: holo = &b; break;
        case SpectralBlock::Kind::Antiholo: antiholo = &b; break;
        case SpectralBlock::Kind::QuaternionCluster: theta_blocks.push_back(&b); break;
        default:
          throw NonGenericSpectrum("common_invariant_planes: unexpected block for an orthogonal pair");
      }
    }
    std::sort(theta_blocks.begin(), theta_blocks.end(),
              [](const SpectralBlock* a, const SpectralBlock* b) { return a->theta < b->theta; });
    if (any_isolated && theta_blocks.size() != sig.blocks.size())
      throw NonGenericSpectrum("common_invariant_planes: spectral blocks disagree with signature");

    for (const auto& c : rep.components) {
      if (c.realDim > 0) {
        rep.continuumPresent = true;
        (c.orientationClass == RelOrientation::Same ? rep.rawCountSame : rep.rawCountOpposite)
            .infinite = true;
        continue;
      }
      Mat span(pair.dim(), 0);
      for (std::size_t i = 0; i < c.tTuple.size(); ++i)
        if (c.tTuple[i] == sig.blocks[i].mult) span = hcat(span, theta_blocks[i]->frame);
      if (sig.holoCount > 0 && c.lPrime == sig.holoCount) span = hcat(span, holo->frame);
      if (sig.antiholoCount > 0 && c.sPrime == sig.antiholoCount) span = hcat(span, antiholo->frame);
      detail::add_isolated_plane(rep, pair, std::move(span), opts);
    }
    detail::finalize_counts(rep);
    return rep;
  }

  // General path: enumerate selections of spectral blocks by dimension.
  const std::vector<SpectralBlock> blocks = spectral_blocks(pair, opts.tol, opts.clusterTol);
  const int nb = static_cast<int>(blocks.size());
  std::vector<int> take(nb, 0);

  // Relative orientation factor of each whole block, used to attribute an
  // orientation class to continuum families without sampling them.
  std::vector<int> block_factor(nb, 1);
  for (int i = 0; i < nb; ++i) {
    if (blocks[i].is_cluster()) continue;  // handled by parity / always same
    const Mat f = j_adapted_oriented_frame(pair.j0.J, blocks[i].frame);
    const auto chart = detail::analyze_chart(pair, f, opts.tol, opts.transTol, false);
    block_factor[i] = chart.rel == RelOrientation::Same ? 1 : -1;
  }

  const auto handle_selection = [&]() {
    bool proper = false;
    int antiholo_taken = 0;
    int factor = 1;
    for (int i = 0; i < nb; ++i) {
      if (take[i] == 0) continue;
      if (blocks[i].is_cluster()) {
        if (take[i] < blocks[i].mult) proper = true;
        if (blocks[i].kind == SpectralBlock::Kind::Antiholo) antiholo_taken = take[i];
      } else {
        factor *= block_factor[i];
      }
    }
    if (antiholo_taken % 2 != 0) factor = -factor;
    if (proper) {
      rep.continuumPresent = true;
      (factor > 0 ? rep.rawCountSame : rep.rawCountOpposite).infinite = true;
      return;
    }
    Mat span(pair.dim(), 0);
    for (int i = 0; i < nb; ++i)
      if (take[i] > 0) span = hcat(span, blocks[i].frame);
    detail::add_isolated_plane(rep, pair, std::move(span), opts);
  };

  const auto rec = [&](auto&& self, int level, int dims) -> void {
    if (dims > 2 * k) return;
    if (level == nb) {
      if (dims == 2 * k) handle_selection();
      return;
    }
    const bool cluster = blocks[level].is_cluster();
    const int max_take = cluster ? blocks[level].mult : 1;
    const int unit = cluster ? blocks[level].step() : blocks[level].dim();
    for (int t = 0; t <= max_take; ++t) {
      take[level] = t;
      self(self, level + 1, dims + t * unit);
    }
    take[level] = 0;
  };
  rec(rec, 0, 0);
  detail::finalize_counts(rep);
  return rep;
}

}  // namespace jgrass

#endif  // JGRASS_INTERSECTION_HPP
