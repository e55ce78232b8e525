#ifndef JGRASS_STRUCTURES_HPP
#define JGRASS_STRUCTURES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "jgrass/eig.hpp"
#include "jgrass/errors.hpp"
#include "jgrass/matrix.hpp"
#include "jgrass/plane.hpp"
#include "jgrass/quaternion.hpp"
#include "jgrass/rng.hpp"

namespace jgrass {

inline constexpr double kDefaultClusterTol = 1e-7;
inline constexpr double kOrthogonalityTol = 1e-8;

// ---------------------------------------------------------------------------
// Complex structures.
// ---------------------------------------------------------------------------

inline bool is_complex_structure(const Mat& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) return false;
  if (m.rows() % 2 != 0) throw OddDimension("is_complex_structure: odd-dimensional input");
  const Mat r = m * m + Mat::identity(m.rows());
  return r.max_abs() <= tol * m.rows();
}

// Sign of det(v1, Jv1, ..., vn, Jvn) for a greedily completed adapted basis.
// Independent of the greedy choices: two adapted bases differ by a change of
// basis that is complex-linear for J, whose real determinant is positive.
inline int orientation_sign(const Mat& j) {
  const Mat basis = j_adapted_basis(j, Mat::identity(j.rows()));
  return determinant(basis) >= 0.0 ? 1 : -1;
}

struct ComplexStructure {
  Mat J;                    // 2n x 2n with J^2 = -I
  int orientationSign = 1;  // cached orientation sign

  int dim() const { return J.rows(); }
  int n() const { return J.rows() / 2; }
};

inline ComplexStructure make_structure(Mat j, double tol = kDefaultTol) {
  if (j.rows() != j.cols() || j.rows() % 2 != 0)
    throw OddDimension("make_structure: dimension must be even");
  if (!is_complex_structure(j, tol))
    throw NotComplexStructure("make_structure: matrix does not square to -I at tolerance");
  const int sign = orientation_sign(j);
  return ComplexStructure{std::move(j), sign};
}

// Block diagonal 2x2 rotations by pi/2 (the standard complex structure).
inline ComplexStructure standard_structure(int n) {
  Mat j(2 * n, 2 * n);
  for (int b = 0; b < n; ++b) {
    j(2 * b, 2 * b + 1) = -1.0;
    j(2 * b + 1, 2 * b) = 1.0;
  }
  return ComplexStructure{std::move(j), 1};
}

inline ComplexStructure negated(const ComplexStructure& s) {
  const int flip = s.n() % 2 == 0 ? 1 : -1;
  return ComplexStructure{-s.J, flip * s.orientationSign};
}

// g J g^{-1}. The orientation class transforms by the sign of det(g).
inline ComplexStructure conjugated(const ComplexStructure& s, const Mat& g, double tol = kDefaultTol) {
  LuFactors<double> f = lu_factor(g.transposed());
  if (lu_is_singular(f, 1e-13))
    throw SingularConjugator("conjugated: conjugating matrix is numerically singular");
  const Mat jt = lu_solve(f, (g * s.J).transposed());
  Mat j = jt.transposed();
  // Re-validate with a tolerance that allows for the conditioning of g.
  const double kappa = f.max_pivot / f.min_pivot;
  return make_structure(std::move(j), tol * std::max(1.0, kappa * kappa));
}

// Haar-random orthogonal complex structure with the requested orientation
// class (+1 or -1): conjugate the standard structure (reflected through the
// last-two-coordinates swap for the -1 class) by a Haar element of SO(2n).
inline ComplexStructure random_orthogonal_structure(int n, int orientation, std::uint64_t seed) {
  Rng rng(seed);
  const int d = 2 * n;
  Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.gaussian();
  Mat q = orthonormalize(g, 1e-12);
  if (determinant(q) < 0.0)
    for (int i = 0; i < d; ++i) std::swap(q(i, d - 2), q(i, d - 1));
  Mat base = standard_structure(n).J;
  if (orientation < 0) {
    // Conjugate by the swap of the last two coordinates.
    for (int i = 0; i < d; ++i) std::swap(base(i, d - 2), base(i, d - 1));
    for (int j = 0; j < d; ++j) std::swap(base(d - 2, j), base(d - 1, j));
  }
  Mat j = q * base * q.transposed();
  return ComplexStructure{std::move(j), orientation < 0 ? -1 : 1};
}

// g J0 g^{-1} with g Gaussian, resampled until cond(g) <= cond_bound; det(g)
// is fixed positive so the orientation class is exactly the requested one.
inline ComplexStructure random_general_structure(int n, int orientation, std::uint64_t seed,
                                                 double cond_bound) {
  if (cond_bound <= 1.0) throw Error("random_general_structure: cond_bound must exceed 1");
  Rng rng(seed);
  const int d = 2 * n;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = rng.gaussian();
    const Svd s = svd(g);
    if (s.sigma.back() <= 0.0) continue;
    const double kappa = s.sigma.front() / s.sigma.back();
    if (kappa > cond_bound) continue;
    if (determinant(g) < 0.0)
      for (int i = 0; i < d; ++i) g(i, d - 1) = -g(i, d - 1);
    Mat base = standard_structure(n).J;
    if (orientation < 0) {
      for (int i = 0; i < d; ++i) std::swap(base(i, d - 2), base(i, d - 1));
      for (int j = 0; j < d; ++j) std::swap(base(d - 2, j), base(d - 1, j));
    }
    const Mat jt = solve(g.transposed(), (g * base).transposed());
    return ComplexStructure{jt.transposed(), orientation < 0 ? -1 : 1};
  }
  throw SamplingExhausted("random_general_structure: no sample met the condition bound");
}

// ---------------------------------------------------------------------------
// Pairs and their invariants.
// ---------------------------------------------------------------------------

struct StructurePair {
  ComplexStructure j0;
  ComplexStructure j1;
  bool isOrthogonal = false;
  bool sameOrientation = false;

  int dim() const { return j0.dim(); }
  int n() const { return j0.n(); }
  // K = -J0 J1, the operator whose spectrum classifies the pair.
  Mat k_operator() const { return -(j0.J * j1.J); }
};

inline bool is_orthogonal_matrix(const Mat& m, double tol = kOrthogonalityTol) {
  return (m.transposed() * m - Mat::identity(m.cols())).max_abs() <= tol;
}

inline StructurePair make_structure_pair(ComplexStructure a, ComplexStructure b,
                                         double tol = kOrthogonalityTol) {
  if (a.dim() != b.dim()) throw Error("make_structure_pair: dimension mismatch");
  StructurePair p;
  p.isOrthogonal = is_orthogonal_matrix(a.J, tol) && is_orthogonal_matrix(b.J, tol);
  p.sameOrientation = a.orientationSign == b.orientationSign;
  p.j0 = std::move(a);
  p.j1 = std::move(b);
  return p;
}

// ---------------------------------------------------------------------------
// Signatures of orthogonal pairs.
// ---------------------------------------------------------------------------

struct QuaternionBlockSpec {
  double theta = 0.0;  // in (0, pi)
  int mult = 0;        // r >= 1
};

// Isomorphism invariant of an orthogonal pair: quaternionic angle blocks
// H_theta^r, plus the holomorphic count l (J1 = J0 summands) and the
// antiholomorphic count s (J1 = -J0 summands).
struct PairSignature {
  std::vector<QuaternionBlockSpec> blocks;  // strictly increasing theta
  int holoCount = 0;                        // l
  int antiholoCount = 0;                    // s
  bool nearDegenerate = false;              // some theta within 10 cluster tolerances of 0 or pi

  int dim() const {
    int d = 2 * holoCount + 2 * antiholoCount;
    for (const auto& b : blocks) d += 4 * b.mult;
    return d;
  }
  int n() const { return dim() / 2; }
  bool same_orientation() const { return antiholoCount % 2 == 0; }
};

// Reads the signature off the spectrum of K = -J0 J1: eigenvalue 1 with
// multiplicity 2l, eigenvalue -1 with multiplicity 2s, and e^{+-i theta}
// (multiplicity 2r each) per quaternionic block. Angles are clustered at
// cluster_tol and always reported in (0, pi).
inline PairSignature classify_orthogonal_pair(const StructurePair& pair, double tol = kDefaultTol,
                                              double cluster_tol = kDefaultClusterTol) {
  if (!pair.isOrthogonal)
    throw NotOrthogonal("classify_orthogonal_pair: pair is not orthogonal at tolerance");
  const Mat k = pair.k_operator();
  const std::vector<std::complex<double>> vals = eigenvalues(k);
  const double pi = std::numbers::pi_v<double>;
  for (const auto& v : vals)
    if (std::abs(std::abs(v) - 1.0) > std::max(1e3 * tol, 1e-7))
      throw NotOrthogonal("classify_orthogonal_pair: spectrum of K left the unit circle");

  std::vector<double> folded;  // |arg(lambda)| in [0, pi]
  for (const auto& v : vals) folded.push_back(std::abs(std::arg(v)));
  std::sort(folded.begin(), folded.end());

  PairSignature sig;
  std::vector<double> middle;
  for (double phi : folded) {
    if (phi <= cluster_tol) {
      ++sig.holoCount;
    } else if (pi - phi <= cluster_tol) {
      ++sig.antiholoCount;
    } else {
      middle.push_back(phi);
    }
  }
  if (sig.holoCount % 2 != 0 || sig.antiholoCount % 2 != 0)
    throw ClusterAmbiguity("classify: odd multiplicity at an eigenvalue of K equal to +-1");
  sig.holoCount /= 2;
  sig.antiholoCount /= 2;

  std::size_t i = 0;
  double prev_cluster_end = -1.0;
  while (i < middle.size()) {
    std::size_t j = i + 1;
    while (j < middle.size() && middle[j] - middle[j - 1] < cluster_tol) ++j;
    const int count = static_cast<int>(j - i);
    if (count % 4 != 0)
      throw ClusterAmbiguity("classify: angle cluster size is not a multiple of four");
    double theta = 0.0;
    for (std::size_t t = i; t < j; ++t) theta += middle[t];
    theta /= count;
    if (prev_cluster_end >= 0.0 && middle[i] - prev_cluster_end <= 10.0 * cluster_tol)
      throw ClusterAmbiguity("classify: eigenvalue gap straddles the clustering tolerance");
    if (theta <= 10.0 * cluster_tol || pi - theta <= 10.0 * cluster_tol) sig.nearDegenerate = true;
    sig.blocks.push_back({theta, count / 4});
    prev_cluster_end = middle[j - 1];
    i = j;
  }
  if (sig.dim() != pair.dim())
    throw ClusterAmbiguity("classify: cluster multiplicities do not add up to the dimension");
  return sig;
}

inline void validate_signature(const PairSignature& sig) {
  const double pi = std::numbers::pi_v<double>;
  double prev = 0.0;
  for (const auto& b : sig.blocks) {
    if (b.theta <= 0.0 || b.theta >= pi)
      throw InvalidSignature("signature: theta must lie strictly between 0 and pi");
    if (b.theta <= prev) throw InvalidSignature("signature: thetas must be strictly increasing");
    if (b.mult < 1) throw InvalidSignature("signature: block multiplicity must be positive");
    prev = b.theta;
  }
  if (sig.holoCount < 0 || sig.antiholoCount < 0)
    throw InvalidSignature("signature: counts must be non-negative");
  if (sig.dim() == 0) throw InvalidSignature("signature: empty signature");
}

// Block-diagonal canonical pair for a signature: per (theta, r), r copies of
// the quaternionic pair (L_i, L_{i e^{j theta}}); then l copies of
// (R_{pi/2}, R_{pi/2}) and s copies of (R_{pi/2}, R_{-pi/2}).
inline StructurePair construct_canonical_pair(const PairSignature& sig) {
  validate_signature(sig);
  const int d = sig.dim();
  Mat j0(d, d), j1(d, d);
  int at = 0;
  const Mat li = left_mult_matrix(Quaternion::i());
  for (const auto& b : sig.blocks) {
    const Mat lq = left_mult_matrix(i_exp_j(b.theta));
    for (int c = 0; c < b.mult; ++c) {
      j0.set_block(at, at, li);
      j1.set_block(at, at, lq);
      at += 4;
    }
  }
  const Mat rot = Mat::from_rows({{0.0, -1.0}, {1.0, 0.0}});
  for (int c = 0; c < sig.holoCount; ++c) {
    j0.set_block(at, at, rot);
    j1.set_block(at, at, rot);
    at += 2;
  }
  for (int c = 0; c < sig.antiholoCount; ++c) {
    j0.set_block(at, at, rot);
    j1.set_block(at, at, -rot);
    at += 2;
  }
  StructurePair p;
  p.j0 = ComplexStructure{std::move(j0), 1};
  p.j1 = ComplexStructure{std::move(j1), sig.antiholoCount % 2 == 0 ? 1 : -1};
  p.isOrthogonal = true;
  p.sameOrientation = sig.antiholoCount % 2 == 0;
  return p;
}

// Orthogonal pairs are isomorphic exactly when their signatures match.
inline bool pairs_isomorphic(const StructurePair& a, const StructurePair& b,
                             double tol = kDefaultClusterTol) {
  if (a.dim() != b.dim()) return false;
  const PairSignature sa = classify_orthogonal_pair(a);
  const PairSignature sb = classify_orthogonal_pair(b);
  if (sa.holoCount != sb.holoCount || sa.antiholoCount != sb.antiholoCount) return false;
  if (sa.blocks.size() != sb.blocks.size()) return false;
  for (std::size_t i = 0; i < sa.blocks.size(); ++i) {
    if (sa.blocks[i].mult != sb.blocks[i].mult) return false;
    if (std::abs(sa.blocks[i].theta - sb.blocks[i].theta) > tol) return false;
  }
  return true;
}

struct AntiholomorphicSubspace {
  OrientedPlane plane;  // oriented by J0
  int complexDim = 0;
};

// Maximal subspace on which J1 = -J0, i.e. ker(K + I). Empty kernels are
// legal for same-orientation pairs and reported as EmptySubspace; pairs of
// opposite orientation always have one of complex dimension >= 1.
inline AntiholomorphicSubspace find_antiholomorphic_subspace(const StructurePair& pair,
                                                             double tol = kDefaultTol) {
  const Mat k = pair.k_operator();
  const Mat ns = nullspace(k + Mat::identity(pair.dim()), std::max(tol, 1e-10), nullptr, 1.0);
  if (ns.cols() == 0)
    throw EmptySubspace("find_antiholomorphic_subspace: ker(K + I) is trivial");
  if (ns.cols() % 2 != 0)
    throw NonGenericSpectrum("find_antiholomorphic_subspace: odd kernel dimension");
  const Mat frame = j_adapted_oriented_frame(pair.j0.J, ns);
  return {OrientedPlane{frame}, ns.cols() / 2};
}

// Real dimension of {X : X J0 = J0 X and X J1 = J1 X}, via the joint
// nullspace of the two vectorized commutator operators.
inline int commutant_dimension(const StructurePair& pair, double tol = 1e-8) {
  const int d = pair.dim();
  const Mat id = Mat::identity(d);
  const Mat c0 = kron(pair.j0.J.transposed(), id) - kron(id, pair.j0.J);
  const Mat c1 = kron(pair.j1.J.transposed(), id) - kron(id, pair.j1.J);
  Mat stacked(2 * d * d, d * d);
  stacked.set_block(0, 0, c0);
  stacked.set_block(d * d, 0, c1);
  return nullspace(stacked, tol, nullptr, 1.0).cols();
}

}  // namespace jgrass

#endif  // JGRASS_STRUCTURES_HPP
