#ifndef JGRASS_TEST_HELPERS_HPP
#define JGRASS_TEST_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "jgrass/intersection.hpp"
#include "jgrass/matrix.hpp"
#include "jgrass/rng.hpp"
#include "jgrass/structures.hpp"

namespace jgrass::testing {

inline Mat random_mat(Rng& rng, int rows, int cols) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  return m;
}

inline Mat random_special_orthogonal(Rng& rng, int d) {
  Mat q = orthonormalize(random_mat(rng, d, d), 1e-12);
  if (determinant(q) < 0.0)
    for (int i = 0; i < d; ++i) std::swap(q(i, d - 2), q(i, d - 1));
  return q;
}

inline Mat random_invertible(Rng& rng, int d, double cond_bound) {
  for (;;) {
    Mat g = random_mat(rng, d, d);
    const Svd s = svd(g);
    if (s.sigma.back() > 0.0 && s.sigma.front() / s.sigma.back() <= cond_bound) return g;
  }
}

// Random valid signature with total complex dimension exactly n: a partition
// n = 2 sum(r_i) + l + s with distinct, well separated angles.
inline PairSignature random_signature(Rng& rng, int n) {
  const double pi = std::numbers::pi_v<double>;
  PairSignature sig;
  int remaining = n;
  std::vector<int> mults;
  while (remaining >= 2 && rng.uniform() < 0.7) {
    const int max_r = remaining / 2;
    const int r = 1 + static_cast<int>(rng.uniform() * max_r) % max_r;
    mults.push_back(r);
    remaining -= 2 * r;
  }
  std::vector<double> thetas;
  while (thetas.size() < mults.size()) {
    const double t = 0.1 + rng.uniform() * (pi - 0.2);
    bool ok = true;
    for (double u : thetas) ok = ok && std::abs(u - t) > 1e-3;
    if (ok) thetas.push_back(t);
  }
  std::sort(thetas.begin(), thetas.end());
  for (std::size_t i = 0; i < mults.size(); ++i) sig.blocks.push_back({thetas[i], mults[i]});
  sig.holoCount = static_cast<int>(rng.uniform() * (remaining + 1)) % (remaining + 1);
  sig.antiholoCount = remaining - sig.holoCount;
  return sig;
}

inline bool signatures_close(const PairSignature& a, const PairSignature& b, double angle_tol) {
  if (a.holoCount != b.holoCount || a.antiholoCount != b.antiholoCount) return false;
  if (a.blocks.size() != b.blocks.size()) return false;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    if (a.blocks[i].mult != b.blocks[i].mult) return false;
    if (std::abs(a.blocks[i].theta - b.blocks[i].theta) > angle_tol) return false;
  }
  return true;
}

// Order-free matching of the isolated planes of two reports: spans within
// projector tolerance with equal relative orientations.
inline bool plane_sets_match(const IntersectionReport& a, const IntersectionReport& b,
                             double tol) {
  if (a.isolatedPoints.size() != b.isolatedPoints.size()) return false;
  std::vector<bool> used(b.isolatedPoints.size(), false);
  for (const auto& pa : a.isolatedPoints) {
    bool found = false;
    for (std::size_t i = 0; i < b.isolatedPoints.size() && !found; ++i) {
      if (used[i]) continue;
      const auto& pb = b.isolatedPoints[i];
      if (pa.plane.plane_dim() != pb.plane.plane_dim()) continue;
      if (projector_distance(pa.plane.frame, pb.plane.frame) > tol) continue;
      if (pa.relativeOrientation != pb.relativeOrientation) return false;
      used[i] = true;
      found = true;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace jgrass::testing

#endif  // JGRASS_TEST_HELPERS_HPP
