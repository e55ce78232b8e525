#ifndef JGRASS_QUATERNION_HPP
#define JGRASS_QUATERNION_HPP

#include <cmath>

#include "jgrass/matrix.hpp"

namespace jgrass {

// Quaternion w + xi + yj + zk with ij = k, jk = i, ki = j. The coordinate
// order (1, i, j, k) matches the identification of R^4 with H used by the
// canonical pairs: (z1, z2) in C^2 corresponds to z1 + z2 j, so R^4
// coordinates read (Re z1, Im z1, Re z2, Im z2).
struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  static Quaternion one() { return {1, 0, 0, 0}; }
  static Quaternion i() { return {0, 1, 0, 0}; }
  static Quaternion j() { return {0, 0, 1, 0}; }
  static Quaternion k() { return {0, 0, 0, 1}; }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  Quaternion conjugate() const { return {w, -x, -y, -z}; }

  friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Quaternion operator*(double s, const Quaternion& q) {
    return {s * q.w, s * q.x, s * q.y, s * q.z};
  }
  friend Quaternion operator-(const Quaternion& q) { return {-q.w, -q.x, -q.y, -q.z}; }
};

inline Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

inline Quaternion from_coords(const Mat& v) {
  return {v(0, 0), v(1, 0), v(2, 0), v(3, 0)};
}

inline Mat to_coords(const Quaternion& q) {
  Mat v(4, 1);
  v(0, 0) = q.w;
  v(1, 0) = q.x;
  v(2, 0) = q.y;
  v(3, 0) = q.z;
  return v;
}

// 4x4 matrix of x -> q x in the (1, i, j, k) coordinates.
inline Mat left_mult_matrix(const Quaternion& q) {
  Mat m(4, 4);
  const Quaternion cols[4] = {quat_mul(q, Quaternion::one()), quat_mul(q, Quaternion::i()),
                              quat_mul(q, Quaternion::j()), quat_mul(q, Quaternion::k())};
  for (int j = 0; j < 4; ++j) {
    m(0, j) = cols[j].w;
    m(1, j) = cols[j].x;
    m(2, j) = cols[j].y;
    m(3, j) = cols[j].z;
  }
  return m;
}

// The unit imaginary quaternion i e^{j theta} = cos(theta) i + sin(theta) k.
inline Quaternion i_exp_j(double theta) {
  return {0.0, std::cos(theta), 0.0, std::sin(theta)};
}

}  // namespace jgrass

#endif  // JGRASS_QUATERNION_HPP
