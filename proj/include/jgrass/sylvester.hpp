#ifndef JGRASS_SYLVESTER_HPP
#define JGRASS_SYLVESTER_HPP

#include <vector>

#include "jgrass/matrix.hpp"

namespace jgrass {

// Matrix of the operator A -> d A - A a on (rows(d) x cols(a)) matrices in
// column-major vec coordinates: I (x) d - a^T (x) I.
inline Mat sylvester_operator(const Mat& a, const Mat& d) {
  const Mat left = kron(Mat::identity(a.rows()), d);
  const Mat right = kron(a.transposed(), Mat::identity(d.rows()));
  return left - right;
}

// Orthonormal (Frobenius) basis of {A : dA - Aa = 0}, computed from the
// nullspace of the vectorized operator. The ambiguity flag is raised when
// singular values straddle the rank tolerance.
inline std::vector<Mat> sylvester_kernel(const Mat& a, const Mat& d, double tol = kDefaultTol,
                                         bool* ambiguous = nullptr) {
  const Mat op = sylvester_operator(a, d);
  const Mat ns = nullspace(op, tol, ambiguous);
  std::vector<Mat> basis;
  basis.reserve(ns.cols());
  for (int j = 0; j < ns.cols(); ++j) basis.push_back(unvec_cm(ns.col(j), d.rows(), a.rows()));
  return basis;
}

}  // namespace jgrass

#endif  // JGRASS_SYLVESTER_HPP
