#ifndef JGRASS_PLANE_HPP
#define JGRASS_PLANE_HPP

#include <cmath>

#include "jgrass/errors.hpp"
#include "jgrass/matrix.hpp"

namespace jgrass {

// An oriented 2k-dimensional subspace of R^{2n}, stored as an orthonormal
// column frame. The orientation is the column order.
struct OrientedPlane {
  Mat frame;  // 2n x 2k, orthonormal columns

  int ambient_dim() const { return frame.rows(); }
  int plane_dim() const { return frame.cols(); }
};

inline double orthonormality_defect(const Mat& frame) {
  return (frame.transposed() * frame - Mat::identity(frame.cols())).max_abs();
}

inline OrientedPlane make_plane(Mat frame, double tol = 1e-8) {
  if (orthonormality_defect(frame) > tol)
    throw NotOrthonormal("make_plane: frame columns are not orthonormal at tolerance");
  return OrientedPlane{std::move(frame)};
}

// Distance between subspaces as the max-norm gap of their orthogonal
// projectors; zero iff equal spans, independent of frames and orientations.
inline double projector_distance(const Mat& f1, const Mat& f2) {
  return (f1 * f1.transposed() - f2 * f2.transposed()).max_abs();
}

// || (I - F F^T) J F ||_F, the invariance residual of span(F) under J.
inline double invariance_residual(const Mat& j, const Mat& frame) {
  const Mat jf = j * frame;
  return (jf - frame * (frame.transposed() * jf)).frobenius_norm();
}

// Ordered basis (v1, Jv1, v2, Jv2, ...) of the column span of `space`
// (an orthonormal frame of a J-invariant subspace; pass the identity for the
// whole space). Candidates are drawn greedily from the columns of `space`,
// so the construction is deterministic; the resulting orientation does not
// depend on the choices made because any two such bases differ by a
// complex-linear change of basis, which has positive determinant.
// Candidate residuals are maintained incrementally, so the build costs
// O(rows * cols^2) instead of re-projecting every candidate each round.
inline Mat j_adapted_basis(const Mat& j, const Mat& space, double tol = 1e-7) {
  const int dim = space.cols();
  const int rows = space.rows();
  if (dim % 2 != 0) throw OddDimension("j_adapted_basis: subspace dimension must be even");
  Mat b(rows, dim);   // chosen columns, in adapted order
  Mat q(rows, dim);   // orthonormalized copy of the chosen columns
  Mat resid = space;  // candidates with the span of q knocked out
  const auto project_out = [&](Mat& vec, int upto) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < upto; ++i) {
        const double coef = column_dot(q, i, vec, 0);
        for (int r = 0; r < rows; ++r) vec(r, 0) -= coef * q(r, i);
      }
  };
  int filled = 0;
  while (filled < dim) {
    int best = -1;
    double best_norm = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double nrm = column_norm(resid, c);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = c;
      }
    }
    if (best < 0 || best_norm <= tol)
      throw Error("j_adapted_basis: greedy completion stalled (is the subspace J-invariant?)");
    Mat v = resid.col(best) * (1.0 / best_norm);
    project_out(v, filled);  // one more orthogonalization round for accuracy
    v *= 1.0 / column_norm(v, 0);
    // J v lies in the span when the subspace is invariant; project to clean
    // up the numerical leakage.
    const Mat w = space * (space.transposed() * (j * v));
    Mat wq = w;
    project_out(wq, filled);
    for (int pass = 0; pass < 2; ++pass) {
      const double coef = column_dot(v, 0, wq, 0);
      for (int r = 0; r < rows; ++r) wq(r, 0) -= coef * v(r, 0);
    }
    const double wn = column_norm(wq, 0);
    if (wn <= tol)
      throw Error("j_adapted_basis: greedy completion stalled (is the subspace J-invariant?)");
    wq *= 1.0 / wn;
    b.set_col(filled, v);
    b.set_col(filled + 1, w);
    q.set_col(filled, v);
    q.set_col(filled + 1, wq);
    for (int c = 0; c < dim; ++c)
      for (int newcol = filled; newcol < filled + 2; ++newcol) {
        const double coef = column_dot(q, newcol, resid, c);
        for (int r = 0; r < rows; ++r) resid(r, c) -= coef * q(r, newcol);
      }
    filled += 2;
  }
  return b;
}

// Orthonormal frame of the given invariant subspace whose column orientation
// is the one induced by J.
inline Mat j_adapted_oriented_frame(const Mat& j, const Mat& space, double tol = 1e-7) {
  return orthonormalize(j_adapted_basis(j, space, tol), tol);
}

}  // namespace jgrass

#endif  // JGRASS_PLANE_HPP
