#ifndef JGRASS_MATRIX_HPP
#define JGRASS_MATRIX_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "jgrass/errors.hpp"

namespace jgrass {

inline constexpr double kDefaultTol = 1e-9;

namespace detail {
inline double conj_of(double x) { return x; }
inline std::complex<double> conj_of(const std::complex<double>& z) { return std::conj(z); }
inline double abs_of(double x) { return std::abs(x); }
inline double abs_of(const std::complex<double>& z) { return std::abs(z); }
}  // namespace detail

// Dense row-major matrix at the small sizes this library works with
// (dimension 2n <= 32, vectorized operators up to a few hundred).
template <class T>
class BasicMat {
 public:
  BasicMat() = default;

  BasicMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, T{}) {
    assert(rows >= 0 && cols >= 0);
  }

  static BasicMat identity(int n) {
    BasicMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  static BasicMat from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    BasicMat m(r, c);
    int i = 0;
    for (const auto& row : rows) {
      assert(static_cast<int>(row.size()) == c);
      int j = 0;
      for (const T& x : row) m(i, j++) = x;
      ++i;
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }
  const T& operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  BasicMat transposed() const {
    BasicMat m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  // Conjugate transpose; plain transpose for real matrices.
  BasicMat adjoint() const {
    BasicMat m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = detail::conj_of((*this)(i, j));
    return m;
  }

  BasicMat block(int i0, int j0, int r, int c) const {
    assert(i0 >= 0 && j0 >= 0 && i0 + r <= rows_ && j0 + c <= cols_);
    BasicMat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = (*this)(i0 + i, j0 + j);
    return m;
  }

  void set_block(int i0, int j0, const BasicMat& b) {
    assert(i0 + b.rows() <= rows_ && j0 + b.cols() <= cols_);
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
  }

  BasicMat col(int j) const { return block(0, j, rows_, 1); }

  void set_col(int j, const BasicMat& v) {
    assert(v.cols() == 1 && v.rows() == rows_);
    set_block(0, j, v);
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const T& x : a_) {
      const double m = detail::abs_of(x);
      s += m * m;
    }
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const T& x : a_) m = std::max(m, detail::abs_of(x));
    return m;
  }

  BasicMat& operator+=(const BasicMat& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  BasicMat& operator-=(const BasicMat& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  BasicMat& operator*=(T s) {
    for (T& x : a_) x *= s;
    return *this;
  }

  friend BasicMat operator+(BasicMat a, const BasicMat& b) { return a += b; }
  friend BasicMat operator-(BasicMat a, const BasicMat& b) { return a -= b; }
  friend BasicMat operator*(BasicMat a, T s) { return a *= s; }
  friend BasicMat operator*(T s, BasicMat a) { return a *= s; }
  friend BasicMat operator-(BasicMat a) { return a *= T{-1}; }

  friend BasicMat operator*(const BasicMat& a, const BasicMat& b) {
    assert(a.cols_ == b.rows_);
    BasicMat m(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        if (aik == T{}) continue;
        for (int j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> a_;
};

using Mat = BasicMat<double>;
using CMat = BasicMat<std::complex<double>>;

template <class T>
BasicMat<T> hcat(const BasicMat<T>& a, const BasicMat<T>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  assert(a.rows() == b.rows());
  BasicMat<T> m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

template <class T>
BasicMat<T> hcat(const std::vector<BasicMat<T>>& parts) {
  BasicMat<T> m;
  for (const auto& p : parts) m = hcat(m, p);
  return m;
}

inline bool approx_equal(const Mat& a, const Mat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).max_abs() <= tol;
}

// Column-major vectorization: stacks the columns of a top to bottom. This is
// the coordinate order used throughout for Hom(P, Q) charts.
template <class T>
BasicMat<T> vec_cm(const BasicMat<T>& a) {
  BasicMat<T> v(a.rows() * a.cols(), 1);
  int idx = 0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) v(idx++, 0) = a(i, j);
  return v;
}

template <class T>
BasicMat<T> unvec_cm(const BasicMat<T>& v, int rows, int cols) {
  assert(v.cols() == 1 && v.rows() == rows * cols);
  BasicMat<T> a(rows, cols);
  int idx = 0;
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) a(i, j) = v(idx++, 0);
  return a;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat m(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (int p = 0; p < b.rows(); ++p)
        for (int q = 0; q < b.cols(); ++q) m(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return m;
}

// ---------------------------------------------------------------------------
// LU factorization with partial pivoting.
// ---------------------------------------------------------------------------

template <class T>
struct LuFactors {
  BasicMat<T> lu;          // packed L (unit diagonal) and U
  std::vector<int> pivot;  // row permutation
  int permutation_sign = 1;
  double min_pivot = 0.0;  // smallest |U_ii|
  double max_pivot = 0.0;
};

template <class T>
LuFactors<T> lu_factor(BasicMat<T> a) {
  assert(a.rows() == a.cols());
  const int n = a.rows();
  LuFactors<T> f;
  f.pivot.resize(n);
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = detail::abs_of(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double m = detail::abs_of(a(i, k));
      if (m > best) {
        best = m;
        p = i;
      }
    }
    f.pivot[k] = p;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      f.permutation_sign = -f.permutation_sign;
    }
    const T piv = a(k, k);
    const double pm = detail::abs_of(piv);
    if (k == 0) {
      f.min_pivot = f.max_pivot = pm;
    } else {
      f.min_pivot = std::min(f.min_pivot, pm);
      f.max_pivot = std::max(f.max_pivot, pm);
    }
    if (pm == 0.0) continue;  // leaves an exactly singular U; callers decide
    for (int i = k + 1; i < n; ++i) {
      const T m = a(i, k) / piv;
      a(i, k) = m;
      if (m == T{}) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

template <class T>
bool lu_is_singular(const LuFactors<T>& f, double tol) {
  return f.min_pivot <= tol * std::max(f.max_pivot, 1e-300);
}

// Solves using an existing factorization. min_pivot_floor > 0 replaces tiny
// pivots, which is the standard inverse-iteration safeguard.
template <class T>
BasicMat<T> lu_solve(const LuFactors<T>& f, BasicMat<T> b, double min_pivot_floor = 0.0) {
  const int n = f.lu.rows();
  assert(b.rows() == n);
  for (int k = 0; k < n; ++k)
    if (f.pivot[k] != k)
      for (int j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(f.pivot[k], j));
  for (int k = 0; k < n; ++k)
    for (int i = k + 1; i < n; ++i) {
      const T m = f.lu(i, k);
      if (m == T{}) continue;
      for (int j = 0; j < b.cols(); ++j) b(i, j) -= m * b(k, j);
    }
  for (int i = n - 1; i >= 0; --i) {
    T d = f.lu(i, i);
    if (min_pivot_floor > 0.0 && detail::abs_of(d) < min_pivot_floor) d = T{min_pivot_floor};
    for (int j = 0; j < b.cols(); ++j) {
      T s = b(i, j);
      for (int k = i + 1; k < n; ++k) s -= f.lu(i, k) * b(k, j);
      b(i, j) = s / d;
    }
  }
  return b;
}

template <class T>
BasicMat<T> solve(const BasicMat<T>& a, const BasicMat<T>& b, double tol = 1e-13) {
  auto f = lu_factor(a);
  if (lu_is_singular(f, tol)) throw SingularMatrix("solve: matrix is singular to working precision");
  return lu_solve(f, b);
}

inline double determinant(const Mat& a) {
  auto f = lu_factor(a);
  double d = f.permutation_sign;
  for (int i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
  return d;
}

inline Mat inverse(const Mat& a, double tol = 1e-13) {
  return solve(a, Mat::identity(a.rows()), tol);
}

// ---------------------------------------------------------------------------
// Orthonormalization (modified Gram-Schmidt, two passes).
// ---------------------------------------------------------------------------

template <class T>
T column_dot(const BasicMat<T>& a, int ja, const BasicMat<T>& b, int jb) {
  assert(a.rows() == b.rows());
  T s{};
  for (int i = 0; i < a.rows(); ++i) s += detail::conj_of(a(i, ja)) * b(i, jb);
  return s;
}

template <class T>
double column_norm(const BasicMat<T>& a, int j) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    const double m = detail::abs_of(a(i, j));
    s += m * m;
  }
  return std::sqrt(s);
}

// Returns Q with orthonormal columns spanning the columns of b, in an order
// whose change of basis from b has positive determinant (upper triangular
// with positive diagonal), so the orientation of the span is preserved.
template <class T>
BasicMat<T> orthonormalize(const BasicMat<T>& b, double tol = kDefaultTol) {
  BasicMat<T> q = b;
  const int n = q.cols();
  double scale = 0.0;
  for (int j = 0; j < n; ++j) scale = std::max(scale, column_norm(b, j));
  if (scale == 0.0) throw RankDeficient("orthonormalize: zero input");
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) {
        const T c = column_dot(q, i, q, j);
        for (int r = 0; r < q.rows(); ++r) q(r, j) -= c * q(r, i);
      }
    const double nrm = column_norm(q, j);
    if (nrm <= tol * scale)
      throw RankDeficient("orthonormalize: column " + std::to_string(j) + " is dependent at tolerance");
    for (int r = 0; r < q.rows(); ++r) q(r, j) = q(r, j) * T{1.0 / nrm};
  }
  return q;
}

// Orthonormal basis of the orthogonal complement of span(q) (q orthonormal).
// Greedy: at each step append the projected coordinate axis with the largest
// residual, which always exceeds sqrt(remaining/n) in exact arithmetic.
inline Mat orthonormal_complement(const Mat& q) {
  const int n = q.rows();
  const int k = q.cols();
  Mat out(n, n - k);
  Mat basis = q;  // grows as complement vectors are appended
  for (int found = 0; found < n - k; ++found) {
    Mat best_vec;
    double best_norm = 0.0;
    for (int e = 0; e < n; ++e) {
      Mat v(n, 1);
      v(e, 0) = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < basis.cols(); ++j) {
          const double c = column_dot(basis, j, v, 0);
          for (int r = 0; r < n; ++r) v(r, 0) -= c * basis(r, j);
        }
      const double nrm = column_norm(v, 0);
      if (nrm > best_norm) {
        best_norm = nrm;
        best_vec = v;
      }
    }
    if (best_norm < 1e-6) throw Error("orthonormal_complement: failed to complete basis");
    best_vec *= 1.0 / best_norm;
    out.set_col(found, best_vec);
    basis = hcat(basis, best_vec);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Singular value decomposition (one-sided Jacobi). a = u diag(sigma) v^T with
// sigma sorted descending. Chosen for its simplicity and high relative
// accuracy at the small sizes used here.
// ---------------------------------------------------------------------------

struct Svd {
  Mat u;                      // m x n (thin)
  std::vector<double> sigma;  // length n, descending
  Mat v;                      // n x n
};

namespace detail {

inline Svd svd_tall(const Mat& a) {
  const int m = a.rows();
  const int n = a.cols();
  Mat w = a;
  Mat v = Mat::identity(n);
  const double eps = 1e-15;
  bool rotated = true;
  for (int sweep = 0; sweep < 60 && rotated; ++sweep) {
    rotated = false;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int i = 0; i < m; ++i) {
          alpha += w(i, p) * w(i, p);
          beta += w(i, q) * w(i, q);
          gamma += w(i, p) * w(i, q);
        }
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < m; ++i) {
          const double wp = w(i, p);
          w(i, p) = c * wp - s * w(i, q);
          w(i, q) = s * wp + c * w(i, q);
        }
        for (int i = 0; i < n; ++i) {
          const double vp = v(i, p);
          v(i, p) = c * vp - s * v(i, q);
          v(i, q) = s * vp + c * v(i, q);
        }
      }
  }
  Svd out;
  out.sigma.resize(n);
  std::vector<int> order(n);
  for (int j = 0; j < n; ++j) {
    out.sigma[j] = column_norm(w, j);
    order[j] = j;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return out.sigma[x] > out.sigma[y]; });
  Svd sorted;
  sorted.u = Mat(m, n);
  sorted.v = Mat(n, n);
  sorted.sigma.resize(n);
  for (int j = 0; j < n; ++j) {
    const int src = order[j];
    sorted.sigma[j] = out.sigma[src];
    for (int i = 0; i < n; ++i) sorted.v(i, j) = v(i, src);
    if (sorted.sigma[j] > 0.0) {
      for (int i = 0; i < m; ++i) sorted.u(i, j) = w(i, src) / sorted.sigma[j];
    }
  }
  // Columns of u for zero singular values are left as zero; callers that need
  // a full orthonormal u (none currently) must complete it themselves.
  return sorted;
}

}  // namespace detail

inline Svd svd(const Mat& a) {
  if (a.rows() >= a.cols()) return detail::svd_tall(a);
  Svd t = detail::svd_tall(a.transposed());
  Svd out;
  out.u = std::move(t.v);
  out.v = std::move(t.u);
  out.sigma = std::move(t.sigma);
  // Transposed problem is wide: sigma has a.rows() entries, matching u/v.
  return out;
}

inline double smallest_singular_value(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const Svd s = svd(a);
  return s.sigma.back();
}

// Orthonormal basis of the (right) nullspace at relative tolerance tol.
// Singular values in (tol, 10 tol) times sigma_max leave the rank decision
// ambiguous; that is reported through *ambiguous rather than resolved
// silently. scale_floor supplies the ambient scale for inputs that may be
// tiny overall (an operator that vanishes identically has full nullspace).
inline Mat nullspace(const Mat& a, double tol, bool* ambiguous = nullptr,
                     double scale_floor = 0.0) {
  if (ambiguous) *ambiguous = false;
  const Svd s = svd(a);
  const int n = a.cols();
  const double smax = std::max(s.sigma.empty() ? 0.0 : s.sigma.front(), scale_floor);
  if (smax == 0.0) return Mat::identity(n);
  const double cut = tol * smax;
  int null_dim = 0;
  for (int j = 0; j < n; ++j) {
    if (s.sigma[j] <= cut) ++null_dim;
    if (ambiguous && s.sigma[j] > cut && s.sigma[j] <= 10.0 * cut) *ambiguous = true;
  }
  Mat out(n, null_dim);
  for (int j = 0; j < null_dim; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = s.v(i, n - null_dim + j);
  return out;
}

// The `dim` right singular vectors with smallest singular values, plus the
// largest of those singular values. Used where the nullspace dimension is
// known a priori and the caller verifies residuals itself.
inline std::pair<Mat, double> smallest_singular_subspace(const Mat& a, int dim) {
  const Svd s = svd(a);
  const int n = a.cols();
  assert(dim <= n);
  Mat out(n, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = s.v(i, n - dim + j);
  const double worst = dim == 0 ? 0.0 : s.sigma[n - dim];
  return {out, worst};
}

}  // namespace jgrass

#endif  // JGRASS_MATRIX_HPP
