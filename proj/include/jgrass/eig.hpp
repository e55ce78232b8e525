#ifndef JGRASS_EIG_HPP
#define JGRASS_EIG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "jgrass/errors.hpp"
#include "jgrass/matrix.hpp"
#include "jgrass/rng.hpp"

namespace jgrass {

namespace detail {

// Householder reduction to upper Hessenberg form, in place.
inline void to_hessenberg(Mat& a) {
  const int n = a.rows();
  for (int k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm += a(i, k) * a(i, k);
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const double alpha = a(k + 1, k) >= 0.0 ? -xnorm : xnorm;
    std::vector<double> v(n, 0.0);
    v[k + 1] = a(k + 1, k) - alpha;
    for (int i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    // A <- (I - 2vv^T/|v|^2) A
    for (int j = k; j < n; ++j) {
      double s = 0.0;
      for (int i = k + 1; i < n; ++i) s += v[i] * a(i, j);
      s *= 2.0 / vnorm2;
      for (int i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
    }
    // A <- A (I - 2vv^T/|v|^2)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= 2.0 / vnorm2;
      for (int j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
    }
    a(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix; returns the
// eigenvalues. Classic hqr scheme with exceptional shifts every ten
// iterations and a hard iteration cap per eigenvalue.
inline std::vector<std::complex<double>> hessenberg_eigenvalues(Mat& a) {
  const int n = a.rows();
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<std::complex<double>> wri(n);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  if (anorm == 0.0) return wri;  // zero matrix
  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= eps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wri[nn--] = x + t;
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + (p >= 0.0 ? z : -z);
            wri[nn - 1] = wri[nn] = x + z;
            if (z != 0.0) wri[nn] = x - w / z;
          } else {
            wri[nn] = std::complex<double>(x + p, -z);
            wri[nn - 1] = std::conj(wri[nn]);
          }
          nn -= 2;
        } else {
          if (its == 60) throw NoConvergence("eigenvalues: QR iteration exceeded its budget");
          if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (m = nn - 2; m >= l; --m) {
            z = a(m, m);
            const double rr = x - z;
            const double ss = y - z;
            p = (rr * ss - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - rr - ss;
            r = a(m + 2, m + 1);
            const double sc = std::abs(p) + std::abs(q) + std::abs(r);
            p /= sc;
            q /= sc;
            r /= sc;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v =
                std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a(i + 2, i) = 0.0;
            if (i != m) a(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = (k + 1 != nn) ? a(k + 2, k - 1) : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = std::sqrt(p * p + q * q + r * r);
            if (p < 0.0) s = -s;
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              double pp = a(k, j) + q * a(k + 1, j);
              if (k + 1 != nn) {
                pp += r * a(k + 2, j);
                a(k + 2, j) -= pp * z;
              }
              a(k + 1, j) -= pp * y;
              a(k, j) -= pp * x;
            }
            const int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              double pp = x * a(i, k) + y * a(i, k + 1);
              if (k + 1 != nn) {
                pp += z * a(i, k + 2);
                a(i, k + 2) -= pp * r;
              }
              a(i, k + 1) -= pp * q;
              a(i, k) -= pp;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return wri;
}

}  // namespace detail

// All eigenvalues of a real square matrix, conjugate-closed by construction.
inline std::vector<std::complex<double>> eigenvalues(const Mat& m) {
  Mat a = m;
  detail::to_hessenberg(a);
  return detail::hessenberg_eigenvalues(a);
}

struct Eigenpair {
  std::complex<double> value;
  CMat vector;  // unit norm, n x 1
};

// Full complex eigendecomposition via Schur eigenvalues plus (subspace)
// inverse iteration. Eigenvalues coinciding within a small relative distance
// are treated as one cluster so repeated eigenvalues get an orthonormal set
// of eigenvectors. Defective input cannot satisfy the residual bound and is
// reported as NoConvergence.
inline std::vector<Eigenpair> eig_complex(const Mat& m, double tol = kDefaultTol) {
  const int n = m.rows();
  if (n == 0) return {};
  const double scale = std::max(m.frobenius_norm(), 1e-300);
  std::vector<std::complex<double>> vals = eigenvalues(m);
  std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  CMat mc(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mc(i, j) = m(i, j);

  std::vector<Eigenpair> out;
  const double group_tol = 1e-8 * scale;
  Rng start_rng(0x5eedu + static_cast<std::uint64_t>(n));
  int i = 0;
  while (i < n) {
    int j = i + 1;
    while (j < n && std::abs(vals[j] - vals[i]) <= group_tol) ++j;
    const int mult = j - i;
    std::complex<double> lambda{0.0, 0.0};
    for (int k = i; k < j; ++k) lambda += vals[k];
    lambda /= static_cast<double>(mult);

    CMat shifted = mc;
    for (int d = 0; d < n; ++d) shifted(d, d) -= lambda;
    auto f = lu_factor(shifted);
    const double pivot_floor = 1e-14 * scale + 1e-300;

    CMat basis(n, mult);
    for (int c = 0; c < mult; ++c)
      for (int r = 0; r < n; ++r)
        basis(r, c) = std::complex<double>(start_rng.gaussian(), start_rng.gaussian());
    basis = orthonormalize(basis, 1e-13);

    bool converged = false;
    for (int iter = 0; iter < 12 && !converged; ++iter) {
      basis = lu_solve(f, basis, pivot_floor);
      basis = orthonormalize(basis, 1e-13);
      converged = true;
      for (int c = 0; c < mult && converged; ++c) {
        const CMat v = basis.col(c);
        const CMat mv = mc * v;
        const std::complex<double> rayleigh = column_dot(v, 0, mv, 0);
        double resid = 0.0;
        for (int r = 0; r < n; ++r) resid += std::norm(mv(r, 0) - rayleigh * v(r, 0));
        if (std::sqrt(resid) > tol * scale) converged = false;
      }
    }
    if (!converged)
      throw NoConvergence("eig_complex: inverse iteration could not meet the residual bound");
    for (int c = 0; c < mult; ++c) {
      Eigenpair p;
      p.vector = basis.col(c);
      const CMat mv = mc * p.vector;
      p.value = column_dot(p.vector, 0, mv, 0);
      out.push_back(std::move(p));
    }
    i = j;
  }
  return out;
}

// Unit eigenvector for an approximately known simple eigenvalue, by inverse
// iteration on the shifted matrix.
inline CMat eigenvector_for(const Mat& m, std::complex<double> lambda, double resid_tol = 1e-10) {
  const int n = m.rows();
  const double scale = std::max(m.frobenius_norm(), 1e-300);
  CMat shifted(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) shifted(i, j) = m(i, j);
  for (int d = 0; d < n; ++d) shifted(d, d) -= lambda;
  const auto f = lu_factor(shifted);
  const double pivot_floor = 1e-14 * scale + 1e-300;

  CMat mc(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mc(i, j) = m(i, j);

  Rng start_rng(0xe16e2u + static_cast<std::uint64_t>(n));
  CMat v(n, 1);
  for (int r = 0; r < n; ++r) v(r, 0) = std::complex<double>(start_rng.gaussian(), start_rng.gaussian());
  v = orthonormalize(v, 1e-13);
  for (int iter = 0; iter < 16; ++iter) {
    v = orthonormalize(lu_solve(f, v, pivot_floor), 1e-13);
    const CMat mv = mc * v;
    const std::complex<double> rayleigh = column_dot(v, 0, mv, 0);
    double resid = 0.0;
    for (int r = 0; r < n; ++r) resid += std::norm(mv(r, 0) - rayleigh * v(r, 0));
    if (std::sqrt(resid) <= resid_tol * scale) return v;
  }
  throw NoConvergence("eigenvector_for: inverse iteration did not meet the residual bound");
}

}  // namespace jgrass

#endif  // JGRASS_EIG_HPP
