#include <doctest.h>

#include <vector>

#include "jgrass/matrix.hpp"
#include "jgrass/structures.hpp"
#include "jgrass/sylvester.hpp"

using namespace jgrass;

namespace {
const Mat kRot = Mat::from_rows({{0.0, -1.0}, {1.0, 0.0}});
}

TEST_CASE("complex-linear maps C -> C form a two-dimensional kernel") {
  const auto basis = sylvester_kernel(kRot, kRot);
  REQUIRE(basis.size() == 2);
  for (const auto& a : basis) CHECK((kRot * a - a * kRot).max_abs() <= 1e-12);
}

TEST_CASE("kernel dimension 2k(n-k) for the standard structures") {
  // a = J0 on R^2, d = J0 on R^4 (k = 1, n = 3): Hom_C(C, C^2) has real dim 4.
  const Mat a = standard_structure(1).J;
  const Mat d = standard_structure(2).J;
  const auto basis = sylvester_kernel(a, d);
  CHECK(basis.size() == 4);
  for (const auto& m : basis) CHECK((d * m - m * a).max_abs() <= 1e-12);
  // Frobenius orthonormality of the returned basis.
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      double dot = 0.0;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 2; ++c) dot += basis[i](r, c) * basis[j](r, c);
      CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
    }
}

TEST_CASE("conjugate-linear kernel is transverse to the complex-linear one") {
  const auto holo = sylvester_kernel(kRot, kRot);
  const auto anti = sylvester_kernel(kRot, -kRot);
  REQUIRE(holo.size() == 2);
  REQUIRE(anti.size() == 2);
  for (const auto& a : anti) CHECK(((-kRot) * a - a * kRot).max_abs() <= 1e-12);
  // The two kernels intersect only at zero: their stacked vecs have full rank.
  Mat stacked(4, 4);
  stacked.set_col(0, vec_cm(holo[0]));
  stacked.set_col(1, vec_cm(holo[1]));
  stacked.set_col(2, vec_cm(anti[0]));
  stacked.set_col(3, vec_cm(anti[1]));
  CHECK(smallest_singular_value(stacked) > 0.5);
}

TEST_CASE("kernel nullity matches the kronecker-form nullity") {
  // Independent count: the nullity of the vectorized operator computed
  // directly, on a structure pair with mixed blocks.
  Mat a(4, 4);
  a.set_block(0, 0, kRot);
  a.set_block(2, 2, -kRot);
  const Mat d = standard_structure(2).J;
  const Mat op = sylvester_operator(a, d);
  const int direct = nullspace(op, 1e-10).cols();
  CHECK(static_cast<int>(sylvester_kernel(a, d).size()) == direct);
}
