#ifndef JGRASS_COUNTS_HPP
#define JGRASS_COUNTS_HPP

#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jgrass/errors.hpp"

namespace jgrass {

// sigma(k, n): the generic number of common complex 2k-planes of two
// same-oriented complex structures on R^{2n}. Zero when k is odd and n even,
// otherwise binom(floor(n/2), floor(k/2)); zero outside 0 <= k <= n.
inline std::int64_t sigma(int k, int n) {
  if (k < 0 || k > n) return 0;
  if (n > 60) throw Error("sigma: n exceeds the supported range (<= 60)");
  if ((k % 2 == 1) && (n % 2 == 0)) return 0;
  const int top = n / 2;
  int bot = k / 2;
  if (bot > top - bot) bot = top - bot;
  std::int64_t result = 1;
  for (int i = 1; i <= bot; ++i) result = result * (top - bot + i) / i;
  return result;
}

// The same numbers from the two-term recursion
//   s(k, n) = (-1)^k s(k, n-1) + s(k-1, n-1),  s(0, n) = 1,
// evaluated iteratively with a row buffer. Agrees with sigma on the whole
// range (exercised exhaustively by the tests).
inline std::int64_t s_recursive(int k, int n) {
  if (k < 0 || k > n) return 0;
  if (n > 60) throw Error("s_recursive: n exceeds the supported range (<= 60)");
  std::vector<std::int64_t> row{1};  // s(., 0)
  for (int m = 1; m <= n; ++m) {
    std::vector<std::int64_t> next(m + 1, 0);
    for (int j = 0; j <= m; ++j) {
      const std::int64_t same = j < static_cast<int>(row.size()) ? row[j] : 0;
      const std::int64_t down = j - 1 >= 0 ? row[j - 1] : 0;
      next[j] = (j % 2 == 0 ? same : -same) + down;
    }
    next[0] = 1;
    row = std::move(next);
  }
  return row[k];
}

// Expected plane counts per orientation class for a generic pair:
// same-oriented pairs meet on sigma(k, n) planes, all same-oriented; pairs of
// opposite orientation split as (sigma(k, n-1), sigma(k-1, n-1)).
inline std::pair<std::int64_t, std::int64_t> expected_counts(bool same_orientation_pair, int n,
                                                             int k) {
  if (same_orientation_pair) return {sigma(k, n), 0};
  return {sigma(k, n - 1), sigma(k - 1, n - 1)};
}

// Expected signed counts under the chart conventions used by the local sign
// computation (tangent spaces oriented by their own complex structures, the
// tensor-basis chart orientation). For pairs of opposite ambient orientation
// with n even, each same-class point carries the sign (-1)^k, so the signed
// same-class total flips for odd k; every other case is a sum of +1s.
inline std::pair<std::int64_t, std::int64_t> expected_signed_counts(bool same_orientation_pair,
                                                                    int n, int k) {
  auto [same, opposite] = expected_counts(same_orientation_pair, n, k);
  if (!same_orientation_pair && n % 2 == 0 && k % 2 == 1) same = -same;
  return {same, opposite};
}

struct CountTable {
  int kmax = 0;
  int nmax = 0;
  // values[k][n] = sigma(k, n) for k <= n, meaningless (0) below the diagonal.
  std::vector<std::vector<std::int64_t>> values;

  std::string render_text() const;
};

inline CountTable sigma_table(int kmax, int nmax) {
  if (kmax > nmax) throw Error("sigma_table: kmax must not exceed nmax");
  CountTable t;
  t.kmax = kmax;
  t.nmax = nmax;
  t.values.assign(kmax + 1, std::vector<std::int64_t>(nmax + 1, 0));
  for (int k = 0; k <= kmax; ++k)
    for (int n = k; n <= nmax; ++n) t.values[k][n] = sigma(k, n);
  return t;
}

inline std::string CountTable::render_text() const {
  std::vector<std::vector<std::string>> cells(kmax + 2, std::vector<std::string>(nmax + 2));
  cells[0][0] = "k\\n";
  for (int n = 0; n <= nmax; ++n) cells[0][n + 1] = std::to_string(n);
  for (int k = 0; k <= kmax; ++k) {
    cells[k + 1][0] = std::to_string(k);
    for (int n = 0; n <= nmax; ++n) cells[k + 1][n + 1] = n < k ? "" : std::to_string(values[k][n]);
  }
  std::vector<std::size_t> width(nmax + 2, 0);
  for (const auto& row : cells)
    for (int j = 0; j < static_cast<int>(row.size()); ++j) width[j] = std::max(width[j], row[j].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    for (int j = 0; j < static_cast<int>(row.size()); ++j) {
      if (j) os << (j == 1 ? " |" : " ");
      os << std::string(width[j] - row[j].size(), ' ') << row[j];
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace jgrass

#endif  // JGRASS_COUNTS_HPP
