#pragma once

// Linear algebra over Z/N: Smith normal form by unimodular integer row and
// column operations reduced mod N.
//
// Pivots are chosen by smallest ideal gcd(v, N), ties broken in row-major
// order. Before moving on, the pivot is forced to divide (in the ideal
// sense) every remaining entry, so the diagonal ideals form a divisibility
// chain and the resulting cyclic orders are already invariant factors.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "fmlab/error.hpp"

namespace fmlab {

class ZnMatrix {
 public:
  ZnMatrix() = default;
  ZnMatrix(int rows, int cols, int modulus)
      : rows_(rows), cols_(cols), modulus_(modulus), data_(static_cast<std::size_t>(rows) * cols, 0) {}

  static ZnMatrix identity(int n, int modulus) {
    ZnMatrix m(n, n, modulus);
    for (int i = 0; i < n; ++i) m(i, i) = 1 % modulus;
    return m;
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int modulus() const noexcept { return modulus_; }

  std::int64_t& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  std::int64_t operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  void add(int i, int j, std::int64_t v) {
    auto& e = (*this)(i, j);
    e = reduce(e + v);
  }

  std::int64_t reduce(std::int64_t v) const {
    const std::int64_t r = v % modulus_;
    return r < 0 ? r + modulus_ : r;
  }

  std::vector<std::int64_t> apply(const std::vector<std::int64_t>& x) const {
    std::vector<std::int64_t> y(static_cast<std::size_t>(rows_), 0);
    for (int i = 0; i < rows_; ++i) {
      std::int64_t acc = 0;
      for (int j = 0; j < cols_; ++j) acc = reduce(acc + (*this)(i, j) * x[static_cast<std::size_t>(j)]);
      y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
  }

  void swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  /// row a <- x row a + y row b, row b <- u row a + v row b (simultaneously).
  void mix_rows(int a, int b, std::int64_t x, std::int64_t y, std::int64_t u, std::int64_t v) {
    for (int j = 0; j < cols_; ++j) {
      const std::int64_t ra = (*this)(a, j), rb = (*this)(b, j);
      (*this)(a, j) = reduce(x * ra + y * rb);
      (*this)(b, j) = reduce(u * ra + v * rb);
    }
  }
  void mix_cols(int a, int b, std::int64_t x, std::int64_t y, std::int64_t u, std::int64_t v) {
    for (int i = 0; i < rows_; ++i) {
      const std::int64_t ca = (*this)(i, a), cb = (*this)(i, b);
      (*this)(i, a) = reduce(x * ca + y * cb);
      (*this)(i, b) = reduce(u * ca + v * cb);
    }
  }
  /// row b <- row b - q row a
  void subtract_row(int b, int a, std::int64_t q) {
    if (q == 0) return;
    for (int j = 0; j < cols_; ++j)
      if ((*this)(a, j) != 0) (*this)(b, j) = reduce((*this)(b, j) - q * (*this)(a, j));
  }
  /// col b <- col b - q col a
  void subtract_col(int b, int a, std::int64_t q) {
    if (q == 0) return;
    for (int i = 0; i < rows_; ++i)
      if ((*this)(i, a) != 0) (*this)(i, b) = reduce((*this)(i, b) - q * (*this)(i, a));
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  int modulus_ = 1;
  std::vector<std::int64_t> data_;
};

namespace detail {

struct ExtGcd {
  std::int64_t g, x, y;  // g = x a + y b
};

inline ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  return {old_r, old_s, old_t};
}

}  // namespace detail

struct SmithForm {
  // gcd(d_i, N) for i < min(rows, cols), with a zero entry recorded as N.
  // Z_N / (d_i) and the annihilator of d_i both have this order.
  std::vector<std::int64_t> diagonal;
  int rank = 0;                        // number of nonzero diagonal entries
  std::optional<ZnMatrix> left;        // P with P M Q = D
  std::optional<ZnMatrix> right_inverse;  // Q^-1
};

/// Smith normal form of `m` over Z/N. `track_left` records P and
/// `track_right_inverse` records Q^-1 such that P M Q is diagonal.
inline SmithForm smith_form(ZnMatrix m, bool track_left, bool track_right_inverse) {
  const int n_mod = m.modulus();
  const int rows = m.rows();
  const int cols = m.cols();
  SmithForm out;
  if (track_left) out.left = ZnMatrix::identity(rows, n_mod);
  if (track_right_inverse) out.right_inverse = ZnMatrix::identity(cols, n_mod);
  auto ideal = [&](std::int64_t v) { return std::gcd(v, static_cast<std::int64_t>(n_mod)); };

  auto row_mix = [&](int a, int b, std::int64_t x, std::int64_t y, std::int64_t u, std::int64_t v) {
    m.mix_rows(a, b, x, y, u, v);
    if (out.left) out.left->mix_rows(a, b, x, y, u, v);
  };
  auto row_sub = [&](int b, int a, std::int64_t q) {
    m.subtract_row(b, a, q);
    if (out.left) out.left->subtract_row(b, a, q);
  };
  // Column ops C act on Q from the right and on Q^-1 by C^-1 from the left.
  auto col_mix = [&](int a, int b, std::int64_t x, std::int64_t y, std::int64_t u, std::int64_t v) {
    // [col a, col b] <- [x col a + y col b, u col a + v col b]; the 2x2 block
    // has determinant x v - y u = 1, so its inverse is [[v, -u], [-y, x]]
    // acting on the rows of Q^-1 as row a <- v row a - u row b, row b <- -y row a + x row b.
    m.mix_cols(a, b, x, y, u, v);
    if (out.right_inverse) out.right_inverse->mix_rows(a, b, v, -u, -y, x);
  };
  auto col_sub = [&](int b, int a, std::int64_t q) {
    m.subtract_col(b, a, q);
    if (out.right_inverse) out.right_inverse->subtract_row(a, b, -q);
  };

  const int diag_len = std::min(rows, cols);
  int t = 0;
  for (; t < diag_len; ++t) {
    int pr = -1, pc = -1;
    std::int64_t best = 0;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j) {
        const std::int64_t v = m(i, j);
        if (v == 0) continue;
        if (pr < 0 || ideal(v) < best) {
          pr = i;
          pc = j;
          best = ideal(v);
        }
      }
    if (pr < 0) break;
    m.swap_rows(t, pr);
    if (out.left) out.left->swap_rows(t, pr);
    m.swap_cols(t, pc);
    if (out.right_inverse) out.right_inverse->swap_rows(t, pc);

    for (;;) {
      bool changed = false;
      // Clear the pivot column.
      for (int i = t + 1; i < rows; ++i) {
        const std::int64_t b = m(i, t);
        if (b == 0) continue;
        const std::int64_t a = m(t, t);
        const std::int64_t g = ideal(a);
        if (b % g == 0) {
          const auto eg = detail::ext_gcd(a, n_mod);  // x a = g (mod N)
          row_sub(i, t, m.reduce((b / g) * eg.x));
        } else {
          const auto eg = detail::ext_gcd(a, b);
          row_mix(t, i, eg.x, eg.y, -(b / eg.g), a / eg.g);
        }
      }
      // Clear the pivot row.
      for (int j = t + 1; j < cols; ++j) {
        const std::int64_t b = m(t, j);
        if (b == 0) continue;
        const std::int64_t a = m(t, t);
        const std::int64_t g = ideal(a);
        if (b % g == 0) {
          const auto eg = detail::ext_gcd(a, n_mod);
          col_sub(j, t, m.reduce((b / g) * eg.x));
        } else {
          const auto eg = detail::ext_gcd(a, b);
          col_mix(t, j, eg.x, eg.y, -(b / eg.g), a / eg.g);
          changed = true;
        }
      }
      if (changed) continue;
      // Enforce divisibility of the remaining block by the pivot ideal.
      const std::int64_t g = ideal(m(t, t));
      int offender = -1;
      for (int i = t + 1; i < rows && offender < 0; ++i)
        for (int j = t + 1; j < cols; ++j)
          if (m(i, j) % g != 0) {
            offender = i;
            break;
          }
      if (offender < 0) break;
      row_mix(t, offender, 1, 1, 0, 1);
    }
  }
  out.rank = t;
  out.diagonal.assign(static_cast<std::size_t>(diag_len), 0);
  for (int i = 0; i < diag_len; ++i) out.diagonal[static_cast<std::size_t>(i)] = i < t ? ideal(m(i, i)) : n_mod;
  return out;
}

}  // namespace fmlab
