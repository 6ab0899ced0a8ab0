// Arbitrary-precision integer matrices: products, powers, Bareiss determinant
// and Smith normal form with unimodular transforms.
#pragma once

#include "anosov/core.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <utility>
#include <vector>

namespace anosov {

using BigInt = boost::multiprecision::cpp_int;

struct BigMat {
  int rows = 0;
  int cols = 0;
  std::vector<BigInt> a;

  BigMat() = default;
  BigMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r * c)) {}

  static BigMat identity(int n) {
    BigMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static BigMat from(const IMat& m) {
    BigMat b(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < b.rows; ++i)
      for (int j = 0; j < b.cols; ++j) b(i, j) = m(i, j);
    return b;
  }

  BigInt& operator()(int i, int j) { return a[static_cast<std::size_t>(i * cols + j)]; }
  const BigInt& operator()(int i, int j) const { return a[static_cast<std::size_t>(i * cols + j)]; }

  friend BigMat operator*(const BigMat& x, const BigMat& y) {
    BigMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k) {
        if (x(i, k) == 0) continue;
        for (int j = 0; j < y.cols; ++j) z(i, j) += x(i, k) * y(k, j);
      }
    return z;
  }
  friend bool operator==(const BigMat& x, const BigMat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

inline BigMat power(const BigMat& m, int n) {
  BigMat result = BigMat::identity(m.rows);
  BigMat base = m;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

// Fraction-free Gaussian elimination.
inline BigInt bareiss_det(BigMat m) {
  const int n = m.rows;
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      int p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

struct SmithForm {
  BigMat U;                      // unimodular, U * M * V = D
  BigMat V;                      // unimodular
  BigMat Vinv;                   // V^{-1}
  std::vector<BigInt> diagonal;  // d_1 | d_2 | ... , nonnegative
};

inline SmithForm smith_normal_form(const BigMat& m) {
  const int n = m.rows;
  require(m.cols == n, ErrorKind::InvalidArgument, "smith_normal_form expects a square matrix");
  BigMat D = m;
  BigMat U = BigMat::identity(n);
  BigMat V = BigMat::identity(n);
  BigMat Vi = BigMat::identity(n);

  auto row_add = [&](int dst, int src, const BigInt& q) {  // row_dst -= q*row_src
    for (int j = 0; j < n; ++j) {
      D(dst, j) -= q * D(src, j);
      U(dst, j) -= q * U(src, j);
    }
  };
  auto col_add = [&](int dst, int src, const BigInt& q) {  // col_dst -= q*col_src
    for (int i = 0; i < n; ++i) {
      D(i, dst) -= q * D(i, src);
      V(i, dst) -= q * V(i, src);
    }
    for (int j = 0; j < n; ++j) Vi(src, j) += q * Vi(dst, j);
  };
  auto row_swap = [&](int r1, int r2) {
    for (int j = 0; j < n; ++j) {
      std::swap(D(r1, j), D(r2, j));
      std::swap(U(r1, j), U(r2, j));
    }
  };
  auto col_swap = [&](int c1, int c2) {
    for (int i = 0; i < n; ++i) {
      std::swap(D(i, c1), D(i, c2));
      std::swap(V(i, c1), V(i, c2));
    }
    for (int j = 0; j < n; ++j) std::swap(Vi(c1, j), Vi(c2, j));
  };

  for (int t = 0; t < n; ++t) {
    while (true) {
      int pi = -1, pj = -1;
      for (int i = t; i < n; ++i)
        for (int j = t; j < n; ++j)
          if (D(i, j) != 0 && (pi < 0 || abs(D(i, j)) < abs(D(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) break;
      row_swap(t, pi);
      col_swap(t, pj);
      bool clean = true;
      for (int i = t + 1; i < n; ++i) {
        if (D(i, t) == 0) continue;
        row_add(i, t, D(i, t) / D(t, t));
        if (D(i, t) != 0) clean = false;
      }
      for (int j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        col_add(j, t, D(t, j) / D(t, t));
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      int bad = -1;
      for (int i = t + 1; i < n && bad < 0; ++i)
        for (int j = t + 1; j < n; ++j)
          if (D(i, j) % D(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      for (int j = 0; j < n; ++j) {
        D(t, j) += D(bad, j);
        U(t, j) += U(bad, j);
      }
    }
    if (D(t, t) < 0) {
      for (int j = 0; j < n; ++j) {
        D(t, j) = -D(t, j);
        U(t, j) = -U(t, j);
      }
    }
  }
  SmithForm s{U, V, Vi, {}};
  for (int i = 0; i < n; ++i) s.diagonal.push_back(D(i, i));
  return s;
}

inline std::int64_t to_i64(const BigInt& v) {
  require(v <= BigInt(INT64_MAX) && v >= BigInt(INT64_MIN), ErrorKind::Overflow,
          "integer exceeds 64-bit range");
  return static_cast<std::int64_t>(v);
}

// Floor modulus into [0, m).
inline std::int64_t mod_floor(const BigInt& v, std::int64_t m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

inline std::int64_t mod_floor(__int128 v, std::int64_t m) {
  __int128 r = v % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

}  // namespace anosov
