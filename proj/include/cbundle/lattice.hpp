#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>

namespace cbundle {

// Exact integer lattice routines on dense Eigen matrices.  Arithmetic is
// overflow-checked; a std::overflow_error means the instance outgrew the
// scalar, never a silently wrong answer.

namespace lattice_detail {

template <typename Int>
Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("lattice arithmetic overflow");
  return r;
}

template <typename Int>
Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("lattice arithmetic overflow");
  return r;
}

// row_k -= q * row_r
template <typename Int>
void axpy_row(Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>& m, Eigen::Index k,
              Eigen::Index r, Int q) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    m(k, j) = checked_sub(m(k, j), checked_mul(q, m(r, j)));
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace lattice_detail

template <typename Int>
struct HnfResult {
  Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> h;  // row Hermite form, zero rows last
  Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> u;  // unimodular, u * a = h
  int rank = 0;
};

// Row-style Hermite normal form with the transforming unimodular matrix.
// Pivots are positive, entries above a pivot are reduced into [0, pivot).
template <typename Int>
HnfResult<Int> hermite_normal_form(Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> a) {
  using Mat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
  using namespace lattice_detail;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  Mat u = Mat::Identity(rows, rows);
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    // gcd-reduce column c over rows >= r
    for (;;) {
      Eigen::Index piv = -1;
      for (Eigen::Index k = r; k < rows; ++k) {
        if (a(k, c) == 0) continue;
        if (piv < 0 || std::abs(a(k, c)) < std::abs(a(piv, c))) piv = k;
      }
      if (piv < 0) break;
      if (piv != r) {
        a.row(piv).swap(a.row(r));
        u.row(piv).swap(u.row(r));
      }
      bool again = false;
      for (Eigen::Index k = r + 1; k < rows; ++k) {
        if (a(k, c) == 0) continue;
        Int q = a(k, c) / a(r, c);
        axpy_row(a, k, r, q);
        axpy_row(u, k, r, q);
        if (a(k, c) != 0) again = true;
      }
      if (!again) break;
    }
    if (a(r, c) == 0) continue;
    if (a(r, c) < 0) {
      a.row(r) = -a.row(r);
      u.row(r) = -u.row(r);
    }
    for (Eigen::Index k = 0; k < r; ++k) {
      Int q = static_cast<Int>(floor_div(a(k, c), a(r, c)));
      if (q != 0) {
        axpy_row(a, k, r, q);
        axpy_row(u, k, r, q);
      }
    }
    ++r;
  }
  HnfResult<Int> out;
  out.h = std::move(a);
  out.u = std::move(u);
  out.rank = static_cast<int>(r);
  return out;
}

// Canonical basis (rows) of {x in Z^rows : x^T a = 0}.  The result is the
// saturated kernel lattice, HNF-reduced so that equal lattices give equal
// matrices.
template <typename Int>
Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> left_kernel(
    const Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>& a) {
  auto res = hermite_normal_form(a);
  Eigen::Index null_dim = a.rows() - res.rank;
  Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> basis =
      res.u.bottomRows(null_dim);
  if (null_dim == 0) return basis;
  return hermite_normal_form(std::move(basis)).h.topRows(null_dim);
}

}  // namespace cbundle
