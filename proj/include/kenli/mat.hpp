#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace kenli {

// Row-major dense matrix of doubles. Everything trains in double so the
// finite-difference gradient checks have headroom.
struct Mat {
  std::size_t r = 0, c = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : r(rows), c(cols), a(rows * cols, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * c + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * c + j]; }

  std::size_t size() const { return a.size(); }
  bool empty() const { return a.empty(); }

  void zero() { a.assign(a.size(), 0.0); }

  Mat& operator+=(const Mat& o) {
    assert(r == o.r && c == o.c);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    assert(r == o.r && c == o.c);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
  }
  Mat& operator*=(double s) {
    for (double& v : a) v *= s;
    return *this;
  }

  Mat row(std::size_t i) const {
    Mat out(1, c);
    for (std::size_t j = 0; j < c; ++j) out(0, j) = (*this)(i, j);
    return out;
  }

  void set_row(std::size_t i, const Mat& v) {
    assert(v.r == 1 && v.c == c);
    for (std::size_t j = 0; j < c; ++j) (*this)(i, j) = v(0, j);
  }
};

inline Mat operator+(Mat x, const Mat& y) { x += y; return x; }
inline Mat operator-(Mat x, const Mat& y) { x -= y; return x; }
inline Mat operator*(Mat x, double s) { x *= s; return x; }

// C = A * B
inline Mat mul(const Mat& A, const Mat& B) {
  assert(A.c == B.r);
  Mat C(A.r, B.c);
  for (std::size_t i = 0; i < A.r; ++i)
    for (std::size_t k = 0; k < A.c; ++k) {
      double aik = A(i, k);
      if (aik == 0.0) continue;
      const double* brow = &B.a[k * B.c];
      double* crow = &C.a[i * C.c];
      for (std::size_t j = 0; j < B.c; ++j) crow[j] += aik * brow[j];
    }
  return C;
}

// C = A^T * B
inline Mat mul_tn(const Mat& A, const Mat& B) {
  assert(A.r == B.r);
  Mat C(A.c, B.c);
  for (std::size_t k = 0; k < A.r; ++k)
    for (std::size_t i = 0; i < A.c; ++i) {
      double aki = A(k, i);
      if (aki == 0.0) continue;
      const double* brow = &B.a[k * B.c];
      double* crow = &C.a[i * C.c];
      for (std::size_t j = 0; j < B.c; ++j) crow[j] += aki * brow[j];
    }
  return C;
}

// C = A * B^T
inline Mat mul_nt(const Mat& A, const Mat& B) {
  assert(A.c == B.c);
  Mat C(A.r, B.r);
  for (std::size_t i = 0; i < A.r; ++i)
    for (std::size_t j = 0; j < B.r; ++j) {
      double s = 0.0;
      const double* arow = &A.a[i * A.c];
      const double* brow = &B.a[j * B.c];
      for (std::size_t k = 0; k < A.c; ++k) s += arow[k] * brow[k];
      C(i, j) = s;
    }
  return C;
}

inline Mat transpose(const Mat& A) {
  Mat T(A.c, A.r);
  for (std::size_t i = 0; i < A.r; ++i)
    for (std::size_t j = 0; j < A.c; ++j) T(j, i) = A(i, j);
  return T;
}

inline Mat hadamard(const Mat& A, const Mat& B) {
  assert(A.r == B.r && A.c == B.c);
  Mat C(A.r, A.c);
  for (std::size_t i = 0; i < A.a.size(); ++i) C.a[i] = A.a[i] * B.a[i];
  return C;
}

// Column slice [c0, c1)
inline Mat cols(const Mat& A, std::size_t c0, std::size_t c1) {
  assert(c0 <= c1 && c1 <= A.c);
  Mat C(A.r, c1 - c0);
  for (std::size_t i = 0; i < A.r; ++i)
    for (std::size_t j = c0; j < c1; ++j) C(i, j - c0) = A(i, j);
  return C;
}

// Adds B into A's column slice starting at c0.
inline void add_into_cols(Mat& A, std::size_t c0, const Mat& B) {
  assert(B.r == A.r && c0 + B.c <= A.c);
  for (std::size_t i = 0; i < B.r; ++i)
    for (std::size_t j = 0; j < B.c; ++j) A(i, c0 + j) += B(i, j);
}

// Row slice [r0, r1)
inline Mat rows(const Mat& A, std::size_t r0, std::size_t r1) {
  assert(r0 <= r1 && r1 <= A.r);
  Mat C(r1 - r0, A.c);
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = 0; j < A.c; ++j) C(i - r0, j) = A(i, j);
  return C;
}

// Stacks A on top of B.
inline Mat vcat(const Mat& A, const Mat& B) {
  if (A.empty() && A.r == 0) {
    if (B.empty() && B.r == 0) return Mat();
  }
  std::size_t c = A.r > 0 ? A.c : B.c;
  assert(A.r == 0 || B.r == 0 || A.c == B.c);
  Mat C(A.r + B.r, c);
  for (std::size_t i = 0; i < A.r; ++i)
    for (std::size_t j = 0; j < A.c; ++j) C(i, j) = A(i, j);
  for (std::size_t i = 0; i < B.r; ++i)
    for (std::size_t j = 0; j < B.c; ++j) C(A.r + i, j) = B(i, j);
  return C;
}

inline double frobenius_norm(const Mat& A) {
  double s = 0.0;
  for (double v : A.a) s += v * v;
  return std::sqrt(s);
}

inline double max_abs(const Mat& A) {
  double m = 0.0;
  for (double v : A.a) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace kenli
