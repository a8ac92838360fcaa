#pragma once

// Dense complex linear algebra for small matrices: adjoints, pivoted solves,
// a Hessenberg + shifted-QR eigensolver with Schur back-substitution, joint
// invariant subspaces for clustered eigenvalues, Gram matrices and null
// spaces. Everything is a pure function on value types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <vector>

#include "cxhyp/core.hpp"

namespace cxhyp {

namespace detail {
inline void require_finite(const Complex& z, const char* where) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(Err::NonFinite, std::string(where) + ": non-finite entry");
}
inline double eps() { return std::numeric_limits<double>::epsilon(); }
}  // namespace detail

class CVector {
public:
  CVector() = default;
  explicit CVector(std::size_t dim) : e_(dim, Complex(0.0, 0.0)) {}
  CVector(std::initializer_list<Complex> init) : e_(init) {
    for (const auto& z : e_) detail::require_finite(z, "CVector");
  }
  static CVector from(std::vector<Complex> entries) {
    CVector v;
    v.e_ = std::move(entries);
    for (const auto& z : v.e_) detail::require_finite(z, "CVector");
    return v;
  }

  std::size_t size() const { return e_.size(); }
  Complex& operator[](std::size_t i) { return e_[i]; }
  const Complex& operator[](std::size_t i) const { return e_[i]; }
  const std::vector<Complex>& entries() const { return e_; }

  CVector& operator+=(const CVector& o) {
    check_dim(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }
  CVector& operator-=(const CVector& o) {
    check_dim(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
  }
  CVector& operator*=(Complex c) {
    for (auto& z : e_) z *= c;
    return *this;
  }
  friend CVector operator+(CVector a, const CVector& b) { return a += b; }
  friend CVector operator-(CVector a, const CVector& b) { return a -= b; }
  friend CVector operator*(Complex c, CVector v) { return v *= c; }
  friend CVector operator*(CVector v, Complex c) { return v *= c; }

  double norm() const {
    double s = 0.0;
    for (const auto& z : e_) s += std::norm(z);
    return std::sqrt(s);
  }

private:
  void check_dim(const CVector& o) const {
    if (e_.size() != o.e_.size())
      throw Error(Err::DimensionMismatch, "CVector: dimension mismatch");
  }
  std::vector<Complex> e_;
};

/// <u,v> = sum u_i conj(v_i): linear in the first argument.
inline Complex dot(const CVector& u, const CVector& v) {
  if (u.size() != v.size()) throw Error(Err::DimensionMismatch, "dot: dimension mismatch");
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
  return s;
}

inline CVector normalized(const CVector& v) {
  double n = v.norm();
  if (n == 0.0) throw Error(Err::ZeroVector, "normalized: zero vector");
  CVector out = v;
  out *= Complex(1.0 / n, 0.0);
  return out;
}

class CMatrix {
public:
  CMatrix() : rows_(0), cols_(0) {}
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}

  static CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    CMatrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t i = 0;
    for (const auto& r : rows) {
      if (r.size() != m.cols_) throw Error(Err::DimensionMismatch, "from_rows: ragged rows");
      std::size_t j = 0;
      for (const auto& z : r) {
        detail::require_finite(z, "CMatrix");
        m(i, j++) = z;
      }
      ++i;
    }
    return m;
  }
  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static CMatrix diagonal(const std::vector<Complex>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      detail::require_finite(d[i], "CMatrix::diagonal");
      m(i, i) = d[i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<Complex>& data() const { return a_; }
  std::vector<Complex>& data() { return a_; }

  CVector column(std::size_t j) const {
    CVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_column(std::size_t j, const CVector& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  CMatrix& operator+=(const CMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  CMatrix& operator*=(Complex c) {
    for (auto& z : a_) z *= c;
    return *this;
  }
  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(Complex c, CMatrix m) { return m *= c; }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(Err::DimensionMismatch, "matmul: dimension mismatch");
    CMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        Complex aik = a(i, k);
        if (aik == Complex(0.0, 0.0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }
  friend CVector operator*(const CMatrix& a, const CVector& x) {
    if (a.cols_ != x.size()) throw Error(Err::DimensionMismatch, "matvec: dimension mismatch");
    CVector out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      Complex s(0.0, 0.0);
      for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
      out[i] = s;
    }
    return out;
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

private:
  void check_same(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw Error(Err::DimensionMismatch, "CMatrix: shape mismatch");
  }
  std::size_t rows_, cols_;
  std::vector<Complex> a_;
};

inline CMatrix adjoint(const CMatrix& m) {
  CMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

inline double unitarity_residual(const CMatrix& u) {
  return (adjoint(u) * u - CMatrix::identity(u.rows())).frobenius();
}

// ---------------------------------------------------------------------------
// LU with partial pivoting.

namespace detail {

struct Lu {
  CMatrix lu;
  std::vector<std::size_t> perm;
};

/// Factor with partial pivoting. When `pivot_floor > 0`, pivots smaller than
/// the floor are clamped instead of failing (inverse iteration needs this);
/// otherwise a small pivot throws Singular against `fail_tol`.
inline Lu lu_factor(CMatrix m, double fail_tol, double pivot_floor) {
  if (!m.square()) throw Error(Err::DimensionMismatch, "lu_factor: matrix not square");
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      double v = std::abs(m(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    if (best <= fail_tol) {
      if (pivot_floor > 0.0)
        m(k, k) = (best == 0.0) ? Complex(pivot_floor, 0.0)
                                : m(k, k) * (pivot_floor / best);
      else
        throw Error(Err::Singular, "solve: pivot below tolerance");
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      Complex f = m(i, k) / m(k, k);
      m(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return {std::move(m), std::move(perm)};
}

inline CVector lu_solve(const Lu& f, const CVector& b) {
  const std::size_t n = f.lu.rows();
  if (b.size() != n) throw Error(Err::DimensionMismatch, "lu_solve: dimension mismatch");
  CVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
    y[i] = s;
  }
  CVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Complex s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * x[j];
    x[ii] = s / f.lu(ii, ii);
  }
  return x;
}

}  // namespace detail

/// Partial-pivoted solve of m x = b. Throws Singular when a pivot falls below
/// tol.solve relative to ||m||.
inline CVector solve(const CMatrix& m, const CVector& b, const Tolerances& tol = Tolerances{}) {
  double scale = std::max(m.frobenius(), 1.0);
  auto f = detail::lu_factor(m, tol.solve * scale, 0.0);
  return detail::lu_solve(f, b);
}

inline CMatrix inverse_matrix(const CMatrix& m, const Tolerances& tol = Tolerances{}) {
  const std::size_t n = m.rows();
  double scale = std::max(m.frobenius(), 1.0);
  auto f = detail::lu_factor(m, tol.solve * scale, 0.0);
  CMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    CVector e(n);
    e[j] = 1.0;
    out.set_column(j, detail::lu_solve(f, e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gram matrices.

/// result[i][j] = form(basis[i], basis[j]); Hermitian for a sesquilinear form.
template <class Form>
CMatrix gram(Form&& form, const std::vector<CVector>& basis) {
  for (const auto& v : basis)
    if (v.size() != basis.front().size())
      throw Error(Err::DimensionMismatch, "gram: basis vectors of unequal dimension");
  CMatrix g(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) g(i, j) = form(basis[i], basis[j]);
  return g;
}

/// Coefficient form of the same Gram data: Q[i][j] = form(basis[j], basis[i]),
/// so that Q(sum c_i b_i) = c^H Q c for coefficient vectors c.
template <class Form>
CMatrix gram_quadratic(Form&& form, const std::vector<CVector>& basis) {
  CMatrix g(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) g(i, j) = form(basis[j], basis[i]);
  return g;
}

// ---------------------------------------------------------------------------
// Orthonormalization and null spaces.

/// Modified Gram-Schmidt with one re-orthogonalization pass. Vectors whose
/// remainder falls below drop_tol (relative to their input norm) are dropped.
inline std::vector<CVector> orthonormalize(const std::vector<CVector>& vs,
                                           double drop_tol = 1e-12) {
  std::vector<CVector> out;
  for (const auto& v0 : vs) {
    CVector v = v0;
    double n0 = v.norm();
    if (n0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : out) v -= dot(v, u) * u;
    if (v.norm() > drop_tol * n0) out.push_back(normalized(v));
  }
  return out;
}

/// Null space of an r x c matrix by Gauss-Jordan with full pivoting. Pivots
/// at or below pivot_tol (absolute) end the elimination; the free columns
/// yield the kernel basis.
inline std::vector<CVector> kernel_basis(const CMatrix& m, double pivot_tol) {
  const std::size_t r = m.rows(), c = m.cols();
  CMatrix red = m;
  std::vector<std::size_t> colp(c);
  std::iota(colp.begin(), colp.end(), std::size_t{0});
  std::size_t rank = 0;
  for (std::size_t step = 0; step < std::min(r, c); ++step) {
    std::size_t bi = step, bj = step;
    double best = 0.0;
    for (std::size_t i = step; i < r; ++i)
      for (std::size_t j = step; j < c; ++j)
        if (std::abs(red(i, j)) > best) {
          best = std::abs(red(i, j));
          bi = i;
          bj = j;
        }
    if (best <= pivot_tol) break;
    if (bi != step)
      for (std::size_t j = 0; j < c; ++j) std::swap(red(step, j), red(bi, j));
    if (bj != step) {
      for (std::size_t i = 0; i < r; ++i) std::swap(red(i, step), red(i, bj));
      std::swap(colp[step], colp[bj]);
    }
    Complex piv = red(step, step);
    for (std::size_t j = 0; j < c; ++j) red(step, j) /= piv;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == step) continue;
      Complex f = red(i, step);
      if (f == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < c; ++j) red(i, j) -= f * red(step, j);
    }
    ++rank;
  }
  std::vector<CVector> out;
  for (std::size_t free = rank; free < c; ++free) {
    CVector x(c);
    x[colp[free]] = 1.0;
    for (std::size_t p = 0; p < rank; ++p) x[colp[p]] = -red(p, free);
    out.push_back(normalized(x));
  }
  return out;
}

inline std::size_t numerical_rank(const CMatrix& m, double pivot_tol) {
  return m.cols() - kernel_basis(m, pivot_tol).size();
}

// ---------------------------------------------------------------------------
// Eigensolver: Hessenberg reduction, shifted QR, Schur back-substitution.

struct EigenResult {
  std::vector<Complex> eigenvalues;   // descending |.|, ties by Re then Im
  std::vector<CVector> eigenvectors;  // unit Euclidean norm
  std::vector<double> residuals;      // ||m v - lambda v||
};

namespace detail {

struct Givens {
  double c;   // real, >= 0
  Complex s;  // G = [[c, s], [-conj(s), c]]
};

inline Givens make_givens(Complex a, Complex b) {
  double aa = std::abs(a), bb = std::abs(b);
  if (bb == 0.0) return {1.0, Complex(0.0, 0.0)};
  double r = std::hypot(aa, bb);
  if (aa == 0.0) return {0.0, std::conj(b) / bb};
  Complex alpha = a / aa;
  return {aa / r, alpha * std::conj(b) / r};
}

// Left action on rows (k, k+1), columns [j0, j1).
inline void rotate_rows(CMatrix& m, std::size_t k, const Givens& g, std::size_t j0,
                        std::size_t j1) {
  for (std::size_t j = j0; j < j1; ++j) {
    Complex x = m(k, j), y = m(k + 1, j);
    m(k, j) = g.c * x + g.s * y;
    m(k + 1, j) = -std::conj(g.s) * x + g.c * y;
  }
}

// Right action by G^H on columns (k, k+1), rows [i0, i1).
inline void rotate_cols(CMatrix& m, std::size_t k, const Givens& g, std::size_t i0,
                        std::size_t i1) {
  for (std::size_t i = i0; i < i1; ++i) {
    Complex x = m(i, k), y = m(i, k + 1);
    m(i, k) = x * g.c + y * std::conj(g.s);
    m(i, k + 1) = -x * g.s + y * g.c;
  }
}

inline void hessenberg(CMatrix& h, CMatrix& z) {
  const std::size_t n = h.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double colnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) colnorm += std::norm(h(i, k));
    colnorm = std::sqrt(colnorm);
    double below = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) below += std::norm(h(i, k));
    if (std::sqrt(below) <= eps() * std::max(colnorm, 1e-300)) continue;

    CVector v(n - k - 1);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = h(k + 1 + i, k);
    Complex x0 = v[0];
    Complex alpha = (std::abs(x0) == 0.0) ? Complex(-colnorm, 0.0)
                                          : -(x0 / std::abs(x0)) * colnorm;
    v[0] -= alpha;
    double vn = v.norm();
    if (vn == 0.0) continue;
    v *= Complex(1.0 / vn, 0.0);

    // h := P h P with P = I - 2 v v^H on the trailing block.
    for (std::size_t j = k; j < n; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) s += std::conj(v[i]) * h(k + 1 + i, j);
      s *= 2.0;
      for (std::size_t i = 0; i < v.size(); ++i) h(k + 1 + i, j) -= s * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex s(0.0, 0.0);
      for (std::size_t j = 0; j < v.size(); ++j) s += h(i, k + 1 + j) * v[j];
      s *= 2.0;
      for (std::size_t j = 0; j < v.size(); ++j) h(i, k + 1 + j) -= s * std::conj(v[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex s(0.0, 0.0);
      for (std::size_t j = 0; j < v.size(); ++j) s += z(i, k + 1 + j) * v[j];
      s *= 2.0;
      for (std::size_t j = 0; j < v.size(); ++j) z(i, k + 1 + j) -= s * std::conj(v[j]);
    }
  }
}

inline Complex wilkinson_shift(const CMatrix& h, std::size_t hi) {
  Complex t11 = h(hi - 1, hi - 1), t12 = h(hi - 1, hi);
  Complex t21 = h(hi, hi - 1), t22 = h(hi, hi);
  Complex tr = t11 + t22;
  Complex det = t11 * t22 - t12 * t21;
  Complex disc = std::sqrt(tr * tr - 4.0 * det);
  Complex l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
  return (std::abs(l1 - t22) < std::abs(l2 - t22)) ? l1 : l2;
}

/// A = Z T Z^H with T upper triangular. Throws NonConvergence past the sweep cap.
inline void schur(CMatrix& h, CMatrix& z, const Tolerances& tol) {
  const std::size_t n = h.rows();
  if (n == 0) return;
  z = CMatrix::identity(n);
  hessenberg(h, z);
  double scale = std::max(h.frobenius(), 1e-300);

  long sweeps = 0;
  const long cap = static_cast<long>(tol.qr_sweep_cap_factor) * static_cast<long>(n);
  std::size_t hi = n - 1;
  int stall = 0;
  while (hi > 0) {
    for (std::size_t i = hi; i >= 1; --i) {
      double thresh = eps() * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)));
      if (thresh == 0.0) thresh = eps() * scale;
      if (std::abs(h(i, i - 1)) <= thresh) h(i, i - 1) = 0.0;
    }
    if (h(hi, hi - 1) == Complex(0.0, 0.0)) {
      --hi;
      stall = 0;
      continue;
    }
    std::size_t lo = hi;
    while (lo > 0 && h(lo, lo - 1) != Complex(0.0, 0.0)) --lo;

    Complex sigma = wilkinson_shift(h, hi);
    if (++stall % 12 == 0)
      sigma = h(hi, hi) + std::abs(h(hi, hi - 1)) * Complex(0.75, 0.4);

    for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= sigma;
    std::vector<Givens> gs;
    gs.reserve(hi - lo);
    for (std::size_t k = lo; k < hi; ++k) {
      Givens g = make_givens(h(k, k), h(k + 1, k));
      rotate_rows(h, k, g, k, n);
      h(k + 1, k) = 0.0;
      gs.push_back(g);
    }
    for (std::size_t k = lo; k < hi; ++k) {
      rotate_cols(h, k, gs[k - lo], 0, std::min(k + 2, n));
      rotate_cols(z, k, gs[k - lo], 0, n);
    }
    for (std::size_t i = lo; i <= hi; ++i) h(i, i) += sigma;

    if (++sweeps > cap)
      throw Error(Err::NonConvergence, "eig: QR sweep cap exceeded");
  }
  for (std::size_t i = 1; i < n; ++i) h(i, i - 1) = 0.0;
}

inline CVector schur_eigenvector(const CMatrix& t, const CMatrix& z, std::size_t idx,
                                 double scale) {
  const std::size_t n = t.rows();
  CVector y(n);
  y[idx] = 1.0;
  Complex lambda = t(idx, idx);
  for (std::size_t jj = idx; jj-- > 0;) {
    Complex s(0.0, 0.0);
    for (std::size_t k = jj + 1; k <= idx; ++k) s += t(jj, k) * y[k];
    Complex d = t(jj, jj) - lambda;
    double floor = eps() * scale;
    if (std::abs(d) < floor) d = Complex(floor, 0.0);
    y[jj] = -s / d;
  }
  return normalized(z * y);
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t x = state;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline CVector pseudo_random_vector(std::size_t n, std::uint64_t& state) {
  CVector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    double re = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 0.5;
    double im = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 0.5;
    v[i] = Complex(re, im);
  }
  return v;
}

/// Swaps the diagonal entries at positions (p, p+1) of the triangular factor
/// by a Givens similarity, preserving m = z t z^H.
inline void schur_swap(CMatrix& t, CMatrix& z, std::size_t p) {
  const std::size_t n = t.rows();
  Complex t12 = t(p, p + 1);
  Complex d = t(p + 1, p + 1) - t(p, p);
  if (std::abs(t12) == 0.0 && std::abs(d) == 0.0) return;  // equal and decoupled
  Givens g = make_givens(t12, d);
  rotate_rows(t, p, g, 0, n);
  rotate_cols(t, p, g, 0, n);
  rotate_cols(z, p, g, 0, n);
  t(p + 1, p) = 0.0;
}

}  // namespace detail

struct SchurResult {
  CMatrix t;  // upper triangular
  CMatrix z;  // unitary, m = z t z^H
};

inline SchurResult schur_decompose(const CMatrix& m, const Tolerances& tol = Tolerances{}) {
  if (!m.square()) throw Error(Err::DimensionMismatch, "schur_decompose: not square");
  SchurResult s;
  s.t = m;
  detail::schur(s.t, s.z, tol);
  return s;
}

/// Orthonormal basis of the invariant subspace belonging to the selected
/// diagonal positions of a Schur form: the selected eigenvalues are bubbled
/// to the leading block by adjacent swaps and the leading Schur vectors are
/// returned. Backward stable, no inverse iteration.
inline std::vector<CVector> invariant_from_schur(SchurResult s,
                                                 std::vector<bool> selected) {
  const std::size_t n = s.t.rows();
  if (selected.size() != n)
    throw Error(Err::DimensionMismatch, "invariant_from_schur: selection size");
  std::size_t k = 0;
  for (bool b : selected) k += b;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i = 1; i < n; ++i) {
      if (selected[i] && !selected[i - 1]) {
        detail::schur_swap(s.t, s.z, i - 1);
        std::swap(selected[i], selected[i - 1]);
        moved = true;
      }
    }
  }
  std::vector<CVector> out;
  for (std::size_t j = 0; j < k; ++j) out.push_back(s.z.column(j));
  return orthonormalize(out);
}

/// Invariant subspace for the k diagonal entries of the Schur form closest
/// to lambda.
inline std::vector<CVector> invariant_subspace(const CMatrix& m, Complex lambda,
                                               std::size_t k,
                                               const Tolerances& tol = Tolerances{}) {
  const std::size_t n = m.rows();
  if (k > n) throw Error(Err::DimensionMismatch, "invariant_subspace: k > dim");
  SchurResult s = schur_decompose(m, tol);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(s.t(a, a) - lambda) < std::abs(s.t(b, b) - lambda);
  });
  std::vector<bool> selected(n, false);
  for (std::size_t j = 0; j < k; ++j) selected[idx[j]] = true;
  return invariant_from_schur(std::move(s), std::move(selected));
}

/// Groups eigenvalue indices whose pairwise distance is at most width.
inline std::vector<std::vector<std::size_t>> cluster_indices(
    const std::vector<Complex>& eigenvalues, double width) {
  const std::size_t n = eigenvalues.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(eigenvalues[i] - eigenvalues[j]) <= width) parent[find(i)] = find(j);
  std::vector<std::vector<std::size_t>> groups;
  std::vector<long> where(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    if (where[r] < 0) {
      where[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(where[r])].push_back(i);
  }
  return groups;
}

/// Full spectrum with multiplicity. Eigenvalues are ordered by descending
/// modulus (ties: descending real part, then imaginary part). Eigenvectors of
/// simple eigenvalues come from Schur back-substitution; eigenvalues within
/// tol.cluster * ||m|| of each other are grouped and their vector slots are
/// replaced by an orthonormal basis of the joint invariant subspace.
inline EigenResult eig(const CMatrix& m, const Tolerances& tol = Tolerances{}) {
  if (!m.square()) throw Error(Err::DimensionMismatch, "eig: matrix not square");
  if (m.rows() > static_cast<std::size_t>(tol.eig_max_dim))
    throw Error(Err::DimensionMismatch, "eig: dimension exceeds configured max");
  const std::size_t n = m.rows();
  EigenResult out;
  if (n == 0) return out;

  CMatrix t = m, z;
  detail::schur(t, z, tol);
  double scale = std::max(m.frobenius(), 1e-300);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    Complex la = t(a, a), lb = t(b, b);
    double ma = std::abs(la), mb = std::abs(lb);
    if (ma != mb) return ma > mb;
    if (la.real() != lb.real()) return la.real() > lb.real();
    return la.imag() > lb.imag();
  });

  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenvalues[i] = t(order[i], order[i]);
    out.eigenvectors[i] = detail::schur_eigenvector(t, z, order[i], scale);
  }

  auto groups = cluster_indices(out.eigenvalues, tol.cluster * scale);
  for (const auto& g : groups) {
    if (g.size() < 2) continue;
    std::vector<bool> selected(n, false);
    for (std::size_t idx : g) selected[order[idx]] = true;
    auto basis = invariant_from_schur(SchurResult{t, z}, std::move(selected));
    for (std::size_t j = 0; j < g.size(); ++j) out.eigenvectors[g[j]] = basis[j];
  }

  out.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    CVector r = m * out.eigenvectors[i] - out.eigenvalues[i] * out.eigenvectors[i];
    out.residuals[i] = r.norm();
  }
  return out;
}

}  // namespace cxhyp
