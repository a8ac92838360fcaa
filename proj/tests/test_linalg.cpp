#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "cxhyp/linalg.hpp"
#include "cxhyp/random.hpp"

using namespace cxhyp;

namespace {

const double kSqrt2 = std::sqrt(2.0);

CMatrix normal_hyperbolic_3x3() {
  return CMatrix::from_rows({{kSqrt2, 0.0, 1.0}, {0.0, 1.0, 0.0}, {1.0, 0.0, kSqrt2}});
}

bool multiset_close(std::vector<Complex> a, std::vector<Complex> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    auto best = b.end();
    double bd = tol;
    for (auto it = b.begin(); it != b.end(); ++it)
      if (std::abs(*it - x) <= bd) {
        bd = std::abs(*it - x);
        best = it;
      }
    if (best == b.end()) return false;
    b.erase(best);
  }
  return true;
}

}  // namespace

TEST_CASE("adjoint matches conjugate transpose") {
  CHECK((adjoint(CMatrix::identity(3)) - CMatrix::identity(3)).frobenius() == 0.0);

  CMatrix m = CMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
  CMatrix expect = CMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}});
  CHECK((adjoint(m) - expect).frobenius() == 0.0);

  CMatrix one = CMatrix::from_rows({{Complex(0.0, 1.0)}});
  CHECK(adjoint(one)(0, 0) == Complex(0.0, -1.0));
}

TEST_CASE("adjoint is an exact involution") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 1 + trial % 7;
    CMatrix m(n, n + 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n + 1; ++j) m(i, j) = rng.cgaussian();
    CMatrix back = adjoint(adjoint(m));
    CHECK((back - m).frobenius() == 0.0);
  }
}

TEST_CASE("solve: pinned examples") {
  Tolerances tol;
  CVector x = solve(CMatrix::identity(2), CVector{3.0, Complex(0.0, 4.0)}, tol);
  CHECK(std::abs(x[0] - Complex(3.0, 0.0)) < 1e-14);
  CHECK(std::abs(x[1] - Complex(0.0, 4.0)) < 1e-14);

  x = solve(CMatrix::from_rows({{2.0, 0.0}, {0.0, 2.0}}), CVector{2.0, 2.0}, tol);
  CHECK(std::abs(x[0] - 1.0) < 1e-14);
  CHECK(std::abs(x[1] - 1.0) < 1e-14);

  // [[sqrt2,1],[1,sqrt2]] (1,1)^T = (sqrt2+1, sqrt2+1)^T, multiplied out by hand
  x = solve(CMatrix::from_rows({{kSqrt2, 1.0}, {1.0, kSqrt2}}),
            CVector{kSqrt2 + 1.0, kSqrt2 + 1.0}, tol);
  CHECK(std::abs(x[0] - 1.0) < 1e-12);
  CHECK(std::abs(x[1] - 1.0) < 1e-12);
}

TEST_CASE("solve: singular matrix is rejected") {
  CMatrix m = CMatrix::from_rows({{1.0, 2.0}, {2.0, 4.0}});
  CHECK_THROWS_AS(solve(m, CVector{1.0, 1.0}), Error);
}

TEST_CASE("solve recovers x for well-conditioned random systems") {
  Rng rng(17);
  Tolerances tol;
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + trial % 6;
    CMatrix m = random_unitary(n, rng);  // perfectly conditioned
    for (std::size_t i = 0; i < n; ++i) m(i, i) += 1.5;
    CVector x = random_vector(n, rng);
    CVector rec = solve(m, m * x, tol);
    CHECK((rec - x).norm() <= 1e-10 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("eig: diagonal matrix") {
  EigenResult er = eig(CMatrix::diagonal({2.0, 0.5, 1.0}));
  REQUIRE(er.eigenvalues.size() == 3);
  // ordering: descending modulus
  CHECK(std::abs(er.eigenvalues[0] - 2.0) < 1e-13);
  CHECK(std::abs(er.eigenvalues[1] - 1.0) < 1e-13);
  CHECK(std::abs(er.eigenvalues[2] - 0.5) < 1e-13);
}

TEST_CASE("eig: pinned normal-hyperbolic example") {
  // characteristic polynomial of the [[sqrt2,1],[1,sqrt2]] block:
  // x^2 - 2 sqrt2 x + 1 = 0  =>  x = sqrt2 +- 1
  EigenResult er = eig(normal_hyperbolic_3x3());
  CHECK(multiset_close(er.eigenvalues, {kSqrt2 + 1.0, kSqrt2 - 1.0, 1.0}, 1e-10));
  for (double r : er.residuals) CHECK(r <= 1e-10 * 3.0);
}

TEST_CASE("eig: rotation matrix has spectrum {i, -i}") {
  CMatrix m = CMatrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}});
  EigenResult er = eig(m);
  CHECK(multiset_close(er.eigenvalues, {Complex(0.0, 1.0), Complex(0.0, -1.0)}, 1e-12));
}

TEST_CASE("eig: residuals on random matrices") {
  Rng rng(23);
  Tolerances tol;
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + trial % 8;
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.cgaussian();
    EigenResult er = eig(m, tol);
    REQUIRE(er.eigenvalues.size() == n);
    double scale = m.frobenius();
    for (double r : er.residuals) CHECK(r <= tol.eig * std::max(scale, 1.0));
  }
}

TEST_CASE("eig: Hermitian spectra are real") {
  Rng rng(31);
  Tolerances tol;
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + trial % 6;
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.cgaussian();
    CMatrix h = a + adjoint(a);
    EigenResult er = eig(h, tol);
    for (const auto& l : er.eigenvalues)
      CHECK(std::abs(l.imag()) <= tol.eig * std::max(1.0, h.frobenius()));
  }
}

TEST_CASE("eig: identity returns an orthonormal eigenbasis") {
  EigenResult er = eig(CMatrix::identity(4));
  REQUIRE(er.eigenvectors.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(er.eigenvalues[i] - 1.0) < 1e-14);
    CHECK(std::abs(er.eigenvectors[i].norm() - 1.0) < 1e-12);
    for (std::size_t j = i + 1; j < 4; ++j)
      CHECK(std::abs(dot(er.eigenvectors[i], er.eigenvectors[j])) < 1e-10);
  }
}

TEST_CASE("eig: defective Jordan block keeps a clean invariant subspace") {
  // [[1,1],[0,1]] has the single eigenvalue 1; the returned pair of vectors
  // must span C^2 (the joint invariant subspace) orthonormally.
  CMatrix m = CMatrix::from_rows({{1.0, 1.0}, {0.0, 1.0}});
  EigenResult er = eig(m);
  REQUIRE(er.eigenvalues.size() == 2);
  CHECK(std::abs(er.eigenvalues[0] - 1.0) < 1e-7);
  CHECK(std::abs(er.eigenvalues[1] - 1.0) < 1e-7);
  CHECK(std::abs(dot(er.eigenvectors[0], er.eigenvectors[1])) < 1e-10);
}

TEST_CASE("eigenvalue ordering is deterministic") {
  CMatrix m = CMatrix::diagonal({Complex(0.0, 1.0), Complex(0.0, -1.0), Complex(1.0, 0.0),
                                 Complex(-1.0, 0.0)});
  EigenResult er = eig(m);
  // all moduli 1: order by descending real part, then imaginary part
  CHECK(std::abs(er.eigenvalues[0] - Complex(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(er.eigenvalues[1] - Complex(0.0, 1.0)) < 1e-14);
  CHECK(std::abs(er.eigenvalues[2] - Complex(0.0, -1.0)) < 1e-14);
  CHECK(std::abs(er.eigenvalues[3] - Complex(-1.0, 0.0)) < 1e-14);
}

TEST_CASE("gram: pinned ball-form examples") {
  auto ball = [](const CVector& u, const CVector& v) {
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) s += u[i] * std::conj(v[i]);
    return s - u[u.size() - 1] * std::conj(v[v.size() - 1]);
  };
  // A-gram of {(0,1)} at dim H = 1
  CMatrix g = gram(ball, {CVector{0.0, 1.0}});
  CHECK(std::abs(g(0, 0) - Complex(-1.0, 0.0)) < 1e-15);

  g = gram(ball, {CVector{1.0, 0.0}});
  CHECK(std::abs(g(0, 0) - Complex(1.0, 0.0)) < 1e-15);

  // {((1,0),1), ((-1,0),1)}: evaluate the form entrywise by hand -> [[0,-2],[-2,0]]
  g = gram(ball, {CVector{1.0, 0.0, 1.0}, CVector{-1.0, 0.0, 1.0}});
  CHECK(std::abs(g(0, 0)) < 1e-15);
  CHECK(std::abs(g(0, 1) - Complex(-2.0, 0.0)) < 1e-15);
  CHECK(std::abs(g(1, 0) - Complex(-2.0, 0.0)) < 1e-15);
  CHECK(std::abs(g(1, 1)) < 1e-15);
}

TEST_CASE("gram rejects mixed dimensions") {
  auto f = [](const CVector& u, const CVector& v) { return dot(u, v); };
  CHECK_THROWS_AS(gram(f, {CVector{1.0}, CVector{1.0, 2.0}}), Error);
}

TEST_CASE("gram_quadratic reproduces the quadratic form on coefficients") {
  Rng rng(41);
  auto ball = [](const CVector& u, const CVector& v) {
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) s += u[i] * std::conj(v[i]);
    return s - u[u.size() - 1] * std::conj(v[v.size() - 1]);
  };
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CVector> basis;
    for (int k = 0; k < 3; ++k) basis.push_back(random_vector(4, rng));
    CMatrix q = gram_quadratic(ball, basis);
    CVector c = random_vector(3, rng);
    CVector w(4);
    for (std::size_t i = 0; i < 3; ++i) w += c[i] * basis[i];
    Complex direct = ball(w, w);
    Complex via(0.0, 0.0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) via += std::conj(c[i]) * q(i, j) * c[j];
    CHECK(std::abs(direct - via) < 1e-11);
  }
}

TEST_CASE("kernel_basis finds the null space") {
  CMatrix m = CMatrix::from_rows({{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}});
  auto ker = kernel_basis(m, 1e-10);
  REQUIRE(ker.size() == 2);
  for (const auto& v : ker) CHECK((m * v).norm() < 1e-12);
}

TEST_CASE("invariant_subspace of a spread Jordan block") {
  // 3x3 Jordan block at 0.7 inside a diag(2, ...) matrix
  CMatrix m = CMatrix::identity(5);
  m(0, 0) = 2.0;
  for (std::size_t i = 1; i < 4; ++i) {
    m(i, i) = 0.7;
    if (i < 3) m(i, i + 1) = 1.0;
  }
  m(4, 4) = Complex(0.0, 1.0);
  auto basis = invariant_subspace(m, Complex(0.7, 0.0), 3);
  REQUIRE(basis.size() == 3);
  // span must be e1,e2,e3: escape under m stays inside
  for (const auto& b : basis) {
    CVector mb = m * b;
    CVector proj(5);
    for (const auto& u : basis) proj += dot(mb, u) * u;
    CHECK((mb - proj).norm() < 1e-9 * mb.norm());
  }
}

TEST_CASE("cluster_indices unions nearby eigenvalues") {
  std::vector<Complex> vals{Complex(1.0, 0.0), Complex(1.0 + 1e-12, 0.0), Complex(2.0, 0.0)};
  auto groups = cluster_indices(vals, 1e-8);
  REQUIRE(groups.size() == 2);
  std::size_t big = groups[0].size() == 2 ? 0 : 1;
  CHECK(groups[big].size() == 2);
}

TEST_CASE("CVector rejects non-finite entries") {
  std::vector<Complex> bad{Complex(std::nan(""), 0.0)};
  CHECK_THROWS_AS(CVector::from(bad), Error);
}

TEST_CASE("eig dimension cap") {
  Tolerances tol;
  tol.eig_max_dim = 4;
  CHECK_THROWS_AS(eig(CMatrix::identity(5), tol), Error);
}
