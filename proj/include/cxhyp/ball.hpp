#pragma once

// Ball model: construction of group elements from (theta, U, xi) data, the
// Moebius action on B, and the linear lift of the involution f_b.

#include <cmath>

#include "cxhyp/core.hpp"
#include "cxhyp/linalg.hpp"
#include "cxhyp/model.hpp"

namespace cxhyp {

/// The (theta, U, xi) data of a general element of G; a = sqrt(1 + ||xi||^2)
/// and the positive operator A are derived.
struct GeneratorData {
  double theta = 0.0;
  CMatrix U;   // n x n unitary
  CVector xi;  // in H
};

inline double generator_a(const CVector& xi) {
  double n = xi.norm();
  return std::sqrt(1.0 + n * n);
}

/// e^{i theta} [[U A, U xi], [<.,xi>, a]] with A = I + ((a-1)/||xi||^2) xi xi^H
/// (A = I when xi = 0).
inline IsometryMatrix build_isometry(const GeneratorData& g,
                                     const Tolerances& tol = Tolerances{}) {
  const std::size_t n = g.xi.size();
  if (g.U.rows() != n || g.U.cols() != n)
    throw Error(Err::DimensionMismatch, "build_isometry: U and xi dimensions differ");
  if (unitarity_residual(g.U) > tol.member * (1.0 + static_cast<double>(n)))
    throw Error(Err::NotUnitary, "build_isometry: U is not unitary");

  double xin = g.xi.norm();
  double a = generator_a(g.xi);
  CMatrix A = CMatrix::identity(n);
  if (xin > 0.0) {
    double c = (a - 1.0) / (xin * xin);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) A(i, j) += c * g.xi[i] * std::conj(g.xi[j]);
  }
  CMatrix ua = g.U * A;
  CVector uxi = g.U * g.xi;

  CMatrix m(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = ua(i, j);
    m(i, n) = uxi[i];
    m(n, i) = std::conj(g.xi[i]);
  }
  m(n, n) = a;
  Complex phase = std::polar(1.0, g.theta);
  m *= phase;
  return IsometryMatrix::from(std::move(m), Model::Ball, tol);
}

/// Recovers the (theta, U, xi) data of a member: the (n,n) entry is
/// e^{i theta} a with a >= 1, the bottom row carries xi, and U follows from
/// the top-left block once A is known.
inline GeneratorData generator_parse(const IsometryMatrix& t,
                                     const Tolerances& tol = Tolerances{}) {
  if (t.model != Model::Ball)
    throw Error(Err::FormMismatch, "generator_parse: expects a ball-model member");
  const std::size_t n = t.n();
  Complex corner = t.m(n, n);
  if (std::abs(corner) < 1.0 - tol.member * 10.0)
    throw Error(Err::NotMember, "generator_parse: |a| < 1");
  double theta = std::arg(corner);
  Complex phase = std::polar(1.0, theta);

  GeneratorData g;
  g.theta = theta;
  g.xi = CVector(n);
  for (std::size_t i = 0; i < n; ++i) g.xi[i] = std::conj(t.m(n, i)) * phase;
  double xin = g.xi.norm();
  double a = generator_a(g.xi);

  CMatrix ainv = CMatrix::identity(n);  // A^{-1} = I + (1/a - 1)/||xi||^2 xi xi^H
  if (xin > 0.0) {
    double c = (1.0 / a - 1.0) / (xin * xin);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ainv(i, j) += c * g.xi[i] * std::conj(g.xi[j]);
  }
  CMatrix tl(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) tl(i, j) = t.m(i, j);
  g.U = std::conj(phase) * tl * ainv;
  if (unitarity_residual(g.U) > tol.member * 100.0 * (1.0 + static_cast<double>(n)))
    throw Error(Err::NotMember, "generator_parse: recovered U is not unitary");
  return g;
}

/// Image of x in the closed ball under the projective action of t: apply to
/// (x,1), renormalize the last coordinate to 1 and return the H-part.
inline CVector mobius_apply(const IsometryMatrix& t, const CVector& x,
                            const Tolerances& tol = Tolerances{}) {
  if (t.model != Model::Ball)
    throw Error(Err::FormMismatch, "mobius_apply: expects a ball-model member");
  const std::size_t n = t.n();
  if (x.size() != n) throw Error(Err::DimensionMismatch, "mobius_apply: point dimension");
  if (x.norm() > 1.0 + tol.boundary)
    throw Error(Err::OutsideClosedBall, "mobius_apply: point outside closed ball");

  CVector lift(n + 1);
  for (std::size_t i = 0; i < n; ++i) lift[i] = x[i];
  lift[n] = 1.0;
  CVector img = t.m * lift;
  Complex w = img[n];
  if (std::abs(w) <= tol.denom * img.norm())
    throw Error(Err::DegenerateDenominator, "mobius_apply: vanishing last coordinate");
  CVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = img[i] / w;
  return out;
}

/// Linear lift of f_b: (1/sqrt(1-||b||^2)) [[T_b, -T_b(b)], [-<.,b>, 1]] with
/// T_b = sqrt(1-||b||^2) I + (1/(1+sqrt(1-||b||^2))) b b^H. Satisfies
/// is_member and sends b to 0 projectively; both are verified here.
inline IsometryMatrix lift_fb(const CVector& b, const Tolerances& tol = Tolerances{}) {
  const std::size_t n = b.size();
  double bn = b.norm();
  if (bn >= 1.0 - tol.interior)
    throw Error(Err::NotInterior, "lift_fb: base point not interior");
  double s = std::sqrt(1.0 - bn * bn);

  CMatrix m(n + 1, n + 1);
  double c = 1.0 / (1.0 + s);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = ((i == j) ? Complex(s, 0.0) : Complex(0.0, 0.0)) +
                c * b[i] * std::conj(b[j]);
    m(i, n) = -b[i];  // T_b(b) = b
    m(n, i) = -std::conj(b[i]);
  }
  m(n, n) = 1.0;
  m *= Complex(1.0 / s, 0.0);

  IsometryMatrix out = IsometryMatrix::from(std::move(m), Model::Ball, tol);
  CVector img = mobius_apply(out, b, tol);
  if (img.norm() > tol.point)
    throw Error(Err::NotMember, "lift_fb: postcondition f_b(b) = 0 failed");
  return out;
}

}  // namespace cxhyp
