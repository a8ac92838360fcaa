#pragma once

// Siegel domain model: the Cayley operator between the two forms, the point
// map D, the canonical form of the stabilizer of infinity, its Iwasawa
// factors, spectrum and affine action.

#include <cmath>
#include <vector>

#include "cxhyp/core.hpp"
#include "cxhyp/linalg.hpp"
#include "cxhyp/model.hpp"

namespace cxhyp {

/// D sends (e,0) to (e,1)/sqrt2, (0,1) to (-e,1)/sqrt2 and fixes <e>^perp;
/// D^{-1} A' D equals the Siegel signature matrix.
inline CMatrix cayley_operator(std::size_t n) {
  CMatrix d = CMatrix::identity(n + 1);
  const double r = 1.0 / std::sqrt(2.0);
  d(0, 0) = r;
  d(0, n) = -r;
  d(n, 0) = r;
  d(n, n) = r;
  return d;
}

inline IsometryMatrix to_siegel(const IsometryMatrix& t, const Tolerances& tol = Tolerances{}) {
  if (t.model != Model::Siegel) {
    CMatrix d = cayley_operator(t.n());
    return IsometryMatrix::from(adjoint(d) * t.m * d, Model::Siegel, tol);
  }
  return t;
}

inline IsometryMatrix to_ball(const IsometryMatrix& t, const Tolerances& tol = Tolerances{}) {
  if (t.model != Model::Ball) {
    CMatrix d = cayley_operator(t.n());
    return IsometryMatrix::from(d * t.m * adjoint(d), Model::Ball, tol);
  }
  return t;
}

/// A point of the closed Siegel domain or the distinguished point at
/// infinity (the Cayley image of e).
struct CayleyImage {
  bool infinite = false;
  CVector point;  // H-coordinates, dimension n; empty when infinite

  static CayleyImage at_infinity() { return {true, CVector()}; }
  static CayleyImage at(CVector p) { return {false, std::move(p)}; }
};

inline double siegel_defect(const CVector& p) {
  // Re<x,e> - ||x'||^2 / 2; nonnegative on the closed domain.
  double w = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) w += std::norm(p[i]);
  return p[0].real() - 0.5 * w;
}

/// D(x) = (1+<x,e>)/(1-<x,e>) e + sqrt2/(1-<x,e>) x'; points within point_tol
/// of e map to infinity.
inline CayleyImage cayley_point(const CVector& x, const Tolerances& tol = Tolerances{}) {
  const std::size_t n = x.size();
  if (x.norm() > 1.0 + tol.boundary)
    throw Error(Err::OutsideClosedBall, "cayley_point: outside closed ball");
  CVector e_dist = x;
  e_dist[0] -= 1.0;
  if (e_dist.norm() <= tol.point) return CayleyImage::at_infinity();

  Complex xe = x[0];
  Complex den = Complex(1.0, 0.0) - xe;
  CVector out(n);
  out[0] = (Complex(1.0, 0.0) + xe) / den;
  const double sqrt2 = std::sqrt(2.0);
  for (std::size_t i = 1; i < n; ++i) out[i] = sqrt2 * x[i] / den;
  return CayleyImage::at(std::move(out));
}

/// Projective action of a Siegel member on the closed domain plus infinity.
inline CayleyImage siegel_apply(const IsometryMatrix& t, const CayleyImage& x,
                                const Tolerances& tol = Tolerances{}) {
  if (t.model != Model::Siegel)
    throw Error(Err::FormMismatch, "siegel_apply: expects a Siegel member");
  const std::size_t n = t.n();
  CVector lift(n + 1);
  if (x.infinite) {
    lift[0] = 1.0;  // standard lift (e, 0)
  } else {
    if (x.point.size() != n)
      throw Error(Err::DimensionMismatch, "siegel_apply: point dimension");
    for (std::size_t i = 0; i < n; ++i) lift[i] = x.point[i];
    lift[n] = 1.0;
  }
  CVector img = t.m * lift;
  Complex w = img[n];
  if (std::abs(w) <= tol.denom * img.norm()) return CayleyImage::at_infinity();
  CVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = img[i] / w;
  return CayleyImage::at(std::move(out));
}

/// The (lambda, U, a', s) tuple of a stabilizer-of-infinity element, with
/// lambda mu-bar = 1 and Re s = ||a'||^2 / 2. U acts on <e>^perp, so it is
/// (n-1) x (n-1).
struct SiegelStabilizerElement {
  Complex lambda{1.0, 0.0};
  CMatrix U;        // (n-1) x (n-1) unitary
  CVector a_prime;  // dimension n-1
  Complex s{0.0, 0.0};

  Complex mu() const { return 1.0 / std::conj(lambda); }
  std::size_t n() const { return a_prime.size() + 1; }
};

inline void validate_stabilizer(const SiegelStabilizerElement& el,
                                const Tolerances& tol = Tolerances{}) {
  if (std::abs(el.lambda) == 0.0)
    throw Error(Err::NotStabilizer, "stabilizer: lambda must be nonzero");
  if (el.U.rows() != el.a_prime.size() || !el.U.square())
    throw Error(Err::DimensionMismatch, "stabilizer: U and a' dimensions differ");
  if (unitarity_residual(el.U) > tol.member * (1.0 + static_cast<double>(el.U.rows())))
    throw Error(Err::NotUnitary, "stabilizer: U is not unitary");
  double an = el.a_prime.norm();
  if (std::abs(el.s.real() - 0.5 * an * an) > tol.member * (1.0 + an * an))
    throw Error(Err::NotStabilizer, "stabilizer: Re s != ||a'||^2 / 2");
}

/// [[lambda, <.,U^{-1}a'>, mu s], [0, U, mu a'], [0, 0, mu]]
inline IsometryMatrix stabilizer_build(const SiegelStabilizerElement& el,
                                       const Tolerances& tol = Tolerances{}) {
  validate_stabilizer(el, tol);
  const std::size_t n = el.n();
  Complex mu = el.mu();
  CVector uinv_a = adjoint(el.U) * el.a_prime;  // U^{-1} = U^H

  CMatrix m(n + 1, n + 1);
  m(0, 0) = el.lambda;
  for (std::size_t j = 1; j < n; ++j) m(0, j) = std::conj(uinv_a[j - 1]);
  m(0, n) = mu * el.s;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 1; j < n; ++j) m(i, j) = el.U(i - 1, j - 1);
    m(i, n) = mu * el.a_prime[i - 1];
  }
  m(n, n) = mu;
  return IsometryMatrix::from(std::move(m), Model::Siegel, tol);
}

/// Inverse of stabilizer_build, for members with first column proportional
/// to (e,0).
inline SiegelStabilizerElement stabilizer_parse(const IsometryMatrix& t,
                                                const Tolerances& tol = Tolerances{}) {
  if (t.model != Model::Siegel)
    throw Error(Err::FormMismatch, "stabilizer_parse: expects a Siegel member");
  const std::size_t n = t.n();
  double scale = std::max(t.m.frobenius(), 1.0);
  double off = 0.0;
  for (std::size_t i = 1; i <= n; ++i) off = std::max(off, std::abs(t.m(i, 0)));
  for (std::size_t j = 1; j < n; ++j) off = std::max(off, std::abs(t.m(n, j)));
  if (off > tol.member * scale * 10.0)
    throw Error(Err::NotStabilizer, "stabilizer_parse: element does not fix infinity");

  SiegelStabilizerElement el;
  el.lambda = t.m(0, 0);
  Complex mu = t.m(n, n);
  if (std::abs(mu) == 0.0)
    throw Error(Err::NotStabilizer, "stabilizer_parse: vanishing (n,n) entry");
  el.U = CMatrix(n - 1, n - 1);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) el.U(i - 1, j - 1) = t.m(i, j);
  el.a_prime = CVector(n - 1);
  for (std::size_t i = 1; i < n; ++i) el.a_prime[i - 1] = t.m(i, n) / mu;
  el.s = t.m(0, n) / mu;
  validate_stabilizer(el, tol);
  if (std::abs(el.lambda * std::conj(mu) - Complex(1.0, 0.0)) > tol.member * scale * 10.0)
    throw Error(Err::NotStabilizer, "stabilizer_parse: lambda mu-bar != 1");
  return el;
}

struct IwasawaFactors {
  IsometryMatrix translation;  // (1, a', s)
  IsometryMatrix rotation;     // R_U
  IsometryMatrix dilation;     // D_lambda
};

/// Every stabilizer element factors as translation * rotation * dilation.
inline IwasawaFactors iwasawa(const IsometryMatrix& t, const Tolerances& tol = Tolerances{}) {
  SiegelStabilizerElement el = stabilizer_parse(t, tol);
  const std::size_t n = el.n();

  SiegelStabilizerElement tr{Complex(1.0, 0.0), CMatrix::identity(n - 1), el.a_prime, el.s};
  SiegelStabilizerElement rot{Complex(1.0, 0.0), el.U, CVector(n - 1), Complex(0.0, 0.0)};
  SiegelStabilizerElement dil{el.lambda, CMatrix::identity(n - 1), CVector(n - 1),
                              Complex(0.0, 0.0)};
  return {stabilizer_build(tr, tol), stabilizer_build(rot, tol), stabilizer_build(dil, tol)};
}

/// Multiset spectrum {lambda, mu} plus the spectrum of U. (Block-triangular
/// form; the s = 0 case is the block-diagonal trivial one.)
inline std::vector<Complex> stabilizer_spectrum(const SiegelStabilizerElement& el,
                                                const Tolerances& tol = Tolerances{}) {
  std::vector<Complex> out;
  out.push_back(el.lambda);
  out.push_back(el.mu());
  if (el.U.rows() > 0) {
    EigenResult u = eig(el.U, tol);
    out.insert(out.end(), u.eigenvalues.begin(), u.eigenvalues.end());
  }
  return out;
}

/// Affine action on Sigma: conj(lambda) [[lambda, <.,U^{-1}a'>],[0,U]] x + (s,a').
inline CVector affine_action(const SiegelStabilizerElement& el, const CVector& x,
                             const Tolerances& tol = Tolerances{}) {
  const std::size_t n = el.n();
  if (x.size() != n) throw Error(Err::DimensionMismatch, "affine_action: point dimension");
  if (siegel_defect(x) < -tol.boundary)
    throw Error(Err::OutsideDomain, "affine_action: point outside Sigma");
  Complex lbar = std::conj(el.lambda);

  CVector xp(n - 1);
  for (std::size_t i = 1; i < n; ++i) xp[i - 1] = x[i];
  CVector uxp = el.U * xp;

  CVector out(n);
  out[0] = std::norm(el.lambda) * x[0] + lbar * dot(uxp, el.a_prime) + el.s;
  for (std::size_t i = 1; i < n; ++i) out[i] = lbar * uxp[i - 1] + el.a_prime[i - 1];
  return out;
}

}  // namespace cxhyp
