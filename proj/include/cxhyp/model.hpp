#pragma once

// The two Hermitian forms on H (+) C and the membership machinery shared by
// the ball and Siegel models. Coordinates are fixed once: slot 0 is the
// distinguished direction e in H, slots 1..n-1 the rest of H, slot n the C
// summand. With that convention both signature matrices are literal.

#include <cmath>
#include <string>

#include "cxhyp/core.hpp"
#include "cxhyp/linalg.hpp"

namespace cxhyp {

enum class Model { Ball, Siegel };

inline const char* model_name(Model m) { return m == Model::Ball ? "ball" : "siegel"; }

/// A' = diag(1,...,1,-1) resp. A^ = [[0,0,-1],[0,I,0],[-1,0,0]]. Both are
/// self-adjoint involutions.
inline CMatrix form_matrix(Model model, std::size_t n) {
  CMatrix f(n + 1, n + 1);
  if (model == Model::Ball) {
    for (std::size_t i = 0; i < n; ++i) f(i, i) = 1.0;
    f(n, n) = -1.0;
  } else {
    for (std::size_t i = 1; i < n; ++i) f(i, i) = 1.0;
    f(0, n) = -1.0;
    f(n, 0) = -1.0;
  }
  return f;
}

/// A((x,z),(y,w)) = <x,y> - z conj(w)
inline Complex form_ball(const CVector& u, const CVector& v) {
  if (u.size() != v.size() || u.size() < 2)
    throw Error(Err::DimensionMismatch, "form_ball: dimension mismatch");
  const std::size_t n = u.size() - 1;
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) s += u[i] * std::conj(v[i]);
  return s - u[n] * std::conj(v[n]);
}

/// A^((x,z),(y,w)) = -z conj(<y,e>) - <x,e> conj(w) + <x',y'>
inline Complex form_siegel(const CVector& u, const CVector& v) {
  if (u.size() != v.size() || u.size() < 2)
    throw Error(Err::DimensionMismatch, "form_siegel: dimension mismatch");
  const std::size_t n = u.size() - 1;
  Complex s = -u[n] * std::conj(v[0]) - u[0] * std::conj(v[n]);
  for (std::size_t i = 1; i < n; ++i) s += u[i] * std::conj(v[i]);
  return s;
}

inline Complex form_value(Model model, const CVector& u, const CVector& v) {
  return model == Model::Ball ? form_ball(u, v) : form_siegel(u, v);
}

inline double quad_value(Model model, const CVector& u) {
  return form_value(model, u, u).real();
}

enum class Causal { TimeLike, LightLike, SpaceLike };

struct CausalClass {
  Causal tag;
  double q_value;
};

/// Bands |Q| <= causal_tol * ||u||^2 are reported LightLike, making the
/// classifier total on nonzero vectors.
inline CausalClass causal_class(Model model, const CVector& u,
                                const Tolerances& tol = Tolerances{}) {
  double nn = u.norm();
  if (nn == 0.0) throw Error(Err::ZeroVector, "causal_class: zero vector");
  double q = quad_value(model, u);
  double band = tol.causal * nn * nn;
  if (q < -band) return {Causal::TimeLike, q};
  if (q > band) return {Causal::SpaceLike, q};
  return {Causal::LightLike, q};
}

/// ||m^H F m - F||_F; the caller compares against member_tol.
inline double membership_residual(const CMatrix& m, Model model) {
  if (!m.square() || m.rows() < 2)
    throw Error(Err::DimensionMismatch, "membership_residual: bad shape");
  CMatrix f = form_matrix(model, m.rows() - 1);
  return (adjoint(m) * f * m - f).frobenius();
}

/// An element of G (or G^): the matrix together with its cached membership
/// residual. Construction through `from` enforces the membership invariant.
struct IsometryMatrix {
  CMatrix m;
  Model model = Model::Ball;
  double residual = 0.0;

  static IsometryMatrix from(CMatrix mat, Model model,
                             const Tolerances& tol = Tolerances{}) {
    double r = membership_residual(mat, model);
    double f = mat.frobenius();
    if (r > tol.member * (1.0 + f * f))
      throw Error(Err::NotMember,
                  "IsometryMatrix: residual " + std::to_string(r) + " exceeds bound");
    return {std::move(mat), model, r};
  }

  std::size_t dim() const { return m.rows(); }   // n + 1
  std::size_t n() const { return m.rows() - 1; }
};

/// T^{-1} = F T^H F (both form matrices square to the identity).
inline IsometryMatrix inverse(const IsometryMatrix& t, const Tolerances& tol = Tolerances{}) {
  CMatrix f = form_matrix(t.model, t.n());
  return IsometryMatrix::from(f * adjoint(t.m) * f, t.model, tol);
}

inline IsometryMatrix compose(const IsometryMatrix& a, const IsometryMatrix& b,
                              const Tolerances& tol = Tolerances{}) {
  if (a.model != b.model)
    throw Error(Err::FormMismatch, "compose: elements of different forms");
  if (a.dim() != b.dim())
    throw Error(Err::DimensionMismatch, "compose: dimension mismatch");
  return IsometryMatrix::from(a.m * b.m, a.model, tol);
}

inline IsometryMatrix conjugate(const IsometryMatrix& g, const IsometryMatrix& t,
                                const Tolerances& tol = Tolerances{}) {
  return compose(compose(g, t, tol), inverse(g, tol), tol);
}

}  // namespace cxhyp
