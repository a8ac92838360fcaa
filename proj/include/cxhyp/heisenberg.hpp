#pragma once

// Heisenberg translations (lambda, a', s): construction, action on the
// Siegel domain, the vertical / non-vertical conjugacy decision with an
// explicit verified conjugator, the K (+) K-dagger decomposition, and the
// isotropy criterion for commutation.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cxhyp/classify.hpp"
#include "cxhyp/core.hpp"
#include "cxhyp/linalg.hpp"
#include "cxhyp/model.hpp"
#include "cxhyp/siegel.hpp"

namespace cxhyp {

/// Parabolic stabilizer element with singleton spectrum: lambda on the unit
/// circle, s != 0, Re s = ||a'||^2 / 2. Vertical when a' = 0.
struct HeisenbergTranslation {
  Complex lambda{1.0, 0.0};
  CVector a_prime;  // dimension n-1
  Complex s{0.0, 1.0};

  std::size_t n() const { return a_prime.size() + 1; }
  bool vertical(const Tolerances& tol = Tolerances{}) const {
    return a_prime.norm() <= tol.member;
  }
};

inline void validate_translation(const HeisenbergTranslation& h,
                                 const Tolerances& tol = Tolerances{}) {
  if (std::abs(std::abs(h.lambda) - 1.0) > tol.circle)
    throw Error(Err::NotStabilizer, "translation: |lambda| must be 1");
  if (std::abs(h.s) <= tol.member)
    throw Error(Err::NotStabilizer, "translation: s must be nonzero");
  double an = h.a_prime.norm();
  if (std::abs(h.s.real() - 0.5 * an * an) > tol.member * (1.0 + an * an))
    throw Error(Err::NotStabilizer, "translation: Re s != ||a'||^2 / 2");
}

inline SiegelStabilizerElement to_stabilizer_element(const HeisenbergTranslation& h) {
  const std::size_t k = h.a_prime.size();
  return {h.lambda, h.lambda * CMatrix::identity(k), h.a_prime, h.s};
}

/// lambda [[1, <.,a'>, s], [0, I, a'], [0, 0, 1]]
inline IsometryMatrix translation_matrix(const HeisenbergTranslation& h,
                                         const Tolerances& tol = Tolerances{}) {
  validate_translation(h, tol);
  return stabilizer_build(to_stabilizer_element(h), tol);
}

/// T_u(x) = (<x,e> + <u,e> + <x',u'>) e + (x' + u') with u = s e + a'.
inline CVector translate_point(const HeisenbergTranslation& h, const CVector& x,
                               const Tolerances& tol = Tolerances{}) {
  validate_translation(h, tol);
  const std::size_t n = h.n();
  if (x.size() != n) throw Error(Err::DimensionMismatch, "translate_point: dimension");
  if (siegel_defect(x) < -tol.boundary)
    throw Error(Err::OutsideDomain, "translate_point: point outside Sigma");
  CVector out(n);
  Complex horiz(0.0, 0.0);
  for (std::size_t i = 1; i < n; ++i) horiz += x[i] * std::conj(h.a_prime[i - 1]);
  out[0] = x[0] + h.s + horiz;
  for (std::size_t i = 1; i < n; ++i) out[i] = x[i] + h.a_prime[i - 1];
  return out;
}

struct ConjugacyVerdict {
  bool conjugate = false;
  std::optional<IsometryMatrix> conjugator;
  std::string reason;
};

namespace detail {

inline double conjugation_residual(const IsometryMatrix& r, const IsometryMatrix& t1,
                                   const IsometryMatrix& t2, const Tolerances& tol) {
  IsometryMatrix moved = conjugate(r, t1, tol);
  return (moved.m - t2.m).frobenius() / std::max(t2.m.frobenius(), 1e-300);
}

}  // namespace detail

/// Conjugacy of two Heisenberg translations. Equal spectra are necessary;
/// then non-vertical pairs are always conjugate (conjugator assembled from
/// mu' = ||a'||/||b'||, a unitary completion sending a' to mu' b', and the
/// one-parameter c' = i kappa b' ansatz), vertical pairs are conjugate
/// exactly when Im s and Im t share a sign (dilation conjugator), and mixed
/// pairs never are. Any returned conjugator has been verified.
inline ConjugacyVerdict conjugacy_decide(const HeisenbergTranslation& h1,
                                         const HeisenbergTranslation& h2,
                                         const Tolerances& tol = Tolerances{}) {
  validate_translation(h1, tol);
  validate_translation(h2, tol);
  if (h1.n() != h2.n())
    throw Error(Err::DimensionMismatch, "conjugacy_decide: dimension mismatch");
  if (std::abs(h1.lambda - h2.lambda) > tol.member)
    return {false, std::nullopt, "spectra differ"};

  const std::size_t k = h1.a_prime.size();
  const bool v1 = h1.vertical(tol), v2 = h2.vertical(tol);
  IsometryMatrix m1 = translation_matrix(h1, tol);
  IsometryMatrix m2 = translation_matrix(h2, tol);

  auto verified = [&](const SiegelStabilizerElement& el) -> ConjugacyVerdict {
    IsometryMatrix r = stabilizer_build(el, tol);
    double res = detail::conjugation_residual(r, m1, m2, tol);
    if (res > 1e-8)
      throw Error(Err::GenerationFailed,
                  "conjugacy_decide: conjugator failed verification, residual " +
                      std::to_string(res));
    return {true, std::move(r), ""};
  };

  if (v1 != v2) return {false, std::nullopt, "vertical and non-vertical are never conjugate"};

  if (v1) {
    double is = h1.s.imag(), it = h2.s.imag();
    if (is * it <= 0.0)
      return {false, std::nullopt, "vertical translations with opposite Im s classes"};
    double lp = std::sqrt(it / is);
    SiegelStabilizerElement dil{Complex(lp, 0.0), CMatrix::identity(k), CVector(k),
                                Complex(0.0, 0.0)};
    return verified(dil);
  }

  double na = h1.a_prime.norm(), nb = h2.a_prime.norm();
  double lp = nb / na;  // and mu' = na / nb = 1 / lambda'
  CMatrix u = onb_from(h2.a_prime) * adjoint(onb_from(h1.a_prime));  // U(a') = mu' b'
  double kappa = (lp * lp * h1.s - h2.s).imag() / (2.0 * nb * nb);
  CVector cp = Complex(0.0, kappa) * h2.a_prime;
  double cn = cp.norm();
  SiegelStabilizerElement el{Complex(lp, 0.0), u, cp, Complex(0.5 * cn * cn, 0.0)};
  return verified(el);
}

struct KDecomposition {
  std::vector<CVector> k_basis;  // 2 or 3 vectors spanning K
  std::string k_dagger_note;     // description of the annihilator K-dagger
  int minpoly_degree = 2;        // 2 or 3; 3 iff a' != 0
};

/// K = span{(e,0), (a',0), (0,1)} (two vectors when a' = 0); the restriction
/// to K-dagger is lambda I and the minimal polynomial degree follows from the
/// direct nilpotency test of (T|K - lambda I).
inline KDecomposition k_decompose(const HeisenbergTranslation& h,
                                  const Tolerances& tol = Tolerances{}) {
  validate_translation(h, tol);
  const std::size_t n = h.n();
  KDecomposition out;
  CVector e(n + 1);
  e[0] = 1.0;
  out.k_basis.push_back(e);
  const bool vertical = h.vertical(tol);
  if (!vertical) {
    CVector ap(n + 1);
    for (std::size_t i = 1; i < n; ++i) ap[i] = h.a_prime[i - 1];
    out.k_basis.push_back(std::move(ap));
  }
  CVector c(n + 1);
  c[n] = 1.0;
  out.k_basis.push_back(std::move(c));
  out.k_dagger_note = vertical ? "{(x',0) : x' in <e>^perp}"
                               : "{(x',0) : <x',a'> = 0}";

  // Restriction of T - lambda I to K in the k_basis coordinates.
  const std::size_t d = out.k_basis.size();
  double an = h.a_prime.norm();
  CMatrix nil(d, d);
  if (vertical) {
    nil(0, 1) = h.lambda * h.s;
  } else {
    nil(0, 1) = h.lambda * an * an;
    nil(0, 2) = h.lambda * h.s;
    nil(1, 2) = h.lambda;
  }
  CMatrix nil2 = nil * nil;
  out.minpoly_degree = (nil2.frobenius() > tol.member) ? 3 : 2;
  return out;
}

/// Kernel of (T|K - lambda I) as coefficient vectors in k_basis coordinates;
/// generated by (e,0) for every translation.
inline std::vector<CVector> k_restriction_kernel(const HeisenbergTranslation& h,
                                                 const Tolerances& tol = Tolerances{}) {
  KDecomposition kd = k_decompose(h, tol);
  const std::size_t d = kd.k_basis.size();
  double an = h.a_prime.norm();
  CMatrix nil(d, d);
  if (d == 2) {
    nil(0, 1) = h.lambda * h.s;
  } else {
    nil(0, 1) = h.lambda * an * an;
    nil(0, 2) = h.lambda * h.s;
    nil(1, 2) = h.lambda;
  }
  return kernel_basis(nil, tol.member * std::max(1.0, nil.frobenius()));
}

/// Isotropy: Im <b',a'> = 0 up to iso_tol; equivalent to commutation of the
/// built matrices.
inline bool isotropic(const HeisenbergTranslation& h1, const HeisenbergTranslation& h2,
                      const Tolerances& tol = Tolerances{}) {
  if (h1.a_prime.size() != h2.a_prime.size())
    throw Error(Err::DimensionMismatch, "isotropic: dimension mismatch");
  double na = h1.a_prime.norm(), nb = h2.a_prime.norm();
  if (na == 0.0 || nb == 0.0) return true;
  Complex prod = dot(h2.a_prime, h1.a_prime);
  return std::abs(prod.imag()) <= tol.iso * na * nb;
}

}  // namespace cxhyp
