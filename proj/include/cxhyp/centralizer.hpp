#pragma once

// Centralizer membership: the structural block conditions characterizing the
// centralizers of elliptic, hyperbolic and Heisenberg-translation elements,
// each kept side by side with the direct numerical commutation oracle.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cxhyp/classify.hpp"
#include "cxhyp/core.hpp"
#include "cxhyp/heisenberg.hpp"
#include "cxhyp/linalg.hpp"
#include "cxhyp/model.hpp"
#include "cxhyp/siegel.hpp"

namespace cxhyp {

struct CentralizerEvidence {
  double commutator_norm = 0.0;  // ||st - ts|| / (||s|| ||t||)
  std::vector<std::pair<std::string, bool>> structural_checks;
  bool member = false;

  bool check(const std::string& name) const {
    for (const auto& [k, v] : structural_checks)
      if (k == name) return v;
    return false;
  }
};

inline double commutator_norm(const IsometryMatrix& s, const IsometryMatrix& t) {
  if (s.model != t.model) throw Error(Err::FormMismatch, "commutes: different forms");
  if (s.dim() != t.dim()) throw Error(Err::DimensionMismatch, "commutes: dimensions");
  return (s.m * t.m - t.m * s.m).frobenius() /
         std::max(s.m.frobenius() * t.m.frobenius(), 1e-300);
}

inline CentralizerEvidence commutes(const IsometryMatrix& s, const IsometryMatrix& t,
                                    const Tolerances& tol = Tolerances{}) {
  CentralizerEvidence ev;
  ev.commutator_norm = commutator_norm(s, t);
  ev.member = ev.commutator_norm <= tol.comm;
  return ev;
}

namespace detail {

constexpr double kStructuralTol = 1e-7;

/// Relative distance of s(span) from span, for an orthonormal basis.
inline double subspace_escape(const CMatrix& s, const std::vector<CVector>& basis) {
  double worst = 0.0;
  for (const auto& b : basis) {
    CVector sb = s * b;
    CVector proj(sb.size());
    for (const auto& u : basis) proj += dot(sb, u) * u;
    double nn = sb.norm();
    if (nn == 0.0) return 1.0;
    worst = std::max(worst, (sb - proj).norm() / nn);
  }
  return worst;
}

/// Coordinates of s restricted to an orthonormal basis of an s-invariant
/// subspace.
inline CMatrix euclid_restriction(const CMatrix& s, const std::vector<CVector>& basis) {
  CMatrix out(basis.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    CVector sb = s * basis[j];
    for (std::size_t i = 0; i < basis.size(); ++i) out(i, j) = dot(sb, basis[i]);
  }
  return out;
}

inline double block_commutator(const CMatrix& a, const CMatrix& b) {
  if (a.rows() == 0) return 0.0;
  return (a * b - b * a).frobenius() / std::max(a.frobenius() * b.frobenius(), 1e-300);
}

/// Eigenvalue cluster of t whose eigenspace contains a time-like direction.
inline EigenCluster timelike_cluster(const IsometryMatrix& t, const Tolerances& tol) {
  double scale = std::max(1.0, t.m.frobenius());
  auto clusters = eigen_clusters(t.m, tol.circle * scale, 10.0 * tol.circle * scale, tol);
  for (auto& c : clusters) {
    auto dirs = causal_directions(t.model, c.eigenspace_basis, tol);
    for (const auto& d : dirs)
      if (d.q < -tol.causal) return c;
  }
  throw Error(Err::NotElliptic, "timelike_cluster: no time-like eigenspace");
}

struct LightLikePair {
  CVector v_plus;  // unit eigenvector, |eigenvalue| > 1
  CVector v_minus;
  Complex lam_plus, lam_minus;
};

inline LightLikePair lightlike_pair(const IsometryMatrix& t, const Tolerances& tol) {
  double scale = std::max(1.0, t.m.frobenius());
  auto clusters = eigen_clusters(t.m, tol.circle * scale, 10.0 * tol.circle * scale, tol);
  const EigenCluster* top = nullptr;
  const EigenCluster* bottom = nullptr;
  for (const auto& c : clusters) {
    if (!top || std::abs(c.lambda) > std::abs(top->lambda)) top = &c;
    if (!bottom || std::abs(c.lambda) < std::abs(bottom->lambda)) bottom = &c;
  }
  if (!top || !bottom || std::abs(top->lambda) <= 1.0 + tol.circle * scale)
    throw Error(Err::NotHyperbolic, "lightlike_pair: spectrum inside the unit circle");
  return {top->eigenspace_basis.at(0), bottom->eigenspace_basis.at(0), top->lambda,
          bottom->lambda};
}

}  // namespace detail

/// Z(T) = G_M x Z(T|M-dagger) for elliptic T with time-like eigenspace M:
/// s must preserve M and M-dagger, restrict to a form-isometry of M, and
/// commute with t on M-dagger.
inline CentralizerEvidence elliptic_centralizer_test(const IsometryMatrix& s,
                                                     const IsometryMatrix& t,
                                                     const Tolerances& tol = Tolerances{}) {
  if (s.model != t.model) throw Error(Err::FormMismatch, "elliptic_centralizer_test");
  EigenCluster mc = detail::timelike_cluster(t, tol);
  const std::vector<CVector>& m_basis = mc.eigenspace_basis;
  auto form = [&](const CVector& a, const CVector& b) { return form_value(t.model, a, b); };

  CentralizerEvidence ev;
  ev.commutator_norm = commutator_norm(s, t);

  double escape_m = detail::subspace_escape(s.m, m_basis);
  bool preserves_m = escape_m <= detail::kStructuralTol;
  ev.structural_checks.emplace_back("preserves-M", preserves_m);

  auto dagger = orthonormalize(detail::form_complement(t.model, m_basis, t.dim()));
  double escape_d = detail::subspace_escape(s.m, dagger);
  bool preserves_d = escape_d <= detail::kStructuralTol;
  ev.structural_checks.emplace_back("preserves-M-dagger", preserves_d);

  bool in_gm = false;
  if (preserves_m) {
    CMatrix sm = detail::euclid_restriction(s.m, m_basis);
    CMatrix q = gram_quadratic(form, m_basis);
    double denom = std::max(1.0, q.frobenius() * sm.frobenius() * sm.frobenius());
    in_gm = (adjoint(sm) * q * sm - q).frobenius() / denom <= detail::kStructuralTol;
  }
  ev.structural_checks.emplace_back("member-of-G_M", in_gm);

  bool commute_dagger = false;
  if (preserves_d) {
    CMatrix sd = detail::euclid_restriction(s.m, dagger);
    CMatrix td = detail::euclid_restriction(t.m, dagger);
    commute_dagger = detail::block_commutator(sd, td) <= tol.comm * 10.0;
  }
  ev.structural_checks.emplace_back("commutes-on-M-dagger", commute_dagger);

  ev.member = preserves_m && preserves_d && in_gm && commute_dagger;
  return ev;
}

/// Z(T) for hyperbolic T: s fixes each light-like eigenline with eigenvalue
/// pair (alpha, beta) obeying alpha conj(beta) = 1 and commutes on M-dagger.
inline CentralizerEvidence hyperbolic_centralizer_test(const IsometryMatrix& s,
                                                       const IsometryMatrix& t,
                                                       const Tolerances& tol = Tolerances{}) {
  if (s.model != t.model) throw Error(Err::FormMismatch, "hyperbolic_centralizer_test");
  detail::LightLikePair lines = detail::lightlike_pair(t, tol);

  CentralizerEvidence ev;
  ev.commutator_norm = commutator_norm(s, t);

  auto line_check = [&](const CVector& v, Complex& scale_out) {
    CVector sv = s.m * v;
    scale_out = dot(sv, v);
    double nn = sv.norm();
    if (nn == 0.0) return false;
    return (sv - scale_out * v).norm() / nn <= detail::kStructuralTol;
  };
  Complex alpha, beta;
  bool line1 = line_check(lines.v_plus, alpha);
  bool line2 = line_check(lines.v_minus, beta);
  ev.structural_checks.emplace_back("preserves-eigenline-plus", line1);
  ev.structural_checks.emplace_back("preserves-eigenline-minus", line2);

  bool pairing = line1 && line2 &&
                 std::abs(alpha * std::conj(beta) - Complex(1.0, 0.0)) <=
                     detail::kStructuralTol * (1.0 + std::abs(alpha) * std::abs(beta));
  ev.structural_checks.emplace_back("alpha-beta-bar-one", pairing);

  std::vector<CVector> m_basis = {lines.v_plus, lines.v_minus};
  auto dagger = orthonormalize(detail::form_complement(t.model, m_basis, t.dim()));
  double escape_d = detail::subspace_escape(s.m, dagger);
  bool preserves_d = escape_d <= detail::kStructuralTol;
  ev.structural_checks.emplace_back("preserves-M-dagger", preserves_d);

  bool commute_dagger = false;
  if (preserves_d) {
    CMatrix sd = detail::euclid_restriction(s.m, dagger);
    CMatrix td = detail::euclid_restriction(t.m, dagger);
    commute_dagger = detail::block_commutator(sd, td) <= tol.comm * 10.0;
  }
  ev.structural_checks.emplace_back("commutes-on-M-dagger", commute_dagger);

  ev.member = line1 && line2 && pairing && preserves_d && commute_dagger;
  return ev;
}

/// Z of a Heisenberg translation inside the stabilizer of infinity: any
/// commuting element lies in G-hat-infinity; vertical case requires s to be
/// non-hyperbolic there (lambda' = mu'), non-vertical case requires
/// U(a') = lambda' a' and real <b',a'>.
inline CentralizerEvidence heisenberg_centralizer_test(const IsometryMatrix& s,
                                                       const HeisenbergTranslation& h,
                                                       const Tolerances& tol = Tolerances{}) {
  if (s.model != Model::Siegel)
    throw Error(Err::FormMismatch, "heisenberg_centralizer_test: expects Siegel member");
  IsometryMatrix th = translation_matrix(h, tol);
  CentralizerEvidence ev;
  ev.commutator_norm = commutator_norm(s, th);

  SiegelStabilizerElement el;
  bool in_stab = true;
  try {
    el = stabilizer_parse(s, tol);
  } catch (const Error&) {
    in_stab = false;
  }
  ev.structural_checks.emplace_back("in-stabilizer-of-infinity", in_stab);
  if (!in_stab) {
    ev.member = false;
    return ev;
  }

  if (h.vertical(tol)) {
    bool nonhyp = std::abs(el.lambda - el.mu()) <=
                  detail::kStructuralTol * (1.0 + std::abs(el.lambda));
    ev.structural_checks.emplace_back("non-hyperbolic-in-stabilizer", nonhyp);
    ev.member = nonhyp;
    return ev;
  }

  CVector ua = el.U * h.a_prime;
  bool eigen_cond =
      (ua - el.lambda * h.a_prime).norm() <= detail::kStructuralTol * h.a_prime.norm();
  ev.structural_checks.emplace_back("U-fixes-a-prime-direction", eigen_cond);
  Complex pairing = dot(el.a_prime, h.a_prime);
  bool real_pairing = std::abs(pairing.imag()) <=
                      tol.iso * std::max(1.0, el.a_prime.norm() * h.a_prime.norm()) +
                          detail::kStructuralTol * 0.0;
  ev.structural_checks.emplace_back("real-horizontal-pairing", real_pairing);
  ev.member = eigen_cond && real_pairing;
  return ev;
}

/// Commuting hyperbolic members share their boundary fixed pair.
inline bool shared_fixed_points(const IsometryMatrix& t1, const IsometryMatrix& t2,
                                const Tolerances& tol = Tolerances{}) {
  if (classify(t1, tol).kind != ClassKind::Hyperbolic ||
      classify(t2, tol).kind != ClassKind::Hyperbolic)
    throw Error(Err::NotHyperbolic, "shared_fixed_points: both must be hyperbolic");
  if (commutator_norm(t1, t2) > tol.comm)
    throw Error(Err::NotCommuting, "shared_fixed_points: elements do not commute");

  FixedPointReport r1 = fixed_points(t1, tol);
  FixedPointReport r2 = fixed_points(t2, tol);
  if (r1.boundary_points.size() != 2 || r2.boundary_points.size() != 2) return false;
  auto close = [&](const CVector& a, const CVector& b) {
    return (a - b).norm() <= tol.point * 10.0;
  };
  const CVector& a0 = r1.boundary_points[0].point;
  const CVector& a1 = r1.boundary_points[1].point;
  const CVector& b0 = r2.boundary_points[0].point;
  const CVector& b1 = r2.boundary_points[1].point;
  return (close(a0, b0) && close(a1, b1)) || (close(a0, b1) && close(a1, b0));
}

/// The S^1 x R parametrization of Z(T|M) for hyperbolic t: the member acting
/// as (r e^{i theta}, r^{-1} e^{i theta}) on the stored eigenlines and as the
/// identity on M-dagger.
inline IsometryMatrix centralizer_element_from(double r, double theta,
                                               const IsometryMatrix& t,
                                               const Tolerances& tol = Tolerances{}) {
  if (r <= 0.0) throw Error(Err::OutsideDomain, "centralizer_element_from: r > 0 required");
  detail::LightLikePair lines = detail::lightlike_pair(t, tol);
  std::vector<CVector> dagger =
      orthonormalize(detail::form_complement(t.model, {lines.v_plus, lines.v_minus}, t.dim()));

  const std::size_t d = t.dim();
  CMatrix b(d, d);
  b.set_column(0, lines.v_plus);
  b.set_column(1, lines.v_minus);
  for (std::size_t j = 0; j < dagger.size(); ++j) b.set_column(2 + j, dagger[j]);
  std::vector<Complex> diag(d, Complex(1.0, 0.0));
  diag[0] = std::polar(r, theta);
  diag[1] = std::polar(1.0 / r, theta);
  CMatrix s = b * CMatrix::diagonal(diag) * inverse_matrix(b, tol);
  return IsometryMatrix::from(std::move(s), t.model, tol);
}

}  // namespace cxhyp
