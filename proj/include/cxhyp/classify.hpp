#pragma once

// Fixed points and dynamical classification. Eigenvalue clusters are analyzed
// through the Gram matrix of the ambient Hermitian form restricted to the
// cluster eigenspace: a negative Gram eigenvalue is a time-like fixed
// direction (interior point), a null one a light-like direction (boundary
// point). Classification follows the spectral-radius / time-like-witness
// decision procedure, with Ambiguous as a first-class outcome.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cxhyp/ball.hpp"
#include "cxhyp/core.hpp"
#include "cxhyp/linalg.hpp"
#include "cxhyp/model.hpp"

namespace cxhyp {

enum class DynamicalType { Elliptic, Parabolic, Hyperbolic };

enum class ClassKind { EllipticRegular, EllipticBoundary, Parabolic, Hyperbolic, Ambiguous };

inline const char* kind_name(ClassKind k) {
  switch (k) {
    case ClassKind::EllipticRegular: return "elliptic regular";
    case ClassKind::EllipticBoundary: return "elliptic boundary";
    case ClassKind::Parabolic: return "parabolic";
    case ClassKind::Hyperbolic: return "hyperbolic";
    case ClassKind::Ambiguous: return "ambiguous";
  }
  return "?";
}

inline bool is_elliptic(ClassKind k) {
  return k == ClassKind::EllipticRegular || k == ClassKind::EllipticBoundary;
}

// ---------------------------------------------------------------------------
// Eigenvalue clusters with invariant-subspace and eigenspace bases.

struct EigenCluster {
  Complex lambda;                          // cluster mean
  std::vector<Complex> members;            // the clustered eigenvalues
  std::vector<CVector> invariant_basis;    // orthonormal
  std::vector<CVector> eigenspace_basis;   // orthonormal, spans ker(T - lambda) inside
};

/// Groups the spectrum at the given width and extracts, per cluster, the
/// joint invariant subspace (leading Schur vectors after reordering) and the
/// geometric eigenspace inside it (kernel of the restricted block at
/// threshold kernel_tau).
inline std::vector<EigenCluster> eigen_clusters(const CMatrix& m, double width,
                                                double kernel_tau,
                                                const Tolerances& tol = Tolerances{}) {
  SchurResult s = schur_decompose(m, tol);
  const std::size_t n = m.rows();
  std::vector<Complex> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = s.t(i, i);
  double scale = std::max(m.frobenius(), 1e-300);

  std::vector<EigenCluster> out;
  for (const auto& g : cluster_indices(diag, width)) {
    EigenCluster c;
    Complex mean(0.0, 0.0);
    for (std::size_t idx : g) {
      c.members.push_back(diag[idx]);
      mean += diag[idx];
    }
    mean /= static_cast<double>(g.size());
    c.lambda = mean;
    if (g.size() == 1) {
      c.invariant_basis = {detail::schur_eigenvector(s.t, s.z, g[0], scale)};
      c.eigenspace_basis = c.invariant_basis;
    } else {
      std::vector<bool> selected(n, false);
      for (std::size_t idx : g) selected[idx] = true;
      c.invariant_basis = invariant_from_schur(SchurResult{s.t, s.z}, std::move(selected));
      const std::size_t k = g.size();
      CMatrix restr(k, k);  // restriction of m to the invariant subspace
      for (std::size_t j = 0; j < k; ++j) {
        CVector mv = m * c.invariant_basis[j];
        for (std::size_t i = 0; i < k; ++i) restr(i, j) = dot(mv, c.invariant_basis[i]);
      }
      for (std::size_t i = 0; i < k; ++i) restr(i, i) -= mean;
      double tau = kernel_tau;
      std::vector<CVector> ker = kernel_basis(restr, tau);
      while (ker.empty() && tau < restr.frobenius() + 1.0) {
        tau *= 10.0;
        ker = kernel_basis(restr, tau);
      }
      if (ker.empty()) ker.push_back(normalized(CVector{Complex(1.0, 0.0)}));
      for (const auto& coeff : ker) {
        CVector v(m.rows());
        for (std::size_t j = 0; j < coeff.size() && j < k; ++j)
          v += coeff[j] * c.invariant_basis[j];
        c.eigenspace_basis.push_back(v);
      }
      c.eigenspace_basis = orthonormalize(c.eigenspace_basis);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Causal directions inside cluster eigenspaces.

namespace detail {

struct CausalDirection {
  double q;     // value of the quadratic form on the unit direction
  CVector dir;  // dimension n+1, unit Euclidean norm
};

/// Eigendecomposition of the coefficient Gram matrix of the eigenspace:
/// each returned direction is a unit vector in the eigenspace with Q = q.
inline std::vector<CausalDirection> causal_directions(Model model,
                                                      const std::vector<CVector>& basis,
                                                      const Tolerances& tol) {
  std::vector<CausalDirection> out;
  if (basis.empty()) return out;
  auto form = [&](const CVector& a, const CVector& b) { return form_value(model, a, b); };
  CMatrix q = gram_quadratic(form, basis);
  EigenResult eq = eig(q, tol);
  for (std::size_t i = 0; i < eq.eigenvalues.size(); ++i) {
    CVector dir(basis.front().size());
    for (std::size_t j = 0; j < basis.size(); ++j) dir += eq.eigenvectors[i][j] * basis[j];
    out.push_back({eq.eigenvalues[i].real(), std::move(dir)});
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fixed points.

struct FixedPoint {
  CVector point;       // H-coordinates (dimension n)
  Complex eigenvalue;  // eigenvalue of the fixed line
};

struct FixedPointReport {
  std::vector<FixedPoint> interior_points;
  std::vector<FixedPoint> boundary_points;
  bool all_of_space = false;   // central element: every point fixed
  bool fixes_infinity = false; // Siegel model: the point at infinity is fixed
  Complex infinity_eigenvalue{0.0, 0.0};
};

namespace detail {

inline void bucket_direction(FixedPointReport& rep, Model model, const CausalDirection& cd,
                             Complex lambda, const Tolerances& tol) {
  const std::size_t n = cd.dir.size() - 1;
  Complex z = cd.dir[n];
  double band = tol.causal;
  if (cd.q < -band) {
    // time-like: z is bounded away from zero by Q < 0
    CVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = cd.dir[i] / z;
    rep.interior_points.push_back({std::move(x), lambda});
  } else if (cd.q <= band) {
    if (std::abs(z) > 1e-7) {
      CVector x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = cd.dir[i] / z;
      rep.boundary_points.push_back({std::move(x), lambda});
    } else if (model == Model::Siegel) {
      // light-like with vanishing C-part is proportional to (e,0)
      rep.fixes_infinity = true;
      rep.infinity_eigenvalue = lambda;
    }
  }
}

inline bool is_central(const CMatrix& m, double tol_abs) {
  CMatrix d = m;
  Complex c = m(0, 0);
  for (std::size_t i = 0; i < m.rows(); ++i) d(i, i) -= c;
  return d.frobenius() <= tol_abs;
}

}  // namespace detail

/// Projective fixed points of a member, bucketed interior / boundary via the
/// causal type of the fixed eigendirections. Central elements fix all of the
/// space; the report then carries the canonical interior witness.
inline FixedPointReport fixed_points(const IsometryMatrix& t,
                                     const Tolerances& tol = Tolerances{}) {
  const std::size_t n = t.n();
  double scale = std::max(1.0, t.m.frobenius());
  FixedPointReport rep;

  if (detail::is_central(t.m, tol.point * scale)) {
    rep.all_of_space = true;
    Complex lambda = t.m(0, 0);
    if (t.model == Model::Ball) {
      rep.interior_points.push_back({CVector(n), lambda});
    } else {
      CVector e(n);
      e[0] = 1.0;
      rep.interior_points.push_back({std::move(e), lambda});
      rep.fixes_infinity = true;
      rep.infinity_eigenvalue = lambda;
    }
    return rep;
  }

  double width = tol.circle * scale;
  auto clusters = eigen_clusters(t.m, width, 10.0 * width, tol);
  for (const auto& c : clusters) {
    auto dirs = detail::causal_directions(t.model, c.eigenspace_basis, tol);
    for (const auto& cd : dirs) detail::bucket_direction(rep, t.model, cd, c.lambda, tol);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Classification.

struct ClassificationReport {
  ClassKind kind = ClassKind::Ambiguous;
  double spectral_radius = 0.0;
  std::optional<CVector> timelike_witness;  // unit vector in H (+) C
  Complex timelike_eigenvalue{0.0, 0.0};
  std::size_t timelike_multiplicity = 0;    // geometric multiplicity of that eigenvalue
  FixedPointReport evidence;
};

/// Decision procedure: spectral radius beyond the unit-circle band means
/// hyperbolic; otherwise a time-like direction in some eigenvalue cluster
/// means elliptic (regular iff the eigenspace is one-dimensional); otherwise
/// parabolic. Contradictory or borderline evidence yields Ambiguous.
inline ClassificationReport classify(const IsometryMatrix& t,
                                     const Tolerances& tol = Tolerances{}) {
  ClassificationReport rep;
  double scale = std::max(1.0, t.m.frobenius());
  double width = tol.circle * scale;
  auto clusters = eigen_clusters(t.m, width, 10.0 * width, tol);

  double rho = 0.0, rho_min = std::numeric_limits<double>::infinity();
  for (const auto& c : clusters)
    for (const auto& l : c.members) {
      rho = std::max(rho, std::abs(l));
      rho_min = std::min(rho_min, std::abs(l));
    }
  rep.spectral_radius = rho;

  bool central = detail::is_central(t.m, tol.point * scale);
  for (const auto& c : clusters) {
    auto dirs = detail::causal_directions(t.model, c.eigenspace_basis, tol);
    for (const auto& cd : dirs) {
      detail::bucket_direction(rep.evidence, t.model, cd, c.lambda, tol);
      if (cd.q < -tol.causal &&
          (!rep.timelike_witness || cd.q < quad_value(t.model, *rep.timelike_witness))) {
        rep.timelike_witness = cd.dir;
        rep.timelike_eigenvalue = c.lambda;
        rep.timelike_multiplicity = c.eigenspace_basis.size();
      }
    }
  }
  if (central) {
    rep.evidence.all_of_space = true;
    rep.timelike_multiplicity = t.dim();
  }

  // The unit-circle band scales with the matrix norm, like the defective-QR
  // eigenvalue error it must absorb.
  double band = tol.circle * scale;
  if (rho > 1.0 + band) {
    if (rep.timelike_witness)
      rep.kind = ClassKind::Ambiguous;  // off-circle spectrum with an interior fixed point
    else if (rho <= 1.0 + 2.0 * band)
      rep.kind = ClassKind::Ambiguous;  // inside the hyperbolic/parabolic gray zone
    else
      rep.kind = ClassKind::Hyperbolic;
  } else {
    if (rep.timelike_witness)
      rep.kind = (rep.timelike_multiplicity <= 1) ? ClassKind::EllipticRegular
                                                  : ClassKind::EllipticBoundary;
    else if (rho_min >= 1.0 - band)
      rep.kind = ClassKind::Parabolic;
    else
      rep.kind = ClassKind::Ambiguous;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The closed-form subclass (xi != 0, top-right column r xi, |r| = 1).

struct SubclassSpectrum {
  Complex lambda1, lambda2;  // eigenvalues of the 2x2 block on <xi> (+) C
  Complex k1, k2;            // eigenvectors are (k_i xi, 1)
  Complex r;
  CVector xi;
  double a = 1.0;
};

namespace detail {
/// Principal square root with the branch fixed to nonnegative real part,
/// ties broken toward nonnegative imaginary part.
inline Complex branch_sqrt(Complex z) {
  Complex s = std::sqrt(z);
  if (s.real() < 0.0 || (s.real() == 0.0 && s.imag() < 0.0)) s = -s;
  return s;
}
}  // namespace detail

inline SubclassSpectrum subclass_spectrum(const CVector& xi, Complex r,
                                          const Tolerances& tol = Tolerances{}) {
  double xin = xi.norm();
  if (xin == 0.0) throw Error(Err::ZeroXi, "subclass_spectrum: xi must be nonzero");
  if (std::abs(std::abs(r) - 1.0) > 10.0 * tol.circle)
    throw Error(Err::NotUnitary, "subclass_spectrum: |r| must be 1");
  SubclassSpectrum out;
  out.r = r;
  out.xi = xi;
  out.a = generator_a(xi);
  Complex disc = out.a * out.a * (r + 1.0) * (r + 1.0) - 4.0 * r;
  Complex sq = detail::branch_sqrt(disc);
  out.lambda1 = 0.5 * (out.a * (r + 1.0) + sq);
  out.lambda2 = 0.5 * (out.a * (r + 1.0) - sq);
  double d = 2.0 * xin * xin;
  out.k1 = (out.a * (r - 1.0) + sq) / d;
  out.k2 = (out.a * (r - 1.0) - sq) / d;
  return out;
}

/// Trichotomy of the subclass by the position of r on the circle. Writing
/// r = e^{2 i phi}, the block eigenvalues are e^{i phi}(a cos phi +-
/// sqrt(a^2 cos^2 phi - 1)): for |a cos phi| < 1 (i.e. Re r < 2/a^2 - 1) the
/// pair stays on the unit circle and one eigenvector (k_i xi, 1) is interior,
/// so the element is elliptic; |a cos phi| = 1 gives the two parabolic
/// boundary values r = (2/a^2 - 1) +- i 2||xi||/a^2; beyond them the pair
/// leaves the circle and the element is hyperbolic. r = -1 is the deepest
/// point of the elliptic arc.
inline DynamicalType subclass_classify(const CVector& xi, Complex r,
                                       const Tolerances& tol = Tolerances{}) {
  double xin = xi.norm();
  if (xin == 0.0) throw Error(Err::ZeroXi, "subclass_classify: xi must be nonzero");
  double a2 = 1.0 + xin * xin;
  Complex rp(2.0 / a2 - 1.0, 2.0 * xin / a2);
  if (std::abs(r - rp) <= tol.circle || std::abs(r - std::conj(rp)) <= tol.circle)
    return DynamicalType::Parabolic;
  return (r.real() < rp.real()) ? DynamicalType::Elliptic : DynamicalType::Hyperbolic;
}

/// Deterministic orthonormal basis of C^n whose first column is v/||v||.
inline CMatrix onb_from(const CVector& v) {
  const std::size_t n = v.size();
  std::vector<CVector> cols{normalized(v)};
  for (std::size_t i = 0; i < n && cols.size() < n; ++i) {
    CVector e(n);
    e[i] = 1.0;
    cols.push_back(e);
    cols = orthonormalize(cols, 1e-8);
  }
  CMatrix b(n, n);
  for (std::size_t j = 0; j < n; ++j) b.set_column(j, cols[j]);
  return b;
}

/// Assembles the subclass element [[U A, r xi], [<.,xi>, a]] where U scales
/// xi by r and acts as u_perp (identity when omitted) on the complement.
inline IsometryMatrix subclass_matrix(const CVector& xi, Complex r,
                                      const CMatrix* u_perp = nullptr, double theta = 0.0,
                                      const Tolerances& tol = Tolerances{}) {
  const std::size_t n = xi.size();
  double xin = xi.norm();
  if (xin == 0.0) throw Error(Err::ZeroXi, "subclass_matrix: xi must be nonzero");
  CMatrix u(n, n);
  if (u_perp == nullptr) {
    u = CMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        u(i, j) += (r - 1.0) * xi[i] * std::conj(xi[j]) / (xin * xin);
  } else {
    if (u_perp->rows() != n - 1)
      throw Error(Err::DimensionMismatch, "subclass_matrix: u_perp must act on <xi>^perp");
    CMatrix b = onb_from(xi);
    CMatrix d(n, n);
    d(0, 0) = r;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 1; j < n; ++j) d(i, j) = (*u_perp)(i - 1, j - 1);
    u = b * d * adjoint(b);
  }
  GeneratorData g{theta, u, xi};
  return build_isometry(g, tol);  // U(xi) = r xi makes the top-right column r xi
}

// ---------------------------------------------------------------------------
// Normality / unitarity.

inline bool is_normal(const IsometryMatrix& t, const Tolerances& tol = Tolerances{}) {
  CMatrix a = adjoint(t.m);
  double f = t.m.frobenius();
  return (t.m * a - a * t.m).frobenius() <= tol.member * f * f;
}

inline bool is_unitary(const IsometryMatrix& t, const Tolerances& tol = Tolerances{}) {
  return (adjoint(t.m) * t.m - CMatrix::identity(t.dim())).frobenius() <= tol.member;
}

// ---------------------------------------------------------------------------
// M (+) M-dagger decompositions.

struct DecompositionReport {
  std::vector<CVector> m_basis;
  std::vector<CVector> m_dagger_basis;  // form-orthonormal (Q = +1 on each)
  CMatrix t1;  // restriction to M in m_basis coordinates
  CMatrix t2;  // restriction to M-dagger in m_dagger_basis coordinates
};

namespace detail {

/// Gram-Schmidt under the ambient form on a positive-definite subspace.
template <class Form>
std::vector<CVector> form_orthonormalize_positive(Form&& form, std::vector<CVector> vs,
                                                  double degenerate_tol = 1e-10) {
  std::vector<CVector> out;
  for (auto& v : vs) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : out) v -= form(v, u) * u;
    double q = form(v, v).real();
    if (q <= degenerate_tol * std::max(1.0, v.norm() * v.norm())) continue;
    v *= Complex(1.0 / std::sqrt(q), 0.0);
    out.push_back(v);
  }
  return out;
}

/// Basis of the form-orthogonal complement of span(vs).
inline std::vector<CVector> form_complement(Model model, const std::vector<CVector>& vs,
                                            std::size_t dim) {
  CMatrix f = form_matrix(model, dim - 1);
  CMatrix rows(vs.size(), dim);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    CVector fv = f * vs[i];
    for (std::size_t j = 0; j < dim; ++j) rows(i, j) = std::conj(fv[j]);
  }
  return kernel_basis(rows, 1e-10 * std::max(1.0, rows.frobenius()));
}

/// Coordinates of t restricted to a form-orthonormal positive basis.
inline CMatrix form_restriction(const IsometryMatrix& t, const std::vector<CVector>& basis) {
  auto form = [&](const CVector& a, const CVector& b) {
    return form_value(t.model, a, b);
  };
  CMatrix out(basis.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    CVector tv = t.m * basis[j];
    for (std::size_t i = 0; i < basis.size(); ++i) out(i, j) = form(tv, basis[i]);
  }
  return out;
}

}  // namespace detail

/// M = span of the time-like witness (x,1); t2 is the unitary complement part.
inline DecompositionReport decompose_elliptic(const IsometryMatrix& t,
                                              const Tolerances& tol = Tolerances{}) {
  ClassificationReport cls = classify(t, tol);
  if (!is_elliptic(cls.kind) || !cls.timelike_witness)
    throw Error(Err::NotElliptic, "decompose_elliptic: element is not elliptic");
  const std::size_t n = t.n();
  CVector w = *cls.timelike_witness;
  Complex z = w[n];
  CVector m_vec(n + 1);
  for (std::size_t i = 0; i <= n; ++i) m_vec[i] = w[i] / z;  // (x, 1)

  DecompositionReport rep;
  rep.m_basis = {m_vec};
  auto form = [&](const CVector& a, const CVector& b) { return form_value(t.model, a, b); };
  CVector tm = t.m * m_vec;
  rep.t1 = CMatrix(1, 1);
  rep.t1(0, 0) = form(tm, m_vec) / form(m_vec, m_vec).real();

  auto comp = detail::form_complement(t.model, rep.m_basis, n + 1);
  rep.m_dagger_basis = detail::form_orthonormalize_positive(form, comp);
  if (rep.m_dagger_basis.size() != n)
    throw Error(Err::DegenerateSpan, "decompose_elliptic: complement dimension wrong");
  rep.t2 = detail::form_restriction(t, rep.m_dagger_basis);
  return rep;
}

/// M = span of the two light-like eigenlines; t1 carries the off-circle pair.
inline DecompositionReport decompose_hyperbolic(const IsometryMatrix& t,
                                                const Tolerances& tol = Tolerances{}) {
  ClassificationReport cls = classify(t, tol);
  if (cls.kind != ClassKind::Hyperbolic)
    throw Error(Err::NotHyperbolic, "decompose_hyperbolic: element is not hyperbolic");
  const std::size_t n = t.n();
  double scale = std::max(1.0, t.m.frobenius());
  auto clusters = eigen_clusters(t.m, tol.circle * scale, 10.0 * tol.circle * scale, tol);

  const EigenCluster* top = nullptr;
  const EigenCluster* bottom = nullptr;
  for (const auto& c : clusters) {
    if (!top || std::abs(c.lambda) > std::abs(top->lambda)) top = &c;
    if (!bottom || std::abs(c.lambda) < std::abs(bottom->lambda)) bottom = &c;
  }
  if (!top || !bottom || top == bottom)
    throw Error(Err::NotHyperbolic, "decompose_hyperbolic: off-circle pair not found");

  auto to_point_form = [&](const CVector& v) {
    Complex z = v[v.size() - 1];
    if (std::abs(z) < 1e-10)
      throw Error(Err::DegenerateDenominator, "decompose_hyperbolic: light-like lift");
    CVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / z;
    return out;
  };
  DecompositionReport rep;
  rep.m_basis = {to_point_form(top->eigenspace_basis.at(0)),
                 to_point_form(bottom->eigenspace_basis.at(0))};

  auto form = [&](const CVector& a, const CVector& b) { return form_value(t.model, a, b); };
  // Coordinates in a (non-orthonormal) eigenbasis via the 2x2 Gram system.
  CMatrix q = gram_quadratic(form, rep.m_basis);
  rep.t1 = CMatrix(2, 2);
  for (std::size_t j = 0; j < 2; ++j) {
    CVector tv = t.m * rep.m_basis[j];
    CVector rhs{form(tv, rep.m_basis[0]), form(tv, rep.m_basis[1])};
    CVector coeff = solve(q, rhs, tol);
    rep.t1(0, j) = coeff[0];
    rep.t1(1, j) = coeff[1];
  }

  auto comp = detail::form_complement(t.model, rep.m_basis, n + 1);
  rep.m_dagger_basis = detail::form_orthonormalize_positive(form, comp);
  if (rep.m_dagger_basis.size() != n - 1)
    throw Error(Err::DegenerateSpan, "decompose_hyperbolic: complement dimension wrong");
  rep.t2 = detail::form_restriction(t, rep.m_dagger_basis);
  return rep;
}

}  // namespace cxhyp
