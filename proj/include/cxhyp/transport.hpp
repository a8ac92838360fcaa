#pragma once

// Constructive Witt extension for the indefinite forms, bi-transitive
// boundary transport, and the conjugator moving an elliptic fixed point to
// the origin. Light-like directions in a degenerate span are paired with
// hyperbolic partners before completion; the completion itself is validated
// purely by its postconditions.

#include <cmath>
#include <utility>
#include <vector>

#include "cxhyp/ball.hpp"
#include "cxhyp/classify.hpp"
#include "cxhyp/core.hpp"
#include "cxhyp/linalg.hpp"
#include "cxhyp/model.hpp"

namespace cxhyp {

struct PartialIsometry {
  Model model = Model::Ball;
  std::vector<CVector> domain_basis;
  std::vector<CVector> images;
};

namespace detail {

/// One particular solution of the underdetermined system rows * x = rhs
/// (free variables set to zero). Throws DegenerateSpan when the rows are
/// numerically dependent.
inline CVector particular_solution(const CMatrix& rows, const CVector& rhs,
                                   double pivot_tol) {
  const std::size_t r = rows.rows(), c = rows.cols();
  CMatrix a(r, c + 1);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) a(i, j) = rows(i, j);
    a(i, c) = rhs[i];
  }
  std::vector<std::size_t> colp(c);
  std::iota(colp.begin(), colp.end(), std::size_t{0});
  for (std::size_t step = 0; step < r; ++step) {
    std::size_t bi = step, bj = step;
    double best = 0.0;
    for (std::size_t i = step; i < r; ++i)
      for (std::size_t j = step; j < c; ++j)
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          bi = i;
          bj = j;
        }
    if (best <= pivot_tol)
      throw Error(Err::DegenerateSpan, "particular_solution: dependent constraints");
    if (bi != step)
      for (std::size_t j = 0; j <= c; ++j) std::swap(a(step, j), a(bi, j));
    if (bj != step) {
      for (std::size_t i = 0; i < r; ++i) std::swap(a(i, step), a(i, bj));
      std::swap(colp[step], colp[bj]);
    }
    Complex piv = a(step, step);
    for (std::size_t j = step; j <= c; ++j) a(step, j) /= piv;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == step) continue;
      Complex f = a(i, step);
      if (f == Complex(0.0, 0.0)) continue;
      for (std::size_t j = step; j <= c; ++j) a(i, j) -= f * a(step, j);
    }
  }
  CVector x(c);
  for (std::size_t p = 0; p < r; ++p) x[colp[p]] = a(p, c);
  return x;
}

/// Hyperbolic partner for each radical vector: form(p_j, regular) = 0,
/// form(p_j, radical_i) = delta_ij, Q(p_j) = 0, mutually form-orthogonal.
inline std::vector<CVector> radical_partners(Model model,
                                             const std::vector<CVector>& regular,
                                             const std::vector<CVector>& radical,
                                             std::size_t dim) {
  auto form = [&](const CVector& a, const CVector& b) { return form_value(model, a, b); };
  CMatrix f = form_matrix(model, dim - 1);
  const std::size_t q = radical.size();
  std::vector<CVector> partners;
  for (std::size_t j = 0; j < q; ++j) {
    CMatrix rows(regular.size() + q, dim);
    CVector rhs(regular.size() + q);
    std::size_t row = 0;
    for (const auto& w : regular) {
      CVector fw = f * w;
      for (std::size_t jj = 0; jj < dim; ++jj) rows(row, jj) = std::conj(fw[jj]);
      rhs[row++] = 0.0;
    }
    for (std::size_t i = 0; i < q; ++i) {
      CVector fw = f * radical[i];
      for (std::size_t jj = 0; jj < dim; ++jj) rows(row, jj) = std::conj(fw[jj]);
      rhs[row++] = (i == j) ? 1.0 : 0.0;
    }
    CVector p = particular_solution(rows, rhs, 1e-10);
    for (std::size_t i = 0; i < partners.size(); ++i)
      p += -form(p, partners[i]) * radical[i];
    double alpha = -0.5 * form(p, p).real();
    p += Complex(alpha, 0.0) * radical[j];
    partners.push_back(std::move(p));
  }
  return partners;
}

/// Pivoted Gram-Schmidt on a non-degenerate subspace of indefinite signature:
/// returns vectors with Q = +1 first, then Q = -1, form-orthogonal.
inline std::vector<std::pair<CVector, int>> signature_onb(
    Model model, std::vector<CVector> work, double pivot_tol) {
  auto form = [&](const CVector& a, const CVector& b) { return form_value(model, a, b); };
  std::vector<std::pair<CVector, int>> picked;
  const std::size_t total = work.size();
  for (std::size_t round = 0; round < total; ++round) {
    // Best |Q| among the working vectors and, if they are all nearly null,
    // among sign/phase combinations of pairs.
    CVector best;
    double bestq = 0.0;
    for (const auto& v : work) {
      double qv = form(v, v).real();
      if (std::abs(qv) > std::abs(bestq)) {
        bestq = qv;
        best = v;
      }
    }
    if (std::abs(bestq) <= pivot_tol) {
      static const Complex phases[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (std::size_t i = 0; i < work.size(); ++i)
        for (std::size_t j = i + 1; j < work.size(); ++j)
          for (const auto& ph : phases) {
            CVector cand = work[i] + ph * work[j];
            double qv = form(cand, cand).real();
            if (std::abs(qv) > std::abs(bestq)) {
              bestq = qv;
              best = cand;
            }
          }
    }
    if (std::abs(bestq) <= pivot_tol)
      throw Error(Err::DegenerateSpan, "signature_onb: pivot below tolerance");
    int sign = bestq > 0.0 ? 1 : -1;
    CVector w = best;
    w *= Complex(1.0 / std::sqrt(std::abs(bestq)), 0.0);
    for (auto& v : work) v -= Complex(static_cast<double>(sign), 0.0) * form(v, w) * w;
    // Drop the vector that collapsed under the projection.
    std::size_t drop = 0;
    double min_norm = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < work.size(); ++i)
      if (work[i].norm() < min_norm) {
        min_norm = work[i].norm();
        drop = i;
      }
    work.erase(work.begin() + static_cast<long>(drop));
    picked.emplace_back(std::move(w), sign);
  }
  std::stable_sort(picked.begin(), picked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return picked;
}

inline std::vector<CVector> combine(const std::vector<CVector>& vecs,
                                    const std::vector<CVector>& coeffs) {
  std::vector<CVector> out;
  for (const auto& c : coeffs) {
    CVector v(vecs.front().size());
    for (std::size_t i = 0; i < vecs.size(); ++i) v += c[i] * vecs[i];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail

/// Extends a form-preserving map given on a subspace to a full member:
/// radical directions are paired into hyperbolic planes on both sides, the
/// form-complements get matching signature-ordered orthonormal bases, and the
/// completed bases define the element. Postconditions (membership and the
/// prescribed images) are verified; failures trigger seeded redraws of the
/// completion before giving up.
inline IsometryMatrix witt_extend(const PartialIsometry& p,
                                  const Tolerances& tol = Tolerances{},
                                  std::uint64_t seed = 0) {
  const std::size_t m = p.domain_basis.size();
  if (m == 0 || m != p.images.size())
    throw Error(Err::DimensionMismatch, "witt_extend: empty or mismatched data");
  const std::size_t dim = p.domain_basis.front().size();
  for (const auto& v : p.domain_basis)
    if (v.size() != dim) throw Error(Err::DimensionMismatch, "witt_extend: dimensions");
  for (const auto& v : p.images)
    if (v.size() != dim) throw Error(Err::DimensionMismatch, "witt_extend: dimensions");
  if (m > dim) throw Error(Err::DegenerateSpan, "witt_extend: too many vectors");

  auto form = [&](const CVector& a, const CVector& b) { return form_value(p.model, a, b); };
  CMatrix gd = gram(form, p.domain_basis);
  CMatrix gi = gram(form, p.images);
  double gscale = std::max({1.0, gd.frobenius(), gi.frobenius()});
  if ((gd - gi).frobenius() > 100.0 * tol.member * gscale)
    throw Error(Err::NotPartialIsometry, "witt_extend: Gram matrices differ");
  if (orthonormalize(p.domain_basis, 1e-8).size() != m)
    throw Error(Err::DegenerateSpan, "witt_extend: dependent domain vectors");

  // Radical of the span (coefficient vectors), and a coefficient complement
  // chosen Euclidean-orthogonal to it so the regular Gram stays invertible.
  std::vector<CVector> rad_coeff = kernel_basis(gd, 1e-8 * gscale);
  std::vector<CVector> reg_coeff;
  {
    std::vector<CVector> acc = rad_coeff;
    for (std::size_t i = 0; i < m; ++i) {
      CVector e(m);
      e[i] = 1.0;
      acc.push_back(e);
    }
    acc = orthonormalize(acc, 1e-8);
    reg_coeff.assign(acc.begin() + static_cast<long>(rad_coeff.size()), acc.end());
  }
  std::vector<CVector> rad_d = detail::combine(p.domain_basis, rad_coeff);
  std::vector<CVector> rad_g = detail::combine(p.images, rad_coeff);
  std::vector<CVector> reg_d = detail::combine(p.domain_basis, reg_coeff);
  std::vector<CVector> reg_g = detail::combine(p.images, reg_coeff);

  std::vector<CVector> dom_ext = p.domain_basis;
  std::vector<CVector> img_ext = p.images;
  if (!rad_coeff.empty()) {
    auto part_d = detail::radical_partners(p.model, reg_d, rad_d, dim);
    auto part_g = detail::radical_partners(p.model, reg_g, rad_g, dim);
    dom_ext.insert(dom_ext.end(), part_d.begin(), part_d.end());
    img_ext.insert(img_ext.end(), part_g.begin(), part_g.end());
  }

  CMatrix f = form_matrix(p.model, dim - 1);
  auto complement_rows = [&](const std::vector<CVector>& vs) {
    CMatrix rows(vs.size(), dim);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      CVector fv = f * vs[i];
      for (std::size_t j = 0; j < dim; ++j) rows(i, j) = std::conj(fv[j]);
    }
    return rows;
  };

  Error last(Err::DegenerateSpan, "witt_extend: no attempt made");
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      CMatrix rows_d = complement_rows(dom_ext);
      CMatrix rows_g = complement_rows(img_ext);
      auto comp_d = kernel_basis(rows_d, 1e-10 * std::max(1.0, rows_d.frobenius()));
      auto comp_g = kernel_basis(rows_g, 1e-10 * std::max(1.0, rows_g.frobenius()));
      if (comp_d.size() != comp_g.size() || dom_ext.size() + comp_d.size() != dim)
        throw Error(Err::DegenerateSpan, "witt_extend: complement dimension mismatch");
      if (attempt > 0) {
        // Randomized re-mix of the completion bases (seeded, deterministic).
        std::uint64_t state = 0xC0FFEEull + seed * 1099511628211ull +
                              static_cast<std::uint64_t>(attempt);
        auto mix = [&](std::vector<CVector>& vs) {
          for (auto& v : vs) {
            CVector r = detail::pseudo_random_vector(vs.size(), state);
            CVector nv = v;
            for (std::size_t i = 0; i < vs.size(); ++i) nv += 0.5 * r[i] * vs[i];
            v = nv;
          }
          vs = orthonormalize(vs);
        };
        mix(comp_d);
        mix(comp_g);
      }
      auto onb_d = detail::signature_onb(p.model, comp_d, 1e-10);
      auto onb_g = detail::signature_onb(p.model, comp_g, 1e-10);
      std::size_t plus_d = 0, plus_g = 0;
      for (const auto& [v, s] : onb_d) plus_d += (s > 0);
      for (const auto& [v, s] : onb_g) plus_g += (s > 0);
      if (plus_d != plus_g)
        throw Error(Err::DegenerateSpan, "witt_extend: signature mismatch");

      CMatrix bd(dim, dim), bg(dim, dim);
      for (std::size_t j = 0; j < dom_ext.size(); ++j) {
        bd.set_column(j, dom_ext[j]);
        bg.set_column(j, img_ext[j]);
      }
      for (std::size_t j = 0; j < onb_d.size(); ++j) {
        bd.set_column(dom_ext.size() + j, onb_d[j].first);
        bg.set_column(dom_ext.size() + j, onb_g[j].first);
      }
      CMatrix t = bg * inverse_matrix(bd, tol);
      IsometryMatrix out = IsometryMatrix::from(std::move(t), p.model, tol);
      for (std::size_t i = 0; i < m; ++i) {
        CVector diff = out.m * p.domain_basis[i] - p.images[i];
        if (diff.norm() > tol.point * (1.0 + p.images[i].norm()))
          throw Error(Err::DegenerateSpan, "witt_extend: image postcondition failed");
      }
      return out;
    } catch (const Error& e) {
      last = e;
    }
  }
  throw last;
}

/// Member sending the boundary pair (x1, x2) to (y1, y2): the lifts are
/// matched with the scaling mu = A((x1,1),(x2,1)) / A((y1,1),(y2,1)) and the
/// partial map is Witt-extended.
inline IsometryMatrix boundary_transport(const CVector& x1, const CVector& x2,
                                         const CVector& y1, const CVector& y2,
                                         const Tolerances& tol = Tolerances{}) {
  const std::size_t n = x1.size();
  for (const CVector* v : {&x1, &x2, &y1, &y2}) {
    if (v->size() != n) throw Error(Err::DimensionMismatch, "boundary_transport: dims");
    if (std::abs(v->norm() - 1.0) > tol.boundary)
      throw Error(Err::BoundaryViolation, "boundary_transport: point not on the sphere");
  }
  if ((x1 - x2).norm() <= tol.point || (y1 - y2).norm() <= tol.point)
    throw Error(Err::CoincidentPoints, "boundary_transport: coincident pair");

  auto lift = [&](const CVector& x) {
    CVector v(n + 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i];
    v[n] = 1.0;
    return v;
  };
  CVector lx1 = lift(x1), lx2 = lift(x2), ly1 = lift(y1), ly2 = lift(y2);
  Complex pairing_x = form_ball(lx1, lx2);
  Complex pairing_y = form_ball(ly1, ly2);
  if (std::abs(pairing_x) < 1e-12 || std::abs(pairing_y) < 1e-12)
    throw Error(Err::CoincidentPoints, "boundary_transport: degenerate pairing");
  Complex mu = pairing_x / pairing_y;

  PartialIsometry p{Model::Ball, {lx1, lx2}, {mu * ly1, ly2}};
  IsometryMatrix out = witt_extend(p, tol);
  if ((mobius_apply(out, x1, tol) - y1).norm() > tol.point ||
      (mobius_apply(out, x2, tol) - y2).norm() > tol.point)
    throw Error(Err::DegenerateSpan, "boundary_transport: postcondition failed");
  return out;
}

/// Conjugator s built from the interior fixed point b (s = lift of f_b) and
/// the resulting unitary u = s t s^{-1}.
inline std::pair<IsometryMatrix, IsometryMatrix> elliptic_to_unitary(
    const IsometryMatrix& t, const Tolerances& tol = Tolerances{}) {
  if (t.model != Model::Ball)
    throw Error(Err::FormMismatch, "elliptic_to_unitary: expects a ball member");
  ClassificationReport cls = classify(t, tol);
  if (!is_elliptic(cls.kind) || cls.evidence.interior_points.empty())
    throw Error(Err::NotElliptic, "elliptic_to_unitary: no interior fixed point");
  const CVector& b = cls.evidence.interior_points.front().point;
  IsometryMatrix s = lift_fb(b, tol);
  IsometryMatrix u = conjugate(s, t, tol);
  if (!is_unitary(u, tol))
    throw Error(Err::NotElliptic, "elliptic_to_unitary: conjugate is not unitary");
  return {std::move(s), std::move(u)};
}

}  // namespace cxhyp
