#pragma once

// Conjugacy decision between two members of the same group. Elliptic classes
// are determined by the spectrum plus the time-like eigenvalue, hyperbolic
// classes by the off-circle pair plus the unitary part; in both cases an
// explicit conjugator is assembled from form-adapted eigenbases and verified
// before being returned. Parabolic pairs are supported exactly for
// Heisenberg translations (singleton spectrum, Siegel model).

#include <algorithm>
#include <cmath>
#include <vector>

#include "cxhyp/classify.hpp"
#include "cxhyp/core.hpp"
#include "cxhyp/heisenberg.hpp"
#include "cxhyp/linalg.hpp"
#include "cxhyp/model.hpp"
#include "cxhyp/siegel.hpp"
#include "cxhyp/transport.hpp"

namespace cxhyp {

namespace detail {

struct AdaptedCluster {
  Complex lambda;
  std::vector<std::pair<double, CVector>> directions;  // (q, unit dir), q descending
};

inline std::vector<AdaptedCluster> adapted_clusters(const IsometryMatrix& t,
                                                    const Tolerances& tol) {
  double scale = std::max(1.0, t.m.frobenius());
  auto clusters = eigen_clusters(t.m, tol.circle * scale, 10.0 * tol.circle * scale, tol);
  std::vector<AdaptedCluster> out;
  for (const auto& c : clusters) {
    AdaptedCluster a;
    a.lambda = c.lambda;
    for (const auto& d : causal_directions(t.model, c.eigenspace_basis, tol))
      a.directions.emplace_back(d.q, d.dir);
    std::stable_sort(a.directions.begin(), a.directions.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    out.push_back(std::move(a));
  }
  return out;
}

/// Pairs clusters of equal eigenvalue and dimension; empty result on failure.
inline std::vector<std::pair<const AdaptedCluster*, const AdaptedCluster*>> match_clusters(
    const std::vector<AdaptedCluster>& a, const std::vector<AdaptedCluster>& b,
    double match_tol) {
  std::vector<std::pair<const AdaptedCluster*, const AdaptedCluster*>> out;
  if (a.size() != b.size()) return out;
  std::vector<bool> used(b.size(), false);
  for (const auto& ca : a) {
    long best = -1;
    double bd = match_tol;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      double d = std::abs(ca.lambda - b[j].lambda);
      if (d <= bd) {
        bd = d;
        best = static_cast<long>(j);
      }
    }
    if (best < 0 || b[best].directions.size() != ca.directions.size()) return {};
    used[best] = true;
    out.emplace_back(&ca, &b[best]);
  }
  return out;
}

}  // namespace detail

/// Full conjugacy decision with explicit verified conjugator. Throws
/// Err::NotStabilizer for parabolic inputs that are not Heisenberg
/// translations (the unsupported-pair case).
inline ConjugacyVerdict conjugate_isometries(const IsometryMatrix& t1,
                                             const IsometryMatrix& t2,
                                             const Tolerances& tol = Tolerances{}) {
  if (t1.model != t2.model)
    throw Error(Err::FormMismatch, "conjugate_isometries: different models");
  if (t1.dim() != t2.dim())
    throw Error(Err::DimensionMismatch, "conjugate_isometries: different dimensions");

  ClassificationReport c1 = classify(t1, tol);
  ClassificationReport c2 = classify(t2, tol);
  if (c1.kind == ClassKind::Ambiguous || c2.kind == ClassKind::Ambiguous)
    throw Error(Err::NotStabilizer, "conjugate_isometries: ambiguous classification");
  auto coarse = [](ClassKind k) {
    return is_elliptic(k) ? DynamicalType::Elliptic
                          : (k == ClassKind::Parabolic ? DynamicalType::Parabolic
                                                       : DynamicalType::Hyperbolic);
  };
  if (coarse(c1.kind) != coarse(c2.kind))
    return {false, std::nullopt, "different dynamical types"};

  double scale = std::max({1.0, t1.m.frobenius(), t2.m.frobenius()});
  double match_tol = 10.0 * tol.circle * scale;

  if (coarse(c1.kind) == DynamicalType::Parabolic) {
    // Supported exactly for Heisenberg translations in the Siegel model.
    if (t1.model != Model::Siegel)
      throw Error(Err::NotStabilizer,
                  "conjugate_isometries: parabolic pair supported only in the Siegel model");
    auto as_translation = [&](const IsometryMatrix& t) {
      SiegelStabilizerElement el = stabilizer_parse(t, tol);
      if ((el.U - el.lambda * CMatrix::identity(el.U.rows())).frobenius() >
          100.0 * tol.member * (1.0 + std::sqrt(static_cast<double>(el.U.rows()))))
        throw Error(Err::NotStabilizer,
                    "conjugate_isometries: parabolic element has non-singleton spectrum");
      return HeisenbergTranslation{el.lambda, el.a_prime, el.s};
    };
    return conjugacy_decide(as_translation(t1), as_translation(t2), tol);
  }

  auto a1 = detail::adapted_clusters(t1, tol);
  auto a2 = detail::adapted_clusters(t2, tol);
  auto matched = detail::match_clusters(a1, a2, match_tol);
  if (matched.empty()) return {false, std::nullopt, "spectra differ"};

  if (coarse(c1.kind) == DynamicalType::Elliptic &&
      std::abs(c1.timelike_eigenvalue - c2.timelike_eigenvalue) > match_tol)
    return {false, std::nullopt, "time-like eigenvalues differ"};

  // Form-adapted bases: normalize space-like directions to Q = +1, the
  // time-like one to Q = -1; hyperbolic light-like lines are normalized to
  // (y, 1) lifts and the image pair rescaled to match the cross pairing.
  std::vector<CVector> domain, images;
  CVector light_d[2], light_g[2];
  int lights = 0;
  for (const auto& [ca, cb] : matched) {
    for (std::size_t k = 0; k < ca->directions.size(); ++k) {
      double qa = ca->directions[k].first;
      double qb = cb->directions[k].first;
      const CVector& va = ca->directions[k].second;
      const CVector& vb = cb->directions[k].second;
      if (qa > tol.causal && qb > tol.causal) {
        domain.push_back(Complex(1.0 / std::sqrt(qa), 0.0) * va);
        images.push_back(Complex(1.0 / std::sqrt(qb), 0.0) * vb);
      } else if (qa < -tol.causal && qb < -tol.causal) {
        domain.push_back(Complex(1.0 / std::sqrt(-qa), 0.0) * va);
        images.push_back(Complex(1.0 / std::sqrt(-qb), 0.0) * vb);
      } else if (std::abs(qa) <= tol.causal && std::abs(qb) <= tol.causal && lights < 2) {
        Complex za = va[va.size() - 1], zb = vb[vb.size() - 1];
        if (std::abs(za) < tol.denom || std::abs(zb) < tol.denom)
          return {false, std::nullopt, "degenerate light-like lift"};
        light_d[lights] = Complex(1.0, 0.0) / za * va;
        light_g[lights] = Complex(1.0, 0.0) / zb * vb;
        ++lights;
      } else {
        return {false, std::nullopt, "causal types of matched eigenspaces differ"};
      }
    }
  }
  if (lights == 2) {
    auto form = [&](const CVector& a, const CVector& b) { return form_value(t1.model, a, b); };
    Complex pd = form(light_d[0], light_d[1]);
    Complex pg = form(light_g[0], light_g[1]);
    if (std::abs(pg) < tol.denom) return {false, std::nullopt, "degenerate pairing"};
    light_g[0] = pd / pg * light_g[0];
    domain.push_back(light_d[0]);
    domain.push_back(light_d[1]);
    images.push_back(light_g[0]);
    images.push_back(light_g[1]);
  } else if (lights == 1) {
    return {false, std::nullopt, "unmatched light-like line"};
  }

  IsometryMatrix r = witt_extend(PartialIsometry{t1.model, domain, images}, tol);
  double res = (compose(compose(r, t1, tol), inverse(r, tol), tol).m - t2.m).frobenius() /
               std::max(t2.m.frobenius(), 1e-300);
  if (res > 1e-8)
    throw Error(Err::GenerationFailed,
                "conjugate_isometries: conjugator failed verification, residual " +
                    std::to_string(res));
  return {true, std::move(r), ""};
}

}  // namespace cxhyp
