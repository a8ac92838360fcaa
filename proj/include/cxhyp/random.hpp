#pragma once

// Seeded random instances. The engine is std::mt19937_64 (bit-exact by the
// standard); all distributions are derived here from raw 64-bit draws so
// that streams are reproducible across platforms. Substreams are derived by
// splitmix-mixing (seed, index), which keeps batch runs order-independent.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "cxhyp/ball.hpp"
#include "cxhyp/centralizer.hpp"
#include "cxhyp/classify.hpp"
#include "cxhyp/core.hpp"
#include "cxhyp/heisenberg.hpp"
#include "cxhyp/linalg.hpp"
#include "cxhyp/model.hpp"
#include "cxhyp/siegel.hpp"

namespace cxhyp {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  double uniform() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    double th = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  Complex cgaussian() { return Complex(gaussian(), gaussian()) * 0.7071067811865476; }

  Complex unit_complex() { return std::polar(1.0, uniform(0.0, 2.0 * 3.14159265358979323846)); }

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  Rng substream(std::uint64_t idx) const { return Rng(mix(seed_, idx)); }

private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline CVector random_vector(std::size_t n, Rng& rng, double scale = 1.0) {
  CVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = scale * rng.cgaussian();
  return v;
}

inline CVector random_unit_vector(std::size_t n, Rng& rng) {
  CVector v = random_vector(n, rng);
  while (v.norm() < 1e-6) v = random_vector(n, rng);
  return normalized(v);
}

/// Haar-like unitary: orthonormalization of a complex Gaussian matrix.
inline CMatrix random_unitary(std::size_t n, Rng& rng) {
  if (n == 0) return CMatrix(0, 0);
  std::vector<CVector> cols;
  for (std::size_t j = 0; j < n; ++j) cols.push_back(random_vector(n, rng));
  cols = orthonormalize(cols);
  while (cols.size() < n) {
    cols.push_back(random_vector(n, rng));
    cols = orthonormalize(cols);
  }
  CMatrix u(n, n);
  for (std::size_t j = 0; j < n; ++j) u.set_column(j, cols[j]);
  return u;
}

inline GeneratorData random_generator_data(std::size_t n, Rng& rng, double xi_min = 0.25,
                                           double xi_max = 1.75) {
  GeneratorData g;
  g.theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  g.U = random_unitary(n, rng);
  g.xi = random_unit_vector(n, rng);
  g.xi *= Complex(rng.uniform(xi_min, xi_max), 0.0);
  return g;
}

inline IsometryMatrix random_member(std::size_t n, Rng& rng,
                                    const Tolerances& tol = Tolerances{}) {
  return build_isometry(random_generator_data(n, rng), tol);
}

/// Random subclass parameter r = e^{2 i phi} on the requested arc of the
/// trichotomy, kept `margin` away (in circle distance) from the parabolic
/// boundary values. Elliptic arc: |a cos phi| < 1; hyperbolic arc: > 1.
inline Complex random_subclass_r(const CVector& xi, Rng& rng, DynamicalType want,
                                 double margin = 1e-3) {
  double a = std::sqrt(1.0 + xi.norm() * xi.norm());
  double phi0 = std::acos(1.0 / a);  // parabolic boundary in the phi parameter
  double phi;
  if (want == DynamicalType::Hyperbolic) {
    phi = rng.uniform(-phi0 + margin, phi0 - margin);
  } else if (want == DynamicalType::Elliptic) {
    double half = 3.14159265358979323846 / 2.0;
    phi = rng.uniform(phi0 + margin, 2.0 * half - phi0 - margin);
    if (rng.uniform() < 0.5) phi = -phi;
  } else {
    phi = (rng.uniform() < 0.5 ? 1.0 : -1.0) * phi0;
  }
  return std::polar(1.0, 2.0 * phi);
}

/// Subclass element targeting a dynamical type; optionally conjugated by a
/// random member to hide the block structure.
inline IsometryMatrix random_classified(DynamicalType want, std::size_t n, Rng& rng,
                                        bool conjugated = true,
                                        const Tolerances& tol = Tolerances{}) {
  CVector xi = random_unit_vector(n, rng);
  xi *= Complex(rng.uniform(0.25, 1.75), 0.0);
  Complex r;
  switch (want) {
    case DynamicalType::Elliptic:
      r = (rng.uniform() < 0.5) ? Complex(-1.0, 0.0)
                                : random_subclass_r(xi, rng, DynamicalType::Elliptic, 1e-2);
      break;
    case DynamicalType::Parabolic: {
      double a2 = 1.0 + xi.norm() * xi.norm();
      r = Complex(2.0 / a2 - 1.0, (rng.uniform() < 0.5 ? 1.0 : -1.0) * 2.0 * xi.norm() / a2);
      break;
    }
    case DynamicalType::Hyperbolic:
      r = random_subclass_r(xi, rng, DynamicalType::Hyperbolic, 1e-2);
      break;
  }
  CMatrix uperp = random_unitary(n - 1, rng);
  IsometryMatrix t = subclass_matrix(xi, r, n > 1 ? &uperp : nullptr,
                                     rng.uniform(0.0, 2.0 * 3.14159265358979323846), tol);
  if (!conjugated) return t;
  IsometryMatrix g = random_member(n, rng, tol);
  return conjugate(g, t, tol);
}

inline SiegelStabilizerElement random_stabilizer_element(std::size_t n, Rng& rng,
                                                         bool unit_lambda = false) {
  SiegelStabilizerElement el;
  double mod = unit_lambda ? 1.0 : std::exp(rng.uniform(-0.8, 0.8));
  el.lambda = std::polar(mod, rng.uniform(0.0, 2.0 * 3.14159265358979323846));
  el.U = random_unitary(n - 1, rng);
  el.a_prime = random_vector(n - 1, rng, 0.7);
  double an = el.a_prime.norm();
  el.s = Complex(0.5 * an * an, rng.uniform(-2.0, 2.0));
  return el;
}

inline HeisenbergTranslation random_translation(std::size_t n, Rng& rng, bool vertical,
                                                std::optional<Complex> lambda = std::nullopt) {
  HeisenbergTranslation h;
  h.lambda = lambda.value_or(rng.unit_complex());
  if (vertical || n < 2) {
    h.a_prime = CVector(n - 1);
    double im = rng.uniform(0.2, 2.0) * (rng.uniform() < 0.5 ? 1.0 : -1.0);
    h.s = Complex(0.0, im);
  } else {
    h.a_prime = random_vector(n - 1, rng, 0.8);
    while (h.a_prime.norm() < 0.05) h.a_prime = random_vector(n - 1, rng, 0.8);
    double an = h.a_prime.norm();
    h.s = Complex(0.5 * an * an, rng.uniform(-2.0, 2.0));
  }
  return h;
}

// ---------------------------------------------------------------------------
// Structured pairs for the centralizer tests: each generator mixes true
// centralizer members (built block-wise) with generic and near-miss
// non-members.

/// Unitary with spectrum bounded away from 1 (no accidental enlargement of a
/// fixed subspace).
inline CMatrix random_unitary_avoiding_one(std::size_t n, Rng& rng, double margin = 0.3) {
  if (n == 0) return CMatrix(0, 0);
  std::vector<Complex> phases(n);
  for (auto& p : phases)
    p = std::polar(1.0, rng.uniform(margin, 2.0 * 3.14159265358979323846 - margin));
  CMatrix b = random_unitary(n, rng);
  return b * CMatrix::diagonal(phases) * adjoint(b);
}

/// Member of the big group acting as `sub` on span{e_0..e_{k-1}, e_n} and as
/// the identity on the remaining H directions.
inline CMatrix embed_on_leading_block(const CMatrix& sub, std::size_t k, std::size_t n) {
  CMatrix out = CMatrix::identity(n + 1);
  std::vector<std::size_t> pos(k + 1);
  for (std::size_t i = 0; i < k; ++i) pos[i] = i;
  pos[k] = n;
  for (std::size_t i = 0; i <= k; ++i)
    for (std::size_t j = 0; j <= k; ++j) out(pos[i], pos[j]) = sub(i, j);
  return out;
}

inline CMatrix block_rotation(const CMatrix& middle, std::size_t k, std::size_t n) {
  CMatrix out = CMatrix::identity(n + 1);
  for (std::size_t i = 0; i < middle.rows(); ++i)
    for (std::size_t j = 0; j < middle.cols(); ++j) out(k + i, k + j) = middle(i, j);
  return out;
}

/// Elliptic t with time-like eigenspace of dimension k+1, plus a candidate s:
/// true centralizer members combine an arbitrary sub-geometry member on M
/// with a commuting rotation on M-dagger; non-members break one block.
inline std::pair<IsometryMatrix, IsometryMatrix> random_elliptic_centralizer_pair(
    std::size_t n, Rng& rng, const Tolerances& tol = Tolerances{}) {
  std::size_t k = 1 + rng.raw() % (n - 1);  // fixed H-part dimension, 1..n-1
  CMatrix w = random_unitary_avoiding_one(n - k, rng);
  CMatrix u0 = CMatrix::identity(n);
  for (std::size_t i = 0; i < n - k; ++i)
    for (std::size_t j = 0; j < n - k; ++j) u0(k + i, k + j) = w(i, j);
  double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  IsometryMatrix t0 = build_isometry(GeneratorData{theta, u0, CVector(n)}, tol);

  double coin = rng.uniform();
  CMatrix s0;
  if (coin < 0.4) {
    // member: sub-geometry isometry on M times a commuting rotation
    GeneratorData sub = random_generator_data(k, rng);
    CMatrix sub_m = build_isometry(sub, tol).m;
    int j = static_cast<int>(rng.raw() % 3);
    CMatrix wp = CMatrix::identity(n - k);
    for (int rep = 0; rep < j; ++rep) wp = wp * w;
    wp *= rng.unit_complex();
    s0 = embed_on_leading_block(sub_m, k, n) * block_rotation(wp, k, n);
  } else if (coin < 0.7) {
    // near miss: right blocks, non-commuting rotation on M-dagger
    GeneratorData sub = random_generator_data(k, rng);
    s0 = embed_on_leading_block(build_isometry(sub, tol).m, k, n) *
         block_rotation(random_unitary(n - k, rng), k, n);
  } else {
    s0 = random_member(n, rng, tol).m;
  }
  IsometryMatrix g = random_member(n, rng, tol);
  IsometryMatrix t = conjugate(g, IsometryMatrix::from(t0.m, Model::Ball, tol), tol);
  IsometryMatrix s = conjugate(g, IsometryMatrix::from(std::move(s0), Model::Ball, tol), tol);
  return {t, s};
}

/// Hyperbolic t (normal form inside), plus a candidate s: members act as
/// (r e^{i psi}, r^{-1} e^{i psi}) on the eigenlines and commute on M-dagger.
inline std::pair<IsometryMatrix, IsometryMatrix> random_hyperbolic_centralizer_pair(
    std::size_t n, Rng& rng, const Tolerances& tol = Tolerances{}) {
  CMatrix w = random_unitary_avoiding_one(n - 1, rng);
  CMatrix u0 = CMatrix::identity(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j + 1 < n; ++j) u0(1 + i, 1 + j) = w(i, j);
  CVector xi(n);
  xi[0] = rng.uniform(0.3, 1.5);
  double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  IsometryMatrix t0 = build_isometry(GeneratorData{theta, u0, xi}, tol);

  double coin = rng.uniform();
  CMatrix s0;
  if (coin < 0.4) {
    IsometryMatrix core =
        centralizer_element_from(std::exp(rng.uniform(-1.0, 1.0)),
                                 rng.uniform(0.0, 6.28), t0, tol);
    int j = static_cast<int>(rng.raw() % 3);
    CMatrix wp = CMatrix::identity(n - 1);
    for (int rep = 0; rep < j; ++rep) wp = wp * w;
    wp *= rng.unit_complex();
    s0 = core.m * block_rotation(wp, 1, n);
  } else if (coin < 0.7) {
    IsometryMatrix core =
        centralizer_element_from(std::exp(rng.uniform(-1.0, 1.0)),
                                 rng.uniform(0.0, 6.28), t0, tol);
    s0 = core.m * block_rotation(random_unitary(n - 1, rng), 1, n);
  } else {
    s0 = random_member(n, rng, tol).m;
  }
  IsometryMatrix g = random_member(n, rng, tol);
  IsometryMatrix t = conjugate(g, t0, tol);
  IsometryMatrix s = conjugate(g, IsometryMatrix::from(std::move(s0), Model::Ball, tol), tol);
  return {t, s};
}

/// Heisenberg translation h plus a stabilizer candidate s: members satisfy
/// the U(a') = lambda' a' and real-pairing conditions (vertical case: any
/// non-hyperbolic stabilizer element); non-members break one of them.
inline std::pair<IsometryMatrix, HeisenbergTranslation> random_heisenberg_centralizer_pair(
    std::size_t n, Rng& rng, const Tolerances& tol = Tolerances{}) {
  bool vertical = rng.uniform() < 0.4;
  HeisenbergTranslation h = random_translation(n, rng, vertical);

  double coin = rng.uniform();
  SiegelStabilizerElement el;
  if (vertical) {
    el = random_stabilizer_element(n, rng, coin < 0.5 /* unit lambda <=> member */);
  } else if (coin < 0.45) {
    // member: lambda' on the circle, U fixing the a' line, real pairing
    Complex lp = rng.unit_complex();
    CMatrix ba = onb_from(h.a_prime);
    CMatrix d(n - 1, n - 1);
    d(0, 0) = lp;
    CMatrix v = random_unitary(n - 2, rng);
    for (std::size_t i = 0; i + 2 < n; ++i)
      for (std::size_t j = 0; j + 2 < n; ++j) d(1 + i, 1 + j) = v(i, j);
    el.lambda = lp;
    el.U = ba * d * adjoint(ba);
    CVector w = random_vector(n - 1, rng, 0.4);
    w -= (dot(w, h.a_prime) / (h.a_prime.norm() * h.a_prime.norm())) * h.a_prime;
    el.a_prime = Complex(rng.uniform(-1.2, 1.2), 0.0) * h.a_prime + w;
    double bn = el.a_prime.norm();
    el.s = Complex(0.5 * bn * bn, rng.uniform(-1.5, 1.5));
  } else if (coin < 0.7) {
    // near miss: complex pairing, everything else right
    Complex lp = rng.unit_complex();
    CMatrix ba = onb_from(h.a_prime);
    CMatrix d = CMatrix::identity(n - 1);
    d(0, 0) = lp;
    el.lambda = lp;
    el.U = ba * d * adjoint(ba);
    el.a_prime = Complex(0.0, rng.uniform(0.3, 1.0)) * h.a_prime;
    double bn = el.a_prime.norm();
    el.s = Complex(0.5 * bn * bn, rng.uniform(-1.5, 1.5));
  } else {
    el = random_stabilizer_element(n, rng, rng.uniform() < 0.3);
  }
  return {stabilizer_build(el, tol), h};
}

/// Regular elliptic member: the time-like eigenvalue has multiplicity one.
inline IsometryMatrix random_regular_elliptic(std::size_t n, Rng& rng,
                                              const Tolerances& tol = Tolerances{}) {
  CMatrix u = random_unitary_avoiding_one(n, rng);
  double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  IsometryMatrix t0 = build_isometry(GeneratorData{theta, u, CVector(n)}, tol);
  IsometryMatrix g = random_member(n, rng, tol);
  return conjugate(g, t0, tol);
}

}  // namespace cxhyp
