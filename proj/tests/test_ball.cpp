#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cxhyp/ball.hpp"
#include "cxhyp/model.hpp"
#include "cxhyp/random.hpp"

using namespace cxhyp;

namespace {
const double kSqrt2 = std::sqrt(2.0);

IsometryMatrix sqrt2_hyperbolic() {
  GeneratorData g{0.0, CMatrix::identity(2), CVector{1.0, 0.0}};
  return build_isometry(g);
}
}  // namespace

TEST_CASE("form_A: pinned values") {
  CHECK(std::abs(form_ball(CVector{0.0, 1.0}, CVector{0.0, 1.0}) - Complex(-1.0, 0.0)) <
        1e-15);
  CHECK(std::abs(form_ball(CVector{1.0, 0.0}, CVector{1.0, 0.0}) - Complex(1.0, 0.0)) <
        1e-15);
  // <(1,0),(-1,0)> - 1 = -2
  CHECK(std::abs(form_ball(CVector{1.0, 0.0, 1.0}, CVector{-1.0, 0.0, 1.0}) -
                 Complex(-2.0, 0.0)) < 1e-15);
  CHECK_THROWS_AS(form_ball(CVector{1.0, 0.0}, CVector{1.0, 0.0, 0.0}), Error);
}

TEST_CASE("causal_class: pinned values") {
  auto c1 = causal_class(Model::Ball, CVector{0.0, 1.0});
  CHECK(c1.tag == Causal::TimeLike);
  CHECK(c1.q_value == -1.0);

  auto c2 = causal_class(Model::Ball, CVector{1.0, 0.0, 1.0});
  CHECK(c2.tag == Causal::LightLike);

  auto c3 = causal_class(Model::Ball, CVector{1.0, 0.0, 0.0});
  CHECK(c3.tag == Causal::SpaceLike);
  CHECK(c3.q_value == 1.0);

  CHECK_THROWS_AS(causal_class(Model::Ball, CVector(3)), Error);
}

TEST_CASE("build_isometry: pinned matrices") {
  GeneratorData id{0.0, CMatrix::identity(2), CVector(2)};
  IsometryMatrix t = build_isometry(id);
  CHECK((t.m - CMatrix::identity(3)).frobenius() < 1e-15);
  CHECK(t.residual < 1e-15);

  IsometryMatrix h = sqrt2_hyperbolic();
  CMatrix expect = CMatrix::from_rows(
      {{kSqrt2, 0.0, 1.0}, {0.0, 1.0, 0.0}, {1.0, 0.0, kSqrt2}});
  CHECK((h.m - expect).frobenius() < 1e-14);
  CHECK(h.residual < 1e-14);

  // central element at n = 1: theta = pi gives -I
  GeneratorData c{3.14159265358979323846, CMatrix::identity(1), CVector(1)};
  IsometryMatrix z = build_isometry(c);
  CHECK((z.m + CMatrix::identity(2)).frobenius() < 1e-12);
}

TEST_CASE("build_isometry rejects non-unitary U") {
  CMatrix bad = CMatrix::identity(2);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(build_isometry(GeneratorData{0.0, bad, CVector(2)}), Error);
}

TEST_CASE("is_member residuals: pinned values") {
  CHECK(membership_residual(CMatrix::identity(3), Model::Ball) == 0.0);
  CHECK(membership_residual(sqrt2_hyperbolic().m, Model::Ball) <= 1e-12);
  // m^H A' m = diag(4,1,-1); difference from diag(1,1,-1) has norm 3
  CHECK(std::abs(membership_residual(CMatrix::diagonal({2.0, 1.0, 1.0}), Model::Ball) -
                 3.0) < 1e-14);
}

TEST_CASE("inverse: pinned values") {
  Tolerances tol;
  IsometryMatrix id = IsometryMatrix::from(CMatrix::identity(3), Model::Ball, tol);
  CHECK((inverse(id).m - CMatrix::identity(3)).frobenius() < 1e-15);

  IsometryMatrix h = sqrt2_hyperbolic();
  CMatrix expect = CMatrix::from_rows(
      {{kSqrt2, 0.0, -1.0}, {0.0, 1.0, 0.0}, {-1.0, 0.0, kSqrt2}});
  CHECK((inverse(h).m - expect).frobenius() < 1e-14);
  CHECK((h.m * inverse(h).m - CMatrix::identity(3)).frobenius() < 1e-13);

  IsometryMatrix neg = IsometryMatrix::from(Complex(-1.0, 0.0) * CMatrix::identity(3),
                                            Model::Ball, tol);
  CHECK((inverse(neg).m - neg.m).frobenius() < 1e-15);
}

TEST_CASE("mobius_apply: pinned values") {
  Tolerances tol;
  IsometryMatrix id = IsometryMatrix::from(CMatrix::identity(3), Model::Ball, tol);
  CVector x{0.25, Complex(0.1, -0.3)};
  CHECK((mobius_apply(id, x) - x).norm() < 1e-15);

  // image of (0,0,1) is ((1,0), sqrt2)
  CVector img = mobius_apply(sqrt2_hyperbolic(), CVector(2));
  CHECK(std::abs(img[0] - 1.0 / kSqrt2) < 1e-14);
  CHECK(std::abs(img[1]) < 1e-15);
}

TEST_CASE("lift_fb: pinned behavior") {
  Tolerances tol;
  IsometryMatrix l0 = lift_fb(CVector(2), tol);
  CHECK((l0.m - CMatrix::identity(3)).frobenius() < 1e-14);

  CVector b{0.5, 0.0};
  IsometryMatrix lb = lift_fb(b, tol);
  CHECK(lb.residual <= tol.member);
  CHECK(mobius_apply(lb, b).norm() <= tol.point);

  CHECK_THROWS_AS(lift_fb(CVector{1.0, 0.0}), Error);
}

TEST_CASE("lift_fb inverse acts as f_{-b}") {
  Tolerances tol;
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 1 + trial % 4;
    CVector b = random_unit_vector(n, rng);
    b *= Complex(rng.uniform(0.0, 0.85), 0.0);
    IsometryMatrix lb = lift_fb(b, tol);
    IsometryMatrix linv = inverse(lb, tol);
    CVector x = random_unit_vector(n, rng);
    x *= Complex(rng.uniform(0.0, 0.95), 0.0);
    CVector round = mobius_apply(linv, mobius_apply(lb, x, tol), tol);
    CHECK((round - x).norm() < 1e-9);
    // f_b^{-1} = f_{-b} projectively
    CVector nb = Complex(-1.0, 0.0) * b;
    CVector via = mobius_apply(lift_fb(nb, tol), x, tol);
    CHECK((mobius_apply(linv, x, tol) - via).norm() < 1e-9);
  }
}

TEST_CASE("random members satisfy the membership invariant") {
  Tolerances tol;
  for (std::size_t n = 1; n <= 6; ++n) {
    Rng rng(100 + n);
    for (int trial = 0; trial < 40; ++trial) {
      IsometryMatrix t = random_member(n, rng, tol);
      CHECK(t.residual <= 1e-9);
    }
  }
}

TEST_CASE("members preserve the form") {
  Tolerances tol;
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + trial % 5;
    IsometryMatrix t = random_member(n, rng, tol);
    CVector u = random_vector(n + 1, rng);
    CVector v = random_vector(n + 1, rng);
    Complex before = form_ball(u, v);
    Complex after = form_ball(t.m * u, t.m * v);
    CHECK(std::abs(after - before) <= tol.member * 100.0 * u.norm() * v.norm());
  }
}

TEST_CASE("mobius_apply respects composition") {
  Tolerances tol;
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + trial % 4;
    IsometryMatrix t1 = random_member(n, rng, tol);
    IsometryMatrix t2 = random_member(n, rng, tol);
    CVector x = random_unit_vector(n, rng);
    x *= Complex(rng.uniform(0.0, 0.9), 0.0);
    CVector lhs = mobius_apply(compose(t1, t2, tol), x, tol);
    CVector rhs = mobius_apply(t1, mobius_apply(t2, x, tol), tol);
    CHECK((lhs - rhs).norm() <= tol.point);
  }
}

TEST_CASE("members leave the boundary sphere invariant") {
  Tolerances tol;
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + trial % 5;
    IsometryMatrix t = random_member(n, rng, tol);
    CVector x = random_unit_vector(n, rng);
    CVector img = mobius_apply(t, x, tol);
    CHECK(std::abs(img.norm() - 1.0) <= tol.boundary);
  }
}

TEST_CASE("causal class is invariant under members") {
  Tolerances tol;
  Rng rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + trial % 5;
    IsometryMatrix t = random_member(n, rng, tol);
    CVector u = random_vector(n + 1, rng);
    double q = quad_value(Model::Ball, u);
    if (std::abs(q) < 1e-3) continue;  // stay off the light cone
    auto before = causal_class(Model::Ball, u, tol);
    auto after = causal_class(Model::Ball, t.m * u, tol);
    CHECK(before.tag == after.tag);
  }
}

TEST_CASE("mobius_apply rejects points outside the closed ball") {
  Tolerances tol;
  IsometryMatrix id = IsometryMatrix::from(CMatrix::identity(3), Model::Ball, tol);
  CHECK_THROWS_AS(mobius_apply(id, CVector{1.5, 0.0}), Error);
}
