#include <catch2/catch_amalgamated.hpp>

#include "cxhyp/conjugacy.hpp"
#include "cxhyp/document.hpp"
#include "cxhyp/random.hpp"
#include "cxhyp/suite.hpp"

using namespace cxhyp;

TEST_CASE("document round trip is bit-exact") {
  Tolerances tol;
  Rng rng(301);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + trial % 4;
    IsometryMatrix t = random_member(n, rng, tol);
    IsometryDocument doc = make_document(t);
    doc.ball_generator = generator_parse(t, tol);
    std::string text = serialize(doc);
    IsometryDocument back = parse_document(text, tol);
    CHECK(back.matrix.data() == doc.matrix.data());  // exact doubles
    CHECK(back.model == doc.model);
    CHECK(back.n == doc.n);
    REQUIRE(back.ball_generator.has_value());
    CHECK(serialize(back) == text);
  }
}

TEST_CASE("generator_parse inverts build_isometry") {
  Tolerances tol;
  Rng rng(303);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + trial % 4;
    GeneratorData g = random_generator_data(n, rng);
    IsometryMatrix t = build_isometry(g, tol);
    GeneratorData back = generator_parse(t, tol);
    IsometryMatrix rebuilt = build_isometry(back, tol);
    CHECK((rebuilt.m - t.m).frobenius() <= 1e-10 * std::max(1.0, t.m.frobenius()));
  }
}

TEST_CASE("siegel documents with stabilizer generators round trip") {
  Tolerances tol;
  Rng rng(305);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 1 + trial % 4;
    HeisenbergTranslation h = random_translation(n, rng, trial % 2 == 0);
    IsometryMatrix t = translation_matrix(h, tol);
    IsometryDocument doc = make_document(t);
    doc.siegel_generator = to_stabilizer_element(h);
    IsometryDocument back = parse_document(serialize(doc), tol);
    REQUIRE(back.siegel_generator.has_value());
    CHECK(serialize(back) == serialize(doc));
  }
}

TEST_CASE("parse errors are reported as ParseError") {
  Tolerances tol;
  auto expect_parse_error = [&](const std::string& text) {
    try {
      parse_document(text, tol);
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.kind() == Err::ParseError);
    }
  };
  expect_parse_error("not json");
  expect_parse_error("{}");
  expect_parse_error(R"({"model":"disc","n":1,"matrix":[]})");
  expect_parse_error(R"({"model":"ball","n":0,"matrix":[]})");
  expect_parse_error(R"({"model":"ball","n":1,"matrix":[[1,0],[0,0],[0,0]]})");
  // n above the cap
  try {
    IsometryDocument big = make_document(
        IsometryMatrix::from(CMatrix::identity(4), Model::Ball, tol));
    parse_document(serialize(big), tol, 2);
    FAIL("expected ParseError for n > cap");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::ParseError);
  }
}

TEST_CASE("non-member matrices are rejected as NotMember") {
  Tolerances tol;
  std::string text = R"({"model":"ball","n":1,
    "matrix":[[2,0],[0,0],[0,0],[1,0]]})";
  try {
    parse_document(text, tol);
    FAIL("expected NotMember");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::NotMember);
  }
}

TEST_CASE("generator/matrix disagreement is rejected") {
  Tolerances tol;
  Rng rng(307);
  IsometryMatrix t = random_member(2, rng, tol);
  IsometryDocument doc = make_document(t);
  GeneratorData other = random_generator_data(2, rng);
  doc.ball_generator = other;
  try {
    parse_document(serialize(doc), tol);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::ParseError);
  }
}

TEST_CASE("conjugate_isometries: conjugate pairs are detected with a verified conjugator") {
  Tolerances tol;
  Rng rng(311);
  for (int trial = 0; trial < 15; ++trial) {
    std::size_t n = 2 + trial % 3;
    DynamicalType want = trial % 2 ? DynamicalType::Elliptic : DynamicalType::Hyperbolic;
    IsometryMatrix t1 = random_classified(want, n, rng, true, tol);
    IsometryMatrix g = random_member(n, rng, tol);
    IsometryMatrix t2 = conjugate(g, t1, tol);
    ConjugacyVerdict cv = conjugate_isometries(t1, t2, tol);
    REQUIRE(cv.conjugate);
    IsometryMatrix moved = conjugate(*cv.conjugator, t1, tol);
    CHECK((moved.m - t2.m).frobenius() <= 1e-7 * std::max(1.0, t2.m.frobenius()));
  }
}

TEST_CASE("conjugate_isometries: boundary elliptic with repeated eigenvalues") {
  Tolerances tol;
  Rng rng(331);
  Complex phase = std::polar(1.0, 1.1);
  // time-like eigenvalue of multiplicity 3 plus a simple space-like one
  CMatrix d = CMatrix::diagonal({std::polar(1.0, 2.4), phase, phase, phase});
  IsometryMatrix base = IsometryMatrix::from(d, Model::Ball, tol);
  IsometryMatrix t1 = conjugate(random_member(3, rng, tol), base, tol);
  IsometryMatrix t2 = conjugate(random_member(3, rng, tol), base, tol);
  ConjugacyVerdict cv = conjugate_isometries(t1, t2, tol);
  REQUIRE(cv.conjugate);
  IsometryMatrix moved = conjugate(*cv.conjugator, t1, tol);
  CHECK((moved.m - t2.m).frobenius() <= 1e-7 * std::max(1.0, t2.m.frobenius()));
}

TEST_CASE("conjugate_isometries: different spectra or types are rejected") {
  Tolerances tol;
  Rng rng(313);
  IsometryMatrix e = random_classified(DynamicalType::Elliptic, 2, rng, true, tol);
  IsometryMatrix h = random_classified(DynamicalType::Hyperbolic, 2, rng, true, tol);
  CHECK_FALSE(conjugate_isometries(e, h, tol).conjugate);

  IsometryMatrix h2 = random_classified(DynamicalType::Hyperbolic, 2, rng, true, tol);
  CHECK_FALSE(conjugate_isometries(h, h2, tol).conjugate);  // generic spectra differ

  // same spectrum, different time-like eigenvalue: diag(a,b,b) vs diag(b,b,a)
  Complex pa = std::polar(1.0, 0.5), pb = std::polar(1.0, 2.0);
  IsometryMatrix u1 = IsometryMatrix::from(CMatrix::diagonal({pa, pb, pb}), Model::Ball, tol);
  IsometryMatrix u2 = IsometryMatrix::from(CMatrix::diagonal({pb, pb, pa}), Model::Ball, tol);
  ConjugacyVerdict cv = conjugate_isometries(u1, u2, tol);
  CHECK_FALSE(cv.conjugate);
}

TEST_CASE("conjugate_isometries: translations route through the Heisenberg decision") {
  Tolerances tol;
  Rng rng(317);
  std::size_t n = 3;
  Complex lam = rng.unit_complex();
  HeisenbergTranslation h1 = random_translation(n, rng, false, lam);
  HeisenbergTranslation h2 = random_translation(n, rng, false, lam);
  ConjugacyVerdict cv =
      conjugate_isometries(translation_matrix(h1, tol), translation_matrix(h2, tol), tol);
  CHECK(cv.conjugate);

  HeisenbergTranslation v1{lam, CVector(n - 1), Complex(0.0, 1.0)};
  HeisenbergTranslation v2{lam, CVector(n - 1), Complex(0.0, -2.0)};
  cv = conjugate_isometries(translation_matrix(v1, tol), translation_matrix(v2, tol), tol);
  CHECK_FALSE(cv.conjugate);
}

TEST_CASE("suite report is deterministic and sensitive to the seed") {
  Tolerances tol;
  SuiteReport a = run_suite(42, 6, tol);
  SuiteReport b = run_suite(42, 6, tol);
  CHECK(render_text(a) == render_text(b));
  CHECK(render_json(a) == render_json(b));
  CHECK(a.all_pass());

  SuiteReport c = run_suite(43, 6, tol);
  CHECK(render_text(a) != render_text(c));  // details carry seed-dependent residuals
}

TEST_CASE("suite failure injection produces a counterexample") {
  Tolerances tol;
  SuiteReport r = run_suite(1, 4, tol, true);
  CHECK_FALSE(r.all_pass());
  bool found = false;
  for (const auto& p : r.results)
    if (!p.pass && !p.counterexample.empty()) found = true;
  CHECK(found);
}
