// End-to-end checks of the installed CLI: documented outputs and the exit
// code contract (0 ok, 1 property failure, 2 parse error, 3 ambiguous,
// 4 not a member, 5 unsupported pair, 6 generation failed). The binary path
// comes from the CXHYP_CLI environment variable.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "cxhyp/cxhyp.hpp"

using namespace cxhyp;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  RunResult r;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, got);
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string cli() {
  const char* path = std::getenv("CXHYP_CLI");
  REQUIRE(path != nullptr);
  return path;
}

std::string write_doc(const std::string& name, const std::string& text) {
  std::string path = "cli_case_" + name + ".json";
  std::ofstream(path) << text;
  return path;
}

std::string write_doc(const std::string& name, const IsometryDocument& doc) {
  return write_doc(name, serialize(doc));
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("classify: documented outputs and exit codes") {
  Tolerances tol;
  std::string id_path = write_doc(
      "identity", make_document(IsometryMatrix::from(CMatrix::identity(3), Model::Ball, tol)));
  RunResult r = run(cli() + " classify " + id_path);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "elliptic boundary"));

  IsometryMatrix h =
      build_isometry(GeneratorData{0.0, CMatrix::identity(2), CVector{1.0, 0.0}}, tol);
  std::string h_path = write_doc("hyperbolic", make_document(h));
  r = run(cli() + " classify " + h_path);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "hyperbolic"));
  CHECK(contains(r.out, "boundary"));

  HeisenbergTranslation tr{Complex(1.0, 0.0), CVector{1.0}, Complex(0.5, 0.0)};
  IsometryDocument trdoc = make_document(translation_matrix(tr, tol));
  trdoc.siegel_generator = to_stabilizer_element(tr);
  std::string t_path = write_doc("translation", trdoc);
  r = run(cli() + " classify " + t_path);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "parabolic"));
}

TEST_CASE("classify: ambiguous elements exit with code 3") {
  // hyperbolic-shaped member whose spectral radius sits inside the gray zone
  double c = 2e-7;
  CMatrix m = CMatrix::from_rows({{std::cosh(c), std::sinh(c)}, {std::sinh(c), std::cosh(c)}});
  Tolerances tol;
  IsometryDocument doc = make_document(IsometryMatrix::from(m, Model::Ball, tol));
  std::string path = write_doc("gray", doc);
  RunResult r = run(cli() + " classify " + path);
  CHECK(r.exit_code == 3);
  CHECK(contains(r.out, "ambiguous"));
}

TEST_CASE("parse and membership failures map to exit codes 2 and 4") {
  std::string bad = write_doc("malformed", "{ not json");
  CHECK(run(cli() + " classify " + bad).exit_code == 2);

  std::string nonmember = write_doc(
      "nonmember", R"({"model":"ball","n":1,"matrix":[[2,0],[0,0],[0,0],[1,0]]})");
  CHECK(run(cli() + " classify " + nonmember).exit_code == 4);
}

TEST_CASE("conjugacy: translations and the unsupported-pair exit code") {
  Tolerances tol;
  HeisenbergTranslation v1{Complex(1.0, 0.0), CVector(1), Complex(0.0, 1.0)};
  HeisenbergTranslation v2{Complex(1.0, 0.0), CVector(1), Complex(0.0, 2.0)};
  HeisenbergTranslation v3{Complex(1.0, 0.0), CVector(1), Complex(0.0, -1.0)};
  std::string p1 = write_doc("v1", make_document(translation_matrix(v1, tol)));
  std::string p2 = write_doc("v2", make_document(translation_matrix(v2, tol)));
  std::string p3 = write_doc("v3", make_document(translation_matrix(v3, tol)));

  RunResult r = run(cli() + " conjugacy " + p1 + " " + p2);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "conjugate"));
  CHECK(contains(r.out, "matrix"));  // serialized conjugator document

  r = run(cli() + " conjugacy " + p1 + " " + p3);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "not conjugate"));

  // parabolic with non-singleton spectrum: unsupported pair
  Complex phase = std::polar(1.0, 0.9);
  SiegelStabilizerElement rot_par{Complex(1.0, 0.0), CMatrix::diagonal({phase}), CVector(1),
                                  Complex(0.0, 1.0)};
  std::string p4 = write_doc("nonsingleton", make_document(stabilizer_build(rot_par, tol)));
  r = run(cli() + " conjugacy " + p4 + " " + p4);
  CHECK(r.exit_code == 5);
}

TEST_CASE("commute, fixed-points, convert, decompose round out the verbs") {
  Tolerances tol;
  IsometryMatrix h =
      build_isometry(GeneratorData{0.0, CMatrix::identity(2), CVector{1.0, 0.0}}, tol);
  std::string h_path = write_doc("h2", make_document(h));
  std::string id_path = write_doc(
      "id2", make_document(IsometryMatrix::from(CMatrix::identity(3), Model::Ball, tol)));

  RunResult r = run(cli() + " commute " + id_path + " " + h_path);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "commute"));

  r = run(cli() + " fixed-points " + h_path);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "boundary"));

  r = run(cli() + " convert " + h_path + " --to siegel");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "\"siegel\""));
  std::string hs_path = write_doc("hs", r.out);
  RunResult back = run(cli() + " convert " + hs_path + " --to ball");
  CHECK(back.exit_code == 0);
  IsometryDocument round = parse_document(back.out, tol);
  CHECK((round.matrix - h.m).frobenius() <= 1e-10);

  r = run(cli() + " decompose " + h_path);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "t1"));
}

TEST_CASE("generate: deterministic per seed, classified as requested") {
  for (std::string kind : {"elliptic", "hyperbolic", "parabolic", "translation"}) {
    RunResult a = run(cli() + " generate --kind " + kind + " --n 2 --seed 7");
    RunResult b = run(cli() + " generate --kind " + kind + " --n 2 --seed 7");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    std::string path = write_doc("gen_" + kind, a.out);
    RunResult cls = run(cli() + " classify " + path);
    CHECK(cls.exit_code == 0);
    std::string want = kind == "translation" ? "parabolic" : kind;
    CHECK(contains(cls.out, want));
  }
}

TEST_CASE("suite verb: exit codes for pass, failure injection, zero trials") {
  CHECK(run(cli() + " suite --seed 5 --trials 4").exit_code == 0);
  CHECK(run(cli() + " suite --seed 5 --trials 4 --inject-failure").exit_code == 1);
  RunResult vac = run(cli() + " suite --seed 5 --trials 0");
  CHECK(vac.exit_code == 0);
  CHECK(contains(vac.out, "warning"));
}

TEST_CASE("CXHYP_MAX_DIM caps the accepted dimension") {
  Tolerances tol;
  std::string path = write_doc(
      "capped", make_document(IsometryMatrix::from(CMatrix::identity(3), Model::Ball, tol)));
  CHECK(run("CXHYP_MAX_DIM=1 " + cli() + " classify " + path).exit_code == 2);
  CHECK(run("CXHYP_MAX_DIM=2 " + cli() + " classify " + path).exit_code == 0);
}

TEST_CASE("--tol-scale widens every tolerance") {
  Tolerances tol;
  std::string id_path = write_doc(
      "idscale", make_document(IsometryMatrix::from(CMatrix::identity(3), Model::Ball, tol)));
  CHECK(run(cli() + " --tol-scale 10 classify " + id_path).exit_code == 0);
  // the gray-zone example from above becomes plain hyperbolic... or parabolic;
  // either way it is no longer ambiguous once the band is 10x wider
  double c = 2e-7;
  CMatrix m = CMatrix::from_rows({{std::cosh(c), std::sinh(c)}, {std::sinh(c), std::cosh(c)}});
  std::string gray = write_doc("grayscale", make_document(IsometryMatrix::from(m, Model::Ball, tol)));
  RunResult r = run(cli() + " --tol-scale 10 classify " + gray);
  CHECK(r.exit_code == 0);
}
