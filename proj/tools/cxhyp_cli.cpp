// Command-line interface: classify, conjugacy, commute, fixed-points,
// convert, decompose, generate, suite. Documents are JSON files with complex
// entries as [re, im] pairs (see README). Exit codes: 0 ok, 1 property
// failure, 2 parse error, 3 ambiguous classification, 4 not a member,
// 5 unsupported pair, 6 generation failed.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cxhyp/cxhyp.hpp"

namespace {

using namespace cxhyp;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case Err::ParseError: return 2;
    case Err::NotMember: return 4;
    case Err::NotStabilizer: return 5;
    case Err::GenerationFailed: return 6;
    default: return 2;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Err::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt_complex(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

std::string fmt_point(const CVector& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += fmt_complex(p[i]);
  }
  return out + ")";
}

Json fixed_points_json(const FixedPointReport& rep) {
  Json j;
  auto points = [](const std::vector<FixedPoint>& fps) {
    Json arr = Json::array();
    for (const auto& fp : fps) {
      Json p;
      p["point"] = detail::vector_to_json(fp.point);
      p["eigenvalue"] = detail::complex_to_json(fp.eigenvalue);
      arr.push_back(std::move(p));
    }
    return arr;
  };
  j["interior"] = points(rep.interior_points);
  j["boundary"] = points(rep.boundary_points);
  j["all_of_space"] = rep.all_of_space;
  j["fixes_infinity"] = rep.fixes_infinity;
  return j;
}

void print_fixed_points(const FixedPointReport& rep) {
  if (rep.all_of_space) std::printf("every point is fixed (central element)\n");
  for (const auto& fp : rep.interior_points)
    std::printf("interior %s  eigenvalue %s\n", fmt_point(fp.point).c_str(),
                fmt_complex(fp.eigenvalue).c_str());
  for (const auto& fp : rep.boundary_points)
    std::printf("boundary %s  eigenvalue %s\n", fmt_point(fp.point).c_str(),
                fmt_complex(fp.eigenvalue).c_str());
  if (rep.fixes_infinity)
    std::printf("infinity fixed  eigenvalue %s\n",
                fmt_complex(rep.infinity_eigenvalue).c_str());
}

struct Options {
  double tol_scale = 1.0;
  std::uint64_t seed = 0;
  bool json = false;
  std::size_t max_n = 64;

  Tolerances tolerances() const {
    Tolerances t = Tolerances{}.scaled(tol_scale);
    t.eig_max_dim = static_cast<int>(max_n) + 1;
    return t;
  }
};

IsometryDocument load(const std::string& path, const Options& opt) {
  return parse_document(read_file(path), opt.tolerances(), opt.max_n);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

int cmd_classify(const std::string& file, const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  Tolerances tol = opt.tolerances();
  IsometryDocument doc = load(file, opt);
  IsometryMatrix t = document_member(doc, tol);
  ClassificationReport rep = classify(t, tol);
  if (opt.json) {
    Json j;
    j["command"] = "classify";
    j["kind"] = kind_name(rep.kind);
    j["spectral_radius"] = rep.spectral_radius;
    j["fixed_points"] = fixed_points_json(rep.evidence);
    if (rep.timelike_witness) {
      j["timelike_eigenvalue"] = detail::complex_to_json(rep.timelike_eigenvalue);
      j["timelike_multiplicity"] = rep.timelike_multiplicity;
    }
    j["membership_residual"] = t.residual;
    j["wall_time_ms"] = ms_since(t0);
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("kind: %s\n", kind_name(rep.kind));
    std::printf("spectral radius: %.12g\n", rep.spectral_radius);
    print_fixed_points(rep.evidence);
  }
  return rep.kind == ClassKind::Ambiguous ? 3 : 0;
}

int cmd_fixed_points(const std::string& file, const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  Tolerances tol = opt.tolerances();
  IsometryMatrix t = document_member(load(file, opt), tol);
  FixedPointReport rep = fixed_points(t, tol);
  if (opt.json) {
    Json j;
    j["command"] = "fixed-points";
    j["fixed_points"] = fixed_points_json(rep);
    j["wall_time_ms"] = ms_since(t0);
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    print_fixed_points(rep);
  }
  return 0;
}

int cmd_commute(const std::string& f1, const std::string& f2, const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  Tolerances tol = opt.tolerances();
  IsometryMatrix a = document_member(load(f1, opt), tol);
  IsometryMatrix b = document_member(load(f2, opt), tol);
  CentralizerEvidence ev = commutes(a, b, tol);
  if (opt.json) {
    Json j;
    j["command"] = "commute";
    j["commutator_norm"] = ev.commutator_norm;
    j["commute"] = ev.member;
    j["wall_time_ms"] = ms_since(t0);
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("commutator norm: %.3e\n", ev.commutator_norm);
    std::printf("verdict: %s\n", ev.member ? "commute" : "do not commute");
  }
  return 0;
}

int cmd_convert(const std::string& file, const std::string& to, const Options& opt) {
  Tolerances tol = opt.tolerances();
  IsometryMatrix t = document_member(load(file, opt), tol);
  Model target;
  if (to == "ball")
    target = Model::Ball;
  else if (to == "siegel")
    target = Model::Siegel;
  else
    throw Error(Err::ParseError, "--to must be ball or siegel");
  IsometryMatrix out = target == Model::Ball ? to_ball(t, tol) : to_siegel(t, tol);
  // membership re-verified by construction of IsometryMatrix
  std::printf("%s\n", serialize(make_document(out)).c_str());
  return 0;
}

int cmd_decompose(const std::string& file, const Options& opt) {
  Tolerances tol = opt.tolerances();
  IsometryMatrix t = document_member(load(file, opt), tol);
  ClassificationReport cls = classify(t, tol);
  if (cls.kind == ClassKind::Ambiguous) {
    std::fprintf(stderr, "ambiguous classification, no decomposition\n");
    return 3;
  }
  if (cls.kind == ClassKind::Hyperbolic || is_elliptic(cls.kind)) {
    DecompositionReport rep = is_elliptic(cls.kind) ? decompose_elliptic(t, tol)
                                                    : decompose_hyperbolic(t, tol);
    Json j;
    j["command"] = "decompose";
    j["kind"] = kind_name(cls.kind);
    j["t1"] = detail::matrix_to_json(rep.t1);
    j["t2"] = detail::matrix_to_json(rep.t2);
    Json mb = Json::array(), db = Json::array();
    for (const auto& v : rep.m_basis) mb.push_back(detail::vector_to_json(v));
    for (const auto& v : rep.m_dagger_basis) db.push_back(detail::vector_to_json(v));
    j["m_basis"] = std::move(mb);
    j["m_dagger_basis"] = std::move(db);
    if (opt.json) {
      std::printf("%s\n", j.dump(2).c_str());
    } else {
      std::printf("kind: %s\n", kind_name(cls.kind));
      std::printf("t1 (%zux%zu):\n", rep.t1.rows(), rep.t1.cols());
      for (std::size_t i = 0; i < rep.t1.rows(); ++i) {
        for (std::size_t jj = 0; jj < rep.t1.cols(); ++jj)
          std::printf("  %s", fmt_complex(rep.t1(i, jj)).c_str());
        std::printf("\n");
      }
      EigenResult e2 = eig(rep.t2, tol);
      std::printf("t2 spectrum:");
      for (const auto& l : e2.eigenvalues) std::printf(" %s", fmt_complex(l).c_str());
      std::printf("\n");
    }
    return 0;
  }
  // parabolic: the K-decomposition applies when the element is a translation
  if (t.model != Model::Siegel)
    throw Error(Err::NotStabilizer, "decompose: parabolic decomposition needs Siegel model");
  SiegelStabilizerElement el = stabilizer_parse(t, tol);
  HeisenbergTranslation h{el.lambda, el.a_prime, el.s};
  KDecomposition kd = k_decompose(h, opt.tolerances());
  std::printf("kind: parabolic (Heisenberg translation)\n");
  std::printf("dim K: %zu\n", kd.k_basis.size());
  std::printf("minimal polynomial degree on K: %d\n", kd.minpoly_degree);
  std::printf("K-dagger: %s\n", kd.k_dagger_note.c_str());
  return 0;
}

int cmd_conjugacy(const std::string& f1, const std::string& f2, const Options& opt) {
  Tolerances tol = opt.tolerances();
  IsometryDocument d1 = load(f1, opt), d2 = load(f2, opt);
  if (d1.model != d2.model || d1.n != d2.n)
    throw Error(Err::ParseError, "conjugacy: documents must share model and n");
  IsometryMatrix t1 = document_member(d1, tol), t2 = document_member(d2, tol);
  ConjugacyVerdict cv = conjugate_isometries(t1, t2, tol);
  if (opt.json) {
    Json j;
    j["command"] = "conjugacy";
    j["conjugate"] = cv.conjugate;
    if (!cv.conjugate) j["reason"] = cv.reason;
    if (cv.conjugator) j["conjugator"] = to_json(make_document(*cv.conjugator));
    std::printf("%s\n", j.dump(2).c_str());
  } else if (cv.conjugate) {
    std::printf("verdict: conjugate\n");
    std::printf("%s\n", serialize(make_document(*cv.conjugator)).c_str());
  } else {
    std::printf("verdict: not conjugate (%s)\n", cv.reason.c_str());
  }
  return 0;
}

int cmd_generate(const std::string& kind, std::size_t n, const Options& opt) {
  Tolerances tol = opt.tolerances();
  if (n < 1 || n > opt.max_n) throw Error(Err::ParseError, "generate: n out of range");
  for (int attempt = 0; attempt < 24; ++attempt) {
    Rng rng(Rng::mix(opt.seed, static_cast<std::uint64_t>(attempt)));
    try {
      IsometryDocument doc;
      ClassKind want;
      if (kind == "translation") {
        HeisenbergTranslation h = random_translation(n, rng, rng.uniform() < 0.4);
        IsometryMatrix t = translation_matrix(h, tol);
        doc = make_document(t);
        doc.siegel_generator = to_stabilizer_element(h);
        want = ClassKind::Parabolic;
      } else {
        DynamicalType dt;
        if (kind == "elliptic")
          dt = DynamicalType::Elliptic;
        else if (kind == "hyperbolic")
          dt = DynamicalType::Hyperbolic;
        else if (kind == "parabolic")
          dt = DynamicalType::Parabolic;
        else
          throw Error(Err::ParseError, "generate: unknown kind " + kind);
        // parabolic stays unconjugated: conjugation stirs the defective
        // eigenvalue pair beyond what double precision can re-cluster
        bool conjugated = dt != DynamicalType::Parabolic;
        IsometryMatrix t = random_classified(dt, n, rng, conjugated, tol);
        doc = make_document(t);
        doc.ball_generator = generator_parse(t, tol);
        want = dt == DynamicalType::Elliptic
                   ? ClassKind::EllipticRegular  // either elliptic kind accepted below
                   : (dt == DynamicalType::Parabolic ? ClassKind::Parabolic
                                                     : ClassKind::Hyperbolic);
      }
      ClassificationReport rep = classify(document_member(doc, tol), tol);
      bool ok = (want == ClassKind::EllipticRegular) ? is_elliptic(rep.kind)
                                                     : rep.kind == want;
      if (!ok) continue;
      std::printf("%s\n", serialize(doc).c_str());
      return 0;
    } catch (const Error&) {
      continue;  // redraw
    }
  }
  std::fprintf(stderr, "generation failed post-check after retry budget\n");
  return 6;
}

int cmd_suite(long trials, bool inject, const Options& opt) {
  SuiteReport report = run_suite(opt.seed, trials, opt.tolerances(), inject);
  std::string rendered = opt.json ? render_json(report) : render_text(report);
  fwrite(rendered.data(), 1, rendered.size(), stdout);
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complex hyperbolic isometry toolkit"};
  app.require_subcommand(1);

  Options opt;
  if (const char* cap = std::getenv("CXHYP_MAX_DIM")) {
    char* end = nullptr;
    long v = std::strtol(cap, &end, 10);
    if (end && *end == '\0' && v >= 1) opt.max_n = static_cast<std::size_t>(v);
  }
  app.add_option("--tol-scale", opt.tol_scale, "multiply all tolerances")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "seed for generate/suite");
  app.add_flag("--json", opt.json, "machine-readable reports");

  std::string file1, file2, to_model = "siegel", kind = "hyperbolic";
  std::size_t gen_n = 2;
  long trials = 60;
  bool inject = false;

  auto* c_classify = app.add_subcommand("classify", "dynamical type of a document");
  c_classify->fallthrough();
  c_classify->add_option("file", file1)->required();

  auto* c_conj = app.add_subcommand("conjugacy", "decide conjugacy of two documents");
  c_conj->fallthrough();
  c_conj->add_option("file1", file1)->required();
  c_conj->add_option("file2", file2)->required();

  auto* c_comm = app.add_subcommand("commute", "commutator of two documents");
  c_comm->fallthrough();
  c_comm->add_option("file1", file1)->required();
  c_comm->add_option("file2", file2)->required();

  auto* c_fp = app.add_subcommand("fixed-points", "projective fixed points");
  c_fp->fallthrough();
  c_fp->add_option("file", file1)->required();

  auto* c_conv = app.add_subcommand("convert", "convert between ball and Siegel models");
  c_conv->fallthrough();
  c_conv->add_option("file", file1)->required();
  c_conv->add_option("--to", to_model, "target model (ball|siegel)")->required();

  auto* c_dec = app.add_subcommand("decompose", "M (+) M-dagger decomposition");
  c_dec->fallthrough();
  c_dec->add_option("file", file1)->required();

  auto* c_gen = app.add_subcommand("generate", "emit a random classified document");
  c_gen->fallthrough();
  c_gen->add_option("--kind", kind, "elliptic|hyperbolic|parabolic|translation")->required();
  c_gen->add_option("--n", gen_n, "dimension of H");

  auto* c_suite = app.add_subcommand("suite", "run the property suite");
  c_suite->fallthrough();
  c_suite->add_option("--trials", trials, "iterations per property");
  c_suite->add_flag("--inject-failure", inject, "harness self-test: force one failure");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_classify->parsed()) return cmd_classify(file1, opt);
    if (c_conj->parsed()) return cmd_conjugacy(file1, file2, opt);
    if (c_comm->parsed()) return cmd_commute(file1, file2, opt);
    if (c_fp->parsed()) return cmd_fixed_points(file1, opt);
    if (c_conv->parsed()) return cmd_convert(file1, to_model, opt);
    if (c_dec->parsed()) return cmd_decompose(file1, opt);
    if (c_gen->parsed()) return cmd_generate(kind, gen_n, opt);
    if (c_suite->parsed()) return cmd_suite(trials, inject, opt);
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", err_name(e.kind()), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
