#pragma once

// The property suite behind the `suite` CLI verb: every module invariant as
// a seeded check with a pass/fail verdict and a serialized counterexample on
// failure. The report is a pure function of (seed, trials, flags) — no wall
// time, no environment — so repeated runs are byte-identical.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cxhyp/conjugacy.hpp"
#include "cxhyp/document.hpp"
#include "cxhyp/random.hpp"

namespace cxhyp {

struct PropertyResult {
  std::string name;
  bool pass = true;
  std::string detail;          // e.g. worst residual
  std::string counterexample;  // serialized document(s), empty unless failed
};

struct SuiteReport {
  std::uint64_t seed = 0;
  long trials = 0;
  std::vector<PropertyResult> results;

  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

namespace detail {

inline std::string fmt_residual(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

struct Worst {
  double value = 0.0;
  void feed(double v) { value = std::max(value, v); }
  bool within(double bound) const { return value <= bound; }
};

}  // namespace detail

inline SuiteReport run_suite(std::uint64_t seed, long trials, const Tolerances& tol,
                             bool inject_failure = false) {
  SuiteReport report;
  report.seed = seed;
  report.trials = trials;
  std::uint64_t prop_index = 0;

  using TrialStream = std::function<Rng(long)>;
  auto add = [&](const std::string& name,
                 const std::function<PropertyResult(const TrialStream&, long)>& body) {
    std::uint64_t base = Rng::mix(seed, ++prop_index);
    TrialStream stream = [base](long trial) {
      return Rng(Rng::mix(base, static_cast<std::uint64_t>(trial) + 1));
    };
    PropertyResult r;
    if (trials <= 0) {
      r.name = name;
      r.pass = true;
      r.detail = "vacuous pass (0 trials)";
    } else {
      try {
        r = body(stream, trials);
      } catch (const Error& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
      } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
      }
      r.name = name;
    }
    report.results.push_back(std::move(r));
  };

  // ---- linalg ----
  add("linalg.eig_residuals", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 8;
      CMatrix m(n, n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) m(a, b) = rng.cgaussian();
      EigenResult er = eig(m, tol);
      double bound = tol.eig * std::max(1.0, m.frobenius());
      for (double res : er.residuals) w.feed(res / bound);
    }
    r.pass = w.within(1.0);
    r.detail = "worst residual ratio " + detail::fmt_residual(w.value);
    return r;
  });

  add("linalg.adjoint_involution", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 6;
      CMatrix m(n, n + 1);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n + 1; ++b) m(a, b) = rng.cgaussian();
      if ((adjoint(adjoint(m)) - m).frobenius() != 0.0) {
        r.pass = false;
        r.detail = "involution not exact";
        return r;
      }
    }
    r.detail = "exact";
    return r;
  });

  add("linalg.hermitian_real_spectrum", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 6;
      CMatrix a(n, n);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) a(x, y) = rng.cgaussian();
      CMatrix h = a + adjoint(a);
      double bound = tol.eig * std::max(1.0, h.frobenius());
      for (const auto& l : eig(h, tol).eigenvalues) w.feed(std::abs(l.imag()) / bound);
    }
    r.pass = w.within(1.0);
    r.detail = "worst Im ratio " + detail::fmt_residual(w.value);
    return r;
  });

  add("linalg.solve_roundtrip", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 6;
      CMatrix m = random_unitary(n, rng);
      for (std::size_t d = 0; d < n; ++d) m(d, d) += 1.5;
      CVector x = random_vector(n, rng);
      w.feed((solve(m, m * x, tol) - x).norm() / std::max(1.0, x.norm()));
    }
    r.pass = w.within(1e-10);
    r.detail = "worst relative error " + detail::fmt_residual(w.value);
    return r;
  });

  // ---- ball model ----
  add("ball.membership_residuals", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 6;
      IsometryMatrix t = random_member(n, rng, tol);
      w.feed(t.residual);
      if (t.residual > 1e-9 && r.counterexample.empty())
        r.counterexample = serialize(make_document(t));
    }
    r.pass = w.within(1e-9);
    r.detail = "worst residual " + detail::fmt_residual(w.value);
    return r;
  });

  add("ball.form_preservation", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 5;
      IsometryMatrix t = random_member(n, rng, tol);
      CVector u = random_vector(n + 1, rng), v = random_vector(n + 1, rng);
      double bound = tol.member * 100.0 * u.norm() * v.norm();
      w.feed(std::abs(form_ball(t.m * u, t.m * v) - form_ball(u, v)) / bound);
    }
    r.pass = w.within(1.0);
    r.detail = "worst deviation ratio " + detail::fmt_residual(w.value);
    return r;
  });

  add("ball.mobius_composition", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      IsometryMatrix t1 = random_member(n, rng, tol), t2 = random_member(n, rng, tol);
      CVector x = random_unit_vector(n, rng);
      x *= Complex(rng.uniform(0.0, 0.9), 0.0);
      CVector lhs = mobius_apply(compose(t1, t2, tol), x, tol);
      CVector rhs = mobius_apply(t1, mobius_apply(t2, x, tol), tol);
      w.feed((lhs - rhs).norm());
    }
    r.pass = w.within(tol.point);
    r.detail = "worst point gap " + detail::fmt_residual(w.value);
    return r;
  });

  add("ball.boundary_invariance", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 5;
      IsometryMatrix t = random_member(n, rng, tol);
      w.feed(std::abs(mobius_apply(t, random_unit_vector(n, rng), tol).norm() - 1.0));
    }
    r.pass = w.within(tol.boundary);
    r.detail = "worst |norm - 1| " + detail::fmt_residual(w.value);
    return r;
  });

  add("ball.causal_invariance", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long violations = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 5;
      IsometryMatrix t = random_member(n, rng, tol);
      CVector u = random_vector(n + 1, rng);
      if (std::abs(quad_value(Model::Ball, u)) < 1e-3) continue;
      if (causal_class(Model::Ball, u, tol).tag !=
          causal_class(Model::Ball, t.m * u, tol).tag)
        ++violations;
    }
    r.pass = violations == 0;
    r.detail = std::to_string(violations) + " violations";
    return r;
  });

  // ---- classification ----
  add("classify.subclass_spectrum_oracle", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w_spec, w_prod, w_kprod;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      CVector xi = random_unit_vector(n, rng);
      xi *= Complex(rng.uniform(0.25, 1.75), 0.0);
      Complex rr = rng.unit_complex();
      SubclassSpectrum s = subclass_spectrum(xi, rr, tol);
      CMatrix uperp = random_unitary(n - 1, rng);
      IsometryMatrix t = subclass_matrix(xi, rr, n > 1 ? &uperp : nullptr, 0.0, tol);
      std::vector<Complex> expect{s.lambda1, s.lambda2};
      if (n > 1)
        for (const auto& l : eig(uperp, tol).eigenvalues) expect.push_back(l);
      std::vector<Complex> got = eig(t.m, tol).eigenvalues;
      // greedy multiset match
      for (const auto& x : got) {
        double best = 1e9;
        std::size_t bi = 0;
        for (std::size_t k = 0; k < expect.size(); ++k)
          if (std::abs(expect[k] - x) < best) {
            best = std::abs(expect[k] - x);
            bi = k;
          }
        w_spec.feed(best);
        expect.erase(expect.begin() + static_cast<long>(bi));
      }
      w_prod.feed(std::abs(std::abs(s.lambda1) * std::abs(s.lambda2) - 1.0));
      w_kprod.feed(std::abs(std::abs(s.k1) * std::abs(s.k2) * xi.norm() * xi.norm() - 1.0));
    }
    r.pass = w_spec.within(1e-8) && w_prod.within(1e-10) && w_kprod.within(1e-10);
    r.detail = "spectrum gap " + detail::fmt_residual(w_spec.value) + ", |l1 l2|-1 " +
               detail::fmt_residual(w_prod.value) + ", k-product " +
               detail::fmt_residual(w_kprod.value);
    return r;
  });

  add("classify.conjugation_invariance", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long mismatches = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      DynamicalType want = static_cast<DynamicalType>(i % 3);
      IsometryMatrix t = random_classified(want, n, rng, false, tol);
      IsometryMatrix g = random_member(n, rng, tol);
      if (classify(t, tol).kind != classify(conjugate(g, t, tol), tol).kind) {
        ++mismatches;
        if (r.counterexample.empty()) r.counterexample = serialize(make_document(t));
      }
    }
    r.pass = mismatches == 0;
    r.detail = std::to_string(mismatches) + " mismatches";
    return r;
  });

  add("classify.elliptic_witness_and_hyperbolic_lines", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long bad = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      if (i % 2 == 0) {
        IsometryMatrix t = random_classified(DynamicalType::Elliptic, n, rng, true, tol);
        ClassificationReport rep = classify(t, tol);
        if (!is_elliptic(rep.kind) || !rep.timelike_witness ||
            quad_value(Model::Ball, *rep.timelike_witness) >= -tol.causal)
          ++bad;
      } else {
        IsometryMatrix t = random_classified(DynamicalType::Hyperbolic, n, rng, true, tol);
        ClassificationReport rep = classify(t, tol);
        if (rep.kind != ClassKind::Hyperbolic || rep.evidence.boundary_points.size() != 2)
          ++bad;
        else {
          Complex l1 = rep.evidence.boundary_points[0].eigenvalue;
          Complex l2 = rep.evidence.boundary_points[1].eigenvalue;
          if (std::abs(std::abs(l1) * std::abs(l2) - 1.0) > 1e-7) ++bad;
        }
      }
    }
    r.pass = bad == 0;
    r.detail = std::to_string(bad) + " violations";
    return r;
  });

  add("classify.parabolic_unit_spectrum", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long bad = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      IsometryMatrix t = random_classified(DynamicalType::Parabolic, n, rng, false, tol);
      ClassificationReport rep = classify(t, tol);
      double scale = std::max(1.0, t.m.frobenius());
      if (rep.kind != ClassKind::Parabolic ||
          std::abs(rep.spectral_radius - 1.0) > tol.circle * scale ||
          rep.timelike_witness.has_value())
        ++bad;
    }
    r.pass = bad == 0;
    r.detail = std::to_string(bad) + " violations";
    return r;
  });

  add("classify.boundary_elliptic_witness", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long bad = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      // unitary with a repeated time-like eigenvalue
      Complex phase = rng.unit_complex();
      std::vector<Complex> d(n + 1, phase);
      for (std::size_t k = 0; k + 1 < n; ++k)
        d[k] = rng.unit_complex();
      IsometryMatrix t = IsometryMatrix::from(CMatrix::diagonal(d), Model::Ball, tol);
      IsometryMatrix g = random_member(n, rng, tol);
      ClassKind kind = classify(conjugate(g, t, tol), tol).kind;
      if (kind != ClassKind::EllipticBoundary) ++bad;
    }
    r.pass = bad == 0;
    r.detail = std::to_string(bad) + " violations";
    return r;
  });

  // ---- transport ----
  add("transport.witt_membership", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      std::size_t m = 1 + static_cast<std::size_t>(i) % (n + 1);
      IsometryMatrix g = random_member(n, rng, tol);
      std::vector<CVector> dom, img;
      for (std::size_t k = 0; k < m; ++k) {
        CVector v = random_vector(n + 1, rng);
        dom.push_back(v);
        img.push_back(g.m * v);
      }
      IsometryMatrix t = witt_extend(PartialIsometry{Model::Ball, dom, img}, tol);
      w.feed(t.residual / (tol.member * (1.0 + t.m.frobenius() * t.m.frobenius())));
    }
    r.pass = w.within(1.0);
    r.detail = "worst residual ratio " + detail::fmt_residual(w.value);
    return r;
  });

  add("transport.boundary_transport", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 2;
      CVector x1 = random_unit_vector(n, rng), x2 = random_unit_vector(n, rng);
      CVector y1 = random_unit_vector(n, rng), y2 = random_unit_vector(n, rng);
      if ((x1 - x2).norm() < 1e-3 || (y1 - y2).norm() < 1e-3) continue;
      IsometryMatrix m = boundary_transport(x1, x2, y1, y2, tol);
      w.feed((mobius_apply(m, x1, tol) - y1).norm());
      w.feed((mobius_apply(m, x2, tol) - y2).norm());
    }
    r.pass = w.within(1e-7);
    r.detail = "worst postcondition gap " + detail::fmt_residual(w.value);
    return r;
  });

  add("transport.conjugation_spectrum", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      IsometryMatrix t = random_member(n, rng, tol);
      IsometryMatrix g = random_member(n, rng, tol);
      std::vector<Complex> a = eig(t.m, tol).eigenvalues;
      std::vector<Complex> b = eig(conjugate(g, t, tol).m, tol).eigenvalues;
      for (const auto& x : a) {
        double best = 1e9;
        std::size_t bi = 0;
        for (std::size_t k = 0; k < b.size(); ++k)
          if (std::abs(b[k] - x) < best) {
            best = std::abs(b[k] - x);
            bi = k;
          }
        w.feed(best);
        b.erase(b.begin() + static_cast<long>(bi));
      }
    }
    r.pass = w.within(1e-7);
    r.detail = "worst eigenvalue gap " + detail::fmt_residual(w.value);
    return r;
  });

  // ---- Siegel model ----
  add("siegel.cayley_equivalence", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w_unit, w_form, w_compat;
    for (std::size_t n = 1; n <= 8; ++n) {
      CMatrix d = cayley_operator(n);
      w_unit.feed((adjoint(d) * d - CMatrix::identity(n + 1)).frobenius());
      w_form.feed((adjoint(d) * form_matrix(Model::Ball, n) * d -
                   form_matrix(Model::Siegel, n))
                      .frobenius());
    }
    CayleyImage e0 = cayley_point(CVector(2), tol);
    bool origin_ok = !e0.infinite && e0.point[0] == Complex(1.0, 0.0) &&
                     e0.point[1] == Complex(0.0, 0.0);
    long tested = 0;
    for (long i = 0; i < 4 * n_trials && tested < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      IsometryMatrix t = random_member(n, rng, tol);
      CVector x = random_unit_vector(n, rng);
      x *= Complex(rng.uniform(0.0, 0.9), 0.0);
      CVector e(n);
      e[0] = 1.0;
      CVector img = mobius_apply(t, x, tol);
      if ((img - e).norm() < 1e-2 || (x - e).norm() < 1e-2) continue;
      CayleyImage lhs = cayley_point(img, tol);
      CayleyImage rhs = siegel_apply(to_siegel(t, tol), cayley_point(x, tol), tol);
      if (lhs.infinite || rhs.infinite) continue;
      w_compat.feed((lhs.point - rhs.point).norm() / (1.0 + lhs.point.norm()));
      ++tested;
    }
    r.pass = w_unit.within(1e-14) && w_form.within(1e-14) && w_compat.within(1e-7) &&
             origin_ok && tested >= n_trials / 2;
    r.detail = "unitarity " + detail::fmt_residual(w_unit.value) + ", form " +
               detail::fmt_residual(w_form.value) + ", compat " +
               detail::fmt_residual(w_compat.value);
    return r;
  });

  add("siegel.boundary_to_boundary", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      CVector x = random_unit_vector(n, rng);
      CVector e(n);
      e[0] = 1.0;
      if ((x - e).norm() < 1e-2) continue;
      CayleyImage img = cayley_point(x, tol);
      if (img.infinite) continue;
      w.feed(std::abs(siegel_defect(img.point)) /
             (1.0 + img.point.norm() * img.point.norm()));
    }
    r.pass = w.within(1e-7);
    r.detail = "worst boundary defect " + detail::fmt_residual(w.value);
    return r;
  });

  add("siegel.stabilizer_spectrum", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      SiegelStabilizerElement el = random_stabilizer_element(n, rng);
      std::vector<Complex> expect = stabilizer_spectrum(el, tol);
      std::vector<Complex> got = eig(stabilizer_build(el, tol).m, tol).eigenvalues;
      for (const auto& x : got) {
        double best = 1e9;
        std::size_t bi = 0;
        for (std::size_t k = 0; k < expect.size(); ++k)
          if (std::abs(expect[k] - x) < best) {
            best = std::abs(expect[k] - x);
            bi = k;
          }
        w.feed(best);
        expect.erase(expect.begin() + static_cast<long>(bi));
      }
    }
    r.pass = w.within(1e-7);
    r.detail = "worst spectrum gap " + detail::fmt_residual(w.value);
    return r;
  });

  add("siegel.iwasawa_reconstruction", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      IsometryMatrix m = stabilizer_build(random_stabilizer_element(n, rng), tol);
      IwasawaFactors f = iwasawa(m, tol);
      IsometryMatrix prod =
          compose(compose(f.translation, f.rotation, tol), f.dilation, tol);
      w.feed((prod.m - m.m).frobenius() / std::max(1.0, m.m.frobenius()));
    }
    r.pass = w.within(1e-9);
    r.detail = "worst reconstruction residual " + detail::fmt_residual(w.value);
    return r;
  });

  // ---- Heisenberg ----
  add("heisenberg.conjugacy", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long bad = 0;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      Complex lam = rng.unit_complex();
      int mode = static_cast<int>(i % 3);
      if (mode == 0) {
        HeisenbergTranslation h1 = random_translation(n, rng, false, lam);
        HeisenbergTranslation h2 = random_translation(n, rng, false, lam);
        ConjugacyVerdict cv = conjugacy_decide(h1, h2, tol);
        if (!cv.conjugate)
          ++bad;
        else
          w.feed(detail::conjugation_residual(*cv.conjugator, translation_matrix(h1, tol),
                                              translation_matrix(h2, tol), tol));
      } else if (mode == 1) {
        HeisenbergTranslation h1 = random_translation(n, rng, true, lam);
        HeisenbergTranslation h2 = random_translation(n, rng, true, lam);
        bool expect = h1.s.imag() * h2.s.imag() > 0.0;
        if (conjugacy_decide(h1, h2, tol).conjugate != expect) ++bad;
      } else {
        HeisenbergTranslation h1 = random_translation(n, rng, true, lam);
        HeisenbergTranslation h2 = random_translation(n, rng, false, lam);
        if (conjugacy_decide(h1, h2, tol).conjugate) ++bad;
      }
    }
    r.pass = bad == 0 && w.within(1e-8);
    r.detail = std::to_string(bad) + " verdict errors, worst conjugator residual " +
               detail::fmt_residual(w.value);
    return r;
  });

  add("heisenberg.isotropy_commutation", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long bad = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      HeisenbergTranslation h1 = random_translation(n, rng, i % 5 == 0, Complex(1.0, 0.0));
      HeisenbergTranslation h2 = random_translation(n, rng, i % 7 == 0, Complex(1.0, 0.0));
      CMatrix m1 = translation_matrix(h1, tol).m, m2 = translation_matrix(h2, tol).m;
      bool comm = (m1 * m2 - m2 * m1).frobenius() <= 1e-9 * m1.frobenius() * m2.frobenius();
      if (isotropic(h1, h2, tol) != comm) ++bad;
    }
    r.pass = bad == 0;
    r.detail = std::to_string(bad) + " disagreements";
    return r;
  });

  add("heisenberg.singleton_spectrum", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      HeisenbergTranslation h = random_translation(n, rng, i % 2 == 0);
      for (const auto& l : eig(translation_matrix(h, tol).m, tol).eigenvalues)
        w.feed(std::abs(l - h.lambda));
    }
    r.pass = w.within(tol.circle);
    r.detail = "worst |lambda gap| " + detail::fmt_residual(w.value);
    return r;
  });

  add("heisenberg.projective_matrix_agreement", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      HeisenbergTranslation h = random_translation(n, rng, i % 2 == 0);
      CVector x = random_vector(n, rng, 0.5);
      x[0] += Complex(2.5, 0.0);
      CVector via_points = translate_point(h, x, tol);
      CayleyImage via_matrix =
          siegel_apply(translation_matrix(h, tol), CayleyImage::at(x), tol);
      if (via_matrix.infinite) continue;
      w.feed((via_points - via_matrix.point).norm() / (1.0 + via_points.norm()));
    }
    r.pass = w.within(1e-8);
    r.detail = "worst action gap " + detail::fmt_residual(w.value);
    return r;
  });

  add("heisenberg.k_decomposition", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long bad = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      bool vertical = i % 2 == 0;
      HeisenbergTranslation h = random_translation(n, rng, vertical);
      KDecomposition kd = k_decompose(h, tol);
      if (kd.minpoly_degree != (h.vertical(tol) ? 2 : 3)) ++bad;
      auto ker = k_restriction_kernel(h, tol);
      if (ker.size() != 1 || std::abs(std::abs(ker[0][0]) - 1.0) > 1e-10) ++bad;
    }
    r.pass = bad == 0;
    r.detail = std::to_string(bad) + " violations";
    return r;
  });

  // ---- centralizers ----
  add("centralizer.elliptic_oracle", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long disagreements = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      auto [t, s] = random_elliptic_centralizer_pair(n, rng, tol);
      bool oracle = commutator_norm(s, t) <= tol.comm;
      if (elliptic_centralizer_test(s, t, tol).member != oracle) ++disagreements;
    }
    r.pass = disagreements == 0;
    r.detail = std::to_string(disagreements) + " disagreements";
    return r;
  });

  add("centralizer.hyperbolic_oracle", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long disagreements = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      auto [t, s] = random_hyperbolic_centralizer_pair(n, rng, tol);
      bool oracle = commutator_norm(s, t) <= tol.comm;
      if (hyperbolic_centralizer_test(s, t, tol).member != oracle) ++disagreements;
    }
    r.pass = disagreements == 0;
    r.detail = std::to_string(disagreements) + " disagreements";
    return r;
  });

  add("centralizer.heisenberg_oracle", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long disagreements = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      auto [s, h] = random_heisenberg_centralizer_pair(n, rng, tol);
      bool oracle = commutator_norm(s, translation_matrix(h, tol)) <= tol.comm;
      if (heisenberg_centralizer_test(s, h, tol).member != oracle) ++disagreements;
    }
    r.pass = disagreements == 0;
    r.detail = std::to_string(disagreements) + " disagreements";
    return r;
  });

  add("centralizer.regular_elliptic_exclusivity", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long violations = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      IsometryMatrix reg = random_regular_elliptic(n, rng, tol);
      IsometryMatrix other =
          i % 2 ? random_classified(DynamicalType::Hyperbolic, n, rng, true, tol)
                : random_classified(DynamicalType::Parabolic, n, rng, false, tol);
      if (commutator_norm(reg, other) <= tol.comm) ++violations;
    }
    r.pass = violations == 0;
    r.detail = std::to_string(violations) + " violations";
    return r;
  });

  add("centralizer.eigenspace_invariance", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    detail::Worst w;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      auto [t, s] = i % 2 ? random_elliptic_centralizer_pair(n, rng, tol)
                          : random_hyperbolic_centralizer_pair(n, rng, tol);
      if (commutator_norm(s, t) > tol.comm) continue;
      double scale = std::max(1.0, t.m.frobenius());
      auto clusters =
          eigen_clusters(t.m, tol.circle * scale, 10.0 * tol.circle * scale, tol);
      for (const auto& c : clusters)
        w.feed(detail::subspace_escape(s.m, c.eigenspace_basis));
    }
    r.pass = w.within(1e-7);
    r.detail = "worst eigenspace escape " + detail::fmt_residual(w.value);
    return r;
  });

  add("centralizer.shared_fixed_points", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long violations = 0, tested = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 2 + static_cast<std::size_t>(i) % 3;
      IsometryMatrix t = random_classified(DynamicalType::Hyperbolic, n, rng, true, tol);
      IsometryMatrix s = centralizer_element_from(std::exp(rng.uniform(0.2, 1.2)),
                                                  rng.uniform(0.0, 6.28), t, tol);
      if (classify(s, tol).kind != ClassKind::Hyperbolic) continue;
      ++tested;
      if (!shared_fixed_points(t, s, tol)) ++violations;
    }
    r.pass = violations == 0 && tested > 0;
    r.detail = std::to_string(violations) + " violations over " + std::to_string(tested) +
               " commuting pairs";
    return r;
  });

  // ---- documents ----
  add("document.roundtrip", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long bad = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      IsometryDocument doc = make_document(random_member(n, rng, tol));
      IsometryDocument back = parse_document(serialize(doc), tol);
      if (back.matrix.data() != doc.matrix.data() || back.n != doc.n ||
          back.model != doc.model)
        ++bad;
      if (serialize(back) != serialize(doc)) ++bad;
    }
    r.pass = bad == 0;
    r.detail = std::to_string(bad) + " round-trip failures";
    return r;
  });

  add("document.emitted_members", [&](const TrialStream& stream, long n_trials) {
    PropertyResult r;
    long bad = 0;
    for (long i = 0; i < n_trials; ++i) {
      Rng rng = stream(i);
      std::size_t n = 1 + static_cast<std::size_t>(i) % 4;
      DynamicalType want = static_cast<DynamicalType>(i % 3);
      IsometryMatrix t = random_classified(want, n > 1 ? n : 2, rng, i % 2 == 0, tol);
      IsometryDocument doc = parse_document(serialize(make_document(t)), tol);
      double f = doc.matrix.frobenius();
      if (membership_residual(doc.matrix, doc.model) > tol.member * (1.0 + f * f)) ++bad;
    }
    r.pass = bad == 0;
    r.detail = std::to_string(bad) + " membership failures";
    return r;
  });

  if (inject_failure) {
    Rng rng(Rng::mix(seed, 9999));
    PropertyResult r;
    r.name = "harness.injected_failure";
    r.pass = false;
    r.detail = "failure injection requested (harness self-test)";
    r.counterexample = serialize(make_document(random_member(2, rng, tol)));
    report.results.push_back(std::move(r));
  }
  return report;
}

inline std::string render_text(const SuiteReport& report) {
  std::string out;
  out += "suite seed=" + std::to_string(report.seed) +
         " trials=" + std::to_string(report.trials) + "\n";
  if (report.trials <= 0) out += "warning: 0 trials, every property passes vacuously\n";
  for (const auto& r : report.results) {
    out += std::string(r.pass ? "[PASS] " : "[FAIL] ") + r.name + " - " + r.detail + "\n";
    if (!r.pass && !r.counterexample.empty())
      out += "  counterexample:\n" + r.counterexample + "\n";
  }
  out += report.all_pass() ? "all properties passed\n" : "PROPERTY FAILURES PRESENT\n";
  return out;
}

inline std::string render_json(const SuiteReport& report) {
  Json j;
  j["command"] = "suite";
  j["seed"] = report.seed;
  j["trials"] = report.trials;
  j["all_pass"] = report.all_pass();
  Json props = Json::array();
  for (const auto& r : report.results) {
    Json p;
    p["name"] = r.name;
    p["pass"] = r.pass;
    p["detail"] = r.detail;
    if (!r.counterexample.empty())
      p["counterexample"] = Json::parse(r.counterexample);
    props.push_back(std::move(p));
  }
  j["properties"] = std::move(props);
  return j.dump(2) + "\n";
}

}  // namespace cxhyp
