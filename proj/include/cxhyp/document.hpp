#pragma once

// JSON interchange for isometries: the matrix (complex entries as [re, im]
// pairs, row-major) plus the optional generator data it was built from. The
// serialization round-trips doubles exactly (shortest-representation
// printing) and key order is canonical, so equal documents serialize to
// identical bytes.

#include <optional>
#include <string>

#include <json.hpp>

#include "cxhyp/ball.hpp"
#include "cxhyp/core.hpp"
#include "cxhyp/linalg.hpp"
#include "cxhyp/model.hpp"
#include "cxhyp/siegel.hpp"

namespace cxhyp {

using Json = nlohmann::json;

struct IsometryDocument {
  Model model = Model::Ball;
  std::size_t n = 1;
  CMatrix matrix;
  std::optional<GeneratorData> ball_generator;
  std::optional<SiegelStabilizerElement> siegel_generator;
};

namespace detail {

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(Err::ParseError, "expected a [re, im] pair");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Json matrix_to_json(const CMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(complex_to_json(m(i, j)));
  return out;
}

inline CMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows * cols)
    throw Error(Err::ParseError, "matrix entry count mismatch");
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t jj = 0; jj < cols; ++jj)
      m(i, jj) = complex_from_json(j[i * cols + jj]);
  return m;
}

inline Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

inline CVector vector_from_json(const Json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim)
    throw Error(Err::ParseError, "vector entry count mismatch");
  CVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = complex_from_json(j[i]);
  return v;
}

}  // namespace detail

inline Json to_json(const IsometryDocument& doc) {
  Json j;
  j["model"] = model_name(doc.model);
  j["n"] = doc.n;
  j["matrix"] = detail::matrix_to_json(doc.matrix);
  if (doc.ball_generator) {
    Json g;
    g["theta"] = doc.ball_generator->theta;
    g["U"] = detail::matrix_to_json(doc.ball_generator->U);
    g["xi"] = detail::vector_to_json(doc.ball_generator->xi);
    j["generator"] = std::move(g);
  } else if (doc.siegel_generator) {
    Json g;
    g["lambda"] = detail::complex_to_json(doc.siegel_generator->lambda);
    g["U"] = detail::matrix_to_json(doc.siegel_generator->U);
    g["a_prime"] = detail::vector_to_json(doc.siegel_generator->a_prime);
    g["s"] = detail::complex_to_json(doc.siegel_generator->s);
    j["generator"] = std::move(g);
  }
  return j;
}

inline std::string serialize(const IsometryDocument& doc) { return to_json(doc).dump(2); }

/// Parses and validates a document: the matrix must pass the membership test
/// and, when generator data is present, must agree with the built matrix.
inline IsometryDocument document_from_json(const Json& j, const Tolerances& tol = Tolerances{},
                                           std::size_t max_n = 64) {
  if (!j.is_object()) throw Error(Err::ParseError, "document must be an object");
  IsometryDocument doc;
  if (!j.contains("model") || !j["model"].is_string())
    throw Error(Err::ParseError, "missing model");
  std::string model = j["model"].get<std::string>();
  if (model == "ball")
    doc.model = Model::Ball;
  else if (model == "siegel")
    doc.model = Model::Siegel;
  else
    throw Error(Err::ParseError, "model must be \"ball\" or \"siegel\"");

  if (!j.contains("n") || !j["n"].is_number_unsigned())
    throw Error(Err::ParseError, "missing n");
  doc.n = j["n"].get<std::size_t>();
  if (doc.n < 1 || doc.n > max_n)
    throw Error(Err::ParseError, "n out of range (max " + std::to_string(max_n) + ")");

  if (!j.contains("matrix")) throw Error(Err::ParseError, "missing matrix");
  doc.matrix = detail::matrix_from_json(j["matrix"], doc.n + 1, doc.n + 1);

  double res = membership_residual(doc.matrix, doc.model);
  double f = doc.matrix.frobenius();
  if (res > tol.member * (1.0 + f * f))
    throw Error(Err::NotMember, "document matrix fails the membership test, residual " +
                                    std::to_string(res));

  if (j.contains("generator")) {
    const Json& g = j["generator"];
    if (!g.is_object()) throw Error(Err::ParseError, "generator must be an object");
    CMatrix built;
    if (doc.model == Model::Ball) {
      GeneratorData gd;
      if (!g.contains("theta") || !g["theta"].is_number())
        throw Error(Err::ParseError, "generator.theta missing");
      gd.theta = g["theta"].get<double>();
      gd.U = detail::matrix_from_json(g.at("U"), doc.n, doc.n);
      gd.xi = detail::vector_from_json(g.at("xi"), doc.n);
      built = build_isometry(gd, tol).m;
      doc.ball_generator = std::move(gd);
    } else {
      SiegelStabilizerElement el;
      el.lambda = detail::complex_from_json(g.at("lambda"));
      el.U = detail::matrix_from_json(g.at("U"), doc.n - 1, doc.n - 1);
      el.a_prime = detail::vector_from_json(g.at("a_prime"), doc.n - 1);
      el.s = detail::complex_from_json(g.at("s"));
      built = stabilizer_build(el, tol).m;
      doc.siegel_generator = std::move(el);
    }
    if ((built - doc.matrix).frobenius() > tol.member * (1.0 + f))
      throw Error(Err::ParseError, "generator and matrix disagree");
  }
  return doc;
}

inline IsometryDocument parse_document(const std::string& text,
                                       const Tolerances& tol = Tolerances{},
                                       std::size_t max_n = 64) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Err::ParseError, "invalid JSON");
  return document_from_json(j, tol, max_n);
}

inline IsometryDocument make_document(const IsometryMatrix& t) {
  return IsometryDocument{t.model, t.n(), t.m, std::nullopt, std::nullopt};
}

inline IsometryMatrix document_member(const IsometryDocument& doc,
                                      const Tolerances& tol = Tolerances{}) {
  return IsometryMatrix::from(doc.matrix, doc.model, tol);
}

}  // namespace cxhyp
