#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace cxhyp {

using Complex = std::complex<double>;

enum class Err {
  DimensionMismatch,
  NonFinite,
  NonConvergence,
  Singular,
  NotUnitary,
  NotMember,
  ZeroVector,
  DegenerateDenominator,
  NotInterior,
  NotElliptic,
  NotHyperbolic,
  ZeroXi,
  NotPartialIsometry,
  DegenerateSpan,
  CoincidentPoints,
  BoundaryViolation,
  NotStabilizer,
  OutsideClosedBall,
  OutsideDomain,
  FormMismatch,
  NotCommuting,
  ParseError,
  GenerationFailed,
};

class Error : public std::runtime_error {
public:
  Error(Err kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Err kind() const noexcept { return kind_; }

private:
  Err kind_;
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::NonFinite: return "NonFinite";
    case Err::NonConvergence: return "NonConvergence";
    case Err::Singular: return "Singular";
    case Err::NotUnitary: return "NotUnitary";
    case Err::NotMember: return "NotMember";
    case Err::ZeroVector: return "ZeroVector";
    case Err::DegenerateDenominator: return "DegenerateDenominator";
    case Err::NotInterior: return "NotInterior";
    case Err::NotElliptic: return "NotElliptic";
    case Err::NotHyperbolic: return "NotHyperbolic";
    case Err::ZeroXi: return "ZeroXi";
    case Err::NotPartialIsometry: return "NotPartialIsometry";
    case Err::DegenerateSpan: return "DegenerateSpan";
    case Err::CoincidentPoints: return "CoincidentPoints";
    case Err::BoundaryViolation: return "BoundaryViolation";
    case Err::NotStabilizer: return "NotStabilizer";
    case Err::OutsideClosedBall: return "OutsideClosedBall";
    case Err::OutsideDomain: return "OutsideDomain";
    case Err::FormMismatch: return "FormMismatch";
    case Err::NotCommuting: return "NotCommuting";
    case Err::ParseError: return "ParseError";
    case Err::GenerationFailed: return "GenerationFailed";
  }
  return "Unknown";
}

/// Every numeric threshold used by the library. All comparisons are relative
/// to the natural scale of the quantity being tested; `scaled` multiplies the
/// whole set (the CLI's --tol-scale).
struct Tolerances {
  double eig = 1e-10;       // eigenpair residual, relative to ||m||
  double cluster = 1e-8;    // eigenvalue clustering width, relative to ||m||
  double solve = 1e-12;     // pivot threshold in linear solves
  double member = 1e-9;     // form-membership residual
  double point = 1e-8;      // point coincidence in B / Sigma
  double boundary = 1e-8;   // distance-to-boundary band
  double causal = 1e-10;    // light-like band for the quadratic form
  double interior = 1e-9;   // margin required of interior points
  double circle = 1e-7;     // |lambda| - 1 comparisons (covers defective QR error)
  double iso = 1e-10;       // Im<b',a'> isotropy band
  double comm = 1e-9;       // commutator norm, relative
  double denom = 1e-12;     // projective renormalization denominators

  int qr_sweep_cap_factor = 100;  // QR iteration cap = factor * dim
  int eig_max_dim = 64;

  Tolerances scaled(double f) const {
    Tolerances t = *this;
    t.eig *= f;
    t.cluster *= f;
    t.solve *= f;
    t.member *= f;
    t.point *= f;
    t.boundary *= f;
    t.causal *= f;
    t.interior *= f;
    t.circle *= f;
    t.iso *= f;
    t.comm *= f;
    t.denom *= f;
    return t;
  }
};

}  // namespace cxhyp
