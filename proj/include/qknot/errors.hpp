#pragma once

#include <stdexcept>
#include <string>

namespace qknot {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ZeroLeadingTerm : Error {
    ZeroLeadingTerm() : Error("cannot invert a series that is zero to truncation") {}
};

struct ZeroDenominator : Error {
    ZeroDenominator() : Error("rational function with zero denominator") {}
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& msg = "matrix is singular to working truncation")
        : Error(msg) {}
};

struct SingularWindow : Error {
    SingularWindow() : Error("index window is singular to working truncation") {}
};

/// Raised when no rational function within the degree bounds matches the series.
/// This is a meaningful outcome, not a bug: some windows are genuinely irrational.
struct NoReconstruction : Error {
    explicit NoReconstruction(const std::string& msg = "no rational function within degree bounds")
        : Error(msg) {}
};

struct InsufficientPrecision : Error {
    explicit InsufficientPrecision(const std::string& msg) : Error(msg) {}
};

struct NonIntegralLongitude : Error {
    NonIntegralLongitude()
        : Error("longitude rows cannot be made even by bounded edge-row additions") {}
};

struct UnknownKnot : Error {
    explicit UnknownKnot(const std::string& name) : Error("unknown knot: " + name) {}
};

struct UnknownInsertion : Error {
    explicit UnknownInsertion(const std::string& name) : Error("unknown insertion: " + name) {}
};

struct ParseError : Error {
    int line = 0, column = 0;
    ParseError(const std::string& msg, int line_, int column_ = 0)
        : Error("parse error at line " + std::to_string(line_) + ": " + msg),
          line(line_), column(column_) {}
};

/// Raised when the summand valuation does not grow along the lattice scan;
/// the triangulation is probably not 1-efficient.
struct DivergenceGuard : Error {
    explicit DivergenceGuard(const std::string& msg = "summand valuation growth not observed")
        : Error(msg) {}
};

struct CalibrationFailure : Error {
    explicit CalibrationFailure(const std::string& msg) : Error(msg) {}
};

struct HalfPowerViolation : Error {
    HalfPowerViolation() : Error("half-power bookkeeping produced a non-integral u-exponent") {}
};

struct NoRecursion : Error {
    NoRecursion() : Error("no nonzero recursion within the given bounds") {}
};

struct UnsupportedEll : Error {
    UnsupportedEll() : Error("E_l is only provided for l = 1, 2") {}
};

struct DivergentRewrite : Error {
    DivergentRewrite() : Error("term valuations fail to increase under the q -> 1/q rewrite") {}
};

struct Overflow : Error {
    Overflow() : Error("128-bit integer overflow") {}
};

}  // namespace qknot
