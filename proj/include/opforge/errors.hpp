#pragma once
// Error taxonomy for the whole engine.  Every failure a caller can act on gets
// its own type; messages carry the offending indices so certificate logs stay
// readable.
#include <stdexcept>
#include <string>

namespace opforge {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ShapeMismatch : Error { using Error::Error; };
struct NotAComplex : Error { using Error::Error; };      // d∘d != 0 somewhere
struct NotReduced : Error { using Error::Error; };       // N(0) != 0 in a composite
struct ArityOverflow : Error { using Error::Error; };    // request past max_arity
struct ArityViolation : Error { using Error::Error; };   // malformed arity data
struct DegreeMismatch : Error { using Error::Error; };
struct JacobiFailure : Error { using Error::Error; };
struct AntisymmetryFailure : Error { using Error::Error; };
struct LeibnizFailure : Error { using Error::Error; };
struct NotTwisting : Error { using Error::Error; };      // Maurer-Cartan residual != 0
struct NotAlgebraOverTarget : Error { using Error::Error; };
struct NotQuasiFree : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct CertificateFailure : Error { using Error::Error; };

} // namespace opforge
