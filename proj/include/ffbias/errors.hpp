#ifndef FFBIAS_ERRORS_HPP
#define FFBIAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ffbias {

// Base class for failures raised by the library itself. Argument validation
// uses std::invalid_argument / std::domain_error directly.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured size limit (enumeration cap, n cap, table bound) was exceeded.
struct BudgetError : Error {
    using Error::Error;
};

// An inverse root of L(u, chi) was found off the circles |a| = sqrt(q), |a| = 1.
// RH is a theorem over F_q[t], so this always indicates an arithmetic bug.
struct RhViolation : Error {
    using Error::Error;
};

// The zero configuration of L(u, chi) does not satisfy the hypotheses of the
// requested asymptotic formula (e.g. multiple zeros, zeros at +-q^{-1/2}).
struct HypothesisError : Error {
    using Error::Error;
};

// Parse error in the polynomial text format or the config file.
struct ParseError : Error {
    using Error::Error;
};

} // namespace ffbias

#endif // FFBIAS_ERRORS_HPP
