// Exception types shared across the library. Validation problems are
// reported as data (see ValidationReport); exceptions are for contract
// violations on otherwise well-formed inputs.
#ifndef ISLP_ERROR_HPP
#define ISLP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace islp {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// expansion would exceed the caller-supplied cap
struct CapExceeded : Error { using Error::Error; };
// a length or count does not fit in 62 bits
struct Overflow : Error { using Error::Error; };
// position or range outside [1..n]
struct OutOfRange : Error { using Error::Error; };
// a power-sum evaluation did not reduce to an integer
struct NonIntegerResult : Error { using Error::Error; };
// operation requires run-length form (every iteration rule one factor, exponent 0)
struct NotRlslp : Error { using Error::Error; };
// bad user-supplied parameters (e.g. non-prime fingerprint modulus)
struct BadParams : Error { using Error::Error; };
// morphism maps some symbol to the empty string
struct EmptyImage : Error { using Error::Error; };
// iteration exponent provably too large for the expansion to fit
struct InvalidExponent : Error { using Error::Error; };
// input beyond the documented size cap of a brute-force oracle
struct TooLarge : Error { using Error::Error; };
// malformed grammar file
struct ParseError : Error { using Error::Error; };

} // namespace islp

#endif
