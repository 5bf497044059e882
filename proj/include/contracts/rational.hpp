#ifndef CONTRACTS_RATIONAL_HPP
#define CONTRACTS_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace contracts {

/// Exact rational scalar used throughout the library.  GMP keeps values
/// canonical (coprime numerator/denominator, positive denominator) after
/// every arithmetic operation.
using Rat = mpq_class;

/// Builds num/den in canonical form.  Throws InputError if den == 0.
Rat make_rat(long num, long den);

/// Sign of a rational: -1, 0 or +1.
inline int rat_sgn(const Rat& value) { return sgn(value); }

/// Parses "p/q", an integer literal, or a decimal literal with optional
/// exponent ("0.25", "-3", "1e-3", "2.5e+2").  The decimal text is converted
/// exactly (e.g. "0.1" becomes 1/10, not the nearest double).
/// Throws InputError on anything else.
Rat parse_rational(const std::string& text);

/// Renders as "p/q", or just "p" when the denominator is 1.
std::string to_fraction_string(const Rat& value);

/// Rounds to `significant_digits` decimal digits ("1.44444444444",
/// "3.2e-07", ...).  Used for human-readable output next to the exact form.
std::string to_decimal_string(const Rat& value, int significant_digits = 12);

/// Exact conversion of an IEEE double to a rational (binary expansion).
Rat rat_from_double(double value);

/// Fixed rational snapshot of the natural logarithm of n (n >= 2), obtained
/// by converting the double approximation exactly.  Generators embed this
/// constant in instance metadata so that closed-form identities about the
/// generated instance hold exactly in rational arithmetic.
Rat rat_log(unsigned long n);

}  // namespace contracts

#endif  // CONTRACTS_RATIONAL_HPP
