#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairdiv {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major

/// Parses "p/q", "p", or a finite decimal such as "0.25" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form ("3", "-1/2"); integers omit the denominator.
std::string to_string(const Rational& value);

/// Exact inverse of a square matrix, nullopt when singular.
std::optional<RationalMatrix> inverse(RationalMatrix a);

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace fairdiv
