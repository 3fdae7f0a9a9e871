#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace dchain {

using Integer = mpz_class;
using Rational = mpq_class;  // always canonical (lowest terms, positive denominator)

// Precondition failures: wrong degree, malformed input, out-of-range parameters.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Accepts "a", "-a" or "a/b"; anything with a decimal point or exponent is rejected.
Rational parse_rational(std::string_view text);

// "num/den" even for integers, so every serialised value has the same shape.
std::string fraction_string(const Rational& q);

Rational rational_pow(const Rational& base, unsigned exponent);
Integer binomial(unsigned long n, unsigned long k);
Integer factorial(unsigned long n);
Integer falling_factorial(unsigned long n, unsigned long k);

// Decimal rendering with a fixed number of significant digits (used only for reports).
std::string decimal_string(double value, int significant_digits = 12);

}  // namespace dchain
