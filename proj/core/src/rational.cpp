#include "dchain/rational.hpp"

#include <cctype>
#include <cstdio>
#include <cmath>

namespace dchain {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

Integer to_integer(std::string_view s) {
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return Integer(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!is_integer_literal(num))
    throw ContractError("not an exact rational (expected \"num/den\" or an integer): '" + std::string(text) + "'");
  Rational q;
  if (slash == std::string_view::npos) {
    q = Rational(to_integer(num));
  } else {
    std::string_view den = text.substr(slash + 1);
    if (!is_integer_literal(den) || den[0] == '-' || den[0] == '+')
      throw ContractError("bad denominator in '" + std::string(text) + "'");
    Integer d = to_integer(den);
    if (d == 0) throw ContractError("zero denominator in '" + std::string(text) + "'");
    q = Rational(to_integer(num), d);
    q.canonicalize();
  }
  return q;
}

std::string fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_pow(const Rational& base, unsigned exponent) {
  Rational r(1);
  Rational b = base;
  while (exponent) {
    if (exponent & 1u) r *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return r;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  if (k > n) return Integer(0);
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer falling_factorial(unsigned long n, unsigned long k) {
  if (k > n) return Integer(0);
  Integer r(1);
  for (unsigned long i = 0; i < k; ++i) r *= Integer(n - i);
  return r;
}

std::string decimal_string(double value, int significant_digits) {
  if (value == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
  return buf;
}

}  // namespace dchain
