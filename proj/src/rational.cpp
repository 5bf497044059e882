#include "contracts/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <vector>

#include "contracts/errors.hpp"

namespace contracts {

Rat make_rat(long num, long den) {
  if (den == 0) throw InputError("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool parse_integer(const std::string& text, mpz_class* out) {
  if (text.empty()) return false;
  std::size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  if (i == text.size()) return false;
  for (std::size_t k = i; k < text.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(text[k]))) return false;
  }
  // mpz_class accepts an optional sign followed by digits.
  out->set_str(text[0] == '+' ? text.substr(1) : text, 10);
  return true;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  if (text.empty()) throw InputError("empty numeric literal");
  const std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    mpz_class num, den;
    if (!parse_integer(text.substr(0, slash), &num) ||
        !parse_integer(text.substr(slash + 1), &den) || den == 0) {
      throw InputError("bad fraction literal: '" + text + "'");
    }
    Rat r(num);
    r /= Rat(den);
    return r;
  }

  // Decimal literal: [sign] digits [. digits] [e [sign] digits]
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = (text[pos] == '-');
    ++pos;
  }
  std::string int_digits, frac_digits;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    int_digits += text[pos++];
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      frac_digits += text[pos++];
    }
  }
  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = (text[pos] == '-');
      ++pos;
    }
    if (pos == text.size()) throw InputError("bad numeric literal: '" + text + "'");
    long magnitude = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      magnitude = magnitude * 10 + (text[pos++] - '0');
      if (magnitude > 1000000) throw InputError("exponent out of range: '" + text + "'");
    }
    exponent = exp_negative ? -magnitude : magnitude;
  }
  if (pos != text.size() || (int_digits.empty() && frac_digits.empty())) {
    throw InputError("bad numeric literal: '" + text + "'");
  }

  mpz_class mantissa((int_digits + frac_digits).empty() ? "0" : int_digits + frac_digits, 10);
  Rat r(mantissa);
  const long scale = exponent - static_cast<long>(frac_digits.size());
  if (scale != 0) {
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale > 0 ? scale : -scale));
    if (scale > 0) {
      r *= Rat(pow10);
    } else {
      r /= Rat(pow10);
    }
  }
  return negative ? Rat(-r) : r;
}

std::string to_fraction_string(const Rat& value) {
  return value.get_str();
}

std::string to_decimal_string(const Rat& value, int significant_digits) {
  if (significant_digits < 1) significant_digits = 1;
  // 4 bits per decimal digit plus slack keeps the printed digits exact.
  mpf_class f(value, static_cast<unsigned>(significant_digits) * 4 + 64);
  std::vector<char> buf(static_cast<std::size_t>(significant_digits) + 64);
  gmp_snprintf(buf.data(), buf.size(), "%.*Fg", significant_digits, f.get_mpf_t());
  return std::string(buf.data());
}

Rat rat_from_double(double value) {
  if (!std::isfinite(value)) throw InputError("non-finite double");
  Rat r;
  mpq_set_d(r.get_mpq_t(), value);  // exact binary conversion
  return r;
}

Rat rat_log(unsigned long n) {
  if (n < 2) throw InputError("rat_log requires n >= 2");
  return rat_from_double(std::log(static_cast<double>(n)));
}

}  // namespace contracts
