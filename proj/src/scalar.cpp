#include "subdiff/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace subdiff {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

boost::multiprecision::mpz_int pow10(long k) {
  boost::multiprecision::mpz_int r = 1;
  for (long i = 0; i < k; ++i) r *= 10;
  return r;
}

// Decimal literal such as "-12.5e-3", converted exactly.
Rational parse_decimal(const std::string& text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw std::invalid_argument("not a number: '" + text + "'");
  long exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw std::invalid_argument("not a number: '" + text + "'");
    std::string e = text.substr(i + 1);
    bool eneg = false;
    if (!e.empty() && (e[0] == '+' || e[0] == '-')) {
      eneg = e[0] == '-';
      e = e.substr(1);
    }
    if (!all_digits(e) || e.size() > 6) throw std::invalid_argument("bad exponent in '" + text + "'");
    exponent = std::stol(e) * (eneg ? -1 : 1);
  }
  boost::multiprecision::mpz_int mant(digits);
  const long shift = exponent - scale;
  Rational r = shift >= 0 ? Rational(mant * pow10(shift)) : Rational(mant, pow10(-shift));
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + raw + "'");
  return num / den;
}

std::string format_rational(const Rational& x) {
  const auto num = boost::multiprecision::numerator(x);
  const auto den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace subdiff
