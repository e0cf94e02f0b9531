#include "sparsegf2/bigreal.hpp"

#include <cctype>

#include "sparsegf2/errors.hpp"

namespace sparsegf2 {

BigInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return BigInt(0);
  BigInt out;
  mpz_bin_uiui(out.backend().data(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return out;
}

namespace {

BigInt parse_digits(const std::string& s, const std::string& whole) {
  if (s.empty()) throw ParseError("expected digits in '" + whole + "'");
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("invalid number '" + whole + "'");
    }
  }
  // leading zeros would select octal parsing
  const auto first = s.find_first_not_of('0');
  return first == std::string::npos ? BigInt(0) : BigInt(s.substr(first));
}

}  // namespace

Rational parse_decimal_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty number");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_decimal_rational(s.substr(0, slash));
    Rational den = parse_decimal_rational(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    return num / den;
  }

  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  long exponent = 0;
  std::string mantissa = s.substr(pos);
  if (auto e = mantissa.find_first_of("eE"); e != std::string::npos) {
    std::string exp_text = mantissa.substr(e + 1);
    mantissa = mantissa.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text[0] == '+' || exp_text[0] == '-')) {
      exp_negative = exp_text[0] == '-';
      exp_text = exp_text.substr(1);
    }
    BigInt ev = parse_digits(exp_text, text);
    if (ev > 4000) throw ParseError("exponent out of range in '" + text + "'");
    exponent = ev.convert_to<long>() * (exp_negative ? -1 : 1);
  }
  std::string int_part = mantissa;
  std::string frac_part;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw ParseError("invalid number '" + text + "'");
  BigInt digits = parse_digits(int_part + frac_part, text);
  exponent -= static_cast<long>(frac_part.size());

  Rational value(digits);
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
  if (exponent >= 0) {
    value *= Rational(ten_pow);
  } else {
    value /= Rational(ten_pow);
  }
  return negative ? Rational(-value) : value;
}

}  // namespace sparsegf2
