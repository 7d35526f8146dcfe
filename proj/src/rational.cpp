#include "oscint/rational.hpp"

#include <cctype>

#include "oscint/error.hpp"

namespace oscint {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  Rational r(p);
  if (e < 0) r = 1 / r;
  return r;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
    std::string_view es = s.substr(epos + 1);
    bool eneg = false;
    if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
      eneg = es[0] == '-';
      es.remove_prefix(1);
    }
    if (!all_digits(es) || es.size() > 6)
      throw ParseError("malformed exponent in '" + std::string(whole) + "'", 1,
                       1);
    exponent = std::stol(std::string(es));
    if (eneg) exponent = -exponent;
    s = s.substr(0, epos);
  }
  std::string_view int_part = s, frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) ||
      (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part)))
    throw ParseError("malformed number '" + std::string(whole) + "'", 1, 1);
  std::string digits = std::string(int_part) + std::string(frac_part);
  if (digits.empty()) digits = "0";
  Rational r(mpz_class(digits, 10));
  r *= pow10(exponent - static_cast<long>(frac_part.size()));
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty number", 1, 1);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(s.substr(0, slash), text);
    Rational den = parse_decimal(s.substr(slash + 1), text);
    if (den == 0)
      throw ParseError("zero denominator in '" + std::string(text) + "'", 1,
                       static_cast<int>(slash) + 2);
    Rational r = num / den;
    r.canonicalize();
    return r;
  }
  return parse_decimal(s, text);
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational pow(const Rational& q, unsigned e) {
  Rational r(1);
  Rational b = q;
  while (e) {
    if (e & 1u) r *= b;
    e >>= 1u;
    if (e) b *= b;
  }
  return r;
}

Rational frac(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace oscint
