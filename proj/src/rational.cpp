#include "maxlab/rational.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace maxlab {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

[[noreturn]] void bad(const std::string& text) {
  throw std::invalid_argument("not a rational: \"" + text + "\"");
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  // strip surrounding whitespace
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) bad(text);
  s = s.substr(b, e - b + 1);

  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = (s[0] == '-');
    s = s.substr(1);
    if (s.empty()) bad(text);
  }

  Rational q;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad(text);
    // base must be explicit: the default auto-detects octal from leading zeros
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) bad(text);
    q = Rational(n) / Rational(d);
  } else {
    // [digits][.digits][e[sign]digits]
    std::string mantissa = s;
    long exp10 = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string::npos) {
      mantissa = s.substr(0, epos);
      std::string es = s.substr(epos + 1);
      bool eneg = false;
      if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
        eneg = (es[0] == '-');
        es = es.substr(1);
      }
      if (!all_digits(es) || es.size() > 6) bad(text);
      exp10 = std::stol(es);
      if (eneg) exp10 = -exp10;
    }
    std::string digits = mantissa;
    if (auto dot = mantissa.find('.'); dot != std::string::npos) {
      std::string ip = mantissa.substr(0, dot), fp = mantissa.substr(dot + 1);
      if (ip.empty() && fp.empty()) bad(text);
      if (!ip.empty() && !all_digits(ip)) bad(text);
      if (!fp.empty() && !all_digits(fp)) bad(text);
      digits = ip + fp;
      exp10 -= static_cast<long>(fp.size());
    } else if (!all_digits(mantissa)) {
      bad(text);
    }
    if (digits.empty()) bad(text);
    mpz_class n(digits, 10);
    q = Rational(n);
    if (exp10 != 0) {
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
      if (exp10 > 0)
        q *= Rational(scale);
      else
        q /= Rational(scale);
    }
  }
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_fraction_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

Rational rational_pow(const Rational& q, long e) {
  if (e == 0) return Rational(1);
  if (q == 0 && e < 0) throw std::domain_error("rational_pow: 0 to a negative power");
  unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), q.get_num().get_mpz_t(), mag);
  mpz_pow_ui(d.get_mpz_t(), q.get_den().get_mpz_t(), mag);
  Rational r;
  if (e > 0)
    r = Rational(n) / Rational(d);
  else
    r = Rational(d) / Rational(n);
  r.canonicalize();
  return r;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace maxlab
