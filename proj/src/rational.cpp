#include "plankline/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace plankline {

Rational make_rational(long p, long q) {
  if (q == 0) throw std::invalid_argument("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("malformed integer: " + std::string(s));
  Integer z(std::string(s), 10);
  return neg ? Integer(-z) : z;
}

Integer pow10(unsigned long e) {
  Integer z;
  mpz_ui_pow_ui(z.get_mpz_t(), 10, e);
  return z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer p = parse_integer(text.substr(0, slash));
    Integer q = parse_integer(text.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }

  // Decimal literal: [sign] digits [. digits] [e|E [sign] digits]
  bool neg = false;
  std::string_view s = text;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    Integer ez = parse_integer(s.substr(e + 1));
    if (!ez.fits_slong_p() || abs(ez) > 4000) throw std::invalid_argument("exponent out of range");
    exponent = ez.get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto ip = s.substr(0, dot);
    auto fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw std::invalid_argument("malformed decimal: " + std::string(text));
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw std::invalid_argument("malformed number: " + std::string(text));
    digits = std::string(s);
  }
  if (digits.empty()) digits = "0";
  Rational r(Integer(digits, 10));
  if (exponent > 0) r *= pow10(static_cast<unsigned long>(exponent));
  if (exponent < 0) r /= pow10(static_cast<unsigned long>(-exponent));
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

Rational from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite double");
  Rational r(v);
  r.canonicalize();
  return r;
}

Rational rationalize(double v, long max_den) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite double");
  // Continued-fraction convergents, exact arithmetic on the double's value.
  Rational x = from_double(v);
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    Integer a = floor(rem);
    Integer p2 = a * p1 + p0;
    Integer q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Rational frac = rem - Rational(a);
    if (frac == 0) break;
    rem = 1 / frac;
  }
  if (q1 == 0) return Rational(floor(x));
  Rational r(p1, q1);
  r.canonicalize();
  return r;
}

int sign(const Rational& r) { return sgn(r); }

Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

std::string to_decimal(const Rational& r, int digits) {
  Integer scale = pow10(static_cast<unsigned long>(digits));
  Rational scaled = abs(r) * scale + Rational(1, 2);
  Integer q = floor(scaled);
  std::string s = q.get_str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<size_t>(digits + 1) - s.size(), '0');
  std::string out = (sgn(r) < 0 && q != 0) ? "-" : "";
  out += s.substr(0, s.size() - static_cast<size_t>(digits));
  if (digits > 0) out += "." + s.substr(s.size() - static_cast<size_t>(digits));
  return out;
}

}  // namespace plankline
