#include "etdr/rational.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace etdr {

Rational pow2(long e) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(BigInt(1), p) : Rational(p);
}

Rational pow(const Rational& base, unsigned long e) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BigInt ceil(const Rational& x) { return ceil_div(x.get_num(), x.get_den()); }

Rational make_rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  BigInt n, d;
  mpz_import(n.get_mpz_t(), 1, 1, sizeof(num), 0, 0, &num);
  mpz_import(d.get_mpz_t(), 1, 1, sizeof(den), 0, 0, &den);
  Rational out(n, d);
  out.canonicalize();
  return out;
}

namespace {

Rational parse_decimal(const std::string& text) {
  // [sign] digits [. digits] [e|E [sign] digits]
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) negative = text[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_dot = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) --scale;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (digits.empty()) throw std::invalid_argument("not a number: " + text);
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw std::invalid_argument("not a number: " + text);
    const std::string exp = text.substr(pos + 1);
    std::size_t used = 0;
    const long e = std::stol(exp, &used);
    if (used != exp.size()) throw std::invalid_argument("not a number: " + text);
    scale += e;
  }
  Rational out{BigInt(digits, 10)};
  BigInt ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  if (scale < 0) out /= Rational(ten); else out *= Rational(ten);
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    Rational out(BigInt(text.substr(0, slash), 10), BigInt(text.substr(slash + 1), 10));
    if (out.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    out.canonicalize();
    return out;
  }
  if (const auto caret = text.find('^'); caret != std::string::npos) {
    const Rational base = parse_decimal(text.substr(0, caret));
    const std::string exp = text.substr(caret + 1);
    std::size_t used = 0;
    const long e = std::stol(exp, &used);
    if (used != exp.size()) throw std::invalid_argument("bad exponent: " + text);
    const Rational mag = pow(base, static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(1 / mag) : mag;
  }
  return parse_decimal(text);
}

std::string to_string(const Rational& x) { return x.get_str(); }

std::string to_sci(const Rational& x, int digits) {
  if (x == 0) return "0";
  // mpf keeps the huge exponent range; a double would underflow for 2^-2000.
  mpf_class f(x, 256);
  long exp10 = 0;
  char* raw = mpf_get_str(nullptr, &exp10, 10, static_cast<std::size_t>(digits), f.get_mpf_t());
  std::string mant(raw);
  void (*freefunc)(void*, std::size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(raw, mant.size() + 1);
  std::string sign;
  if (!mant.empty() && mant[0] == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  std::string out = sign + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "e%+03ld", exp10 - 1);
  return out + buf;
}

}  // namespace etdr
