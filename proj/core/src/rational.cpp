#include "osid/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "osid/errors.hpp"

namespace osid {

Rat rat(long num, long den) {
  if (den == 0) throw ConfigError("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat rat(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw ConfigError("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw ConfigError("cannot convert non-finite double to rational");
  return Rat(x);  // exact per GMP
}

Rat rat_parse(std::string_view text) {
  size_t i = 0;
  auto fail = [&]() -> Rat { throw ConfigError("malformed rational '" + std::string(text) + "'"); };
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    neg = text[i] == '-';
    ++i;
  }
  auto digits = [&](std::string& out) {
    size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) out += text[i++];
    return i > start;
  };
  std::string whole;
  if (!digits(whole)) return fail();
  mpz_class num(whole);
  mpz_class den = 1;
  if (i < text.size() && text[i] == '.') {
    ++i;
    std::string frac;
    if (!digits(frac)) return fail();
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
  } else if (i < text.size() && text[i] == '/') {
    ++i;
    std::string d;
    if (!digits(d)) return fail();
    den = mpz_class(d);
    if (den == 0) return fail();
  }
  if (i != text.size()) return fail();
  Rat r = rat(num, den);
  return neg ? Rat(-r) : r;
}

std::string rat_str(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double rat_to_double(const Rat& r) { return r.get_d(); }

Rat rat_ulp(double x) {
  double ax = std::fabs(x);
  double next = std::nextafter(ax, std::numeric_limits<double>::infinity());
  return rat_from_double(next) - rat_from_double(ax);
}

NegativeValue::NegativeValue(std::vector<double> at, double v)
    : Error([&] {
        std::string msg = "function value " + std::to_string(v) + " is negative at (";
        for (size_t i = 0; i < at.size(); ++i) {
          if (i) msg += ", ";
          msg += std::to_string(at[i]);
        }
        msg += ")";
        return msg;
      }()),
      point(std::move(at)),
      value(v) {}

}  // namespace osid
