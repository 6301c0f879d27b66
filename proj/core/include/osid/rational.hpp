#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace osid {

// Exact rational scalar. GMP keeps arithmetic results canonical; anything
// constructed from a raw num/den pair goes through rat() below.
using Rat = mpq_class;

Rat rat(long num, long den = 1);
Rat rat(const mpz_class& num, const mpz_class& den);

// Exact value of a finite double (every finite double is a binary rational).
Rat rat_from_double(double x);

// Accepts "p", "p/q" and plain decimals like "1.25" or "-0.5".
Rat rat_parse(std::string_view text);

// Canonical "p/q" rendering used in every JSON artifact; never floats,
// integers render as "n/1".
std::string rat_str(const Rat& r);

double rat_to_double(const Rat& r);

// Gap to the next representable double above |x|, as an exact rational.
Rat rat_ulp(double x);

}  // namespace osid
