#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace combnet {

// All counting runs in arbitrary-precision integers and all analytic
// quantities are exact rationals; floating point is confined to decimal
// rendering for CSV/report output.
using BigInt = mpz_class;
using Rat = mpq_class;

// Binomial coefficient with the convention C(x,y) = 0 when x < 0, y < 0
// or x < y.
BigInt binomial(long x, long y);

// lcm(1..m), m >= 1.
BigInt lcm_upto(long m);

// "3/5", or "4" when the denominator is 1. Canonical (reduced) form.
std::string to_fraction_string(const Rat& q);

// Decimal rendering with the given number of significant digits.
std::string to_decimal_string(const Rat& q, int significant_digits = 12);

// Accepts "3/5", "7", "-1/3", and decimal literals like "0.25" (parsed
// exactly as 25/100). Throws SpecError on anything else.
Rat parse_fraction(const std::string& text);

Rat make_rat(const BigInt& num, const BigInt& den);

// Conversions that fail loudly instead of truncating.
std::uint64_t to_u64(const BigInt& v);
long to_long(const BigInt& v);

}  // namespace combnet
