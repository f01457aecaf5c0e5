#include "combnet/exact.hpp"

#include <cctype>
#include <cstdio>
#include <numeric>

#include "combnet/errors.hpp"

namespace combnet {

BigInt binomial(long x, long y) {
    if (x < 0 || y < 0 || x < y) return 0;
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(x),
                 static_cast<unsigned long>(y));
    return out;
}

BigInt lcm_upto(long m) {
    if (m < 1) throw SpecError("lcm_upto: m must be >= 1");
    BigInt acc = 1;
    for (long i = 2; i <= m; ++i) {
        BigInt v = i;
        mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), v.get_mpz_t());
    }
    return acc;
}

std::string to_fraction_string(const Rat& q) {
    Rat r = q;
    r.canonicalize();
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_decimal_string(const Rat& q, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, q.get_d());
    return buf;
}

Rat make_rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw SpecError("make_rat: zero denominator");
    Rat out(num, den);
    out.canonicalize();
    return out;
}

Rat parse_fraction(const std::string& text) {
    if (text.empty()) throw SpecError("parse_fraction: empty string");
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' &&
            c != '.' && c != '-' && c != '+') {
            throw SpecError("parse_fraction: bad character in '" + text + "'");
        }
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        if (text.find('/') != std::string::npos)
            throw SpecError("parse_fraction: mixed decimal and fraction");
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        size_t frac_len = text.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw SpecError("parse_fraction: bad decimal '" + text + "'");
        BigInt num(digits, 10);
        BigInt den = 1;
        for (size_t i = 0; i < frac_len; ++i) den *= 10;
        return make_rat(num, den);
    }
    Rat out;
    if (mpq_set_str(out.get_mpq_t(), text.c_str(), 10) != 0)
        throw SpecError("parse_fraction: cannot parse '" + text + "'");
    if (out.get_den() == 0) throw SpecError("parse_fraction: zero denominator");
    out.canonicalize();
    return out;
}

std::uint64_t to_u64(const BigInt& v) {
    if (v < 0 || !v.fits_ulong_p())
        throw SpecError("integer out of range for u64: " + v.get_str());
    return static_cast<std::uint64_t>(v.get_ui());
}

long to_long(const BigInt& v) {
    if (!v.fits_slong_p())
        throw SpecError("integer out of range for long: " + v.get_str());
    return v.get_si();
}

}  // namespace combnet
