#include "combnet/gf.hpp"

#include <cstring>

#include "combnet/errors.hpp"

namespace combnet::gf {

Field::Field(int w) : w_(w), order_(1u << w) {
    unsigned poly = (w == 8) ? kPoly8 : kPoly16;
    log_.assign(order_, 0);
    exp_.assign(2 * (order_ - 1), 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < order_ - 1; ++i) {
        exp_[i] = static_cast<std::uint16_t>(x);
        exp_[i + order_ - 1] = static_cast<std::uint16_t>(x);
        log_[x] = static_cast<std::uint16_t>(i);
        x <<= 1;
        if (x & order_) x ^= poly;
    }
    if (x != 1)
        throw CheckError("gf: generator 2 is not primitive for this polynomial");
}

const Field& Field::of(int w) {
    if (w == 8) {
        static const Field f8(8);
        return f8;
    }
    if (w == 16) {
        static const Field f16(16);
        return f16;
    }
    throw SpecError("gf: word size must be 8 or 16");
}

std::uint16_t Field::inv(std::uint16_t a) const {
    if (a == 0) throw SpecError("gf: inverse of zero");
    return exp_[order_ - 1 - log_[a]];
}

std::uint16_t Field::div(std::uint16_t a, std::uint16_t b) const {
    if (b == 0) throw SpecError("gf: division by zero");
    if (a == 0) return 0;
    return exp_[log_[a] + order_ - 1 - log_[b]];
}

void Field::mul_acc(std::uint16_t c, const std::uint8_t* src, std::uint8_t* dst,
                    std::size_t len) const {
    if (len % symbol_bytes() != 0)
        throw SpecError("gf: buffer length not a multiple of the symbol width");
    if (c == 0) return;
    if (c == 1) {
        for (std::size_t i = 0; i < len; ++i) dst[i] ^= src[i];
        return;
    }
    std::uint32_t lc = log_[c];
    if (w_ == 8) {
        for (std::size_t i = 0; i < len; ++i) {
            std::uint8_t s = src[i];
            if (s) dst[i] ^= static_cast<std::uint8_t>(exp_[lc + log_[s]]);
        }
    } else {
        for (std::size_t i = 0; i < len; i += 2) {
            std::uint16_t s =
                static_cast<std::uint16_t>(src[i] | (src[i + 1] << 8));
            if (!s) continue;
            std::uint16_t p = exp_[lc + log_[s]];
            dst[i] ^= static_cast<std::uint8_t>(p & 0xff);
            dst[i + 1] ^= static_cast<std::uint8_t>(p >> 8);
        }
    }
}

void Field::mul_in_place(std::uint16_t c, std::uint8_t* buf,
                         std::size_t len) const {
    if (len % symbol_bytes() != 0)
        throw SpecError("gf: buffer length not a multiple of the symbol width");
    if (c == 1) return;
    if (c == 0) {
        std::memset(buf, 0, len);
        return;
    }
    std::uint32_t lc = log_[c];
    if (w_ == 8) {
        for (std::size_t i = 0; i < len; ++i) {
            std::uint8_t s = buf[i];
            buf[i] = s ? static_cast<std::uint8_t>(exp_[lc + log_[s]]) : 0;
        }
    } else {
        for (std::size_t i = 0; i < len; i += 2) {
            std::uint16_t s =
                static_cast<std::uint16_t>(buf[i] | (buf[i + 1] << 8));
            std::uint16_t p = s ? exp_[lc + log_[s]] : 0;
            buf[i] = static_cast<std::uint8_t>(p & 0xff);
            buf[i + 1] = static_cast<std::uint8_t>(p >> 8);
        }
    }
}

}  // namespace combnet::gf
