#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace combnet::gf {

// GF(2^8) uses x^8+x^4+x^3+x^2+1 (0x11d), GF(2^16) uses x^16+x^12+x^3+x+1
// (0x1100b); 2 is a primitive element of both. Log/antilog tables are built
// once at first use and read-only afterwards.
inline constexpr unsigned kPoly8 = 0x11d;
inline constexpr unsigned kPoly16 = 0x1100b;

class Field {
  public:
    // w must be 8 or 16.
    static const Field& of(int w);

    int w() const { return w_; }
    std::uint32_t order() const { return order_; }
    int symbol_bytes() const { return w_ / 8; }

    std::uint16_t add(std::uint16_t a, std::uint16_t b) const { return a ^ b; }

    std::uint16_t mul(std::uint16_t a, std::uint16_t b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }

    std::uint16_t inv(std::uint16_t a) const;
    std::uint16_t div(std::uint16_t a, std::uint16_t b) const;

    // dst ^= c * src over `len` bytes; len must be a multiple of the symbol
    // width. Symbols are little-endian for w=16.
    void mul_acc(std::uint16_t c, const std::uint8_t* src, std::uint8_t* dst,
                 std::size_t len) const;
    // buf = c * buf.
    void mul_in_place(std::uint16_t c, std::uint8_t* buf, std::size_t len) const;

  private:
    explicit Field(int w);

    int w_;
    std::uint32_t order_;
    std::vector<std::uint16_t> log_;   // [order], log_[0] unused
    std::vector<std::uint16_t> exp_;   // [2*(order-1)], doubled to skip mod
};

}  // namespace combnet::gf
