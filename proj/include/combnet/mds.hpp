#pragma once

#include <cstdint>
#include <vector>

#include "combnet/gf.hpp"

namespace combnet {

// Systematic (n, k) MDS erasure code over GF(2^w): coded symbols 1..k are
// the message, parity symbols come from a Cauchy matrix (docs/formats.md has
// the bit-exact construction). Any k distinct coded symbols recover the
// message.
struct MdsCode {
    int n = 0;
    int k = 0;
    int w = 8;

    int symbol_bytes() const { return w / 8; }
};

// Picks the word size: w=8 for n <= 255, w=16 for n <= 65535, rejects larger.
MdsCode make_mds_code(int n, int k);

struct CodedSymbolBlock {
    int index = 0;                      // 1..n
    std::vector<std::uint8_t> payload;  // fixed per-encoding length L
};

// G[index][j], 1-based; identity rows for index <= k.
std::uint16_t generator_coefficient(const MdsCode& code, int index, int j);

// `message` holds exactly k equal-length pieces; the length must be a
// multiple of the symbol width (always 1 for w=8).
std::vector<CodedSymbolBlock> mds_encode(
    const MdsCode& code, const std::vector<std::vector<std::uint8_t>>& message);

// Any >= k blocks with distinct valid indices; throws InsufficientBlocks
// below k, SpecError on duplicates or mismatched lengths.
std::vector<std::vector<std::uint8_t>> mds_decode(
    const MdsCode& code, const std::vector<CodedSymbolBlock>& blocks);

}  // namespace combnet
