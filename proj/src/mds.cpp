#include "combnet/mds.hpp"

#include <algorithm>
#include <string>

#include "combnet/errors.hpp"

namespace combnet {

namespace {

// Parity row i (0-based), message column j (0-based): inv(x_i ^ y_j) with
// x_i = i and y_j = (n-k) + j. The two index ranges are disjoint, so every
// entry is defined and every square submatrix is nonsingular.
std::uint16_t cauchy_entry(const gf::Field& field, int n, int k, int i, int j) {
    std::uint16_t x = static_cast<std::uint16_t>(i);
    std::uint16_t y = static_cast<std::uint16_t>((n - k) + j);
    return field.inv(x ^ y);
}

}  // namespace

MdsCode make_mds_code(int n, int k) {
    if (k < 1 || n < k) throw SpecError("mds: need 1 <= k <= n");
    int w;
    if (n <= 255)
        w = 8;
    else if (n <= 65535)
        w = 16;
    else
        throw SpecError("mds: n=" + std::to_string(n) + " above 65535");
    return MdsCode{n, k, w};
}

std::uint16_t generator_coefficient(const MdsCode& code, int index, int j) {
    if (index < 1 || index > code.n || j < 1 || j > code.k)
        throw SpecError("mds: generator index out of range");
    if (index <= code.k) return index == j ? 1 : 0;
    return cauchy_entry(gf::Field::of(code.w), code.n, code.k, index - code.k - 1,
                        j - 1);
}

std::vector<CodedSymbolBlock> mds_encode(
    const MdsCode& code, const std::vector<std::vector<std::uint8_t>>& message) {
    if (static_cast<int>(message.size()) != code.k)
        throw SpecError("mds_encode: expected exactly k message pieces");
    if (code.n > (1 << code.w) - 1)
        throw SpecError("mds_encode: n exceeds field size");
    const std::size_t len = message.front().size();
    if (len < 1) throw SpecError("mds_encode: empty message pieces");
    for (const auto& piece : message)
        if (piece.size() != len)
            throw SpecError("mds_encode: message pieces of unequal length");
    const gf::Field& field = gf::Field::of(code.w);
    if (len % field.symbol_bytes() != 0)
        throw SpecError("mds_encode: piece length must be a multiple of " +
                        std::to_string(field.symbol_bytes()) + " bytes");

    std::vector<CodedSymbolBlock> out(code.n);
    for (int j = 0; j < code.k; ++j) out[j] = {j + 1, message[j]};
    for (int i = 0; i < code.n - code.k; ++i) {
        CodedSymbolBlock& blk = out[code.k + i];
        blk.index = code.k + i + 1;
        blk.payload.assign(len, 0);
        for (int j = 0; j < code.k; ++j)
            field.mul_acc(cauchy_entry(field, code.n, code.k, i, j),
                          message[j].data(), blk.payload.data(), len);
    }
    return out;
}

std::vector<std::vector<std::uint8_t>> mds_decode(
    const MdsCode& code, const std::vector<CodedSymbolBlock>& blocks) {
    if (static_cast<int>(blocks.size()) < code.k)
        throw InsufficientBlocks("mds_decode: got " +
                                 std::to_string(blocks.size()) + " blocks, need " +
                                 std::to_string(code.k));
    std::vector<const CodedSymbolBlock*> sorted;
    sorted.reserve(blocks.size());
    for (const auto& b : blocks) sorted.push_back(&b);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return a->index < b->index; });
    const std::size_t len = sorted.front()->payload.size();
    int prev = 0;
    for (const auto* b : sorted) {
        if (b->index < 1 || b->index > code.n)
            throw SpecError("mds_decode: block index out of range");
        if (b->index == prev) throw SpecError("mds_decode: duplicate block index");
        prev = b->index;
        if (b->payload.size() != len)
            throw SpecError("mds_decode: blocks of unequal length");
    }
    const gf::Field& field = gf::Field::of(code.w);
    if (len < 1 || len % field.symbol_bytes() != 0)
        throw SpecError("mds_decode: bad block length");

    std::vector<std::vector<std::uint8_t>> message(code.k);
    std::vector<const CodedSymbolBlock*> parity;
    for (const auto* b : sorted) {
        if (b->index <= code.k)
            message[b->index - 1] = b->payload;
        else
            parity.push_back(b);
    }
    std::vector<int> missing;  // 0-based message positions to solve for
    for (int j = 0; j < code.k; ++j)
        if (message[j].empty()) missing.push_back(j);
    const int p = static_cast<int>(missing.size());
    if (p == 0) return message;
    // >= k distinct indices guarantee enough parity rows.
    if (static_cast<int>(parity.size()) < p)
        throw CheckError("mds_decode: parity accounting broken");
    parity.resize(p);

    // A x = rhs where x are the missing pieces; known pieces fold into rhs.
    std::vector<std::vector<std::uint16_t>> a(p, std::vector<std::uint16_t>(p));
    std::vector<std::vector<std::uint8_t>> rhs(p);
    for (int e = 0; e < p; ++e) {
        int row = parity[e]->index - code.k - 1;
        rhs[e] = parity[e]->payload;
        for (int j = 0; j < code.k; ++j) {
            std::uint16_t coef = cauchy_entry(field, code.n, code.k, row, j);
            if (message[j].empty()) continue;
            field.mul_acc(coef, message[j].data(), rhs[e].data(), len);
        }
        for (int u = 0; u < p; ++u)
            a[e][u] = cauchy_entry(field, code.n, code.k, row, missing[u]);
    }

    // Gauss-Jordan over GF(2^w), applied to the byte-vector right-hand sides.
    for (int col = 0; col < p; ++col) {
        int pivot = -1;
        for (int row = col; row < p; ++row)
            if (a[row][col] != 0) {
                pivot = row;
                break;
            }
        if (pivot < 0)
            throw CheckError("mds_decode: singular system (corrupt input?)");
        std::swap(a[col], a[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        std::uint16_t inv = field.inv(a[col][col]);
        for (int j = col; j < p; ++j) a[col][j] = field.mul(a[col][j], inv);
        field.mul_in_place(inv, rhs[col].data(), len);
        for (int row = 0; row < p; ++row) {
            if (row == col || a[row][col] == 0) continue;
            std::uint16_t factor = a[row][col];
            for (int j = col; j < p; ++j)
                a[row][j] ^= field.mul(factor, a[col][j]);
            field.mul_acc(factor, rhs[col].data(), rhs[row].data(), len);
        }
    }
    for (int u = 0; u < p; ++u) message[missing[u]] = std::move(rhs[u]);
    return message;
}

}  // namespace combnet
