#include <doctest.h>

#include <random>

#include "combnet/errors.hpp"
#include "combnet/mds.hpp"
#include "combnet/topology.hpp"

using namespace combnet;

namespace {

std::vector<std::vector<std::uint8_t>> random_message(std::mt19937& rng, int k,
                                                      std::size_t len) {
    std::vector<std::vector<std::uint8_t>> msg(k);
    for (auto& piece : msg) {
        piece.resize(len);
        for (auto& b : piece) b = static_cast<std::uint8_t>(rng());
    }
    return msg;
}

}  // namespace

TEST_CASE("code construction picks the word size") {
    CHECK(make_mds_code(12, 6).w == 8);
    CHECK(make_mds_code(255, 100).w == 8);
    CHECK(make_mds_code(256, 100).w == 16);
    CHECK(make_mds_code(65535, 100).w == 16);
    CHECK_THROWS_AS(make_mds_code(65536, 10), SpecError);
    CHECK_THROWS_AS(make_mds_code(4, 5), SpecError);
    CHECK_THROWS_AS(make_mds_code(4, 0), SpecError);
}

TEST_CASE("rate-1 code is the identity") {
    std::mt19937 rng(1);
    MdsCode code = make_mds_code(3, 3);
    auto msg = random_message(rng, 3, 5);
    auto blocks = mds_encode(code, msg);
    for (int j = 0; j < 3; ++j) CHECK(blocks[j].payload == msg[j]);
    CHECK(mds_decode(code, blocks) == msg);
}

TEST_CASE("(4,2): every 2-subset of blocks decodes, exhaustively") {
    std::mt19937 rng(2);
    MdsCode code = make_mds_code(4, 2);
    auto msg = random_message(rng, 2, 1);
    auto blocks = mds_encode(code, msg);
    int subsets = 0;
    for (const auto& pick : colex_subsets(4, 2)) {
        std::vector<CodedSymbolBlock> got{blocks[pick[0] - 1], blocks[pick[1] - 1]};
        CHECK(mds_decode(code, got) == msg);
        ++subsets;
    }
    CHECK(subsets == 6);
}

TEST_CASE("the (12,6) code and systematic prefix") {
    // Parameters of the per-relay scheme at H=4, r=2, g=2:
    // n = H*C(K1, g-1) = 12, k = r*C(K1, g-1) = 6.
    std::mt19937 rng(3);
    MdsCode code = make_mds_code(12, 6);
    auto msg = random_message(rng, 6, 4);
    auto blocks = mds_encode(code, msg);
    std::vector<CodedSymbolBlock> systematic(blocks.begin(), blocks.begin() + 6);
    CHECK(mds_decode(code, systematic) == msg);
    std::vector<CodedSymbolBlock> parity(blocks.begin() + 6, blocks.end());
    CHECK(mds_decode(code, parity) == msg);
}

TEST_CASE("decode input validation") {
    std::mt19937 rng(4);
    MdsCode code = make_mds_code(6, 3);
    auto msg = random_message(rng, 3, 2);
    auto blocks = mds_encode(code, msg);
    std::vector<CodedSymbolBlock> few{blocks[0], blocks[1]};
    CHECK_THROWS_AS(mds_decode(code, few), InsufficientBlocks);
    std::vector<CodedSymbolBlock> dup{blocks[0], blocks[1], blocks[1]};
    CHECK_THROWS_AS(mds_decode(code, dup), SpecError);
    std::vector<CodedSymbolBlock> bad{blocks[0], blocks[1], {9, blocks[2].payload}};
    CHECK_THROWS_AS(mds_decode(code, bad), SpecError);
    auto uneven = blocks;
    uneven[2].payload.push_back(0);
    CHECK_THROWS_AS(mds_decode(code, uneven), SpecError);
}

TEST_CASE("encode input validation") {
    MdsCode code = make_mds_code(4, 2);
    std::vector<std::vector<std::uint8_t>> uneven{{1, 2}, {3}};
    CHECK_THROWS_AS(mds_encode(code, uneven), SpecError);
    std::vector<std::vector<std::uint8_t>> wrong_count{{1, 2}};
    CHECK_THROWS_AS(mds_encode(code, wrong_count), SpecError);
    // w=16 payloads must align to the 2-byte symbols.
    MdsCode wide = make_mds_code(300, 2);
    std::vector<std::vector<std::uint8_t>> odd{{1, 2, 3}, {4, 5, 6}};
    CHECK_THROWS_AS(mds_encode(wide, odd), SpecError);
}

TEST_CASE("any-k recovery, random subsets across word sizes") {
    std::mt19937 rng(5);
    for (auto [n, k] : std::vector<std::pair<int, int>>{{20, 11}, {300, 40}}) {
        MdsCode code = make_mds_code(n, k);
        auto msg = random_message(rng, k, 2 * code.symbol_bytes());
        auto blocks = mds_encode(code, msg);
        for (int trial = 0; trial < 60; ++trial) {
            std::vector<int> ids(n);
            for (int i = 0; i < n; ++i) ids[i] = i + 1;
            std::shuffle(ids.begin(), ids.end(), rng);
            std::vector<CodedSymbolBlock> pick;
            for (int i = 0; i < k; ++i) pick.push_back(blocks[ids[i] - 1]);
            CHECK(mds_decode(code, pick) == msg);
        }
    }
}

TEST_CASE("extra blocks beyond k are fine") {
    std::mt19937 rng(6);
    MdsCode code = make_mds_code(8, 3);
    auto msg = random_message(rng, 3, 2);
    auto blocks = mds_encode(code, msg);
    CHECK(mds_decode(code, blocks) == msg);
}

TEST_CASE("generator coefficients are deterministic and documented") {
    MdsCode code = make_mds_code(6, 4);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j)
            CHECK(generator_coefficient(code, i, j) == (i == j ? 1 : 0));
    const auto& field = gf::Field::of(8);
    // Parity row i, column j: inv((i-1) ^ ((n-k) + j - 1)).
    CHECK(generator_coefficient(code, 5, 1) == field.inv(0 ^ 2));
    CHECK(generator_coefficient(code, 6, 3) == field.inv(1 ^ 4));
}
