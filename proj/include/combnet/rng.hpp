#pragma once

#include <cstdint>
#include <vector>

namespace combnet {

// SplitMix64. Fixed, documented generator so file contents, transcripts and
// hashes reproduce bit-exactly across runs and implementations
// (see docs/formats.md).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

// File `file_id` (1-based) of a seeded library: stream seeded with
// seed + file_id * 0x9e3779b97f4a7c15, bytes taken little-endian.
std::vector<std::uint8_t> random_file(std::uint64_t seed, int file_id,
                                      std::uint64_t size);

std::vector<std::vector<std::uint8_t>> random_library(std::uint64_t seed,
                                                      int file_count,
                                                      std::uint64_t size);

// FNV-1a 64-bit, used for transcript payload hashes.
std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t len);

}  // namespace combnet
