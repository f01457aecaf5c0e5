#include "combnet/rng.hpp"

namespace combnet {

std::vector<std::uint8_t> random_file(std::uint64_t seed, int file_id,
                                      std::uint64_t size) {
    SplitMix64 rng(seed + static_cast<std::uint64_t>(file_id) *
                              0x9e3779b97f4a7c15ull);
    std::vector<std::uint8_t> out(size);
    std::uint64_t i = 0;
    while (i < size) {
        std::uint64_t word = rng.next();
        for (int b = 0; b < 8 && i < size; ++b, ++i)
            out[i] = static_cast<std::uint8_t>(word >> (8 * b));
    }
    return out;
}

std::vector<std::vector<std::uint8_t>> random_library(std::uint64_t seed,
                                                      int file_count,
                                                      std::uint64_t size) {
    std::vector<std::vector<std::uint8_t>> lib;
    lib.reserve(file_count);
    for (int i = 1; i <= file_count; ++i)
        lib.push_back(random_file(seed, i, size));
    return lib;
}

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t len) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace combnet
