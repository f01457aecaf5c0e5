#pragma once

#include <string>
#include <utility>
#include <vector>

#include "combnet/exact.hpp"

namespace combnet::analysis {

// Cache size (in files) the per-relay symmetric scheme needs for gain g:
// N(g-1)/K1.
Rat memory_symmetric(int file_count, int relay_count, int fanout, int gain);

// Cache size for the coordinated asymmetric scheme. Evaluated through the
// alternating binomial sums and cross-checked against the
// (g-1)|Z_{g-1}| / ((g-1)|Z_{g-1}| + g|Z_g|) form; throws CheckError if the
// two disagree.
Rat memory_asymmetric(int file_count, int relay_count, int fanout, int gain);

// Max server->relay load at gain g and cache size M: K(1-M/N)/(H g).
Rat load_at(int file_count, int relay_count, int fanout, int gain, const Rat& memory);

struct ComparisonRow {
    int gain = 0;
    Rat m_symmetric;
    Rat m_asymmetric;
    bool equal = false;
};

struct ComparisonReport {
    int relay_count = 0;
    int fanout = 0;
    long users_per_relay = 0;    // K1
    long users_per_relay2 = 0;   // K2
    int equality_threshold = 0;  // K2 + 2
    std::vector<ComparisonRow> rows;
};

// For every g in [1..K1]: asserts m_asymmetric <= m_symmetric; for g >= 2
// asserts equality holds exactly when g >= K2+2 (at g=1 both are zero); and
// asserts the ratio chain g|Z_g| <= (K1-g+1)|Z_{g-1}|. Throws CheckError
// naming the offending g.
ComparisonReport compare_memories(int relay_count, int fanout, int file_count = 1);

struct SchemePoint {
    std::string scheme;
    int gain = 0;  // 0 for synthetic endpoints
    Rat memory;
    Rat r1;
    Rat r2;
};

struct TradeoffCurve {
    std::vector<SchemePoint> points;              // sorted by memory
    std::vector<std::pair<Rat, Rat>> envelope;    // lower convex hull vertices

    // Piecewise-linear evaluation; memory must lie in the envelope's span.
    Rat eval(const Rat& memory) const;
};

// Lower convex envelope over (memory, r1). Points must span memory 0
// (a g=1 point) through a zero-load endpoint at maximum memory.
TradeoffCurve envelope(std::vector<SchemePoint> points);

}  // namespace combnet::analysis
