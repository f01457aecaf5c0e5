#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "combnet/analysis.hpp"
#include "combnet/schemes.hpp"

namespace combnet::sweep {

struct Row {
    int relay_count = 0;
    int fanout = 0;
    int file_count = 0;
    std::string scheme;
    int gain = 0;
    Rat memory;
    Rat r1;
    Rat r2;
    long k1 = 0, k2 = 0, k3 = 0, n = 0;
};

struct EnvelopePoint {
    std::string scheme;
    Rat memory;
    Rat r1;
};

struct Result {
    std::vector<Row> rows;  // ordered by (scheme, g)
    std::vector<EnvelopePoint> envelope_points;
    std::map<std::string, analysis::TradeoffCurve> curves;
};

// Analytic (M, R1, R2, counts) rows for each (scheme, g) plus each scheme's
// lower convex envelope sampled on a `grid_points` grid over M in [0, N].
// The envelope always folds in the g=1 point and the (M=N, R=0) endpoint.
Result run(int relay_count, int fanout, int file_count, int g_min, int g_max,
           const std::vector<schemes::SchemeKind>& kinds, int grid_points,
           int jobs = 1);

Row make_row(int relay_count, int fanout, int file_count,
             schemes::SchemeKind kind, int gain);

std::string csv_header();
void write_csv(std::ostream& out, const Result& result);

}  // namespace combnet::sweep
