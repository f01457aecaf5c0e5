#include "combnet/analysis.hpp"

#include <algorithm>
#include <string>

#include "combnet/errors.hpp"
#include "combnet/topology.hpp"

namespace combnet::analysis {

namespace {

void validate_gain(int relay_count, int fanout, int gain) {
    long k1 = to_long(k_i(relay_count, fanout, 1));
    if (gain < 1 || gain > k1)
        throw SpecError("gain g must be in [1..K1=" + std::to_string(k1) +
                        "], got " + std::to_string(gain));
}

}  // namespace

Rat memory_symmetric(int file_count, int relay_count, int fanout, int gain) {
    validate_gain(relay_count, fanout, gain);
    BigInt k1 = k_i(relay_count, fanout, 1);
    return make_rat(BigInt(file_count) * (gain - 1), k1);
}

Rat memory_asymmetric(int file_count, int relay_count, int fanout, int gain) {
    validate_gain(relay_count, fanout, gain);
    BigInt num = 0, den = 0;
    for (int a = 1; a <= fanout; ++a) {
        long ka = to_long(k_i(relay_count, fanout, a));
        BigInt coef = binomial(fanout, a);
        BigInt num_term = coef * binomial(ka - 1, gain - 2);
        BigInt den_term = coef * binomial(ka, gain - 1);
        if (a % 2 == 1) {
            num += num_term;
            den += den_term;
        } else {
            num -= num_term;
            den -= den_term;
        }
    }
    if (den <= 0)
        throw CheckError("memory_asymmetric: nonpositive denominator");
    Rat sum_form = make_rat(BigInt(file_count) * num, den);

    Rat z_form = 0;
    if (gain >= 2) {
        BigInt z_prev = count_z(relay_count, fanout, gain - 1);
        BigInt z_cur = count_z(relay_count, fanout, gain);
        BigInt cached = BigInt(gain - 1) * z_prev;
        z_form = make_rat(BigInt(file_count) * cached,
                          cached + BigInt(gain) * z_cur);
    }
    if (sum_form != z_form)
        throw CheckError("memory_asymmetric: the two closed forms disagree at g=" +
                         std::to_string(gain));
    return sum_form;
}

Rat load_at(int file_count, int relay_count, int fanout, int gain, const Rat& memory) {
    if (gain < 1) throw SpecError("load_at: g must be >= 1");
    if (memory < 0 || memory > file_count)
        throw SpecError("load_at: M must be in [0, N]");
    BigInt users = binomial(relay_count, fanout);
    Rat uncached = 1 - memory / file_count;
    Rat load = Rat(users) * uncached / (Rat(relay_count) * gain);
    load.canonicalize();
    return load;
}

ComparisonReport compare_memories(int relay_count, int fanout, int file_count) {
    if (fanout < 1 || relay_count < fanout)
        throw SpecError("compare_memories: need 1 <= r <= H");
    ComparisonReport report;
    report.relay_count = relay_count;
    report.fanout = fanout;
    report.users_per_relay = to_long(k_i(relay_count, fanout, 1));
    report.users_per_relay2 = to_long(k_i(relay_count, fanout, 2));
    report.equality_threshold = static_cast<int>(report.users_per_relay2) + 2;

    for (int g = 1; g <= report.users_per_relay; ++g) {
        ComparisonRow row;
        row.gain = g;
        row.m_symmetric = memory_symmetric(file_count, relay_count, fanout, g);
        row.m_asymmetric = memory_asymmetric(file_count, relay_count, fanout, g);
        row.equal = row.m_asymmetric == row.m_symmetric;
        if (row.m_asymmetric > row.m_symmetric)
            throw CheckError("memory dominance violated at g=" + std::to_string(g));
        if (g == 1) {
            if (row.m_symmetric != 0 || row.m_asymmetric != 0)
                throw CheckError("memories must both vanish at g=1");
        } else {
            bool expect_equal = g >= report.equality_threshold;
            if (row.equal != expect_equal)
                throw CheckError("equality threshold K2+2=" +
                                 std::to_string(report.equality_threshold) +
                                 " violated at g=" + std::to_string(g));
            // |Z_g| / |Z_{g-1}| >= (K1 - g + 1) / g, cross-multiplied; this is
            // exactly the dominance statement restated, with equality on the
            // same g >= K2+2 threshold.
            BigInt lhs = BigInt(g) * count_z(relay_count, fanout, g);
            BigInt rhs = BigInt(report.users_per_relay - g + 1) *
                         count_z(relay_count, fanout, g - 1);
            if (lhs < rhs)
                throw CheckError("ratio chain violated at g=" + std::to_string(g));
            if ((lhs == rhs) != expect_equal)
                throw CheckError("ratio chain equality threshold violated at g=" +
                                 std::to_string(g));
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

namespace {

Rat cross(const std::pair<Rat, Rat>& a, const std::pair<Rat, Rat>& b,
          const std::pair<Rat, Rat>& c) {
    return (b.first - a.first) * (c.second - a.second) -
           (b.second - a.second) * (c.first - a.first);
}

}  // namespace

TradeoffCurve envelope(std::vector<SchemePoint> points) {
    if (points.size() < 2) throw SpecError("envelope: need at least two points");
    std::sort(points.begin(), points.end(),
              [](const SchemePoint& a, const SchemePoint& b) {
                  if (a.memory != b.memory) return a.memory < b.memory;
                  return a.r1 < b.r1;
              });
    if (points.front().memory != 0)
        throw SpecError("envelope: points must include a memory-0 (g=1) point");
    if (points.back().r1 != 0)
        throw SpecError("envelope: points must include a zero-load endpoint");

    TradeoffCurve curve;
    curve.points = points;
    std::vector<std::pair<Rat, Rat>> hull;
    for (const auto& p : points) {
        std::pair<Rat, Rat> v{p.memory, p.r1};
        // Sorted by (memory, r1): the first point at each memory already has
        // the lowest load.
        if (!hull.empty() && hull.back().first == v.first) continue;
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2], hull.back(), v) <= 0)
            hull.pop_back();
        hull.push_back(std::move(v));
    }
    curve.envelope = std::move(hull);
    return curve;
}

Rat TradeoffCurve::eval(const Rat& memory) const {
    if (envelope.empty()) throw SpecError("eval on empty envelope");
    if (memory < envelope.front().first || memory > envelope.back().first)
        throw SpecError("eval: memory outside the envelope span");
    auto hi = std::lower_bound(
        envelope.begin(), envelope.end(), memory,
        [](const std::pair<Rat, Rat>& v, const Rat& m) { return v.first < m; });
    if (hi->first == memory) return hi->second;
    auto lo = hi - 1;
    Rat t = (memory - lo->first) / (hi->first - lo->first);
    Rat out = lo->second + t * (hi->second - lo->second);
    out.canonicalize();
    return out;
}

}  // namespace combnet::analysis
