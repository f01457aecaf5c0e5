#include "combnet/sweep.hpp"

#include <atomic>
#include <future>
#include <ostream>

#include "combnet/errors.hpp"
#include "combnet/topology.hpp"

namespace combnet::sweep {

Row make_row(int relay_count, int fanout, int file_count,
             schemes::SchemeKind kind, int gain) {
    Row row;
    row.relay_count = relay_count;
    row.fanout = fanout;
    row.file_count = file_count;
    row.scheme = schemes::scheme_name(kind);
    row.gain = gain;
    if (kind == schemes::SchemeKind::Symmetric) {
        long per_relay = to_long(k_i(relay_count, fanout, 1));
        row.memory = analysis::memory_symmetric(file_count, relay_count, fanout, gain);
        row.n = to_long(BigInt(relay_count) * binomial(per_relay, gain - 1));
        row.k1 = to_long(BigInt(fanout) * binomial(per_relay - 1, gain - 2));
        row.k2 = to_long(BigInt(fanout) * binomial(per_relay - 1, gain - 1));
        row.k3 = to_long(BigInt(relay_count) * binomial(per_relay, gain));
    } else if (kind == schemes::SchemeKind::Asymmetric) {
        row.memory = analysis::memory_asymmetric(file_count, relay_count, fanout, gain);
        row.n = (gain == 1) ? 1 : to_long(count_z(relay_count, fanout, gain - 1));
        row.k1 = (gain == 1) ? 0
                             : to_long(per_user_incidence(relay_count, fanout, gain - 1));
        row.k2 = to_long(per_user_incidence(relay_count, fanout, gain));
        row.k3 = to_long(count_z(relay_count, fanout, gain));
    } else {
        throw SpecError("sweep rows cover the coded schemes only");
    }
    row.r1 = analysis::load_at(file_count, relay_count, fanout, gain, row.memory);
    row.r2 = (1 - row.memory / file_count) / fanout;
    row.r2.canonicalize();
    return row;
}

Result run(int relay_count, int fanout, int file_count, int g_min, int g_max,
           const std::vector<schemes::SchemeKind>& kinds, int grid_points,
           int jobs) {
    long per_relay = to_long(k_i(relay_count, fanout, 1));
    if (g_min < 1 || g_max > per_relay)
        throw SpecError("sweep gain range must lie in [1..K1=" +
                        std::to_string(per_relay) + "]");
    Result result;

    struct Task {
        schemes::SchemeKind kind;
        int gain;
    };
    std::vector<Task> tasks;
    for (auto kind : kinds)
        for (int g = g_min; g <= g_max; ++g) tasks.push_back({kind, g});

    result.rows.resize(tasks.size());
    if (jobs > 1 && tasks.size() > 1) {
        std::vector<std::future<void>> futures;
        std::atomic<std::size_t> next{0};
        for (int j = 0; j < jobs; ++j)
            futures.push_back(std::async(std::launch::async, [&]() {
                for (std::size_t i = next++; i < tasks.size(); i = next++)
                    result.rows[i] = make_row(relay_count, fanout, file_count,
                                              tasks[i].kind, tasks[i].gain);
            }));
        for (auto& f : futures) f.get();
    } else {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            result.rows[i] = make_row(relay_count, fanout, file_count,
                                      tasks[i].kind, tasks[i].gain);
    }

    for (auto kind : kinds) {
        std::string name = schemes::scheme_name(kind);
        std::vector<analysis::SchemePoint> points;
        for (const auto& row : result.rows)
            if (row.scheme == name)
                points.push_back({name, row.gain, row.memory, row.r1, row.r2});
        if (g_min > 1) {
            Row g1 = make_row(relay_count, fanout, file_count, kind, 1);
            points.push_back({name, 1, g1.memory, g1.r1, g1.r2});
        }
        points.push_back({name, 0, Rat(file_count), Rat(0), Rat(0)});
        auto curve = analysis::envelope(std::move(points));
        if (grid_points >= 2) {
            for (int i = 0; i < grid_points; ++i) {
                Rat m = make_rat(BigInt(file_count) * i, grid_points - 1);
                result.envelope_points.push_back({name, m, curve.eval(m)});
            }
        }
        result.curves.emplace(name, std::move(curve));
    }
    return result;
}

std::string csv_header() {
    return "H,r,N,scheme,g,M_exact,M_decimal,R1_exact,R1_decimal,R2_exact,"
           "R2_decimal,k1,k2,k3,n";
}

void write_csv(std::ostream& out, const Result& result) {
    out << csv_header() << "\n";
    for (const auto& row : result.rows) {
        out << row.relay_count << ',' << row.fanout << ',' << row.file_count
            << ',' << row.scheme << ',' << row.gain << ','
            << to_fraction_string(row.memory) << ','
            << to_decimal_string(row.memory) << ','
            << to_fraction_string(row.r1) << ',' << to_decimal_string(row.r1)
            << ',' << to_fraction_string(row.r2) << ','
            << to_decimal_string(row.r2) << ',' << row.k1 << ',' << row.k2
            << ',' << row.k3 << ',' << row.n << "\n";
    }
    for (const auto& p : result.envelope_points) {
        out << ",,," << p.scheme << "-envelope,," << to_fraction_string(p.memory)
            << ',' << to_decimal_string(p.memory) << ','
            << to_fraction_string(p.r1) << ',' << to_decimal_string(p.r1)
            << ",,,,,,\n";
    }
}

}  // namespace combnet::sweep
