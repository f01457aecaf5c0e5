#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "combnet/analysis.hpp"
#include "combnet/errors.hpp"
#include "combnet/rng.hpp"
#include "combnet/schemes.hpp"
#include "combnet/sweep.hpp"
#include "combnet/topology.hpp"
#include "combnet/verify.hpp"

namespace {

using namespace combnet;

// Exit codes: 0 success, 1 invariant/decode failure, 2 invalid spec.
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadSpec = 2;

std::string resolve_output(const std::string& path) {
    if (path.empty() || path == "-") return path;
    const char* base = std::getenv("COMBNET_OUTPUT_DIR");
    std::filesystem::path p(path);
    if (base && *base && p.is_relative())
        return (std::filesystem::path(base) / p).string();
    return path;
}

std::string rat_line(const Rat& value) {
    return to_fraction_string(value) + " (" + to_decimal_string(value) + ")";
}

struct SimulateArgs {
    int relay_count = 0;
    int fanout = 0;
    int file_count = 0;  // 0: default to K
    std::uint64_t block_request = 1;
    std::string scheme = "asymmetric";
    int gain = 0;
    std::string cache_fraction;
    std::string demand = "worst-case";
    std::uint64_t seed = 1;
    std::string transcript_path;
};

schemes::SchemeConfig make_config(const std::string& scheme, int gain,
                                  const std::string& cache_fraction) {
    schemes::SchemeConfig config;
    config.kind = schemes::scheme_from_name(scheme);
    if (config.kind == schemes::SchemeKind::Routing) {
        if (gain != 0)
            throw SpecError("--gain does not apply to the routing scheme");
        if (cache_fraction.empty())
            throw SpecError("routing needs --cache-fraction M/N");
        config.cache_fraction = parse_fraction(cache_fraction);
    } else {
        if (!cache_fraction.empty())
            throw SpecError("--cache-fraction applies to routing only; coded "
                            "schemes take --gain");
        if (gain == 0) throw SpecError("coded schemes need --gain g");
        config.gain = gain;
    }
    return config;
}

int cmd_simulate(const SimulateArgs& args) {
    NetworkParams params;
    params.relay_count = args.relay_count;
    params.fanout = args.fanout;
    params.validate();
    params.file_count = args.file_count > 0
                            ? args.file_count
                            : static_cast<int>(to_long(params.user_count()));
    schemes::SchemeConfig config =
        make_config(args.scheme, args.gain, args.cache_fraction);

    NetworkTopology topo = build_network(params);
    params.file_size = schemes::pick_block_size(topo, config, args.block_request);
    topo = build_network(params);

    schemes::DemandVector demand;
    if (args.demand == "worst-case") {
        demand = schemes::worst_case_demand(topo);
    } else {
        std::stringstream ss(args.demand);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                demand.push_back(std::stoi(item));
            } catch (const std::exception&) {
                throw SpecError("bad demand entry '" + item +
                                "' (expected file ids like 1,2,3)");
            }
        }
    }

    auto library = random_library(args.seed, params.file_count, params.file_size);
    auto placement = schemes::place(topo, config, library);
    auto transcript = schemes::deliver(topo, config, placement, demand);
    auto loads = schemes::measure_loads(transcript, params.file_size);

    Rat memory = schemes::cache_size_files(topo, config);
    Rat fraction = memory / params.file_count;
    fraction.canonicalize();

    std::cout << "scheme=" << schemes::scheme_name(config.kind)
              << " H=" << params.relay_count << " r=" << params.fanout
              << " N=" << params.file_count << " K=" << topo.user_count();
    if (config.kind != schemes::SchemeKind::Routing)
        std::cout << " g=" << config.gain;
    std::cout << " B=" << params.file_size << " seed=" << args.seed << "\n";
    std::cout << "n=" << placement.layout.n << " k1=" << placement.layout.k1
              << " k2=" << placement.layout.k2 << " k3=" << placement.layout.k3
              << " code=(" << placement.info.code.n << ","
              << placement.info.code.k << ") w=" << placement.info.code.w
              << " L=" << placement.info.block_len << "\n";
    std::cout << "M = " << rat_line(memory) << " files ; M/N = "
              << rat_line(fraction) << "\n";
    std::cout << "R1 = " << rat_line(loads.r1) << "\n";
    std::cout << "R2 = " << rat_line(loads.r2) << "\n";
    std::cout << "messages = " << placement.layout.k3 << "\n";

    // Measured loads must equal the closed forms exactly.
    int gain = config.kind == schemes::SchemeKind::Routing ? 1 : config.gain;
    Rat r1_expected = analysis::load_at(params.file_count, params.relay_count,
                                        params.fanout, gain, memory);
    Rat r2_expected = (1 - fraction) / params.fanout;
    r2_expected.canonicalize();
    bool ok = true;
    if (loads.r1 != r1_expected || loads.r2 != r2_expected) {
        std::cout << "LOAD MISMATCH: analytic R1=" << rat_line(r1_expected)
                  << " R2=" << rat_line(r2_expected) << "\n";
        ok = false;
    }
    if (!schemes::forwarding_consistent(transcript)) {
        std::cout << "FORWARDING MISMATCH: relay emitted unseen bytes\n";
        ok = false;
    }

    for (int k = 1; k <= topo.user_count(); ++k) {
        bool user_ok = false;
        std::string note;
        try {
            auto out = schemes::decode(topo, config, k, placement.caches[k - 1],
                                       schemes::messages_for_user(transcript, k),
                                       demand);
            user_ok = out == library[demand[k - 1] - 1];
            if (!user_ok) note = " (wrong bytes)";
        } catch (const std::exception& e) {
            note = std::string(" (") + e.what() + ")";
        }
        std::cout << "user " << k << ": " << (user_ok ? "PASS" : "FAIL") << note
                  << "\n";
        ok = ok && user_ok;
    }

    if (!args.transcript_path.empty()) {
        std::string path = resolve_output(args.transcript_path);
        std::ofstream out(path);
        if (!out) throw SpecError("cannot open transcript path " + path);
        schemes::dump_transcript(out, transcript);
        std::cout << "transcript written to " << path << "\n";
    }
    std::cout << (ok ? "RESULT: PASS" : "RESULT: FAIL") << "\n";
    return ok ? 0 : kExitCheckFailed;
}

struct SweepArgs {
    int relay_count = 0;
    int fanout = 0;
    int file_count = 0;
    int g_min = 1;
    int g_max = 0;  // 0: K1
    std::string schemes_csv = "symmetric,asymmetric";
    int grid = 200;
    std::string output = "-";
    int jobs = 0;
};

int cmd_sweep(const SweepArgs& args) {
    NetworkParams params;
    params.relay_count = args.relay_count;
    params.fanout = args.fanout;
    params.validate();
    int files = args.file_count > 0 ? args.file_count
                                    : static_cast<int>(to_long(params.user_count()));
    long k1 = to_long(k_i(args.relay_count, args.fanout, 1));
    int g_max = args.g_max > 0 ? args.g_max : static_cast<int>(k1);

    std::vector<schemes::SchemeKind> kinds;
    std::stringstream ss(args.schemes_csv);
    std::string item;
    while (std::getline(ss, item, ','))
        kinds.push_back(schemes::scheme_from_name(item));

    sweep::Result result;
    if (args.g_min <= g_max)
        result = sweep::run(args.relay_count, args.fanout, files, args.g_min,
                            g_max, kinds, args.grid,
                            args.jobs > 0 ? args.jobs
                                          : std::thread::hardware_concurrency());

    std::string path = resolve_output(args.output);
    if (path == "-" || path.empty()) {
        if (result.rows.empty() && result.envelope_points.empty())
            std::cout << sweep::csv_header() << "\n";
        else
            sweep::write_csv(std::cout, result);
    } else {
        std::ofstream out(path);
        if (!out) throw SpecError("cannot open output path " + path);
        if (result.rows.empty() && result.envelope_points.empty())
            out << sweep::csv_header() << "\n";
        else
            sweep::write_csv(out, result);
    }
    return 0;
}

struct VerifyArgs {
    int h_min = 0, h_max = 0;
    int r_min = 0, r_max = 0;
    std::uint64_t seed = 1;
    int jobs = 0;
};

int cmd_verify(const VerifyArgs& args) {
    int h_max = args.h_max > 0 ? args.h_max : args.h_min;
    int r_max = args.r_max > 0 ? args.r_max : args.r_min;
    if (args.h_min < 1 || args.r_min < 1 || h_max < args.h_min ||
        r_max < args.r_min)
        throw SpecError("verify: bad H/r range");

    std::vector<std::pair<int, int>> pairs;
    for (int h = args.h_min; h <= h_max; ++h)
        for (int r = args.r_min; r <= r_max; ++r) {
            if (r > h) continue;
            BigInt users = binomial(h, r);
            if (users > 30)
                throw SpecError("verify: H=" + std::to_string(h) + " r=" +
                                std::to_string(r) + " has K=" + users.get_str() +
                                " above the desk-scale cap of 30");
            pairs.emplace_back(h, r);
        }
    if (pairs.empty()) throw SpecError("verify: empty H/r range");

    verify::Options options;
    options.seed = args.seed;
    options.jobs = args.jobs > 0 ? args.jobs : std::thread::hardware_concurrency();

    bool ok = true;
    std::vector<std::pair<int, int>> mds_codes;
    for (auto [h, r] : pairs) {
        auto results = verify::verify_network(h, r, options);
        for (const auto& res : results) {
            std::cout << (res.pass ? "[PASS] " : "[FAIL] ") << res.name << ": "
                      << res.detail << "\n";
            ok = ok && res.pass;
        }
        // Largest code of each scheme at this network feeds the randomized
        // MDS suite below.
        BigInt users = binomial(h, r);
        if (users <= options.max_sim_users) {
            long per_relay = to_long(k_i(h, r, 1));
            long best_n = 0, best_k = 0;
            for (int g = 1; g <= per_relay; ++g) {
                long n_sym = to_long(BigInt(h) * binomial(per_relay, g - 1));
                long k_sym = to_long(BigInt(r) * binomial(per_relay, g - 1));
                if (n_sym > best_n) best_n = n_sym, best_k = k_sym;
                long n_asym = g == 1 ? 1 : to_long(count_z(h, r, g - 1));
                long k_asym = (g == 1 ? 0 : to_long(per_user_incidence(h, r, g - 1))) +
                              to_long(per_user_incidence(h, r, g));
                if (n_asym > best_n) best_n = n_asym, best_k = k_asym;
            }
            if (best_n > 12)
                mds_codes.emplace_back(static_cast<int>(best_n),
                                       static_cast<int>(best_k));
        }
    }
    for (const auto& res : verify::verify_mds(args.seed, mds_codes, 100)) {
        std::cout << (res.pass ? "[PASS] " : "[FAIL] ") << res.name << ": "
                  << res.detail << "\n";
        ok = ok && res.pass;
    }
    std::cout << (ok ? "VERIFY: PASS" : "VERIFY: FAIL") << "\n";
    return ok ? 0 : kExitCheckFailed;
}

struct CompareArgs {
    int relay_count = 0;
    int fanout = 0;
    int file_count = 0;
};

int cmd_compare(const CompareArgs& args) {
    NetworkParams params;
    params.relay_count = args.relay_count;
    params.fanout = args.fanout;
    params.validate();
    int files = args.file_count > 0 ? args.file_count
                                    : static_cast<int>(to_long(params.user_count()));
    analysis::ComparisonReport report;
    try {
        report = analysis::compare_memories(args.relay_count, args.fanout, files);
    } catch (const CheckError& e) {
        std::cout << "COMPARE: FAIL (" << e.what() << ")\n";
        return kExitCheckFailed;
    }
    std::cout << "H=" << args.relay_count << " r=" << args.fanout
              << " N=" << files << " K1=" << report.users_per_relay
              << " K2=" << report.users_per_relay2
              << " equality threshold g>=" << report.equality_threshold << "\n";
    std::cout << "g,M_symmetric,M_symmetric_dec,M_asymmetric,M_asymmetric_dec,"
                 "R1_symmetric,R1_asymmetric,equal\n";
    for (const auto& row : report.rows) {
        Rat r1_sym = analysis::load_at(files, args.relay_count, args.fanout,
                                       row.gain, row.m_symmetric);
        Rat r1_asym = analysis::load_at(files, args.relay_count, args.fanout,
                                        row.gain, row.m_asymmetric);
        std::cout << row.gain << ',' << to_fraction_string(row.m_symmetric) << ','
                  << to_decimal_string(row.m_symmetric) << ','
                  << to_fraction_string(row.m_asymmetric) << ','
                  << to_decimal_string(row.m_asymmetric) << ','
                  << to_fraction_string(r1_sym) << ','
                  << to_fraction_string(r1_asym) << ','
                  << (row.equal ? "yes" : "no") << "\n";
    }
    std::cout << "COMPARE: PASS (asymmetric memory never above symmetric; "
                 "equality exactly from g="
              << report.equality_threshold << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coded caching over two-hop combination networks: exact "
                 "tradeoff analysis and bit-exact delivery simulation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read option defaults from a config file");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand(
        "simulate", "place, deliver, decode and measure one configuration");
    simulate->configurable();
    simulate->add_option("-H,--relays", sim.relay_count, "relay count H")
        ->required();
    simulate->add_option("-r,--fanout", sim.fanout, "relays per user r")
        ->required();
    simulate->add_option("-N,--files", sim.file_count,
                         "file count N (default: K)");
    simulate->add_option("-B,--block-size", sim.block_request,
                         "requested file size in bytes; rounded up to the "
                         "smallest exact size");
    simulate->add_option("-s,--scheme", sim.scheme,
                         "routing | symmetric | asymmetric (alias: baseline)");
    simulate->add_option("-g,--gain", sim.gain, "coded caching gain g");
    simulate->add_option("-m,--cache-fraction", sim.cache_fraction,
                         "routing cache fraction M/N, e.g. 1/3");
    simulate->add_option("-d,--demand", sim.demand,
                         "'worst-case' or a comma list of file ids");
    simulate->add_option("--seed", sim.seed, "library content seed");
    simulate->add_option("--transcript", sim.transcript_path,
                         "dump the link transcript to this path");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "emit the (M, R1, R2) tradeoff table as CSV");
    sweep_cmd->configurable();
    sweep_cmd->add_option("-H,--relays", sw.relay_count, "relay count H")
        ->required();
    sweep_cmd->add_option("-r,--fanout", sw.fanout, "relays per user r")
        ->required();
    sweep_cmd->add_option("-N,--files", sw.file_count, "file count N (default: K)");
    sweep_cmd->add_option("--g-min", sw.g_min, "smallest gain (default 1)");
    sweep_cmd->add_option("--g-max", sw.g_max, "largest gain (default K1)");
    sweep_cmd->add_option("--schemes", sw.schemes_csv,
                          "comma list of coded schemes to sweep");
    sweep_cmd->add_option("--grid", sw.grid,
                          "envelope sample points over M in [0, N]");
    sweep_cmd->add_option("-o,--output", sw.output, "CSV path or - for stdout");
    sweep_cmd->add_option("-j,--jobs", sw.jobs, "worker threads");

    VerifyArgs vf;
    auto* verify_cmd = app.add_subcommand(
        "verify", "run the full verification suite over an (H, r) range");
    verify_cmd->configurable();
    verify_cmd->add_option("-H,--relays", vf.h_min, "relay count H (range start)")
        ->required();
    verify_cmd->add_option("--h-max", vf.h_max, "range end (default H)");
    verify_cmd->add_option("-r,--fanout", vf.r_min, "fanout r (range start)")
        ->required();
    verify_cmd->add_option("--r-max", vf.r_max, "range end (default r)");
    verify_cmd->add_option("--seed", vf.seed, "library content seed");
    verify_cmd->add_option("-j,--jobs", vf.jobs, "worker threads");

    CompareArgs cmp;
    auto* compare_cmd = app.add_subcommand(
        "compare", "per-gain memory comparison of the two coded schemes");
    compare_cmd->configurable();
    compare_cmd->add_option("-H,--relays", cmp.relay_count, "relay count H")
        ->required();
    compare_cmd->add_option("-r,--fanout", cmp.fanout, "relays per user r")
        ->required();
    compare_cmd->add_option("-N,--files", cmp.file_count,
                            "file count N (default: K)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitBadSpec;
    }

    try {
        if (app.got_subcommand(simulate)) return cmd_simulate(sim);
        if (app.got_subcommand(sweep_cmd)) return cmd_sweep(sw);
        if (app.got_subcommand(verify_cmd)) return cmd_verify(vf);
        if (app.got_subcommand(compare_cmd)) return cmd_compare(cmp);
    } catch (const combnet::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadSpec;
    } catch (const std::exception& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitBadSpec;
}
