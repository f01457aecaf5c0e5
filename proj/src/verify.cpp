#include "combnet/verify.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <numeric>
#include <sstream>

#include "combnet/analysis.hpp"
#include "combnet/errors.hpp"
#include "combnet/rng.hpp"
#include "combnet/schemes.hpp"

namespace combnet::verify {

bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

std::vector<std::uint64_t> count_z_all_by_enumeration(const NetworkTopology& topo,
                                                      int jobs) {
    const int users = topo.user_count();
    std::vector<std::uint64_t> relay_masks(users + 1, 0);
    for (int k = 1; k <= users; ++k) relay_masks[k] = topo.relay_mask_of(k);

    auto subtree = [&](int top) {
        std::vector<std::uint64_t> counts(users + 1, 0);
        auto rec = [&](auto&& self, int limit, std::uint64_t mask,
                       int depth) -> void {
            for (int v = 1; v <= limit; ++v) {
                std::uint64_t m = mask & relay_masks[v];
                if (!m) continue;
                ++counts[depth + 1];
                self(self, v - 1, m, depth + 1);
            }
        };
        std::uint64_t m0 = relay_masks[top];
        if (m0) {
            ++counts[1];
            rec(rec, top - 1, m0, 1);
        }
        return counts;
    };

    std::vector<std::uint64_t> counts(users + 1, 0);
    counts[0] = 1;  // the empty set has every relay in common
    if (jobs > 1 && users > 8) {
        std::atomic<int> next{1};
        std::vector<std::future<std::vector<std::uint64_t>>> futures;
        for (int j = 0; j < jobs; ++j)
            futures.push_back(std::async(std::launch::async, [&]() {
                std::vector<std::uint64_t> local(users + 1, 0);
                // Large tops first: their subtrees dominate the work.
                for (int top = next++; top <= users; top = next++) {
                    auto part = subtree(users - top + 1);
                    for (int t = 0; t <= users; ++t) local[t] += part[t];
                }
                return local;
            }));
        for (auto& f : futures) {
            auto part = f.get();
            for (int t = 0; t <= users; ++t) counts[t] += part[t];
        }
    } else {
        for (int top = 1; top <= users; ++top) {
            auto part = subtree(top);
            for (int t = 0; t <= users; ++t) counts[t] += part[t];
        }
    }
    return counts;
}

namespace {

std::string describe(int relay_count, int fanout) {
    return "H=" + std::to_string(relay_count) + " r=" + std::to_string(fanout);
}

CheckResult counting_check(const NetworkTopology& topo, const Options& options) {
    CheckResult result{"counting " + describe(topo.relay_count(), topo.fanout()),
                       true, ""};
    const int users = topo.user_count();
    if (users > options.max_enum_users) {
        result.detail = "skipped (K above enumeration cap)";
        return result;
    }
    auto enumerated = count_z_all_by_enumeration(topo, options.jobs);
    for (int t = 1; t <= users; ++t) {
        BigInt closed = count_z(topo.relay_count(), topo.fanout(), t);
        if (closed < 0 || closed != BigInt(enumerated[t])) {
            result.pass = false;
            result.detail = "closed form |Z_" + std::to_string(t) + "|=" +
                            closed.get_str() + " vs enumerated " +
                            std::to_string(enumerated[t]);
            return result;
        }
        try {
            per_user_incidence(topo.relay_count(), topo.fanout(), t);
        } catch (const CheckError& e) {
            result.pass = false;
            result.detail = e.what();
            return result;
        }
    }
    result.detail = "t=1.." + std::to_string(users) +
                    ": closed form matches enumeration; per-user identity holds";
    return result;
}

CheckResult memory_check(int relay_count, int fanout) {
    CheckResult result{"memory-comparison " + describe(relay_count, fanout), true, ""};
    try {
        auto report = analysis::compare_memories(relay_count, fanout);
        int first_equal = 0;
        for (const auto& row : report.rows)
            if (row.gain >= 2 && row.equal) {
                first_equal = row.gain;
                break;
            }
        result.detail = "dominance and ratio chain hold; equality from g=" +
                        (first_equal ? std::to_string(first_equal) : "none") +
                        " (threshold K2+2=" +
                        std::to_string(report.equality_threshold) + ")";
    } catch (const CheckError& e) {
        result.pass = false;
        result.detail = e.what();
    }
    return result;
}

// One scheme configuration: place once, then for the all-distinct demand and
// `random_demands` random ones, check loads, symmetry, forwarding,
// message counts and bit-exact decode for every user.
std::string simulate_config(const NetworkParams& params,
                            const schemes::SchemeConfig& config,
                            const Options& options) {
    using namespace schemes;
    NetworkTopology topo = build_network(params);
    NetworkParams sized = params;
    sized.file_size = pick_block_size(topo, config, options.block_request);
    topo = build_network(sized);
    const int users = topo.user_count();
    const int files = sized.file_count;

    auto library = random_library(options.seed, files, sized.file_size);
    PlacementResult placement = place(topo, config, library);

    const Rat memory = cache_size_files(topo, config);
    Rat budget = memory * BigInt(sized.file_size);
    budget.canonicalize();
    if (budget.get_den() != 1) return "cache budget M*B is not an integer";
    for (const auto& cache : placement.caches)
        if (BigInt(cache.total_bytes()) != budget.get_num())
            return "cache budget violated for user " + std::to_string(cache.user);

    const int gain = config.kind == SchemeKind::Routing ? 1 : config.gain;
    const Rat r1_expected = analysis::load_at(files, sized.relay_count,
                                              sized.fanout, gain, memory);
    Rat r2_expected = (1 - memory / files) / sized.fanout;
    r2_expected.canonicalize();

    std::vector<DemandVector> demands{worst_case_demand(topo)};
    SplitMix64 rng(options.seed ^ 0xd1b54a32d192ed03ull);
    for (int i = 0; i < options.random_demands; ++i) {
        DemandVector d(users);
        for (auto& v : d) v = 1 + static_cast<int>(rng.next() % files);
        demands.push_back(std::move(d));
    }

    for (std::size_t di = 0; di < demands.size(); ++di) {
        const auto& demand = demands[di];
        LinkTranscript transcript = deliver(topo, config, placement, demand);
        MeasuredLoads loads = measure_loads(transcript, sized.file_size);
        auto where = [&](const std::string& what) {
            return what + " (demand " + std::to_string(di) + ")";
        };
        if (loads.r1 != r1_expected)
            return where("measured R1 " + to_fraction_string(loads.r1) +
                         " != analytic " + to_fraction_string(r1_expected));
        if (loads.r2 != r2_expected)
            return where("measured R2 " + to_fraction_string(loads.r2) +
                         " != analytic " + to_fraction_string(r2_expected));

        LinkTotals totals = link_totals(transcript);
        bool any_traffic = !totals.server_to_relay_bytes.empty();
        if (any_traffic &&
            static_cast<int>(totals.server_to_relay_bytes.size()) !=
                sized.relay_count)
            return where("not all relays carried traffic");
        for (const auto& [relay, bytes] : totals.server_to_relay_bytes)
            if (bytes != totals.server_to_relay_bytes.begin()->second)
                return where("asymmetric server->relay loads at relay " +
                             std::to_string(relay));
        if (any_traffic &&
            static_cast<int>(totals.relay_to_user_bytes.size()) !=
                users * sized.fanout)
            return where("not all user links carried traffic");
        for (const auto& [link, bytes] : totals.relay_to_user_bytes)
            if (bytes != totals.relay_to_user_bytes.begin()->second)
                return where("asymmetric relay->user loads");

        if (!forwarding_consistent(transcript))
            return where("relay forwarded bytes that the server never sent");

        long expected_messages = placement.layout.k3;
        long got = config.kind == SchemeKind::Symmetric
                       ? static_cast<long>(totals.server_record_count)
                       : static_cast<long>(totals.distinct_multicast_groups);
        if (config.kind == SchemeKind::Routing)
            got = static_cast<long>(totals.server_record_count);
        if (got != expected_messages)
            return where("message count " + std::to_string(got) + " != k3=" +
                         std::to_string(expected_messages));

        for (int k = 1; k <= users; ++k) {
            auto received = messages_for_user(transcript, k);
            std::vector<std::uint8_t> out;
            try {
                out = decode(topo, config, k, placement.caches[k - 1], received,
                             demand);
            } catch (const std::exception& e) {
                return where("user " + std::to_string(k) +
                             " decode error: " + e.what());
            }
            if (out != library[demand[k - 1] - 1])
                return where("user " + std::to_string(k) +
                             " reconstructed the wrong bytes");
        }
    }
    return "";
}

CheckResult simulation_check(int relay_count, int fanout, const Options& options) {
    using namespace schemes;
    CheckResult result{"simulation " + describe(relay_count, fanout), true, ""};
    NetworkParams params;
    params.relay_count = relay_count;
    params.fanout = fanout;
    NetworkTopology probe = build_network(params);
    const int users = probe.user_count();
    if (users > options.max_sim_users) {
        result.detail = "skipped (K above simulation cap)";
        return result;
    }
    params.file_count = users;  // worst-case demands need N >= K

    struct Task {
        SchemeConfig config;
        std::string label;
    };
    std::vector<Task> tasks;
    for (int g = 1; g <= probe.users_per_relay(); ++g) {
        tasks.push_back({{SchemeKind::Symmetric, g, 0},
                         "symmetric g=" + std::to_string(g)});
        tasks.push_back({{SchemeKind::Asymmetric, g, 0},
                         "asymmetric g=" + std::to_string(g)});
    }
    for (const char* f : {"0", "1/3", "1"})
        tasks.push_back({{SchemeKind::Routing, 0, parse_fraction(f)},
                         std::string("routing M/N=") + f});

    std::vector<std::string> errors(tasks.size());
    auto run_task = [&](std::size_t i) {
        try {
            errors[i] = simulate_config(params, tasks[i].config, options);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
        if (!errors[i].empty())
            errors[i] = tasks[i].label + ": " + errors[i];
    };
    if (options.jobs > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> futures;
        for (int j = 0; j < options.jobs; ++j)
            futures.push_back(std::async(std::launch::async, [&]() {
                for (std::size_t i = next++; i < tasks.size(); i = next++)
                    run_task(i);
            }));
        for (auto& f : futures) f.get();
    } else {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    }

    for (const auto& err : errors)
        if (!err.empty()) {
            result.pass = false;
            result.detail = err;
            return result;
        }
    result.detail = std::to_string(tasks.size()) + " configurations, " +
                    std::to_string(1 + options.random_demands) +
                    " demand vectors each: all users decode bit-exactly, "
                    "loads match the closed forms";
    return result;
}

}  // namespace

std::vector<CheckResult> verify_network(int relay_count, int fanout,
                                        const Options& options) {
    NetworkParams params;
    params.relay_count = relay_count;
    params.fanout = fanout;
    params.validate();
    NetworkTopology topo = build_network(params);

    std::vector<CheckResult> results;
    results.push_back(counting_check(topo, options));
    results.push_back(memory_check(relay_count, fanout));
    results.push_back(simulation_check(relay_count, fanout, options));
    return results;
}

namespace {

std::vector<int> random_subset(SplitMix64& rng, int n, int k) {
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 1);
    for (int i = n - 1; i > 0; --i)
        std::swap(ids[i], ids[rng.next() % (i + 1)]);
    ids.resize(k);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<std::vector<std::uint8_t>> random_message(SplitMix64& rng, int k,
                                                      std::size_t len) {
    std::vector<std::vector<std::uint8_t>> msg(k);
    for (auto& piece : msg) {
        piece.resize(len);
        for (auto& b : piece) b = static_cast<std::uint8_t>(rng.next());
    }
    return msg;
}

bool decode_subset_matches(const MdsCode& code,
                           const std::vector<CodedSymbolBlock>& blocks,
                           const std::vector<int>& subset,
                           const std::vector<std::vector<std::uint8_t>>& message) {
    std::vector<CodedSymbolBlock> picked;
    picked.reserve(subset.size());
    for (int idx : subset) picked.push_back(blocks[idx - 1]);
    return mds_decode(code, picked) == message;
}

}  // namespace

std::vector<CheckResult> verify_mds(std::uint64_t seed,
                                    const std::vector<std::pair<int, int>>& large_codes,
                                    int random_subsets) {
    std::vector<CheckResult> results;
    SplitMix64 rng(seed ^ 0x2545f4914f6cdd1dull);

    {
        CheckResult r{"gf-field-axioms", true, ""};
        const auto& f8 = gf::Field::of(8);
        for (unsigned a = 1; a < 256 && r.pass; ++a)
            if (f8.mul(a, f8.inv(a)) != 1) {
                r.pass = false;
                r.detail = "a*inv(a) != 1 in GF(256) at a=" + std::to_string(a);
            }
        for (unsigned a = 0; a < 256 && r.pass; ++a)
            for (unsigned b = 0; b < 256 && r.pass; ++b)
                for (unsigned c = 0; c < 256; ++c)
                    if (f8.mul(a, b ^ c) != (f8.mul(a, b) ^ f8.mul(a, c))) {
                        r.pass = false;
                        r.detail = "distributivity fails in GF(256)";
                        break;
                    }
        const auto& f16 = gf::Field::of(16);
        for (unsigned a = 1; a < 65536 && r.pass; ++a)
            if (f16.mul(a, f16.inv(a)) != 1) {
                r.pass = false;
                r.detail = "a*inv(a) != 1 in GF(65536) at a=" + std::to_string(a);
            }
        for (int i = 0; i < 100000 && r.pass; ++i) {
            std::uint16_t a = static_cast<std::uint16_t>(rng.next());
            std::uint16_t b = static_cast<std::uint16_t>(rng.next());
            std::uint16_t c = static_cast<std::uint16_t>(rng.next());
            if (f16.mul(a, b ^ c) != (f16.mul(a, b) ^ f16.mul(a, c))) {
                r.pass = false;
                r.detail = "distributivity fails in GF(65536)";
            }
        }
        if (r.pass) r.detail = "inverses and distributivity hold";
        results.push_back(std::move(r));
    }

    {
        CheckResult r{"mds-any-k-exhaustive", true, ""};
        long decodes = 0;
        for (int n = 1; n <= 12 && r.pass; ++n) {
            for (int k = 1; k <= n && r.pass; ++k) {
                MdsCode code = make_mds_code(n, k);
                auto message = random_message(rng, k, 3);
                auto blocks = mds_encode(code, message);
                for (int j = 0; j < k; ++j)
                    if (blocks[j].payload != message[j]) {
                        r.pass = false;
                        r.detail = "code is not systematic";
                    }
                auto subsets = colex_subsets(n, k);
                for (const auto& subset : subsets) {
                    ++decodes;
                    if (!decode_subset_matches(code, blocks, subset, message)) {
                        r.pass = false;
                        r.detail = "any-k recovery fails for (n=" +
                                   std::to_string(n) + ", k=" + std::to_string(k) +
                                   ")";
                        break;
                    }
                }
            }
        }
        if (r.pass)
            r.detail = "all (n,k) with n <= 12, " + std::to_string(decodes) +
                       " subsets decoded";
        results.push_back(std::move(r));
    }

    {
        CheckResult r{"mds-any-k-randomized", true, ""};
        for (const auto& [n, k] : large_codes) {
            MdsCode code = make_mds_code(n, k);
            auto message = random_message(rng, k, 2 * code.symbol_bytes());
            auto blocks = mds_encode(code, message);
            for (int i = 0; i < random_subsets; ++i) {
                auto subset = random_subset(rng, n, k);
                if (!decode_subset_matches(code, blocks, subset, message)) {
                    r.pass = false;
                    r.detail = "random subset decode fails for (n=" +
                               std::to_string(n) + ", k=" + std::to_string(k) + ")";
                    break;
                }
            }
            if (!r.pass) break;
        }
        if (r.pass)
            r.detail = std::to_string(large_codes.size()) + " codes x " +
                       std::to_string(random_subsets) + " random k-subsets";
        results.push_back(std::move(r));
    }

    {
        CheckResult r{"mds-xor-linearity", true, ""};
        std::vector<std::pair<int, int>> codes{{6, 5}, {12, 6}, {260, 100}};
        for (const auto& [n, k] : codes) {
            MdsCode code = make_mds_code(n, k);
            std::size_t len = 2 * code.symbol_bytes();
            auto m1 = random_message(rng, k, len);
            auto m2 = random_message(rng, k, len);
            auto m3 = m1;
            for (int j = 0; j < k; ++j)
                for (std::size_t i = 0; i < len; ++i) m3[j][i] ^= m2[j][i];
            auto b1 = mds_encode(code, m1);
            auto b2 = mds_encode(code, m2);
            auto b3 = mds_encode(code, m3);
            for (int idx = 0; idx < n && r.pass; ++idx)
                for (std::size_t i = 0; i < len; ++i)
                    if (b3[idx].payload[i] !=
                        (b1[idx].payload[i] ^ b2[idx].payload[i])) {
                        r.pass = false;
                        r.detail = "encode(m1^m2) != encode(m1)^encode(m2) at (n=" +
                                   std::to_string(n) + ", k=" + std::to_string(k) +
                                   ")";
                        break;
                    }
            if (!r.pass) break;
        }
        if (r.pass) r.detail = "encoding commutes with XOR";
        results.push_back(std::move(r));
    }

    return results;
}

}  // namespace combnet::verify
