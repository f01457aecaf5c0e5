#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "combnet/topology.hpp"

namespace combnet::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Options {
    std::uint64_t seed = 1;
    int max_enum_users = 30;        // counting checks run for K <= this
    int max_sim_users = 20;         // byte-level simulation for K <= this
    int random_demands = 5;         // per (scheme, g), plus the all-distinct one
    std::uint64_t block_request = 1;  // rounded up to the smallest valid B
    int jobs = 1;
};

// counts[t] = |Z_t| for t in [0..K], by direct member enumeration: depth-first
// over users, pruning a branch as soon as the running common-relay mask is
// empty. Independent of the inclusion-exclusion closed form.
std::vector<std::uint64_t> count_z_all_by_enumeration(const NetworkTopology& topo,
                                                      int jobs = 1);

// The full per-network bundle: counting identities, memory comparison, and
// byte-level simulation of all three schemes with analytic/measured
// cross-checks. Skips (with a note) whatever exceeds the caps.
std::vector<CheckResult> verify_network(int relay_count, int fanout,
                                        const Options& options);

// The code-level property suite: exhaustive any-k decode for n <= 12,
// randomized subsets for the given larger (n, k) pairs, XOR-linearity.
std::vector<CheckResult> verify_mds(std::uint64_t seed,
                                    const std::vector<std::pair<int, int>>& large_codes,
                                    int random_subsets = 100);

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace combnet::verify
