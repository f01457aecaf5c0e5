#pragma once

#include <cstdint>
#include <vector>

#include "combnet/exact.hpp"

namespace combnet {

// Users are identified by 1..K, relays by 1..H. A user set is kept sorted
// strictly ascending.
using UserSet = std::vector<int>;

struct NetworkParams {
    int relay_count = 0;        // H
    int fanout = 0;             // r: relays per user
    int file_count = 1;         // N
    std::uint64_t file_size = 0;  // B, bytes

    void validate() const;      // throws SpecError
    BigInt user_count() const;  // K = C(H, r)
};

// The (H, r) combination network: user k is the k-th r-subset of [1..H] in
// colex order. Immutable after construction; all queries are read-only.
class NetworkTopology {
  public:
    static constexpr int kMaxRelays = 64;
    static constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

    const NetworkParams& params() const { return params_; }
    int relay_count() const { return params_.relay_count; }
    int fanout() const { return params_.fanout; }
    int user_count() const { return user_count_; }
    int users_per_relay() const { return users_per_relay_; }  // K1

    // H_k, sorted ascending.
    const std::vector<int>& relays_of(int user) const;
    // U_h, sorted ascending.
    const std::vector<int>& users_of(int relay) const;

    std::uint64_t relay_mask_of(int user) const;
    // Only available when K <= 64.
    std::uint64_t user_mask_of(int relay) const;

    // R_W: relays connected to every user in `users`. May be empty.
    std::vector<int> common_relays(const UserSet& users) const;

    // U_Y: users connected to every relay in `relays`. May be empty.
    UserSet common_users(const std::vector<int>& relays) const;

    // Z_t: all t-subsets of users with at least one common relay, in colex
    // order. Materialized; fails loudly past `cap` results.
    std::vector<UserSet> enumerate_z(int t,
                                     std::size_t cap = kDefaultEnumerationCap) const;

  private:
    friend NetworkTopology build_network(const NetworkParams&);

    NetworkParams params_;
    int user_count_ = 0;
    int users_per_relay_ = 0;
    std::vector<std::vector<int>> user_relays_;   // [K] H_k
    std::vector<std::vector<int>> relay_users_;   // [H] U_h
    std::vector<std::uint64_t> user_relay_mask_;  // [K]
    std::vector<std::uint64_t> relay_user_mask_;  // [H], valid when K <= 64
};

NetworkTopology build_network(const NetworkParams& params);

// K_i = C(H-i, r-i): the number of users simultaneously connected to i given
// relays. K_0 = K, K_1 = users per relay.
BigInt k_i(int relay_count, int fanout, int i);

// |Z_t| by inclusion-exclusion over the relays, exact integers:
// sum_{n=1..r} C(H,n) C(K_n, t) (-1)^(n-1). Requires t >= 1.
BigInt count_z(int relay_count, int fanout, int t);

// t|Z_t|/K = sum_{n=1..r} C(r,n) C(K_n - 1, t-1) (-1)^(n-1): the number of
// Z_t members containing any fixed user. Computes both sides and throws
// CheckError if they disagree (internal identity check).
BigInt per_user_incidence(int relay_count, int fanout, int t);

// Colex order helpers (shared with schemes' subfile indexing).
// All t-subsets of {1..m} in colex order; t = 0 yields the empty set.
std::vector<std::vector<int>> colex_subsets(int m, int t);
// All t-subsets of `base` (sorted ascending) in colex order.
std::vector<std::vector<int>> colex_subsets_of(const std::vector<int>& base, int t);

std::uint64_t set_to_mask(const std::vector<int>& ids);
std::vector<int> mask_to_set(std::uint64_t mask);

}  // namespace combnet
