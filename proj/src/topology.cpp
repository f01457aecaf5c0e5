#include "combnet/topology.hpp"

#include <algorithm>
#include <string>

#include "combnet/errors.hpp"

namespace combnet {

void NetworkParams::validate() const {
    if (fanout < 1) throw SpecError("fanout r must be >= 1");
    if (relay_count < fanout)
        throw SpecError("relay count H must be >= fanout r");
    if (file_count < 1) throw SpecError("file count N must be >= 1");
}

BigInt NetworkParams::user_count() const {
    return binomial(relay_count, fanout);
}

std::uint64_t set_to_mask(const std::vector<int>& ids) {
    std::uint64_t mask = 0;
    for (int v : ids) mask |= 1ull << (v - 1);
    return mask;
}

std::vector<int> mask_to_set(std::uint64_t mask) {
    std::vector<int> out;
    while (mask) {
        int bit = __builtin_ctzll(mask);
        out.push_back(bit + 1);
        mask &= mask - 1;
    }
    return out;
}

std::vector<std::vector<int>> colex_subsets(int m, int t) {
    if (t < 0 || t > m) return {};
    if (t == 0) return {{}};
    std::vector<std::vector<int>> out;
    std::vector<int> cur(t);
    for (int i = 0; i < t; ++i) cur[i] = i + 1;
    while (true) {
        out.push_back(cur);
        // Colex successor: bump the lowest position that has room before
        // the next one, reset everything below it.
        int i = 0;
        while (i < t) {
            int limit = (i + 1 < t) ? cur[i + 1] - 1 : m;
            if (cur[i] < limit) break;
            ++i;
        }
        if (i == t) break;
        ++cur[i];
        for (int j = 0; j < i; ++j) cur[j] = j + 1;
    }
    return out;
}

std::vector<std::vector<int>> colex_subsets_of(const std::vector<int>& base,
                                               int t) {
    auto idx = colex_subsets(static_cast<int>(base.size()), t);
    std::vector<std::vector<int>> out;
    out.reserve(idx.size());
    for (const auto& pos : idx) {
        std::vector<int> s;
        s.reserve(pos.size());
        for (int p : pos) s.push_back(base[p - 1]);
        out.push_back(std::move(s));
    }
    return out;
}

NetworkTopology build_network(const NetworkParams& params) {
    params.validate();
    if (params.relay_count > NetworkTopology::kMaxRelays)
        throw SpecError("relay count H above supported limit of 64");
    BigInt k_big = params.user_count();
    if (k_big < 1) throw SpecError("network has no users");
    if (k_big > 1'000'000)
        throw SpecError("user count K=" + k_big.get_str() +
                        " above materialization limit");

    NetworkTopology topo;
    topo.params_ = params;
    topo.user_count_ = static_cast<int>(to_long(k_big));
    topo.users_per_relay_ =
        static_cast<int>(to_long(k_i(params.relay_count, params.fanout, 1)));

    topo.user_relays_ = colex_subsets(params.relay_count, params.fanout);
    topo.user_relay_mask_.reserve(topo.user_relays_.size());
    for (const auto& hs : topo.user_relays_)
        topo.user_relay_mask_.push_back(set_to_mask(hs));

    topo.relay_users_.assign(params.relay_count, {});
    for (int k = 1; k <= topo.user_count_; ++k)
        for (int h : topo.user_relays_[k - 1])
            topo.relay_users_[h - 1].push_back(k);

    if (topo.user_count_ <= 64) {
        topo.relay_user_mask_.reserve(params.relay_count);
        for (const auto& us : topo.relay_users_)
            topo.relay_user_mask_.push_back(set_to_mask(us));
    }
    return topo;
}

const std::vector<int>& NetworkTopology::relays_of(int user) const {
    if (user < 1 || user > user_count_)
        throw SpecError("user id out of range: " + std::to_string(user));
    return user_relays_[user - 1];
}

const std::vector<int>& NetworkTopology::users_of(int relay) const {
    if (relay < 1 || relay > params_.relay_count)
        throw SpecError("relay id out of range: " + std::to_string(relay));
    return relay_users_[relay - 1];
}

std::uint64_t NetworkTopology::relay_mask_of(int user) const {
    if (user < 1 || user > user_count_)
        throw SpecError("user id out of range: " + std::to_string(user));
    return user_relay_mask_[user - 1];
}

std::uint64_t NetworkTopology::user_mask_of(int relay) const {
    if (relay < 1 || relay > params_.relay_count)
        throw SpecError("relay id out of range: " + std::to_string(relay));
    if (relay_user_mask_.empty())
        throw SpecError("user masks unavailable for K > 64");
    return relay_user_mask_[relay - 1];
}

std::vector<int> NetworkTopology::common_relays(const UserSet& users) const {
    if (users.empty()) throw SpecError("common_relays: empty user set");
    std::uint64_t mask = ~0ull >> (64 - params_.relay_count);
    int prev = 0;
    for (int k : users) {
        if (k <= prev) throw SpecError("user set not strictly ascending");
        prev = k;
        mask &= relay_mask_of(k);
        if (!mask) return {};
    }
    return mask_to_set(mask);
}

UserSet NetworkTopology::common_users(const std::vector<int>& relays) const {
    if (relays.empty()) throw SpecError("common_users: empty relay set");
    int prev = 0;
    for (int h : relays) {
        if (h <= prev) throw SpecError("relay set not strictly ascending");
        prev = h;
        if (h < 1 || h > params_.relay_count)
            throw SpecError("relay id out of range: " + std::to_string(h));
    }
    UserSet out;
    std::uint64_t want = set_to_mask(relays);
    for (int k = 1; k <= user_count_; ++k)
        if ((user_relay_mask_[k - 1] & want) == want) out.push_back(k);
    return out;
}

std::vector<UserSet> NetworkTopology::enumerate_z(int t, std::size_t cap) const {
    if (t < 1 || t > user_count_)
        throw SpecError("enumerate_z: t must be in [1..K]");
    std::vector<UserSet> out;
    // Members are built largest-element-first so the running relay
    // intersection can prune dead branches; the loop nesting (outer element
    // ascending, inner subsets recursively colex) emits colex order.
    std::vector<int> chosen(t);
    std::uint64_t full = ~0ull >> (64 - params_.relay_count);
    auto rec = [&](auto&& self, int slot, int max_value,
                   std::uint64_t relay_mask) -> void {
        // slot counts down: chosen[slot-1] is the next (largest remaining).
        for (int v = slot; v <= max_value; ++v) {
            std::uint64_t m = relay_mask & user_relay_mask_[v - 1];
            if (!m) continue;
            chosen[slot - 1] = v;
            if (slot == 1) {
                if (out.size() >= cap)
                    throw SpecError("enumerate_z: result cap exceeded");
                out.emplace_back(chosen);
            } else {
                self(self, slot - 1, v - 1, m);
            }
        }
    };
    rec(rec, t, user_count_, full);
    return out;
}

BigInt k_i(int relay_count, int fanout, int i) {
    if (fanout < 1 || relay_count < fanout)
        throw SpecError("k_i: need 1 <= r <= H");
    if (i < 0 || i > fanout) throw SpecError("k_i: need 0 <= i <= r");
    return binomial(relay_count - i, fanout - i);
}

BigInt count_z(int relay_count, int fanout, int t) {
    if (fanout < 1 || relay_count < fanout)
        throw SpecError("count_z: need 1 <= r <= H");
    if (t < 1) throw SpecError("count_z: t must be >= 1");
    BigInt total = 0;
    for (int n = 1; n <= fanout; ++n) {
        BigInt term = binomial(relay_count, n) *
                      binomial(to_long(k_i(relay_count, fanout, n)), t);
        if (n % 2 == 1)
            total += term;
        else
            total -= term;
    }
    return total;
}

BigInt per_user_incidence(int relay_count, int fanout, int t) {
    if (fanout < 1 || relay_count < fanout)
        throw SpecError("per_user_incidence: need 1 <= r <= H");
    if (t < 1) throw SpecError("per_user_incidence: t must be >= 1");
    BigInt rhs = 0;
    for (int n = 1; n <= fanout; ++n) {
        BigInt term = binomial(fanout, n) *
                      binomial(to_long(k_i(relay_count, fanout, n)) - 1, t - 1);
        if (n % 2 == 1)
            rhs += term;
        else
            rhs -= term;
    }
    BigInt lhs_num = BigInt(t) * count_z(relay_count, fanout, t);
    BigInt users = k_i(relay_count, fanout, 0);
    if (lhs_num % users != 0 || lhs_num / users != rhs)
        throw CheckError("per_user_incidence: identity t|Z_t| = K * sum "
                         "violated at H=" + std::to_string(relay_count) +
                         " r=" + std::to_string(fanout) +
                         " t=" + std::to_string(t));
    return rhs;
}

}  // namespace combnet
