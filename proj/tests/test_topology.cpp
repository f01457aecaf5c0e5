#include <doctest.h>

#include <algorithm>
#include <map>

#include "combnet/errors.hpp"
#include "combnet/topology.hpp"
#include "combnet/verify.hpp"

using namespace combnet;

namespace {

NetworkTopology make(int relays, int fanout) {
    NetworkParams params;
    params.relay_count = relays;
    params.fanout = fanout;
    return build_network(params);
}

// Maximally naive oracle: walk every t-subset of [1..K] and keep those with
// a nonempty common relay set. Independent of both enumerate_z's pruning and
// the count_z closed form.
std::vector<UserSet> naive_z(const NetworkTopology& topo, int t) {
    std::vector<UserSet> out;
    for (const auto& cand : colex_subsets(topo.user_count(), t))
        if (!topo.common_relays(cand).empty()) out.push_back(cand);
    return out;
}

// Reference labeling with U1={1,2,3}, U2={1,4,5}, U3={2,4,6}, U4={3,5,6};
// colex user ids reproduce it through this permutation (theirs -> ours).
constexpr int kFig1Perm[7] = {0, 1, 2, 4, 3, 5, 6};

UserSet permuted(std::initializer_list<int> theirs) {
    UserSet ours;
    for (int v : theirs) ours.push_back(kFig1Perm[v]);
    std::sort(ours.begin(), ours.end());
    return ours;
}

}  // namespace

TEST_CASE("colex subset enumeration") {
    auto subsets = colex_subsets(4, 2);
    std::vector<std::vector<int>> expected{{1, 2}, {1, 3}, {2, 3},
                                           {1, 4}, {2, 4}, {3, 4}};
    CHECK(subsets == expected);
    CHECK(colex_subsets(3, 0) == std::vector<std::vector<int>>{{}});
    CHECK(colex_subsets(3, 4).empty());
    CHECK(colex_subsets(25, 2).size() == 300);
}

TEST_CASE("build_network H=4 r=2 matches the worked example") {
    auto topo = make(4, 2);
    CHECK(topo.user_count() == 6);
    CHECK(topo.users_per_relay() == 3);
    // Users are r-subsets in colex order.
    CHECK(topo.relays_of(1) == std::vector<int>{1, 2});
    CHECK(topo.relays_of(2) == std::vector<int>{1, 3});
    CHECK(topo.relays_of(3) == std::vector<int>{2, 3});
    CHECK(topo.relays_of(6) == std::vector<int>{3, 4});
    // The reference labeling's relay contents, mapped through the documented
    // permutation.
    CHECK(topo.users_of(1) == permuted({1, 2, 3}));
    CHECK(topo.users_of(2) == permuted({1, 4, 5}));
    CHECK(topo.users_of(3) == permuted({2, 4, 6}));
    CHECK(topo.users_of(4) == permuted({3, 5, 6}));
}

TEST_CASE("build_network degenerate and larger cases") {
    auto tiny = make(1, 1);
    CHECK(tiny.user_count() == 1);
    CHECK(tiny.users_of(1) == UserSet{1});

    auto big = make(6, 3);
    CHECK(big.user_count() == 20);
    for (int h = 1; h <= 6; ++h)
        CHECK(static_cast<int>(big.users_of(h).size()) == 10);

    CHECK_THROWS_AS(make(2, 3), SpecError);
    CHECK_THROWS_AS(make(2, 0), SpecError);
}

TEST_CASE("k_i counts") {
    CHECK(k_i(4, 2, 1) == 3);
    CHECK(k_i(4, 2, 0) == 6);
    CHECK(k_i(6, 3, 2) == 4);
    // Cross-check K_2 by enumerating common users of every relay pair.
    auto topo = make(6, 3);
    for (int h1 = 1; h1 <= 6; ++h1)
        for (int h2 = h1 + 1; h2 <= 6; ++h2)
            CHECK(BigInt(topo.common_users({h1, h2}).size()) == k_i(6, 3, 2));
    CHECK_THROWS_AS(k_i(4, 2, 3), SpecError);
}

TEST_CASE("K_i strictly decreasing for r >= 2, H > r") {
    for (auto [h, r] : std::vector<std::pair<int, int>>{{4, 2}, {6, 3}, {8, 3}}) {
        for (int i = 1; i < r; ++i) CHECK(k_i(h, r, i + 1) < k_i(h, r, i));
    }
}

TEST_CASE("common_relays") {
    auto topo = make(4, 2);
    CHECK(topo.common_relays({1, 2}) == std::vector<int>{1});
    // Singleton: the user's own relay set, size r.
    CHECK(topo.common_relays({4}) == topo.relays_of(4));
    // Disjoint pair found by enumeration: relays {1,2} vs {3,4}.
    CHECK(topo.common_relays({1, 6}).empty());
    CHECK_THROWS_AS(topo.common_relays({}), SpecError);
    CHECK_THROWS_AS(topo.common_relays({2, 1}), SpecError);
    CHECK_THROWS_AS(topo.common_relays({7}), SpecError);
}

TEST_CASE("common_users") {
    auto topo = make(4, 2);
    // The worked example has U_{2,3} = {4}; ours is the permuted id.
    CHECK(topo.common_users({2, 3}) == permuted({4}));
    for (int h = 1; h <= 4; ++h) CHECK(topo.common_users({h}) == topo.users_of(h));
    CHECK(topo.common_users({1, 2, 3}).empty());
    CHECK_THROWS_AS(topo.common_users({}), SpecError);
}

TEST_CASE("enumerate_z on the worked example") {
    auto topo = make(4, 2);
    auto z1 = topo.enumerate_z(1);
    CHECK(z1.size() == 6);
    for (int k = 1; k <= 6; ++k) CHECK(z1[k - 1] == UserSet{k});

    auto z2 = topo.enumerate_z(2);
    CHECK(z2.size() == 12);
    // All 2-subsets except the relay-disjoint pairs {1,6}, {2,5}, {3,4}.
    std::vector<UserSet> missing{{1, 6}, {2, 5}, {3, 4}};
    for (const auto& m : missing)
        CHECK(std::find(z2.begin(), z2.end(), m) == z2.end());
    CHECK(z2 == naive_z(topo, 2));

    CHECK(topo.enumerate_z(4).empty());  // t > K1 = 3
    CHECK_THROWS_AS(topo.enumerate_z(0), SpecError);
    CHECK_THROWS_AS(topo.enumerate_z(7), SpecError);
}

TEST_CASE("enumerate_z is colex ordered and respects the cap") {
    auto topo = make(5, 2);
    for (int t = 1; t <= 4; ++t) {
        auto z = topo.enumerate_z(t);
        CHECK(z == naive_z(topo, t));  // naive filter emits colex order
    }
    CHECK_THROWS_AS(topo.enumerate_z(2, 5), SpecError);  // tiny cap trips
    // Boundary: a cap equal to the result size passes, one less fails.
    auto z2 = topo.enumerate_z(2);
    CHECK(topo.enumerate_z(2, z2.size()).size() == z2.size());
    CHECK_THROWS_AS(topo.enumerate_z(2, z2.size() - 1), SpecError);
}

TEST_CASE("count_z closed form vs enumeration") {
    CHECK(count_z(4, 2, 2) == 12);
    CHECK(count_z(4, 2, 1) == 6);  // t=1: every singleton
    CHECK(count_z(6, 3, 1) == 20);
    auto topo = make(6, 3);
    CHECK(count_z(6, 3, 3) == BigInt(topo.enumerate_z(3).size()));
    for (auto [h, r] :
         std::vector<std::pair<int, int>>{{4, 2}, {5, 2}, {5, 3}, {6, 3}, {3, 3}}) {
        auto net = make(h, r);
        for (int t = 1; t <= net.user_count(); ++t)
            CHECK(count_z(h, r, t) == BigInt(naive_z(net, t).size()));
    }
}

TEST_CASE("count_z matches the definition-based counting oracle") {
    // Covers shapes the materializing oracle cannot reach cheaply, plus the
    // K=56 network whose memory comparison is analytic-only.
    for (auto [h, r] : std::vector<std::pair<int, int>>{
             {8, 2}, {7, 2}, {6, 4}, {7, 5}, {12, 1}, {9, 8}, {6, 6}, {8, 3}}) {
        auto net = make(h, r);
        auto counts = verify::count_z_all_by_enumeration(net);
        for (int t = 1; t <= net.user_count(); ++t)
            CHECK(count_z(h, r, t) == BigInt(counts[t]));
    }
}

TEST_CASE("per_user_incidence") {
    CHECK(per_user_incidence(4, 2, 2) == 4);
    CHECK(per_user_incidence(4, 2, 1) == 1);  // each user only in its singleton
    // Frozen from the enumeration below: user 1 lies in 378 of the 5-subsets.
    CHECK(per_user_incidence(6, 3, 5) == 378);

    auto topo = make(6, 3);
    auto z5 = topo.enumerate_z(5);
    for (int user : {1, 7, 20}) {
        long hits = 0;
        for (const auto& w : z5)
            if (std::find(w.begin(), w.end(), user) != w.end()) ++hits;
        CHECK(BigInt(hits) == per_user_incidence(6, 3, 5));
    }
}

TEST_CASE("per-user incidence is uniform across users") {
    for (auto [h, r] : std::vector<std::pair<int, int>>{{4, 2}, {5, 2}, {5, 3}}) {
        auto topo = make(h, r);
        for (int t = 1; t <= topo.users_per_relay(); ++t) {
            auto z = topo.enumerate_z(t);
            std::map<int, long> hits;
            for (const auto& w : z)
                for (int k : w) ++hits[k];
            for (int k = 1; k <= topo.user_count(); ++k)
                CHECK(BigInt(hits[k]) == per_user_incidence(h, r, t));
        }
    }
}

TEST_CASE("enumerate_z empty iff t > K1") {
    for (auto [h, r] : std::vector<std::pair<int, int>>{{4, 2}, {5, 2}, {6, 3}}) {
        auto topo = make(h, r);
        for (int t = 1; t <= topo.user_count(); ++t) {
            bool empty = topo.enumerate_z(t).empty();
            CHECK(empty == (t > topo.users_per_relay()));
        }
    }
}
