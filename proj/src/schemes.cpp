#include "combnet/schemes.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <ostream>
#include <set>
#include <tuple>

#include "combnet/errors.hpp"
#include "combnet/rng.hpp"

namespace combnet::schemes {

namespace {

struct CodedCounts {
    long n = 0;
    long k1 = 0;
    long k2 = 0;
    long k3 = 0;

    long dimension() const { return k1 + k2; }
};

CodedCounts coded_counts(const NetworkTopology& topo, const SchemeConfig& config) {
    const int relays = topo.relay_count();
    const int fanout = topo.fanout();
    const int per_relay = topo.users_per_relay();
    const int g = config.gain;
    if (g < 1 || g > per_relay)
        throw SpecError("gain g must be in [1..K1=" + std::to_string(per_relay) +
                        "], got " + std::to_string(g));
    CodedCounts c;
    if (config.kind == SchemeKind::Symmetric) {
        c.n = to_long(BigInt(relays) * binomial(per_relay, g - 1));
        c.k1 = to_long(BigInt(fanout) * binomial(per_relay - 1, g - 2));
        c.k2 = to_long(BigInt(fanout) * binomial(per_relay - 1, g - 1));
        c.k3 = to_long(BigInt(relays) * binomial(per_relay, g));
    } else {
        // per_user_incidence also asserts that (g-1)|Z_{g-1}| and g|Z_g|
        // divide by K, which this placement relies on.
        c.n = (g == 1) ? 1 : to_long(count_z(relays, fanout, g - 1));
        c.k1 = (g == 1) ? 0 : to_long(per_user_incidence(relays, fanout, g - 1));
        c.k2 = to_long(per_user_incidence(relays, fanout, g));
        c.k3 = to_long(count_z(relays, fanout, g));
    }
    return c;
}

// Reduced cache fraction a/b for routing.
std::pair<BigInt, BigInt> routing_fraction(const SchemeConfig& config) {
    Rat f = config.cache_fraction;
    f.canonicalize();
    if (f < 0 || f > 1)
        throw SpecError("routing cache fraction M/N must be in [0, 1]");
    return {f.get_num(), f.get_den()};
}

void validate_demand(const NetworkTopology& topo, const DemandVector& demand) {
    if (static_cast<int>(demand.size()) != topo.user_count())
        throw SpecError("demand vector must have length K=" +
                        std::to_string(topo.user_count()));
    for (int d : demand)
        if (d < 1 || d > topo.params().file_count)
            throw SpecError("demand file id out of range: " + std::to_string(d));
}

void xor_into(std::vector<std::uint8_t>& dst, const std::vector<std::uint8_t>& src) {
    if (dst.size() != src.size())
        throw CheckError("xor: mismatched payload lengths");
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

UserSet erase_member(const UserSet& set, int member) {
    UserSet out;
    out.reserve(set.size() - 1);
    for (int v : set)
        if (v != member) out.push_back(v);
    return out;
}

void require_sim_scale(const NetworkTopology& topo) {
    if (topo.user_count() > 64)
        throw SpecError("byte-level simulation supports K <= 64, got K=" +
                        std::to_string(topo.user_count()));
}

}  // namespace

std::string scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Routing: return "routing";
        case SchemeKind::Symmetric: return "symmetric";
        case SchemeKind::Asymmetric: return "asymmetric";
    }
    throw SpecError("unknown scheme kind");
}

SchemeKind scheme_from_name(const std::string& name) {
    if (name == "routing") return SchemeKind::Routing;
    if (name == "symmetric" || name == "baseline") return SchemeKind::Symmetric;
    if (name == "asymmetric") return SchemeKind::Asymmetric;
    throw SpecError("unknown scheme '" + name +
                    "' (expected routing|symmetric|asymmetric)");
}

long SubfileLayout::index_of(int scope_relay, const UserSet& owner_set) const {
    auto it = index_by_key.find({scope_relay, set_to_mask(owner_set)});
    if (it == index_by_key.end())
        throw CheckError("subfile lookup failed (scope relay " +
                         std::to_string(scope_relay) + ")");
    return it->second;
}

std::uint64_t CacheContents::total_bytes() const {
    std::uint64_t total = 0;
    for (const auto& [key, bytes] : entries) total += bytes.size();
    return total;
}

std::string MessageTag::to_string() const {
    std::string out = "J={";
    for (std::size_t i = 0; i < group.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(group[i]);
    }
    out += "}";
    if (piece_count > 1)
        out += "#" + std::to_string(piece) + "/" + std::to_string(piece_count);
    return out;
}

SubfileLayout build_layout(const NetworkTopology& topo, const SchemeConfig& config) {
    SubfileLayout layout;
    if (config.kind == SchemeKind::Routing) {
        auto [a_big, b_big] = routing_fraction(config);
        long a = to_long(a_big), b = to_long(b_big);
        layout.n = b;
        layout.k1 = a;
        layout.k2 = b - a;
        layout.k3 = (a < b) ? static_cast<long>(topo.user_count()) * topo.fanout() : 0;
        UserSet everyone(topo.user_count());
        for (int k = 1; k <= topo.user_count(); ++k) everyone[k - 1] = k;
        for (long i = 1; i <= b; ++i) {
            layout.owners.push_back(i <= a ? everyone : UserSet{});
            layout.relay_scope.push_back({});
        }
        return layout;
    }

    require_sim_scale(topo);
    CodedCounts counts = coded_counts(topo, config);
    layout.k1 = counts.k1;
    layout.k2 = counts.k2;
    layout.k3 = counts.k3;
    const int g = config.gain;

    if (config.kind == SchemeKind::Symmetric) {
        // Subfile index runs over (relay, owner set) pairs, relay-major,
        // owner sets colex within each relay's user set.
        long idx = 0;
        for (int h = 1; h <= topo.relay_count(); ++h) {
            for (auto& owner : colex_subsets_of(topo.users_of(h), g - 1)) {
                ++idx;
                layout.index_by_key[{h, set_to_mask(owner)}] = idx;
                layout.owners.push_back(std::move(owner));
                layout.relay_scope.push_back({h});
            }
        }
        layout.n = idx;
    } else {
        if (g == 1) {
            // Single subfile per file, cached by nobody; its multicast
            // groups route through every relay.
            std::vector<int> all_relays(topo.relay_count());
            for (int h = 1; h <= topo.relay_count(); ++h) all_relays[h - 1] = h;
            layout.owners.push_back({});
            layout.relay_scope.push_back(std::move(all_relays));
            layout.index_by_key[{0, 0}] = 1;
            layout.n = 1;
        } else {
            long idx = 0;
            for (auto& owner : topo.enumerate_z(g - 1)) {
                ++idx;
                layout.index_by_key[{0, set_to_mask(owner)}] = idx;
                layout.relay_scope.push_back(topo.common_relays(owner));
                layout.owners.push_back(std::move(owner));
            }
            layout.n = idx;
        }
    }
    if (layout.n != counts.n)
        throw CheckError("layout size disagrees with closed-form count");
    return layout;
}

Rat cache_size_files(const NetworkTopology& topo, const SchemeConfig& config) {
    if (config.kind == SchemeKind::Routing) {
        Rat m = config.cache_fraction * topo.params().file_count;
        m.canonicalize();
        return m;
    }
    CodedCounts c = coded_counts(topo, config);
    Rat m = make_rat(BigInt(topo.params().file_count) * c.k1, c.dimension());
    return m;
}

std::uint64_t min_block_size(const NetworkTopology& topo, const SchemeConfig& config) {
    BigInt lcm = lcm_upto(topo.fanout());
    if (config.kind == SchemeKind::Routing) {
        auto [a, b] = routing_fraction(config);
        (void)a;
        return to_u64(b * lcm);
    }
    CodedCounts c = coded_counts(topo, config);
    if (c.n > 65535)
        throw SpecError("subfile count n=" + std::to_string(c.n) +
                        " above the supported 65535");
    MdsCode code = make_mds_code(static_cast<int>(c.n), static_cast<int>(c.dimension()));
    return to_u64(BigInt(c.dimension()) * lcm * code.symbol_bytes());
}

std::uint64_t pick_block_size(const NetworkTopology& topo, const SchemeConfig& config,
                              std::uint64_t requested) {
    std::uint64_t q = min_block_size(topo, config);
    if (requested <= q) return q;
    return (requested + q - 1) / q * q;
}

PlacementResult place(const NetworkTopology& topo, const SchemeConfig& config,
                      const std::vector<std::vector<std::uint8_t>>& library) {
    require_sim_scale(topo);
    const int file_count = topo.params().file_count;
    const std::uint64_t file_size = topo.params().file_size;
    if (static_cast<int>(library.size()) != file_count)
        throw SpecError("library must hold exactly N=" + std::to_string(file_count) +
                        " files");
    for (const auto& f : library)
        if (f.size() != file_size)
            throw SpecError("library file size differs from B=" +
                            std::to_string(file_size));
    std::uint64_t q = min_block_size(topo, config);
    if (file_size == 0 || file_size % q != 0)
        throw SpecError("B=" + std::to_string(file_size) +
                        " is not a positive multiple of " + std::to_string(q));

    PlacementResult out;
    out.layout = build_layout(topo, config);
    out.caches.resize(topo.user_count());
    for (int k = 1; k <= topo.user_count(); ++k) out.caches[k - 1].user = k;

    if (config.kind == SchemeKind::Routing) {
        const long pieces = out.layout.n;
        const std::uint64_t piece_len = file_size / pieces;
        out.info.code = MdsCode{static_cast<int>(pieces), static_cast<int>(pieces), 8};
        out.info.block_len = piece_len;
        out.info.encoded.resize(file_count);
        for (int i = 0; i < file_count; ++i) {
            out.info.encoded[i].resize(pieces);
            for (long j = 0; j < pieces; ++j) {
                auto first = library[i].begin() + j * piece_len;
                out.info.encoded[i][j] = {static_cast<int>(j + 1),
                                          {first, first + piece_len}};
            }
        }
        const long cached = out.layout.k1;
        for (auto& cache : out.caches)
            for (int i = 1; i <= file_count; ++i)
                for (long j = 1; j <= cached; ++j)
                    cache.entries[{i, j}] = out.info.encoded[i - 1][j - 1].payload;
        return out;
    }

    const long dim = out.layout.k1 + out.layout.k2;
    out.info.code = make_mds_code(static_cast<int>(out.layout.n), static_cast<int>(dim));
    const std::uint64_t sub_len = file_size / dim;
    out.info.block_len = sub_len;
    out.info.encoded.resize(file_count);
    for (int i = 0; i < file_count; ++i) {
        std::vector<std::vector<std::uint8_t>> pieces(dim);
        for (long j = 0; j < dim; ++j) {
            auto first = library[i].begin() + j * sub_len;
            pieces[j] = {first, first + sub_len};
        }
        out.info.encoded[i] = mds_encode(out.info.code, pieces);
    }
    for (long idx = 1; idx <= out.layout.n; ++idx)
        for (int user : out.layout.owners[idx - 1])
            for (int i = 1; i <= file_count; ++i)
                out.caches[user - 1].entries[{i, idx}] =
                    out.info.encoded[i - 1][idx - 1].payload;

    // Caches are filled to exactly M*B bytes.
    const std::uint64_t expected =
        static_cast<std::uint64_t>(file_count) * out.layout.k1 * sub_len;
    for (const auto& cache : out.caches)
        if (cache.total_bytes() != expected)
            throw CheckError("cache budget violated for user " +
                             std::to_string(cache.user));
    return out;
}

LinkTranscript deliver(const NetworkTopology& topo, const SchemeConfig& config,
                       const PlacementResult& placement, const DemandVector& demand) {
    validate_demand(topo, demand);
    LinkTranscript transcript;
    const auto& encoded = placement.info.encoded;
    const std::uint64_t block_len = placement.info.block_len;

    auto push = [&](int relay, int user, const MessageTag& tag,
                    std::vector<std::uint8_t> payload) {
        transcript.relay_to_user[{relay, user}].push_back({tag, std::move(payload)});
    };

    if (config.kind == SchemeKind::Routing) {
        const long pieces = placement.layout.n;
        const long cached = placement.layout.k1;
        const std::uint64_t suffix_len = (pieces - cached) * block_len;
        if (suffix_len == 0) return transcript;
        const std::uint64_t slice = suffix_len / topo.fanout();
        for (int k = 1; k <= topo.user_count(); ++k) {
            const auto& blocks = encoded[demand[k - 1] - 1];
            std::vector<std::uint8_t> suffix;
            suffix.reserve(suffix_len);
            for (long j = cached; j < pieces; ++j)
                suffix.insert(suffix.end(), blocks[j].payload.begin(),
                              blocks[j].payload.end());
            const auto& relays = topo.relays_of(k);
            for (int p = 0; p < topo.fanout(); ++p) {
                MessageTag tag{{k}, p + 1, topo.fanout()};
                std::vector<std::uint8_t> part(suffix.begin() + p * slice,
                                               suffix.begin() + (p + 1) * slice);
                transcript.server_to_relay[relays[p]].push_back({tag, part});
                push(relays[p], k, tag, std::move(part));
            }
        }
        return transcript;
    }

    const int g = config.gain;
    if (config.kind == SchemeKind::Symmetric) {
        for (int h = 1; h <= topo.relay_count(); ++h) {
            for (const auto& group : colex_subsets_of(topo.users_of(h), g)) {
                std::vector<std::uint8_t> payload(block_len, 0);
                for (int k : group) {
                    long idx = placement.layout.index_of(h, erase_member(group, k));
                    xor_into(payload, encoded[demand[k - 1] - 1][idx - 1].payload);
                }
                MessageTag tag{group, 1, 1};
                transcript.server_to_relay[h].push_back({tag, payload});
                for (int k : group) push(h, k, tag, payload);
            }
        }
        return transcript;
    }

    // Asymmetric: one message per group in Z_g, split evenly over the
    // group's common relays (ascending).
    for (const auto& group : topo.enumerate_z(g)) {
        std::vector<std::uint8_t> payload(block_len, 0);
        for (int k : group) {
            long idx = placement.layout.index_of(0, erase_member(group, k));
            xor_into(payload, encoded[demand[k - 1] - 1][idx - 1].payload);
        }
        std::vector<int> relays = topo.common_relays(group);
        const std::uint64_t piece_len = block_len / relays.size();
        for (std::size_t p = 0; p < relays.size(); ++p) {
            MessageTag tag{group, static_cast<int>(p + 1),
                           static_cast<int>(relays.size())};
            std::vector<std::uint8_t> part(payload.begin() + p * piece_len,
                                           payload.begin() + (p + 1) * piece_len);
            transcript.server_to_relay[relays[p]].push_back({tag, part});
            for (int k : group) push(relays[p], k, tag, part);
        }
    }
    return transcript;
}

std::map<int, std::vector<TaggedPayload>> messages_for_user(
    const LinkTranscript& transcript, int user) {
    std::map<int, std::vector<TaggedPayload>> out;
    for (const auto& [link, messages] : transcript.relay_to_user)
        if (link.second == user) out[link.first] = messages;
    return out;
}

namespace {

// Reassembles split multicast messages: group mask -> pieces in order.
std::map<std::uint64_t, std::pair<MessageTag, std::vector<std::uint8_t>>>
reassemble_multicast(const std::map<int, std::vector<TaggedPayload>>& received) {
    struct Partial {
        MessageTag tag;
        std::vector<std::vector<std::uint8_t>> pieces;
        int seen = 0;
    };
    std::map<std::uint64_t, Partial> partial;
    for (const auto& [relay, messages] : received) {
        (void)relay;
        for (const auto& msg : messages) {
            std::uint64_t key = set_to_mask(msg.tag.group);
            Partial& p = partial[key];
            if (p.pieces.empty()) {
                p.tag = msg.tag;
                p.pieces.resize(msg.tag.piece_count);
            }
            if (msg.tag.piece < 1 || msg.tag.piece > msg.tag.piece_count ||
                msg.tag.piece_count != static_cast<int>(p.pieces.size()))
                throw CheckError("inconsistent piece tags for " +
                                 msg.tag.to_string());
            if (!p.pieces[msg.tag.piece - 1].empty())
                throw CheckError("duplicate piece for " + msg.tag.to_string());
            p.pieces[msg.tag.piece - 1] = msg.payload;
            ++p.seen;
        }
    }
    std::map<std::uint64_t, std::pair<MessageTag, std::vector<std::uint8_t>>> out;
    for (auto& [key, p] : partial) {
        if (p.seen != static_cast<int>(p.pieces.size()))
            throw CheckError("missing pieces for " + p.tag.to_string());
        std::vector<std::uint8_t> whole;
        for (auto& piece : p.pieces)
            whole.insert(whole.end(), piece.begin(), piece.end());
        out[key] = {p.tag, std::move(whole)};
    }
    return out;
}

const std::vector<std::uint8_t>& cached_or_throw(const CacheContents& cache,
                                                 int file, long index) {
    auto it = cache.entries.find({file, index});
    if (it == cache.entries.end())
        throw CheckError("required cached subfile missing: file " +
                         std::to_string(file) + " index " + std::to_string(index));
    return it->second;
}

}  // namespace

std::vector<std::uint8_t> decode(const NetworkTopology& topo,
                                 const SchemeConfig& config, int user,
                                 const CacheContents& cache,
                                 const std::map<int, std::vector<TaggedPayload>>& received,
                                 const DemandVector& demand) {
    validate_demand(topo, demand);
    if (user < 1 || user > topo.user_count())
        throw SpecError("user id out of range");
    const int wanted = demand[user - 1];
    SubfileLayout layout = build_layout(topo, config);

    if (config.kind == SchemeKind::Routing) {
        std::vector<std::uint8_t> file;
        for (long j = 1; j <= layout.k1; ++j) {
            const auto& piece = cached_or_throw(cache, wanted, j);
            file.insert(file.end(), piece.begin(), piece.end());
        }
        if (layout.k2 > 0) {
            auto whole = reassemble_multicast(received);
            auto it = whole.find(set_to_mask({user}));
            if (it == whole.end())
                throw CheckError("routing: no delivery received for user " +
                                 std::to_string(user));
            file.insert(file.end(), it->second.second.begin(),
                        it->second.second.end());
        }
        return file;
    }

    const long dim = layout.k1 + layout.k2;
    MdsCode code = make_mds_code(static_cast<int>(layout.n), static_cast<int>(dim));
    std::vector<CodedSymbolBlock> blocks;
    blocks.reserve(dim);
    for (const auto& [key, bytes] : cache.entries)
        if (key.first == wanted)
            blocks.push_back({static_cast<int>(key.second), bytes});

    if (config.kind == SchemeKind::Symmetric) {
        for (const auto& [relay, messages] : received) {
            for (const auto& msg : messages) {
                std::vector<std::uint8_t> payload = msg.payload;
                for (int j : msg.tag.group) {
                    if (j == user) continue;
                    long idx = layout.index_of(relay, erase_member(msg.tag.group, j));
                    xor_into(payload, cached_or_throw(cache, demand[j - 1], idx));
                }
                blocks.push_back(
                    {static_cast<int>(layout.index_of(
                         relay, erase_member(msg.tag.group, user))),
                     std::move(payload)});
            }
        }
    } else {
        for (auto& [key, entry] : reassemble_multicast(received)) {
            (void)key;
            auto& [tag, payload] = entry;
            for (int j : tag.group) {
                if (j == user) continue;
                long idx = layout.index_of(0, erase_member(tag.group, j));
                xor_into(payload, cached_or_throw(cache, demand[j - 1], idx));
            }
            blocks.push_back(
                {static_cast<int>(layout.index_of(0, erase_member(tag.group, user))),
                 std::move(payload)});
        }
    }

    if (static_cast<long>(blocks.size()) != dim)
        throw CheckError("user " + std::to_string(user) + " holds " +
                         std::to_string(blocks.size()) + " subfiles, expected " +
                         std::to_string(dim));
    std::vector<std::vector<std::uint8_t>> pieces = mds_decode(code, blocks);
    std::vector<std::uint8_t> file;
    file.reserve(topo.params().file_size);
    for (const auto& piece : pieces)
        file.insert(file.end(), piece.begin(), piece.end());
    if (file.size() != topo.params().file_size)
        throw CheckError("reconstructed file has wrong size");
    return file;
}

MeasuredLoads measure_loads(const LinkTranscript& transcript, std::uint64_t file_size) {
    if (file_size == 0) throw SpecError("measure_loads: B must be positive");
    MeasuredLoads loads;
    std::uint64_t max_relay = 0, max_link = 0;
    for (const auto& [relay, messages] : transcript.server_to_relay) {
        (void)relay;
        std::uint64_t total = 0;
        for (const auto& m : messages) total += m.payload.size();
        max_relay = std::max(max_relay, total);
    }
    for (const auto& [link, messages] : transcript.relay_to_user) {
        (void)link;
        std::uint64_t total = 0;
        for (const auto& m : messages) total += m.payload.size();
        max_link = std::max(max_link, total);
    }
    loads.r1 = make_rat(max_relay, file_size);
    loads.r2 = make_rat(max_link, file_size);
    return loads;
}

DemandVector worst_case_demand(const NetworkTopology& topo) {
    if (topo.params().file_count < topo.user_count())
        throw SpecError("worst-case (all-distinct) demands need N >= K");
    DemandVector d(topo.user_count());
    for (int k = 1; k <= topo.user_count(); ++k) d[k - 1] = k;
    return d;
}

LinkTotals link_totals(const LinkTranscript& transcript) {
    LinkTotals totals;
    std::set<UserSet> groups;
    for (const auto& [relay, messages] : transcript.server_to_relay) {
        std::uint64_t total = 0;
        for (const auto& m : messages) {
            total += m.payload.size();
            groups.insert(m.tag.group);
        }
        totals.server_to_relay_bytes[relay] = total;
        totals.server_record_count += messages.size();
    }
    for (const auto& [link, messages] : transcript.relay_to_user) {
        std::uint64_t total = 0;
        for (const auto& m : messages) total += m.payload.size();
        totals.relay_to_user_bytes[link] = total;
    }
    totals.distinct_multicast_groups = groups.size();
    return totals;
}

bool forwarding_consistent(const LinkTranscript& transcript) {
    using Key = std::tuple<UserSet, int, int>;
    std::map<int, std::map<Key, const std::vector<std::uint8_t>*>> sent;
    for (const auto& [relay, messages] : transcript.server_to_relay)
        for (const auto& m : messages)
            sent[relay][{m.tag.group, m.tag.piece, m.tag.piece_count}] = &m.payload;
    for (const auto& [link, messages] : transcript.relay_to_user) {
        auto relay_it = sent.find(link.first);
        if (relay_it == sent.end()) return false;
        for (const auto& m : messages) {
            auto it = relay_it->second.find(
                {m.tag.group, m.tag.piece, m.tag.piece_count});
            if (it == relay_it->second.end() || *it->second != m.payload)
                return false;
        }
    }
    return true;
}

namespace {

void dump_record(std::ostream& out, const char* direction, int relay, int user,
                 const TaggedPayload& msg) {
    out << "{\"dir\":\"" << direction << "\",\"relay\":" << relay;
    if (user > 0) out << ",\"user\":" << user;
    out << ",\"group\":[";
    for (std::size_t i = 0; i < msg.tag.group.size(); ++i) {
        if (i) out << ",";
        out << msg.tag.group[i];
    }
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016" PRIx64,
                  fnv1a64(msg.payload.data(), msg.payload.size()));
    out << "],\"piece\":" << msg.tag.piece << ",\"of\":" << msg.tag.piece_count
        << ",\"bytes\":" << msg.payload.size() << ",\"hash\":\"" << hash
        << "\"}\n";
}

}  // namespace

void dump_transcript(std::ostream& out, const LinkTranscript& transcript) {
    for (const auto& [relay, messages] : transcript.server_to_relay)
        for (const auto& m : messages) dump_record(out, "s2r", relay, 0, m);
    for (const auto& [link, messages] : transcript.relay_to_user)
        for (const auto& m : messages)
            dump_record(out, "r2u", link.first, link.second, m);
}

}  // namespace combnet::schemes
