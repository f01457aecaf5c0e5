#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "combnet/exact.hpp"
#include "combnet/mds.hpp"
#include "combnet/topology.hpp"

namespace combnet::schemes {

enum class SchemeKind {
    Routing,     // uncoded prefix caching, demand routed over all r paths
    Symmetric,   // per-relay MDS placement, relays act as independent
                 // shared links
    Asymmetric,  // coordinated placement over the relay-shareable user sets
};

std::string scheme_name(SchemeKind kind);
SchemeKind scheme_from_name(const std::string& name);  // accepts "baseline" alias

struct SchemeConfig {
    SchemeKind kind = SchemeKind::Asymmetric;
    int gain = 0;            // g, coded schemes only; 1 <= g <= K1
    Rat cache_fraction = 0;  // M/N, routing only; 0 <= M/N <= 1
};

// Which MDS symbol of each file is cached by whom, and which relays a
// symbol's delivery runs through. Pure function of (topology, config).
struct SubfileLayout {
    long n = 0;                                 // subfiles per file
    std::vector<UserSet> owners;                // [n], index i+1 -> owner set
    std::vector<std::vector<int>> relay_scope;  // [n], relays for delivery
    long k1 = 0;  // subfiles cached per user per file
    long k2 = 0;  // subfiles decoded from delivery per user per file
    long k3 = 0;  // multicast messages per delivery
    // (scope relay, owner mask) -> 1-based subfile index; scope relay is 0
    // for schemes whose index is the owner set alone.
    std::map<std::pair<int, std::uint64_t>, long> index_by_key;

    long index_of(int scope_relay, const UserSet& owners) const;
};

SubfileLayout build_layout(const NetworkTopology& topo, const SchemeConfig& config);

struct CacheContents {
    int user = 0;
    // (file id, subfile index) -> payload bytes.
    std::map<std::pair<int, long>, std::vector<std::uint8_t>> entries;

    std::uint64_t total_bytes() const;
};

using DemandVector = std::vector<int>;  // length K, file ids in [1..N]

struct MessageTag {
    UserSet group;        // multicast user set (single user for routing)
    int piece = 1;        // 1-based position within a split message
    int piece_count = 1;  // total pieces of the message

    std::string to_string() const;
    bool operator==(const MessageTag&) const = default;
};

struct TaggedPayload {
    MessageTag tag;
    std::vector<std::uint8_t> payload;
};

struct LinkTranscript {
    // relay -> ordered messages on the server->relay link.
    std::map<int, std::vector<TaggedPayload>> server_to_relay;
    // (relay, user) -> ordered messages on that relay->user link.
    std::map<std::pair<int, int>, std::vector<TaggedPayload>> relay_to_user;
};

struct MeasuredLoads {
    Rat r1 = 0;  // max over relays of server->relay bytes / B
    Rat r2 = 0;  // max over (relay, user) links of bytes / B
};

struct PlacementInfo {
    MdsCode code;                 // the (n, k1+k2) code; rate-1 for routing
    std::uint64_t block_len = 0;  // L, bytes per subfile / routing piece
    // Server-side coded library: [file][subfile index - 1].
    std::vector<std::vector<CodedSymbolBlock>> encoded;
};

struct PlacementResult {
    SubfileLayout layout;
    std::vector<CacheContents> caches;  // [K]
    PlacementInfo info;
};

// Every subfile and every relay split stays byte-exact iff B is a multiple
// of this. pick_block_size rounds a requested size up to the next multiple.
std::uint64_t min_block_size(const NetworkTopology& topo, const SchemeConfig& config);
std::uint64_t pick_block_size(const NetworkTopology& topo, const SchemeConfig& config,
                              std::uint64_t requested);

// Cache size in files (M), exact: N*k1/(k1+k2) for coded schemes,
// N*cache_fraction for routing.
Rat cache_size_files(const NetworkTopology& topo, const SchemeConfig& config);

PlacementResult place(const NetworkTopology& topo, const SchemeConfig& config,
                      const std::vector<std::vector<std::uint8_t>>& library);

LinkTranscript deliver(const NetworkTopology& topo, const SchemeConfig& config,
                       const PlacementResult& placement, const DemandVector& demand);

// The one-user slice of a transcript, as handed to decode().
std::map<int, std::vector<TaggedPayload>> messages_for_user(
    const LinkTranscript& transcript, int user);

// Reconstructs F_{d_user} from the cache and received messages alone;
// throws CheckError if reconstruction fails (never an accepted outcome).
std::vector<std::uint8_t> decode(const NetworkTopology& topo,
                                 const SchemeConfig& config, int user,
                                 const CacheContents& cache,
                                 const std::map<int, std::vector<TaggedPayload>>& received,
                                 const DemandVector& demand);

MeasuredLoads measure_loads(const LinkTranscript& transcript, std::uint64_t file_size);

// All-distinct demands (1..K); requires N >= K.
DemandVector worst_case_demand(const NetworkTopology& topo);

// Exact per-link byte totals, for symmetry/identity checks.
struct LinkTotals {
    std::map<int, std::uint64_t> server_to_relay_bytes;
    std::map<std::pair<int, int>, std::uint64_t> relay_to_user_bytes;
    std::size_t server_record_count = 0;
    std::size_t distinct_multicast_groups = 0;
};
LinkTotals link_totals(const LinkTranscript& transcript);

// True iff every relay->user payload is byte-identical to a same-tag
// server->relay payload at that relay (relays only forward).
bool forwarding_consistent(const LinkTranscript& transcript);

// Line-delimited records with payload hashes; see docs/formats.md.
void dump_transcript(std::ostream& out, const LinkTranscript& transcript);

}  // namespace combnet::schemes
