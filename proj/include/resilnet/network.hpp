#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace resilnet {

// Node address: 1-based level (1 = topmost supplier layer), 0-based
// ordinal within the level.
struct NodeId {
    std::uint32_t level = 0;
    std::uint32_t ordinal = 0;

    friend bool operator==(const NodeId&, const NodeId&) = default;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

std::string to_string(const NodeId& id);

enum class LinkStatus : std::uint8_t { Active, Potential };

// Directed supply dependency: source feeds target, source.level must be
// strictly above (smaller than) target.level.
struct SupplyLink {
    NodeId source;
    NodeId target;
    LinkStatus status = LinkStatus::Active;

    friend bool operator==(const SupplyLink&, const SupplyLink&) = default;
};

struct ModelParams {
    double p_m = 0.0;      // probability of each extra potential supplier
    double p_s = 0.0;      // per-step probability a severed supply is replaced
    std::uint32_t t_r = 0; // recovery time of a damaged node, in steps
};

// Input description of a network. Level counts are ordered topmost first.
// required_levels maps a level (>= 2) to the upper levels it needs supply
// from; levels not listed require all upper levels. When explicit_links is
// set it is honored verbatim and no random wiring happens.
struct NetworkSpec {
    std::vector<std::uint32_t> level_counts;
    std::map<std::uint32_t, std::vector<std::uint32_t>> required_levels;
    ModelParams params;
    std::optional<std::vector<SupplyLink>> explicit_links;
};

struct Violation {
    std::string subject; // offending node or link
    std::string rule;    // short rule id, e.g. "direction", "missing-supply"
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

// A wired network. `links` is the authoritative edge list (kept in
// canonical order); the flattened slot/CSR views are derived by
// finalize() and are what the cascade engine walks.
//
// Slot layout: node g owns slots [slot_begin[g], slot_begin[g+1]), one
// per required upper level in ascending level order. active_source holds
// the initial active supplier per slot; potential candidates per slot
// live in potential_source[potential_begin[slot] ..
// potential_begin[slot+1]) sorted by source ordinal.
struct Network {
    std::vector<std::uint32_t> level_counts;
    std::vector<std::vector<std::uint32_t>> required; // per level index (0-based), ascending
    ModelParams params;
    std::vector<SupplyLink> links;

    // derived
    std::vector<std::uint32_t> level_offset; // size L+1, global index base per level
    std::vector<std::uint32_t> node_level;   // per global index, 1-based level
    std::vector<std::uint32_t> slot_begin;   // size n+1
    std::vector<std::uint32_t> slot_level;   // per slot, required level id
    std::vector<std::uint32_t> active_source;    // per slot, global index
    std::vector<std::uint32_t> potential_begin;  // size slots+1
    std::vector<std::uint32_t> potential_source; // global indices, ordinal-sorted

    std::uint32_t node_count() const { return level_offset.back(); }
    std::uint32_t level_count() const {
        return static_cast<std::uint32_t>(level_counts.size());
    }
    std::uint32_t global_index(const NodeId& id) const {
        return level_offset[id.level - 1] + id.ordinal;
    }
    NodeId node_id(std::uint32_t g) const {
        const std::uint32_t lvl = node_level[g];
        return {lvl, g - level_offset[lvl - 1]};
    }
    bool contains(const NodeId& id) const {
        return id.level >= 1 && id.level <= level_counts.size() &&
               id.ordinal < level_counts[id.level - 1];
    }

    // Rebuild the derived views from level_counts/required/links. Throws
    // InputError when the link list cannot be mapped onto slots (the
    // validation errors build_network reports for explicit lists).
    void finalize();
};

// Checks spec invariants (counts >= 1, contiguous levels, required sets
// reference strictly upper levels, probabilities in range). Throws
// InputError on the first problem.
void validate_spec(const NetworkSpec& spec);

// Wires a network from `spec`. Random wiring draws the active supplier
// per (node, required level) uniformly and adds each remaining upper
// node as a potential supplier with probability p_m; both use dedicated
// streams of `topology_seed`, so the active wiring is identical across
// p_m values. Deterministic given (spec, topology_seed).
Network build_network(const NetworkSpec& spec, std::uint64_t topology_seed);

// Structural invariant scan over the edge list. Violations are data, not
// failures; an empty result means the network is well formed.
std::vector<Violation> validate_network(const Network& net);

} // namespace resilnet
