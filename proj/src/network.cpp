#include "resilnet/network.hpp"

#include "resilnet/errors.hpp"
#include "resilnet/rng.hpp"

#include <algorithm>
#include <set>

namespace resilnet {

std::string to_string(const NodeId& id) {
    return "(" + std::to_string(id.level) + "," + std::to_string(id.ordinal) +
           ")";
}

namespace {

std::string link_str(const SupplyLink& l) {
    return to_string(l.source) + "->" + to_string(l.target) +
           (l.status == LinkStatus::Active ? " [active]" : " [potential]");
}

bool link_less(const SupplyLink& a, const SupplyLink& b) {
    const auto key = [](const SupplyLink& l) {
        return std::tuple(l.target.level, l.target.ordinal, l.source.level,
                          l.source.ordinal, static_cast<int>(l.status));
    };
    return key(a) < key(b);
}

std::vector<std::vector<std::uint32_t>>
resolve_required(const NetworkSpec& spec) {
    const auto levels = static_cast<std::uint32_t>(spec.level_counts.size());
    std::vector<std::vector<std::uint32_t>> required(levels);
    for (std::uint32_t lvl = 2; lvl <= levels; ++lvl) {
        const auto it = spec.required_levels.find(lvl);
        if (it != spec.required_levels.end()) {
            required[lvl - 1] = it->second;
            std::sort(required[lvl - 1].begin(), required[lvl - 1].end());
        } else {
            for (std::uint32_t u = 1; u < lvl; ++u)
                required[lvl - 1].push_back(u);
        }
    }
    return required;
}

} // namespace

void validate_spec(const NetworkSpec& spec) {
    if (spec.level_counts.empty())
        throw InputError("network: at least one level is required");
    for (std::size_t i = 0; i < spec.level_counts.size(); ++i)
        if (spec.level_counts[i] < 1)
            throw InputError("network: level " + std::to_string(i + 1) +
                             " has node count 0");
    const auto levels = static_cast<std::uint32_t>(spec.level_counts.size());
    for (const auto& [lvl, req] : spec.required_levels) {
        if (lvl < 2 || lvl > levels)
            throw InputError("network.required_levels: level " +
                             std::to_string(lvl) + " out of range");
        std::set<std::uint32_t> seen;
        for (const auto u : req) {
            if (u < 1 || u >= lvl)
                throw InputError("network.required_levels." +
                                 std::to_string(lvl) + ": level " +
                                 std::to_string(u) +
                                 " is not strictly above " +
                                 std::to_string(lvl));
            if (!seen.insert(u).second)
                throw InputError("network.required_levels." +
                                 std::to_string(lvl) + ": duplicate level " +
                                 std::to_string(u));
        }
    }
    const auto& p = spec.params;
    if (!(p.p_m >= 0.0 && p.p_m <= 1.0))
        throw InputError("params.p_m: out of range [0,1]");
    if (!(p.p_s >= 0.0 && p.p_s <= 1.0))
        throw InputError("params.p_s: out of range [0,1]");
}

void Network::finalize() {
    const auto levels = static_cast<std::uint32_t>(level_counts.size());
    level_offset.assign(levels + 1, 0);
    for (std::uint32_t i = 0; i < levels; ++i)
        level_offset[i + 1] = level_offset[i] + level_counts[i];
    const std::uint32_t n = level_offset.back();

    node_level.assign(n, 0);
    for (std::uint32_t lvl = 1; lvl <= levels; ++lvl)
        for (std::uint32_t g = level_offset[lvl - 1]; g < level_offset[lvl];
             ++g)
            node_level[g] = lvl;

    slot_begin.assign(n + 1, 0);
    slot_level.clear();
    for (std::uint32_t g = 0; g < n; ++g) {
        slot_begin[g] = static_cast<std::uint32_t>(slot_level.size());
        for (const auto u : required[node_level[g] - 1])
            slot_level.push_back(u);
    }
    slot_begin[n] = static_cast<std::uint32_t>(slot_level.size());
    const auto slots = slot_begin[n];

    // canonical edge order keeps serialization byte-stable
    std::sort(links.begin(), links.end(), link_less);

    constexpr std::uint32_t unset = 0xffffffffu;
    active_source.assign(slots, unset);
    std::vector<std::vector<std::uint32_t>> pot(slots);
    for (const auto& l : links) {
        if (!contains(l.source) || !contains(l.target))
            throw InputError("link " + link_str(l) + ": unknown node");
        if (l.source.level >= l.target.level)
            throw InputError("link " + link_str(l) +
                             ": source level must be above target level");
        const std::uint32_t g = global_index(l.target);
        std::uint32_t slot = unset;
        for (std::uint32_t s = slot_begin[g]; s < slot_begin[g + 1]; ++s)
            if (slot_level[s] == l.source.level) slot = s;
        if (slot == unset)
            throw InputError("link " + link_str(l) + ": level " +
                             std::to_string(l.source.level) +
                             " is not a required supplier level of " +
                             to_string(l.target));
        if (l.status == LinkStatus::Active) {
            if (active_source[slot] != unset)
                throw InputError("link " + link_str(l) +
                                 ": second active link for this level");
            active_source[slot] = global_index(l.source);
        } else {
            pot[slot].push_back(global_index(l.source));
        }
    }
    for (std::uint32_t g = 0; g < n; ++g)
        for (std::uint32_t s = slot_begin[g]; s < slot_begin[g + 1]; ++s)
            if (active_source[s] == unset)
                throw InputError("node " + to_string(node_id(g)) +
                                 ": no active link from level " +
                                 std::to_string(slot_level[s]));

    potential_begin.assign(slots + 1, 0);
    potential_source.clear();
    for (std::uint32_t s = 0; s < slots; ++s) {
        potential_begin[s] = static_cast<std::uint32_t>(potential_source.size());
        std::sort(pot[s].begin(), pot[s].end());
        potential_source.insert(potential_source.end(), pot[s].begin(),
                                pot[s].end());
    }
    potential_begin[slots] = static_cast<std::uint32_t>(potential_source.size());
}

Network build_network(const NetworkSpec& spec, std::uint64_t topology_seed) {
    validate_spec(spec);

    Network net;
    net.level_counts = spec.level_counts;
    net.required = resolve_required(spec);
    net.params = spec.params;

    if (spec.explicit_links) {
        net.links = *spec.explicit_links;
        net.finalize();
        return net;
    }

    const auto base_key =
        rng::derive_key(topology_seed, rng::Stream::TopologyBase);
    const auto pot_key =
        rng::derive_key(topology_seed, rng::Stream::TopologyPotential);

    const auto levels = static_cast<std::uint32_t>(spec.level_counts.size());
    for (std::uint32_t lvl = 2; lvl <= levels; ++lvl) {
        for (std::uint32_t ord = 0; ord < spec.level_counts[lvl - 1]; ++ord) {
            for (const auto u : net.required[lvl - 1]) {
                const std::uint32_t upper_n = spec.level_counts[u - 1];
                const auto chosen = static_cast<std::uint32_t>(
                    rng::below(base_key, lvl, ord, u, upper_n));
                net.links.push_back({{u, chosen}, {lvl, ord}, LinkStatus::Active});
                for (std::uint32_t src = 0; src < upper_n; ++src) {
                    if (src == chosen) continue;
                    const double roll = rng::unit(
                        pot_key, (static_cast<std::uint64_t>(lvl) << 32) | ord,
                        u, src);
                    if (roll < spec.params.p_m)
                        net.links.push_back(
                            {{u, src}, {lvl, ord}, LinkStatus::Potential});
                }
            }
        }
    }
    net.finalize();
    return net;
}

std::vector<Violation> validate_network(const Network& net) {
    std::vector<Violation> out;
    const auto levels = static_cast<std::uint32_t>(net.level_counts.size());

    std::set<std::pair<NodeId, NodeId>> pairs;
    // slot -> active count / potential sources, rebuilt here from the edge
    // list so the scan works on hand-crafted networks too
    std::map<std::pair<NodeId, std::uint32_t>, std::uint32_t> active_count;

    const auto in_range = [&](const NodeId& id) {
        return id.level >= 1 && id.level <= levels &&
               id.ordinal < net.level_counts[id.level - 1];
    };
    const auto is_required = [&](std::uint32_t target_level,
                                 std::uint32_t source_level) {
        const auto& req = net.required[target_level - 1];
        return std::find(req.begin(), req.end(), source_level) != req.end();
    };

    for (const auto& l : net.links) {
        if (!in_range(l.source) || !in_range(l.target)) {
            out.push_back({link_str(l), "unknown-node",
                           "link references a node outside the network"});
            continue;
        }
        if (l.source.level >= l.target.level) {
            out.push_back({link_str(l), "direction",
                           "links must point from an upper level to a lower "
                           "level"});
            continue;
        }
        if (!pairs.insert({l.source, l.target}).second)
            out.push_back({link_str(l), "duplicate-pair",
                           "duplicate (source, target) pair"});
        if (!is_required(l.target.level, l.source.level))
            out.push_back({link_str(l), "nonrequired-level",
                           "level " + std::to_string(l.source.level) +
                               " is not a required supplier level of " +
                               to_string(l.target)});
        else if (l.status == LinkStatus::Active)
            ++active_count[{l.target, l.source.level}];
    }

    for (std::uint32_t lvl = 1; lvl <= levels; ++lvl) {
        for (std::uint32_t ord = 0; ord < net.level_counts[lvl - 1]; ++ord) {
            const NodeId id{lvl, ord};
            for (const auto u : net.required[lvl - 1]) {
                const auto it = active_count.find({id, u});
                const std::uint32_t c =
                    it == active_count.end() ? 0 : it->second;
                if (c == 0)
                    out.push_back({"node " + to_string(id), "missing-supply",
                                   "no active link from required level " +
                                       std::to_string(u)});
                else if (c > 1)
                    out.push_back({"node " + to_string(id), "multiple-active",
                                   std::to_string(c) +
                                       " active links from level " +
                                       std::to_string(u)});
            }
        }
    }
    return out;
}

} // namespace resilnet
