#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ifcnorm/djb.hpp"
#include "ifcnorm/graph.hpp"
#include "ifcnorm/hashing.hpp"
#include "ifcnorm/parallel.hpp"

namespace ifcnorm {

enum class SpaceScaling : std::uint8_t { linear, power_of_two };

// Numbering layout: the 32-bit ID range splits into prefix spaces of
// `capacity` consecutive IDs each. A node's ID is space_code * capacity +
// suffix, both chosen from content hashes, so IDs survive edits elsewhere in
// the file. power_of_two scaling keeps a type's space count stable while its
// node count stays within a factor-of-two corridor.
struct IdConfig {
    std::uint64_t capacity = 65536;  // suffixes per space
    double spare_rate = 2.0;         // provisioned slots per node, > 1
    SpaceScaling scaling = SpaceScaling::power_of_two;

    std::uint64_t prefix_bound() const { return (1ull << 32) / capacity; }

    void validate() const {
        if (capacity < 2 || capacity > (1ull << 31))
            throw std::invalid_argument("capacity must be in [2, 2^31]");
        if (!(spare_rate > 1.0))
            throw std::invalid_argument("spare rate must exceed 1");
    }
};

// Spaces provisioned for n nodes of one type.
inline std::uint64_t space_count_for(std::uint64_t n, const IdConfig& cfg) {
    if (n == 0) return 0;
    const double need = cfg.spare_rate * static_cast<double>(n) /
                        static_cast<double>(cfg.capacity);
    auto m = static_cast<std::uint64_t>(std::ceil(need));
    if (m < 1) m = 1;
    if (cfg.scaling == SpaceScaling::power_of_two) m = std::bit_ceil(m);
    return m;
}

// Chance that some space of a type overflows, under a balls-into-bins normal
// approximation: z = (m*V - n) / sqrt((m-1)*n), P = Phi(-z).
inline double overflow_probability(std::uint64_t n, std::uint64_t m, std::uint64_t v) {
    if (n == 0) return 0.0;
    if (m <= 1) return n <= v ? 0.0 : 1.0;
    const double z = (static_cast<double>(m) * static_cast<double>(v) -
                      static_cast<double>(n)) /
                     std::sqrt(static_cast<double>(m - 1) * static_cast<double>(n));
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

struct TypePlan {
    std::string type_name;
    std::uint64_t node_count = 0;
    std::vector<std::uint64_t> space_codes;  // prefix code of each space
};

struct PrefixSpacePlan {
    std::uint64_t capacity = 0;
    std::vector<TypePlan> types;  // sorted by type name
    std::unordered_map<std::string, std::size_t> type_index;
};

// Reserves prefix codes for every (type, space) pair. Candidate codes come
// from hashing the space's name; collisions linear-probe upward. Probing
// order is the byte-wise sort of all space names, so the outcome depends
// only on the census, never on file order.
inline PrefixSpacePlan plan_spaces(const std::map<std::string, std::uint64_t>& census,
                                   const IdConfig& cfg) {
    cfg.validate();
    const std::uint64_t bound = cfg.prefix_bound();

    PrefixSpacePlan plan;
    plan.capacity = cfg.capacity;
    std::uint64_t total_spaces = 0;
    for (const auto& [type, count] : census) {  // std::map: already name-sorted
        if (count == 0) continue;
        TypePlan tp;
        tp.type_name = type;
        tp.node_count = count;
        tp.space_codes.assign(space_count_for(count, cfg), 0);
        total_spaces += tp.space_codes.size();
        plan.type_index.emplace(type, plan.types.size());
        plan.types.push_back(std::move(tp));
    }
    if (total_spaces > bound - 1)
        throw CapacityError("prefix spaces exhausted: need " + std::to_string(total_spaces) +
                            ", have " + std::to_string(bound - 1) +
                            " (raise capacity or lower spare rate)");

    struct Named {
        std::string name;
        std::size_t type;
        std::size_t space;
    };
    std::vector<Named> names;
    names.reserve(total_spaces);
    for (std::size_t t = 0; t < plan.types.size(); ++t)
        for (std::size_t s = 0; s < plan.types[t].space_codes.size(); ++s)
            names.push_back({plan.types[t].type_name + "_" + std::to_string(s), t, s});
    std::sort(names.begin(), names.end(),
              [](const Named& a, const Named& b) { return a.name < b.name; });

    std::unordered_set<std::uint64_t> taken;
    taken.reserve(total_spaces * 2);
    for (const Named& nm : names) {
        std::uint64_t code = djb_hash(nm.name) % bound;
        while (code == 0 || taken.count(code)) code = (code + 1) % bound;
        taken.insert(code);
        plan.types[nm.type].space_codes[nm.space] = code;
    }
    return plan;
}

struct IdAssignment {
    std::vector<EntityId> new_id;  // indexed by dense node index
    std::size_t spilled = 0;       // nodes placed outside their home space
};

namespace detail {

struct SpaceState {
    std::vector<std::uint32_t> members;  // dense indices dispatched here
    std::unordered_set<std::uint64_t> used;
    std::uint64_t code = 0;
};

// First free suffix at or cyclically after hash_code % capacity, or -1 when
// the space is full.
inline std::int64_t probe_suffix(const SpaceState& space, std::uint32_t hash_code,
                                 std::uint64_t capacity) {
    if (space.used.size() >= capacity) return -1;
    std::uint64_t s = hash_code % capacity;
    while (space.used.count(s)) s = (s + 1) % capacity;
    return static_cast<std::int64_t>(s);
}

}  // namespace detail

// Places every node: dispatch to a home space by hash code, suffix by open
// probing in hash-code order, spill to the type's following spaces when a
// space fills. Requires all digests distinct (merge first).
inline IdAssignment assign_ids(const ModelGraph& g, const std::vector<NodeDigest>& digests,
                               const PrefixSpacePlan& plan, const IdConfig& cfg,
                               unsigned threads = 0) {
    cfg.validate();
    const std::uint64_t v = cfg.capacity;
    IdAssignment out;
    out.new_id.assign(g.size(), 0);

    // group states per type, dispatch members
    std::vector<std::vector<detail::SpaceState>> spaces(plan.types.size());
    for (std::size_t t = 0; t < plan.types.size(); ++t) {
        spaces[t].resize(plan.types[t].space_codes.size());
        for (std::size_t s = 0; s < spaces[t].size(); ++s)
            spaces[t][s].code = plan.types[t].space_codes[s];
    }
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        auto it = plan.type_index.find(g.nodes[i].type_name);
        if (it == plan.type_index.end())
            throw GraphError("no space planned for type " + g.nodes[i].type_name);
        auto& group = spaces[it->second];
        group[digests[i].hash_code % group.size()].members.push_back(i);
    }

    const auto order_key = [&](std::uint32_t a, std::uint32_t b) {
        if (digests[a].hash_code != digests[b].hash_code)
            return digests[a].hash_code < digests[b].hash_code;
        return digests[a].hash_string < digests[b].hash_string;
    };

    // primary pass: spaces are independent
    std::vector<detail::SpaceState*> flat;
    for (auto& group : spaces)
        for (auto& sp : group) flat.push_back(&sp);
    std::vector<std::vector<std::uint32_t>> spill_per_space(flat.size());
    parallel_for(flat.size(), resolve_thread_count(threads), [&](std::size_t k) {
        detail::SpaceState& sp = *flat[k];
        std::sort(sp.members.begin(), sp.members.end(), order_key);
        for (std::size_t j = 1; j < sp.members.size(); ++j)
            if (digests[sp.members[j]].hash_string == digests[sp.members[j - 1]].hash_string)
                throw GraphError("duplicate digests while numbering (merge must run first)");
        sp.used.reserve(sp.members.size() * 2);
        for (std::uint32_t dense : sp.members) {
            const std::int64_t s = detail::probe_suffix(sp, digests[dense].hash_code, v);
            if (s < 0) {
                spill_per_space[k].push_back(dense);
                continue;
            }
            sp.used.insert(static_cast<std::uint64_t>(s));
            out.new_id[dense] = sp.code * v + static_cast<std::uint64_t>(s);
        }
    });

    // spill epilogue: per type, hash-code order, into the following spaces
    for (std::size_t t = 0, base = 0; t < plan.types.size(); base += spaces[t].size(), ++t) {
        auto& group = spaces[t];
        std::vector<std::uint32_t> spilled;
        for (std::size_t s = 0; s < group.size(); ++s)
            for (std::uint32_t dense : spill_per_space[base + s]) spilled.push_back(dense);
        if (spilled.empty()) continue;
        std::sort(spilled.begin(), spilled.end(), order_key);
        for (std::uint32_t dense : spilled) {
            const std::uint64_t origin = digests[dense].hash_code % group.size();
            bool placed = false;
            for (std::size_t step = 1; step <= group.size() && !placed; ++step) {
                detail::SpaceState& sp = group[(origin + step) % group.size()];
                const std::int64_t s = detail::probe_suffix(sp, digests[dense].hash_code, v);
                if (s < 0) continue;
                sp.used.insert(static_cast<std::uint64_t>(s));
                out.new_id[dense] = sp.code * v + static_cast<std::uint64_t>(s);
                placed = true;
            }
            if (!placed)
                throw CapacityError("all spaces of type " + plan.types[t].type_name +
                                    " are full");
            ++out.spilled;
        }
    }
    return out;
}

// Applies a numbering: rewrites IDs and references, returns rows sorted by
// their new IDs. `new_id` is indexed like `rows`.
inline std::vector<EntityInstance> renumber(std::vector<EntityInstance> rows,
                                            const std::vector<EntityId>& new_id) {
    std::unordered_map<EntityId, EntityId> remap;
    remap.reserve(rows.size() * 2);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!remap.emplace(rows[i].id, new_id[i]).second)
            throw GraphError("duplicate instance ID #" + std::to_string(rows[i].id));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].id = new_id[i];
        detail::remap_references(rows[i], remap);
    }
    std::sort(rows.begin(), rows.end(),
              [](const EntityInstance& a, const EntityInstance& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].id == rows[i - 1].id)
            throw GraphError("numbering produced duplicate ID #" + std::to_string(rows[i].id));
    return rows;
}

}  // namespace ifcnorm
