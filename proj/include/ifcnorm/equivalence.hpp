#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ifcnorm/hashing.hpp"
#include "ifcnorm/value.hpp"

namespace ifcnorm {

// Transformations that must not change normalized output. The normalizer's
// self-check re-normalizes a transformed copy and compares bytes.

inline RawFile shuffle_rows(RawFile file, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::shuffle(file.data_rows.begin(), file.data_rows.end(), rng);
    return file;
}

// Replaces every instance ID with a fresh random one (references follow).
inline RawFile rename_ids(RawFile file, std::uint64_t seed,
                          std::unordered_map<EntityId, EntityId>* mapping_out = nullptr) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<EntityId> pick(1, (1ull << 31));
    std::unordered_map<EntityId, EntityId> remap;
    std::unordered_set<EntityId> used;
    remap.reserve(file.data_rows.size() * 2);
    for (const EntityInstance& row : file.data_rows) {
        EntityId fresh = pick(rng);
        while (!used.insert(fresh).second) fresh = pick(rng);
        remap.emplace(row.id, fresh);
    }
    for (EntityInstance& row : file.data_rows) {
        row.id = remap.at(row.id);
        detail::remap_references(row, remap);
    }
    if (mapping_out) *mapping_out = std::move(remap);
    return file;
}

// Copies a fraction of leaf rows (rows with no outgoing references) under new
// IDs and rewires roughly half of the references to each original onto its
// copy. The result carries redundant content that merging must collapse.
inline RawFile duplicate_leaf_subtrees(RawFile file, double fraction, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution flip(0.5);
    std::bernoulli_distribution chosen(fraction);

    EntityId next_id = 0;
    for (const EntityInstance& row : file.data_rows) next_id = std::max(next_id, row.id);

    std::unordered_map<EntityId, EntityId> copy_of;
    std::vector<EntityInstance> copies;
    std::vector<EntityId> refs;
    for (const EntityInstance& row : file.data_rows) {
        refs.clear();
        collect_references(row.attributes, refs);
        if (!refs.empty() || !chosen(rng)) continue;
        EntityInstance copy = row;
        copy.id = ++next_id;
        copy_of.emplace(row.id, copy.id);
        copies.push_back(std::move(copy));
    }

    struct Rewire {
        std::mt19937_64* rng;
        std::bernoulli_distribution* flip;
        const std::unordered_map<EntityId, EntityId>* copy_of;
        void walk(AttributeValue& v) const {
            if (v.kind == ValueKind::Reference) {
                auto it = copy_of->find(v.ref);
                if (it != copy_of->end() && (*flip)(*rng)) v.ref = it->second;
            } else if (v.kind == ValueKind::Aggregate || v.kind == ValueKind::Typed) {
                for (AttributeValue& item : v.items) walk(item);
            }
        }
    };
    const Rewire rewire{&rng, &flip, &copy_of};
    for (EntityInstance& row : file.data_rows)
        for (AttributeValue& attr : row.attributes) rewire.walk(attr);

    for (EntityInstance& copy : copies) file.data_rows.push_back(std::move(copy));
    return file;
}

}  // namespace ifcnorm
