#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ifcnorm/value.hpp"

namespace ifcnorm {

// Instance graph over one data section. Nodes are stored densely in input
// order; adjacency uses dense indices. Forward edges follow attribute order
// with duplicates kept; inverse edges are sorted and unique.
struct ModelGraph {
    std::vector<EntityInstance> nodes;
    std::unordered_map<EntityId, std::uint32_t> index_of;
    std::vector<std::vector<std::uint32_t>> forward;
    std::vector<std::vector<std::uint32_t>> inverse;
    std::vector<std::uint32_t> layer;                  // 0 = leaf
    std::vector<std::vector<std::uint32_t>> layer_groups;

    std::size_t size() const { return nodes.size(); }

    std::uint32_t dense_of(EntityId id) const {
        auto it = index_of.find(id);
        if (it == index_of.end())
            throw GraphError("unknown instance #" + std::to_string(id));
        return it->second;
    }

    bool contains(EntityId id) const { return index_of.count(id) != 0; }
    const EntityInstance& node(std::uint32_t dense) const { return nodes[dense]; }
};

// Longest-path layering: layer(n) = 0 for leaves, otherwise
// 1 + max(layer of referenced nodes). Requires valid adjacency; reports a
// reference cycle (with its ID sequence) if one exists.
inline void compute_layers(ModelGraph& g) {
    const std::size_t n = g.nodes.size();
    g.layer.assign(n, 0);
    // pending counts *distinct* children so duplicate forward edges to the
    // same node retire together (inverse adjacency is unique).
    std::vector<std::uint32_t> pending(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::uint32_t parent : g.inverse[i]) ++pending[parent];

    std::vector<std::uint32_t> ready;
    ready.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (pending[i] == 0) ready.push_back(static_cast<std::uint32_t>(i));

    std::size_t processed = 0;
    std::size_t cursor = 0;
    std::uint32_t max_layer = 0;
    while (cursor < ready.size()) {
        std::uint32_t node = ready[cursor++];
        ++processed;
        if (g.layer[node] > max_layer) max_layer = g.layer[node];
        for (std::uint32_t parent : g.inverse[node]) {
            if (g.layer[node] + 1 > g.layer[parent]) g.layer[parent] = g.layer[node] + 1;
            if (--pending[parent] == 0) ready.push_back(parent);
        }
    }

    if (processed != n) {
        // Every unprocessed node lies on or above a cycle; walk unprocessed
        // children until a node repeats, then report the loop.
        std::vector<bool> done(n, false);
        for (std::size_t i = 0; i < ready.size(); ++i) done[ready[i]] = true;
        std::uint32_t start = 0;
        while (done[start]) ++start;
        std::vector<std::uint32_t> path;
        std::vector<std::int64_t> seen_at(n, -1);
        std::uint32_t cur = start;
        while (seen_at[cur] < 0) {
            seen_at[cur] = static_cast<std::int64_t>(path.size());
            path.push_back(cur);
            for (std::uint32_t child : g.forward[cur]) {
                if (!done[child]) {
                    cur = child;
                    break;
                }
            }
        }
        std::string msg = "reference cycle: ";
        for (std::size_t i = static_cast<std::size_t>(seen_at[cur]); i < path.size(); ++i) {
            msg += "#" + std::to_string(g.nodes[path[i]].id) + " -> ";
        }
        msg += "#" + std::to_string(g.nodes[cur].id);
        throw GraphError(msg);
    }

    g.layer_groups.assign(static_cast<std::size_t>(max_layer) + 1, {});
    for (std::size_t i = 0; i < n; ++i)
        g.layer_groups[g.layer[i]].push_back(static_cast<std::uint32_t>(i));
}

// Builds the graph for a set of rows: resolves every reference (dangling is
// an error), fills both adjacency directions and the layering.
inline ModelGraph build_graph(std::vector<EntityInstance> rows) {
    ModelGraph g;
    g.nodes = std::move(rows);
    const std::size_t n = g.nodes.size();
    g.index_of.reserve(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, inserted] = g.index_of.emplace(g.nodes[i].id, static_cast<std::uint32_t>(i));
        if (!inserted)
            throw GraphError("duplicate instance ID #" + std::to_string(g.nodes[i].id));
    }

    g.forward.assign(n, {});
    g.inverse.assign(n, {});
    std::vector<EntityId> refs;
    for (std::size_t i = 0; i < n; ++i) {
        refs.clear();
        collect_references(g.nodes[i].attributes, refs);
        g.forward[i].reserve(refs.size());
        for (EntityId id : refs) {
            auto it = g.index_of.find(id);
            if (it == g.index_of.end())
                throw GraphError("row #" + std::to_string(g.nodes[i].id) +
                                 " references missing instance #" + std::to_string(id));
            g.forward[i].push_back(it->second);
            g.inverse[it->second].push_back(static_cast<std::uint32_t>(i));
        }
    }
    for (auto& inv : g.inverse) {
        std::sort(inv.begin(), inv.end());
        inv.erase(std::unique(inv.begin(), inv.end()), inv.end());
    }

    compute_layers(g);
    return g;
}

inline ModelGraph build_graph(const RawFile& file) { return build_graph(file.data_rows); }

}  // namespace ifcnorm
