#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ifcnorm/djb.hpp"
#include "ifcnorm/graph.hpp"
#include "ifcnorm/parallel.hpp"
#include "ifcnorm/schema_tables.hpp"
#include "ifcnorm/sha256.hpp"
#include "ifcnorm/value.hpp"
#include "ifcnorm/write.hpp"

namespace ifcnorm {

inline constexpr std::string_view owner_history_type = "IFCOWNERHISTORY";

// What happens to IfcOwnerHistory rows:
//   keep        - hashed and written like any other node
//   inline_refs - rows stay in the output, but references to them are treated
//                 as opaque at hashing time, and the row's own non-reference
//                 attributes do not enter its digest; bookkeeping edits
//                 (timestamps, change flags) therefore move no other row
//   drop        - rows are deleted, along with the audit chain that only they
//                 referenced; references to them become $
enum class OwnerHistoryMode : std::uint8_t { keep, inline_refs, drop };

inline std::string_view owner_history_mode_name(OwnerHistoryMode m) {
    switch (m) {
        case OwnerHistoryMode::keep: return "keep";
        case OwnerHistoryMode::inline_refs: return "inline";
        case OwnerHistoryMode::drop: return "drop";
    }
    return "?";
}

struct NodeDigest {
    std::string hash_string;  // 64 lowercase hex chars
    std::uint32_t hash_code = 0;

    friend bool operator==(const NodeDigest&, const NodeDigest&) = default;
};

struct HashOptions {
    OwnerHistoryMode owner_history_mode = OwnerHistoryMode::keep;
    std::vector<AttributeSlot> unordered_attributes = default_unordered_attributes();
    // Inverse edges that matter for identity: (referrer type, attribute slot).
    // Styling is attached via IfcStyledItem pointing AT the geometry item, so
    // a style change must alter the digest of the item it decorates.
    std::vector<AttributeSlot> important_inverse_edges = {{"IFCSTYLEDITEM", 0}};
    bool reencode_guids = false;
};

namespace detail {

using SlotIndex = std::unordered_map<std::string, std::vector<std::uint32_t>>;

inline SlotIndex build_slot_index(const std::vector<AttributeSlot>& slots) {
    SlotIndex index;
    for (const auto& [type, idx] : slots) index[type].push_back(idx);
    for (auto& [type, list] : index) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return index;
}

inline bool slot_listed(const SlotIndex& index, const std::string& type,
                        std::uint32_t idx) {
    auto it = index.find(type);
    if (it == index.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), idx);
}

}  // namespace detail

// Digest lookup backed by a live graph.
struct GraphDigestEnv {
    const ModelGraph* graph;
    const std::vector<NodeDigest>* digests;

    const std::string& digest_of(EntityId id) const {
        const std::string& h = (*digests)[graph->dense_of(id)].hash_string;
        if (h.empty()) throw GraphError("digest not yet computed for #" + std::to_string(id));
        return h;
    }
    bool is_owner_history(EntityId id) const {
        return graph->node(graph->dense_of(id)).type_name == owner_history_type;
    }
};

// Digest lookup backed by plain maps (handy for small fixtures).
struct MapDigestEnv {
    std::unordered_map<EntityId, std::string> digest;
    std::unordered_set<EntityId> owner_history;

    const std::string& digest_of(EntityId id) const {
        auto it = digest.find(id);
        if (it == digest.end()) throw GraphError("digest not yet computed for #" + std::to_string(id));
        return it->second;
    }
    bool is_owner_history(EntityId id) const { return owner_history.count(id) != 0; }
};

namespace detail {

// Renders one value the way the digest sees it: references become the
// target's digest (or $ for opaque owner-history references), everything
// else matches the canonical file text.
template <class Env>
void render_hash_value(std::string& out, const AttributeValue& v, const Env& env,
                       bool mask_owner_refs) {
    switch (v.kind) {
        case ValueKind::Null:
            out += '$';
            break;
        case ValueKind::Derived:
            out += '*';
            break;
        case ValueKind::Integer:
            out += v.text;
            break;
        case ValueKind::Real:
            out += real_canonical_text(v.number);
            break;
        case ValueKind::Text:
            out += '\'';
            out += v.text;
            out += '\'';
            break;
        case ValueKind::Enumeration:
            out += '.';
            out += v.text;
            out += '.';
            break;
        case ValueKind::Binary:
            out += '"';
            out += v.text;
            out += '"';
            break;
        case ValueKind::Reference:
            if (mask_owner_refs && env.is_owner_history(v.ref))
                out += '$';
            else
                out += env.digest_of(v.ref);
            break;
        case ValueKind::Aggregate: {
            out += '(';
            bool first = true;
            for (const AttributeValue& item : v.items) {
                if (!first) out += ',';
                first = false;
                render_hash_value(out, item, env, mask_owner_refs);
            }
            out += ')';
            break;
        }
        case ValueKind::Typed:
            out += v.text;
            out += '(';
            render_hash_value(out, v.items.front(), env, mask_owner_refs);
            out += ')';
            break;
    }
}

}  // namespace detail

// Sorts the members of every unordered collection attribute into digest
// order, in place. The stored order afterwards is the canonical one, so the
// same rendering serves hashing and file output.
template <class Env>
void canonicalize_unordered(EntityInstance& node, const Env& env,
                            const detail::SlotIndex& unordered_index,
                            const HashOptions& opts) {
    auto it = unordered_index.find(node.type_name);
    if (it == unordered_index.end()) return;
    const bool mask = opts.owner_history_mode != OwnerHistoryMode::keep;
    for (std::uint32_t idx : it->second) {
        if (idx >= node.attributes.size()) continue;
        AttributeValue& attr = node.attributes[idx];
        if (attr.kind != ValueKind::Aggregate || attr.items.size() < 2) continue;

        std::vector<std::pair<std::string, std::size_t>> keys;
        keys.reserve(attr.items.size());
        for (std::size_t i = 0; i < attr.items.size(); ++i) {
            std::string key;
            detail::render_hash_value(key, attr.items[i], env, mask);
            // Opaque references all render as '$'; the target digest keeps
            // their relative order content-defined.
            if (attr.items[i].kind == ValueKind::Reference) {
                key += '\x01';
                key += env.digest_of(attr.items[i].ref);
            }
            keys.emplace_back(std::move(key), i);
        }
        std::sort(keys.begin(), keys.end());
        std::vector<AttributeValue> sorted;
        sorted.reserve(attr.items.size());
        for (const auto& [key, i] : keys) sorted.push_back(std::move(attr.items[i]));
        attr.items = std::move(sorted);
    }
}

// The string that is hashed for a node. The node's own ID never appears, so
// numbering cannot influence identity. Owner-history rows contribute only
// their reference attributes in inline/drop modes: who made the row is
// identity, when they saved it is not. `blank_first_attribute` hides the
// GlobalId slot so a row's identity can be taken independently of it.
template <class Env>
std::string canonical_content(const EntityInstance& node, const Env& env,
                              const HashOptions& opts, bool blank_first_attribute = false) {
    const bool mask = opts.owner_history_mode != OwnerHistoryMode::keep;
    std::string out = node.type_name;
    out += '(';
    bool first = true;
    const bool mask_own_literals = mask && node.type_name == owner_history_type;
    for (std::size_t i = 0; i < node.attributes.size(); ++i) {
        const AttributeValue& attr = node.attributes[i];
        if (!first) out += ',';
        first = false;
        if ((blank_first_attribute && i == 0) ||
            (mask_own_literals && attr.kind != ValueKind::Reference))
            out += '$';
        else
            detail::render_hash_value(out, attr, env, mask);
    }
    out += ')';
    return out;
}

// Literal rendering with references replaced by target digests; used to pick
// a merge survivor without looking at instance IDs.
template <class Env>
std::string merge_tiebreak_text(const EntityInstance& node, const Env& env) {
    std::string out = node.type_name;
    out += '(';
    bool first = true;
    for (const AttributeValue& attr : node.attributes) {
        if (!first) out += ',';
        first = false;
        detail::render_hash_value(out, attr, env, /*mask_owner_refs=*/false);
    }
    out += ')';
    return out;
}

// Layer-by-layer digest derivation. Children live in strictly lower layers,
// so every node only reads digests that are already final; nodes inside one
// layer are independent and safe to process concurrently.
inline std::vector<NodeDigest> compute_all_digests(ModelGraph& g, const HashOptions& opts,
                                                   unsigned threads = 0) {
    const detail::SlotIndex unordered_index = detail::build_slot_index(opts.unordered_attributes);
    std::vector<NodeDigest> digests(g.size());
    GraphDigestEnv env{&g, &digests};
    const unsigned tc = resolve_thread_count(threads);
    for (const auto& group : g.layer_groups) {
        parallel_for(group.size(), tc, [&](std::size_t k) {
            const std::uint32_t dense = group[k];
            EntityInstance& node = g.nodes[dense];
            canonicalize_unordered(node, env, unordered_index, opts);
            NodeDigest& d = digests[dense];
            d.hash_string = sha256_hex(canonical_content(node, env, opts));
            d.hash_code = djb_hash(d.hash_string);
        });
    }
    return digests;
}

namespace detail {

inline void rewrap_digest(NodeDigest& d, const std::string& contributor_cat) {
    std::string mixed;
    mixed.reserve(d.hash_string.size() + 5 + contributor_cat.size());
    mixed += d.hash_string;
    mixed += "|INV|";
    mixed += contributor_cat;
    d.hash_string = sha256_hex(mixed);
    d.hash_code = djb_hash(d.hash_string);
}

}  // namespace detail

// Folds the digests of nodes on the referring side of important inverse
// edges into their targets, then recomputes every ancestor. Contributor
// digests are the plain content digests (taken before any target moved), so
// the result does not depend on processing order.
inline bool augment_important_inverse(ModelGraph& g, std::vector<NodeDigest>& digests,
                                      const HashOptions& opts, unsigned threads = 0) {
    if (opts.important_inverse_edges.empty()) return false;
    const detail::SlotIndex edge_index = detail::build_slot_index(opts.important_inverse_edges);
    const detail::SlotIndex unordered_index = detail::build_slot_index(opts.unordered_attributes);

    // target dense index -> contributor digests
    std::unordered_map<std::uint32_t, std::vector<std::string>> contributors;
    std::vector<EntityId> refs;
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        const EntityInstance& node = g.nodes[i];
        auto it = edge_index.find(node.type_name);
        if (it == edge_index.end()) continue;
        for (std::uint32_t idx : it->second) {
            if (idx >= node.attributes.size()) continue;
            refs.clear();
            collect_references(node.attributes[idx], refs);
            for (EntityId target : refs)
                contributors[g.dense_of(target)].push_back(digests[i].hash_string);
        }
    }
    if (contributors.empty()) return false;

    // Concatenation of sorted distinct contributor digests, per target.
    std::unordered_map<std::uint32_t, std::string> wrap_input;
    for (auto& [dense, list] : contributors) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        std::string cat;
        for (const std::string& h : list) cat += h;
        wrap_input.emplace(dense, std::move(cat));
    }

    std::vector<char> dirty(g.size(), 0);
    for (const auto& [dense, cat] : wrap_input) {
        detail::rewrap_digest(digests[dense], cat);
        for (std::uint32_t parent : g.inverse[dense]) dirty[parent] = 1;
    }

    // Ascending layers: re-render every node whose children moved, re-wrap
    // it if it is itself a target, and push the change upward when its
    // digest actually changed.
    GraphDigestEnv env{&g, &digests};
    const unsigned tc = resolve_thread_count(threads);
    std::vector<std::uint32_t> todo;
    std::vector<char> changed(g.size(), 0);
    for (const auto& group : g.layer_groups) {
        todo.clear();
        for (std::uint32_t dense : group)
            if (dirty[dense]) todo.push_back(dense);
        if (todo.empty()) continue;
        parallel_for(todo.size(), tc, [&](std::size_t k) {
            const std::uint32_t dense = todo[k];
            EntityInstance& node = g.nodes[dense];
            canonicalize_unordered(node, env, unordered_index, opts);
            NodeDigest next;
            next.hash_string = sha256_hex(canonical_content(node, env, opts));
            auto wrap = wrap_input.find(dense);
            if (wrap != wrap_input.end()) detail::rewrap_digest(next, wrap->second);
            next.hash_code = djb_hash(next.hash_string);
            if (next.hash_string != digests[dense].hash_string) {
                digests[dense] = std::move(next);
                changed[dense] = 1;
            }
        });
        for (std::uint32_t dense : todo) {
            if (!changed[dense]) continue;
            changed[dense] = 0;
            for (std::uint32_t parent : g.inverse[dense]) dirty[parent] = 1;
        }
    }
    return true;
}

// Content digests plus inverse-edge augmentation: the identity every later
// stage (merging, numbering, manifests) works from.
inline std::vector<NodeDigest> derive_digests(ModelGraph& g, const HashOptions& opts,
                                              unsigned threads = 0) {
    std::vector<NodeDigest> digests = compute_all_digests(g, opts, threads);
    augment_important_inverse(g, digests, opts, threads);
    return digests;
}

struct MergeOutcome {
    std::size_t merged_count = 0;                  // rows removed
    std::unordered_map<EntityId, EntityId> remap;  // removed id -> surviving id
};

namespace detail {

inline void remap_references(AttributeValue& v,
                             const std::unordered_map<EntityId, EntityId>& remap) {
    if (v.kind == ValueKind::Reference) {
        auto it = remap.find(v.ref);
        if (it != remap.end()) v.ref = it->second;
    } else if (v.kind == ValueKind::Aggregate || v.kind == ValueKind::Typed) {
        for (AttributeValue& item : v.items) remap_references(item, remap);
    }
}

inline void remap_references(EntityInstance& node,
                             const std::unordered_map<EntityId, EntityId>& remap) {
    for (AttributeValue& attr : node.attributes) remap_references(attr, remap);
}

}  // namespace detail

// Collapses digest-equal rows to one. The survivor is chosen by content
// (smallest digest-resolved literal rendering, then smallest old ID), never
// by numbering alone, so files that differ only in IDs merge identically.
// Survivor digests are untouched: a merged child is digest-equal, so every
// referring row's canonical content is the same string before and after.
inline MergeOutcome merge_redundant(ModelGraph& g, std::vector<NodeDigest>& digests,
                                    const HashOptions& opts) {
    (void)opts;
    MergeOutcome out;
    std::unordered_map<std::string_view, std::vector<std::uint32_t>> groups;
    groups.reserve(g.size());
    for (std::uint32_t i = 0; i < g.size(); ++i)
        groups[digests[i].hash_string].push_back(i);
    if (groups.size() == g.size()) return out;

    GraphDigestEnv env{&g, &digests};
    for (auto& [hash, members] : groups) {
        if (members.size() < 2) continue;
        std::uint32_t survivor = members.front();
        std::string best_key = merge_tiebreak_text(g.nodes[survivor], env);
        for (std::size_t k = 1; k < members.size(); ++k) {
            std::string key = merge_tiebreak_text(g.nodes[members[k]], env);
            const EntityInstance& a = g.nodes[members[k]];
            const EntityInstance& b = g.nodes[survivor];
            if (key < best_key || (key == best_key && a.id < b.id)) {
                survivor = members[k];
                best_key = std::move(key);
            }
        }
        for (std::uint32_t m : members) {
            if (m == survivor) continue;
            out.remap.emplace(g.nodes[m].id, g.nodes[survivor].id);
            ++out.merged_count;
        }
    }
    if (out.remap.empty()) return out;

    std::vector<EntityInstance> rows;
    std::vector<NodeDigest> kept;
    rows.reserve(g.size() - out.merged_count);
    kept.reserve(g.size() - out.merged_count);
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        EntityInstance& node = g.nodes[i];
        if (out.remap.count(node.id)) continue;
        detail::remap_references(node, out.remap);
        rows.push_back(std::move(node));
        kept.push_back(std::move(digests[i]));
    }
    g = build_graph(std::move(rows));
    digests = std::move(kept);
    return out;
}

// ---------------------------------------------------------------------------
// GlobalId re-encoding
// ---------------------------------------------------------------------------

inline constexpr char guid_alphabet[] =
    "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_$";

// 128 bits -> 22 digits of 6 bits, most significant first. The leading digit
// carries only the top 2 bits, so it is always '0'..'3'.
inline std::string encode_guid_base64(const std::uint8_t bytes[16]) {
    std::uint64_t hi = 0, lo = 0;
    for (int i = 0; i < 8; ++i) hi = (hi << 8) | bytes[i];
    for (int i = 8; i < 16; ++i) lo = (lo << 8) | bytes[i];
    std::string out(22, '0');
    for (int i = 0; i < 22; ++i) {
        const int shift = 6 * (21 - i);
        std::uint64_t window;
        if (shift >= 64) {
            window = hi >> (shift - 64);
        } else {
            window = lo >> shift;
            if (shift > 58) window |= hi << (64 - shift);
        }
        out[static_cast<std::size_t>(i)] = guid_alphabet[window & 63];
    }
    return out;
}

// Rewrites the GlobalId of rooted, non-element rows to a function of the
// row's content (GlobalId slot blanked). Placed elements keep theirs: those
// identifiers are shared with the outside world. Returns rows rewritten.
//
// Walks layers bottom-up with a private digest table so that a parent's new
// GlobalId is derived from its children's already-rewritten identities;
// a second run then reproduces the same values, which is what makes
// normalization idempotent. Digests must still be re-derived afterwards -
// GlobalId is ordinary text content.
inline std::size_t reencode_guids(ModelGraph& g, const HashOptions& opts,
                                  unsigned threads = 0) {
    const auto& rooted = ifc_rooted_types();
    const auto& elements = ifc_element_types();
    const detail::SlotIndex unordered_index = detail::build_slot_index(opts.unordered_attributes);
    std::vector<NodeDigest> scratch(g.size());
    GraphDigestEnv env{&g, &scratch};
    std::vector<char> rewritten(g.size(), 0);
    const unsigned tc = resolve_thread_count(threads);
    for (const auto& group : g.layer_groups) {
        parallel_for(group.size(), tc, [&](std::size_t k) {
            const std::uint32_t dense = group[k];
            EntityInstance& node = g.nodes[dense];
            canonicalize_unordered(node, env, unordered_index, opts);
            if (!node.attributes.empty() && !elements.count(node.type_name) &&
                rooted.count(node.type_name)) {
                AttributeValue& slot = node.attributes.front();
                if (slot.kind == ValueKind::Text || slot.kind == ValueKind::Null) {
                    const auto digest = Sha256::digest(
                        canonical_content(node, env, opts, /*blank_first_attribute=*/true));
                    std::string fresh = encode_guid_base64(digest.data());
                    if (slot.kind != ValueKind::Text || slot.text != fresh) {
                        node.attributes.front() = AttributeValue::str(std::move(fresh));
                        rewritten[dense] = 1;
                    }
                }
            }
            scratch[dense].hash_string = sha256_hex(canonical_content(node, env, opts));
        });
    }
    std::size_t count = 0;
    for (char c : rewritten) count += static_cast<unsigned char>(c);
    return count;
}

// ---------------------------------------------------------------------------
// Owner-history structural handling
// ---------------------------------------------------------------------------

namespace detail {

inline void null_removed_refs(AttributeValue& v, const std::unordered_set<EntityId>& gone) {
    if (v.kind == ValueKind::Reference) {
        if (gone.count(v.ref)) v = AttributeValue::null_value();
    } else if (v.kind == ValueKind::Aggregate || v.kind == ValueKind::Typed) {
        for (AttributeValue& item : v.items) null_removed_refs(item, gone);
    }
}

}  // namespace detail

// drop mode deletes IfcOwnerHistory rows, nulls references to them, and then
// deletes every row that was only ever reachable through the deleted ones
// (the person/organization/application audit chain). Rows nothing referenced
// to begin with are roots and always stay. Returns rows removed.
inline std::size_t apply_owner_history(ModelGraph& g, OwnerHistoryMode mode) {
    if (mode != OwnerHistoryMode::drop) return 0;

    const std::uint32_t n = g.size();
    std::vector<char> removed(n, 0);
    std::vector<std::uint32_t> live_referrers(n, 0);
    for (std::uint32_t i = 0; i < n; ++i)
        live_referrers[i] = static_cast<std::uint32_t>(g.inverse[i].size());

    std::vector<std::uint32_t> worklist;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (g.nodes[i].type_name == owner_history_type) {
            removed[i] = 1;
            worklist.push_back(i);
        }
    }
    if (worklist.empty()) return 0;

    // Each removal releases its distinct children once (forward edges may
    // repeat a child; inverse adjacency is unique, so count distinct).
    std::vector<std::uint32_t> children;
    while (!worklist.empty()) {
        const std::uint32_t dense = worklist.back();
        worklist.pop_back();
        children.assign(g.forward[dense].begin(), g.forward[dense].end());
        std::sort(children.begin(), children.end());
        children.erase(std::unique(children.begin(), children.end()), children.end());
        for (std::uint32_t c : children) {
            if (removed[c]) continue;
            if (--live_referrers[c] == 0 && !g.inverse[c].empty()) {
                removed[c] = 1;
                worklist.push_back(c);
            }
        }
    }

    std::unordered_set<EntityId> removed_ids;
    std::size_t removed_count = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (removed[i]) {
            removed_ids.insert(g.nodes[i].id);
            ++removed_count;
        }
    }

    std::vector<EntityInstance> rows;
    rows.reserve(n - removed_count);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (removed[i]) continue;
        EntityInstance& node = g.nodes[i];
        for (AttributeValue& attr : node.attributes) detail::null_removed_refs(attr, removed_ids);
        rows.push_back(std::move(node));
    }
    g = build_graph(std::move(rows));
    return removed_count;
}

}  // namespace ifcnorm
