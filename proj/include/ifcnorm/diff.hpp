#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "ifcnorm/djb.hpp"
#include "ifcnorm/hashing.hpp"
#include "ifcnorm/value.hpp"

namespace ifcnorm {

// A model reduced to the set of its node digests: enough to answer "what
// changed" without either full file.
struct HashSetManifest {
    std::string schema_name;
    std::string options_fingerprint;
    std::vector<std::string> hashes;  // sorted, distinct, 64 hex chars each
};

namespace detail {

inline std::string hex8(std::uint32_t x) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(8, '0');
    for (int i = 7; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[x & 15];
        x >>= 4;
    }
    return out;
}

inline std::string slot_list_digest(const std::vector<AttributeSlot>& slots) {
    std::vector<std::string> entries;
    entries.reserve(slots.size());
    for (const auto& [type, idx] : slots) entries.push_back(type + ":" + std::to_string(idx));
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
    std::string joined;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) joined += ',';
        joined += entries[i];
    }
    return hex8(djb_hash(joined));
}

}  // namespace detail

// Digests are only comparable between runs that hashed the same way; the
// fingerprint names the hashing configuration so a mismatch can be reported
// instead of silently diffing apples against oranges.
inline std::string options_fingerprint(const HashOptions& opts) {
    std::string out = "oh:";
    out += owner_history_mode_name(opts.owner_history_mode);
    out += ";guids:";
    out += opts.reencode_guids ? '1' : '0';
    out += ";unordered:";
    out += detail::slot_list_digest(opts.unordered_attributes);
    out += ";inverse:";
    out += detail::slot_list_digest(opts.important_inverse_edges);
    return out;
}

inline HashSetManifest export_hash_set(const std::vector<NodeDigest>& digests,
                                       std::string schema_name, const HashOptions& opts) {
    HashSetManifest m;
    m.schema_name = std::move(schema_name);
    m.options_fingerprint = options_fingerprint(opts);
    m.hashes.reserve(digests.size());
    for (const NodeDigest& d : digests) m.hashes.push_back(d.hash_string);
    std::sort(m.hashes.begin(), m.hashes.end());
    m.hashes.erase(std::unique(m.hashes.begin(), m.hashes.end()), m.hashes.end());
    return m;
}

inline std::string render_manifest(const HashSetManifest& m) {
    std::string out = "schema=";
    out += m.schema_name;
    out += "\noptions=";
    out += m.options_fingerprint;
    out += '\n';
    for (const std::string& h : m.hashes) {
        out += h;
        out += '\n';
    }
    return out;
}

inline HashSetManifest parse_manifest(std::string_view text) {
    HashSetManifest m;
    std::size_t pos = 0, line_no = 0;
    const auto next_line = [&](std::string_view& line) {
        if (pos >= text.size()) return false;
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        ++line_no;
        return true;
    };

    std::string_view line;
    if (!next_line(line) || line.substr(0, 7) != "schema=")
        throw ParseError("expected schema= line", line_no, 1);
    m.schema_name = std::string(line.substr(7));
    if (!next_line(line) || line.substr(0, 8) != "options=")
        throw ParseError("expected options= line", line_no, 1);
    m.options_fingerprint = std::string(line.substr(8));

    while (next_line(line)) {
        if (line.empty()) continue;
        if (line.size() != 64)
            throw ParseError("hash line must be 64 hex chars", line_no, 1);
        for (char c : line)
            if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')))
                throw ParseError("hash line must be lowercase hex", line_no, 1);
        if (!m.hashes.empty() && !(m.hashes.back() < std::string(line)))
            throw ParseError("hash lines must be sorted and distinct", line_no, 1);
        m.hashes.emplace_back(line);
    }
    return m;
}

struct HashSetDiff {
    std::vector<std::string> added;    // present in b only
    std::vector<std::string> removed;  // present in a only
    bool schema_mismatch = false;
    bool fingerprint_mismatch = false;

    bool identical() const { return added.empty() && removed.empty(); }
};

inline HashSetDiff diff_hash_sets(const HashSetManifest& a, const HashSetManifest& b) {
    HashSetDiff d;
    d.schema_mismatch = a.schema_name != b.schema_name;
    d.fingerprint_mismatch = a.options_fingerprint != b.options_fingerprint;
    std::set_difference(b.hashes.begin(), b.hashes.end(), a.hashes.begin(), a.hashes.end(),
                        std::back_inserter(d.added));
    std::set_difference(a.hashes.begin(), a.hashes.end(), b.hashes.begin(), b.hashes.end(),
                        std::back_inserter(d.removed));
    return d;
}

}  // namespace ifcnorm
