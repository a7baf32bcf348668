#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ifcnorm/real_text.hpp"
#include "ifcnorm/value.hpp"

namespace ifcnorm {

struct WriterOptions {
    // Replace the second FILE_NAME field (the export timestamp) with ''.
    bool strip_header_timestamp = false;
};

// Renders one attribute value in canonical form: no interior whitespace,
// reals in canonical decimal form, text/binary payloads verbatim.
inline void render_value(std::string& out, const AttributeValue& v) {
    switch (v.kind) {
        case ValueKind::Null:
            out += '$';
            return;
        case ValueKind::Derived:
            out += '*';
            return;
        case ValueKind::Integer:
            out += v.text;
            return;
        case ValueKind::Real:
            out += real_canonical_text(v.number);
            return;
        case ValueKind::Text:
            out += '\'';
            out += v.text;
            out += '\'';
            return;
        case ValueKind::Enumeration:
            out += '.';
            out += v.text;
            out += '.';
            return;
        case ValueKind::Binary:
            out += '"';
            out += v.text;
            out += '"';
            return;
        case ValueKind::Reference:
            out += '#';
            out += std::to_string(v.ref);
            return;
        case ValueKind::Aggregate: {
            out += '(';
            bool first = true;
            for (const AttributeValue& m : v.items) {
                if (!first) out += ',';
                first = false;
                render_value(out, m);
            }
            out += ')';
            return;
        }
        case ValueKind::Typed:
            out += v.text;
            out += '(';
            render_value(out, v.items.front());
            out += ')';
            return;
    }
}

// Canonical single-line form of one data row: #id=TYPE(a0,a1,...);
inline std::string canonical_row(const EntityInstance& row) {
    std::string out;
    out.reserve(32 + 16 * row.attributes.size());
    out += '#';
    out += std::to_string(row.id);
    out += '=';
    out += row.type_name;
    out += '(';
    bool first = true;
    for (const AttributeValue& a : row.attributes) {
        if (!first) out += ',';
        first = false;
        render_value(out, a);
    }
    out += ");";
    return out;
}

// Splits a raw header argument text at top-level commas; strings, binaries,
// comments and nested parentheses are opaque. Field texts stay verbatim.
inline std::vector<std::string> split_top_level_fields(std::string_view raw) {
    std::vector<std::string> fields;
    std::size_t field_start = 0;
    int depth = 0;
    std::size_t i = 0;
    while (i < raw.size()) {
        char c = raw[i];
        if (c == '\'') {
            std::size_t q = i + 1;
            for (;;) {
                q = raw.find('\'', q);
                if (q == std::string_view::npos) {
                    q = raw.size() - 1;
                    break;
                }
                if (q + 1 < raw.size() && raw[q + 1] == '\'') {
                    q += 2;
                    continue;
                }
                break;
            }
            i = q + 1;
            continue;
        }
        if (c == '"') {
            std::size_t q = raw.find('"', i + 1);
            i = q == std::string_view::npos ? raw.size() : q + 1;
            continue;
        }
        if (c == '/' && i + 1 < raw.size() && raw[i + 1] == '*') {
            std::size_t end = raw.find("*/", i + 2);
            i = end == std::string_view::npos ? raw.size() : end + 2;
            continue;
        }
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            fields.emplace_back(raw.substr(field_start, i - field_start));
            field_start = i + 1;
        }
        ++i;
    }
    fields.emplace_back(raw.substr(field_start));
    return fields;
}

namespace detail {

inline std::string header_record_text(const HeaderRecord& record, const WriterOptions& opt) {
    std::string args = record.raw_argument_text;
    if (opt.strip_header_timestamp && record.keyword == "FILE_NAME") {
        std::vector<std::string> fields = split_top_level_fields(args);
        if (fields.size() >= 2) {
            fields[1] = "''";
            args.clear();
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (i != 0) args += ',';
                args += fields[i];
            }
        }
    }
    return record.keyword + "(" + args + ");";
}

}  // namespace detail

// Serializes a complete file: canonical rows, LF separators, header records
// verbatim. Rows must arrive sorted ascending by ID with no duplicates.
inline std::string write_file(const RawFile& file, const WriterOptions& opt = {}) {
    for (std::size_t i = 1; i < file.data_rows.size(); ++i) {
        if (file.data_rows[i - 1].id == file.data_rows[i].id)
            throw std::invalid_argument("write_file: duplicate instance ID #" +
                                        std::to_string(file.data_rows[i].id));
        if (file.data_rows[i - 1].id > file.data_rows[i].id)
            throw std::invalid_argument("write_file: rows not sorted by ID");
    }

    std::string out;
    std::size_t estimate = 128;
    for (const EntityInstance& row : file.data_rows)
        estimate += 24 + 16 * row.attributes.size();
    out.reserve(estimate);

    out += "ISO-10303-21;\n";
    out += "HEADER;\n";
    for (const HeaderRecord& record : file.header_records) {
        out += detail::header_record_text(record, opt);
        out += '\n';
    }
    out += "ENDSEC;\n";
    out += "DATA;\n";
    for (const EntityInstance& row : file.data_rows) {
        out += canonical_row(row);
        out += '\n';
    }
    out += "ENDSEC;\n";
    out += "END-ISO-10303-21;\n";
    return out;
}

}  // namespace ifcnorm
