#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>

#include "ifcnorm/real_text.hpp"
#include "ifcnorm/value.hpp"

namespace ifcnorm {

namespace detail {

// Recursive-descent reader for ISO 10303-21 exchange structures:
//
//   ISO-10303-21; HEADER; <3 records> ENDSEC; DATA; <rows> ENDSEC; END-ISO-10303-21;
//
// Whitespace and /* */ comments separate tokens and are discarded. Header
// record arguments are captured verbatim; data rows are parsed into values.
class Part21Parser {
public:
    explicit Part21Parser(std::string_view text) : text_(text) {}

    RawFile parse() {
        RawFile out;
        expect_literal("ISO-10303-21", "file must start with ISO-10303-21;");
        expect_semicolon();

        expect_literal("HEADER", "expected HEADER section");
        expect_semicolon();
        static constexpr const char* header_order[3] = {"FILE_DESCRIPTION", "FILE_NAME",
                                                        "FILE_SCHEMA"};
        for (const char* expected : header_order) {
            skip_separators();
            std::size_t at = pos_;
            std::string keyword = scan_keyword("header record keyword");
            if (keyword != expected)
                fail("HEADER must contain exactly FILE_DESCRIPTION, FILE_NAME, "
                     "FILE_SCHEMA in that order; found " + keyword, at);
            skip_separators();
            expect_char('(', "expected ( after " + keyword);
            std::string raw = scan_raw_record_arguments();
            expect_semicolon();
            out.header_records.push_back({std::move(keyword), std::move(raw)});
        }
        out.schema_name = extract_schema_name(out.header_records[2]);
        expect_literal("ENDSEC", "HEADER must contain exactly FILE_DESCRIPTION, "
                                 "FILE_NAME, FILE_SCHEMA and then ENDSEC");
        expect_semicolon();

        skip_separators();
        {
            std::size_t at = pos_;
            std::string keyword = scan_keyword("section keyword");
            if (keyword != "DATA")
                fail("missing DATA section (found " + keyword + ")", at);
        }
        expect_semicolon();

        std::unordered_set<EntityId> seen_ids;
        for (;;) {
            skip_separators();
            if (peek() == '#') {
                out.data_rows.push_back(parse_row(seen_ids));
                continue;
            }
            std::size_t at = pos_;
            std::string keyword = scan_keyword("data row or ENDSEC");
            if (keyword != "ENDSEC") fail("expected data row or ENDSEC, found " + keyword, at);
            expect_semicolon();
            break;
        }

        skip_separators();
        {
            std::size_t at = pos_;
            std::string keyword = scan_keyword("END-ISO-10303-21");
            if (keyword == "DATA") fail("multiple DATA sections are not supported", at);
            if (keyword != "END-ISO-10303-21")
                fail("expected END-ISO-10303-21;, found " + keyword, at);
        }
        expect_semicolon();
        skip_separators();
        if (!eof()) fail_here("trailing content after END-ISO-10303-21;");
        return out;
    }

private:
    // ---- diagnostics ----

    [[noreturn]] void fail(const std::string& message, std::size_t at) const {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(message, line, column);
    }

    [[noreturn]] void fail_here(const std::string& message) const { fail(message, pos_); }

    // ---- low-level scanning ----

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char peek2() const { return pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0'; }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_letter(char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
    }
    static char upper(char c) { return c >= 'a' && c <= 'z' ? static_cast<char>(c - 32) : c; }

    void skip_separators() {
        for (;;) {
            while (!eof() && is_space(text_[pos_])) ++pos_;
            if (peek() == '/' && peek2() == '*') {
                std::size_t start = pos_;
                std::size_t end = text_.find("*/", pos_ + 2);
                if (end == std::string_view::npos) fail("unterminated comment", start);
                pos_ = end + 2;
                continue;
            }
            return;
        }
    }

    void expect_char(char c, const std::string& message) {
        if (peek() != c) fail_here(message);
        ++pos_;
    }

    void expect_semicolon() {
        skip_separators();
        expect_char(';', "expected ;");
    }

    void expect_literal(std::string_view literal, const std::string& message) {
        skip_separators();
        std::size_t at = pos_;
        if (text_.substr(pos_, literal.size()) != literal) fail(message, at);
        pos_ += literal.size();
    }

    // Keywords: letters, digits, '_' and '-' (for END-ISO-10303-21), folded
    // to uppercase. First character must be a letter.
    std::string scan_keyword(const std::string& what) {
        skip_separators();
        std::size_t at = pos_;
        if (!is_letter(peek())) {
            if (peek() == '!')
                fail("user-defined entity types are not supported", at);
            fail("expected " + what, at);
        }
        std::string out;
        while (!eof()) {
            char c = text_[pos_];
            if (is_letter(c) || is_digit(c) || c == '_' || c == '-') {
                out += upper(c);
                ++pos_;
            } else {
                break;
            }
        }
        return out;
    }

    std::uint64_t scan_entity_id() {
        std::size_t at = pos_;
        expect_char('#', "expected #");
        if (!is_digit(peek())) {
            if (peek() == '@')
                fail("external instance references are not supported", at);
            fail("expected instance number after #", at);
        }
        std::uint64_t value = 0;
        while (is_digit(peek())) {
            const auto digit = static_cast<std::uint64_t>(text_[pos_] - '0');
            if (value > UINT64_MAX / 10 || (value == UINT64_MAX / 10 && digit > UINT64_MAX % 10))
                fail("instance ID out of range", at);
            value = value * 10 + digit;
            ++pos_;
        }
        return value;
    }

    // Raw text of a text literal, starting at the opening quote; the doubled
    // quote escape stays verbatim in the returned payload.
    std::string scan_text_payload() {
        std::size_t open = pos_;
        ++pos_;  // opening '
        std::size_t start = pos_;
        for (;;) {
            std::size_t q = text_.find('\'', pos_);
            if (q == std::string_view::npos) fail("unterminated string", open);
            if (q + 1 < text_.size() && text_[q + 1] == '\'') {
                pos_ = q + 2;  // escaped quote, keep scanning
                continue;
            }
            pos_ = q + 1;
            return std::string(text_.substr(start, q - start));
        }
    }

    std::string scan_binary_payload() {
        std::size_t open = pos_;
        ++pos_;  // opening "
        std::size_t start = pos_;
        while (!eof() && text_[pos_] != '"') {
            char c = text_[pos_];
            bool hex = is_digit(c) || (c >= 'A' && c <= 'F') || (c >= 'a' && c <= 'f');
            if (!hex) fail("invalid character in binary literal", pos_);
            ++pos_;
        }
        if (eof()) fail("unterminated binary literal", open);
        std::string out(text_.substr(start, pos_ - start));
        ++pos_;  // closing "
        return out;
    }

    // ---- values ----

    static constexpr int max_nesting_depth = 64;

    AttributeValue parse_value(int depth) {
        if (depth > max_nesting_depth) fail_here("attribute nesting too deep");
        skip_separators();
        char c = peek();
        switch (c) {
            case '$':
                ++pos_;
                return AttributeValue::null_value();
            case '*':
                ++pos_;
                return AttributeValue::derived();
            case '#': {
                std::size_t at = pos_;
                EntityId id = scan_entity_id();
                if (id == 0) fail("reference to instance #0 (IDs start at 1)", at);
                return AttributeValue::reference(id);
            }
            case '\'':
                return AttributeValue::str(scan_text_payload());
            case '"':
                return AttributeValue::binary(scan_binary_payload());
            case '.': {
                std::size_t at = pos_;
                ++pos_;
                if (!is_letter(peek()) && peek() != '_')
                    fail("malformed enumeration value", at);
                std::string name;
                while (!eof()) {
                    char e = text_[pos_];
                    if (is_letter(e) || is_digit(e) || e == '_') {
                        name += upper(e);
                        ++pos_;
                    } else {
                        break;
                    }
                }
                if (peek() != '.') fail("malformed enumeration value", at);
                ++pos_;
                return AttributeValue::enumeration(std::move(name));
            }
            case '@':
                fail_here("external instance references are not supported");
            case '(': {
                ++pos_;
                std::vector<AttributeValue> members;
                skip_separators();
                if (peek() == ')') {
                    ++pos_;
                    return AttributeValue::aggregate(std::move(members));
                }
                for (;;) {
                    members.push_back(parse_value(depth + 1));
                    skip_separators();
                    if (peek() == ',') {
                        ++pos_;
                        continue;
                    }
                    expect_char(')', "expected , or ) in aggregate");
                    return AttributeValue::aggregate(std::move(members));
                }
            }
            default:
                break;
        }
        if (c == '+' || c == '-' || is_digit(c)) return parse_number();
        if (is_letter(c)) {
            std::size_t at = pos_;
            std::string keyword = scan_keyword("typed value keyword");
            if (keyword.find('-') != std::string::npos)
                fail("malformed keyword " + keyword, at);
            skip_separators();
            expect_char('(', "expected ( after keyword " + keyword);
            AttributeValue inner = parse_value(depth + 1);
            skip_separators();
            expect_char(')', "typed value must wrap exactly one value");
            return AttributeValue::typed(std::move(keyword), std::move(inner));
        }
        fail_here("expected attribute value");
    }

    AttributeValue parse_number() {
        std::size_t start = pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
        if (!is_digit(peek())) fail("malformed number", start);
        while (is_digit(peek())) ++pos_;
        bool real = false;
        if (peek() == '.') {
            real = true;
            ++pos_;
            while (is_digit(peek())) ++pos_;
        }
        if (peek() == 'e' || peek() == 'E') {
            real = true;
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (!is_digit(peek())) fail("malformed real exponent", start);
            while (is_digit(peek())) ++pos_;
        }
        std::string_view token = text_.substr(start, pos_ - start);
        if (!real) return AttributeValue::integer(canonical_integer_text(token));
        double value = 0.0;
        if (parse_real_token(token, value) != RealParseStatus::ok)
            fail("real literal out of range", start);
        return AttributeValue::real(value);
    }

    // ---- rows ----

    EntityInstance parse_row(std::unordered_set<EntityId>& seen_ids) {
        std::size_t at = pos_;
        EntityId id = scan_entity_id();
        if (id == 0) fail("instance ID must be >= 1", at);
        if (!seen_ids.insert(id).second)
            fail("duplicate instance ID #" + std::to_string(id), at);
        skip_separators();
        expect_char('=', "expected = after instance ID");
        skip_separators();
        if (peek() == '(')
            fail_here("complex (multi-keyword) instances are not supported");
        std::size_t kw_at = pos_;
        std::string type_name = scan_keyword("entity type name");
        if (type_name.find('-') != std::string::npos || type_name.front() == '_')
            fail("malformed entity type name " + type_name, kw_at);
        skip_separators();
        expect_char('(', "expected ( after entity type name");
        std::vector<AttributeValue> attributes;
        skip_separators();
        if (peek() == ')') {
            ++pos_;
        } else {
            for (;;) {
                attributes.push_back(parse_value(0));
                skip_separators();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                expect_char(')', "expected , or ) in attribute list");
                break;
            }
        }
        expect_semicolon();
        EntityInstance row;
        row.id = id;
        row.type_name = std::move(type_name);
        row.attributes = std::move(attributes);
        return row;
    }

    // ---- header records ----

    // Captures everything between the already-consumed '(' and its matching
    // ')' byte-for-byte. Strings, binaries and comments are skipped as opaque
    // spans so their parentheses do not count.
    std::string scan_raw_record_arguments() {
        std::size_t open = pos_ - 1;
        std::size_t start = pos_;
        int depth = 1;
        while (!eof()) {
            char c = text_[pos_];
            if (c == '\'') {
                std::size_t q = pos_ + 1;
                for (;;) {
                    q = text_.find('\'', q);
                    if (q == std::string_view::npos) fail("unterminated string", pos_);
                    if (q + 1 < text_.size() && text_[q + 1] == '\'') {
                        q += 2;
                        continue;
                    }
                    break;
                }
                pos_ = q + 1;
                continue;
            }
            if (c == '"') {
                std::size_t q = text_.find('"', pos_ + 1);
                if (q == std::string_view::npos) fail("unterminated binary literal", pos_);
                pos_ = q + 1;
                continue;
            }
            if (c == '/' && peek2() == '*') {
                std::size_t end = text_.find("*/", pos_ + 2);
                if (end == std::string_view::npos) fail("unterminated comment", pos_);
                pos_ = end + 2;
                continue;
            }
            if (c == '(') ++depth;
            if (c == ')') {
                --depth;
                if (depth == 0) {
                    std::string out(text_.substr(start, pos_ - start));
                    ++pos_;
                    return out;
                }
            }
            ++pos_;
        }
        fail("unterminated header record", open);
    }

    std::string extract_schema_name(const HeaderRecord& file_schema) {
        const std::string& raw = file_schema.raw_argument_text;
        std::size_t q = raw.find('\'');
        if (q == std::string::npos) fail_here("FILE_SCHEMA carries no schema name");
        std::size_t end = q + 1;
        for (;;) {
            end = raw.find('\'', end);
            if (end == std::string::npos) fail_here("FILE_SCHEMA carries no schema name");
            if (end + 1 < raw.size() && raw[end + 1] == '\'') {
                end += 2;
                continue;
            }
            break;
        }
        return raw.substr(q + 1, end - q - 1);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// Parses a complete exchange file. Throws ParseError with 1-based line and
// column on any syntax or structure problem. A leading UTF-8 BOM is ignored.
inline RawFile parse_file(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    return detail::Part21Parser(text).parse();
}

}  // namespace ifcnorm
