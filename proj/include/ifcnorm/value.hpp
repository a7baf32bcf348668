#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ifcnorm {

using EntityId = std::uint64_t;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Syntax or structural problem in the input text. Carries 1-based position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// Referential problem in the instance graph (dangling reference, cycle, ...).
class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The configured ID space cannot hold the model.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File system / stream failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Attribute values
// ---------------------------------------------------------------------------

enum class ValueKind : std::uint8_t {
    Null,         // $
    Derived,      // *
    Integer,      // canonical decimal digits in `text`
    Real,         // binary64 in `number`
    Text,         // raw payload (escape sequences kept verbatim) in `text`
    Enumeration,  // bare name (no dots) in `text`
    Binary,       // raw hex payload in `text`
    Reference,    // target instance ID in `ref`
    Aggregate,    // members in `items`
    Typed,        // wrapper keyword in `text`, single member in `items`
};

// One STEP attribute value. A small tagged struct instead of std::variant:
// the recursive aggregate case stays readable and the representation compact.
struct AttributeValue {
    ValueKind kind = ValueKind::Null;
    std::string text;
    double number = 0.0;
    EntityId ref = 0;
    std::vector<AttributeValue> items;

    static AttributeValue null_value() { return {}; }

    static AttributeValue derived() {
        AttributeValue v;
        v.kind = ValueKind::Derived;
        return v;
    }

    static AttributeValue integer(std::string canonical_digits) {
        AttributeValue v;
        v.kind = ValueKind::Integer;
        v.text = std::move(canonical_digits);
        return v;
    }

    static AttributeValue integer(long long n) { return integer(std::to_string(n)); }

    static AttributeValue real(double x) {
        AttributeValue v;
        v.kind = ValueKind::Real;
        v.number = x;
        return v;
    }

    static AttributeValue str(std::string raw) {
        AttributeValue v;
        v.kind = ValueKind::Text;
        v.text = std::move(raw);
        return v;
    }

    static AttributeValue enumeration(std::string name) {
        AttributeValue v;
        v.kind = ValueKind::Enumeration;
        v.text = std::move(name);
        return v;
    }

    static AttributeValue binary(std::string raw_hex) {
        AttributeValue v;
        v.kind = ValueKind::Binary;
        v.text = std::move(raw_hex);
        return v;
    }

    static AttributeValue reference(EntityId id) {
        AttributeValue v;
        v.kind = ValueKind::Reference;
        v.ref = id;
        return v;
    }

    static AttributeValue aggregate(std::vector<AttributeValue> members) {
        AttributeValue v;
        v.kind = ValueKind::Aggregate;
        v.items = std::move(members);
        return v;
    }

    static AttributeValue typed(std::string keyword, AttributeValue inner) {
        AttributeValue v;
        v.kind = ValueKind::Typed;
        v.text = std::move(keyword);
        v.items.push_back(std::move(inner));
        return v;
    }

    // Structural equality; reals compare bit-exact so -0. and 0. stay distinct.
    friend bool operator==(const AttributeValue& a, const AttributeValue& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case ValueKind::Null:
            case ValueKind::Derived:
                return true;
            case ValueKind::Integer:
            case ValueKind::Text:
            case ValueKind::Enumeration:
            case ValueKind::Binary:
                return a.text == b.text;
            case ValueKind::Real:
                return std::bit_cast<std::uint64_t>(a.number) ==
                       std::bit_cast<std::uint64_t>(b.number);
            case ValueKind::Reference:
                return a.ref == b.ref;
            case ValueKind::Aggregate:
                return a.items == b.items;
            case ValueKind::Typed:
                return a.text == b.text && a.items == b.items;
        }
        return false;
    }
};

// One data-section row: #id=TYPE(attributes);
struct EntityInstance {
    EntityId id = 0;
    std::string type_name;
    std::vector<AttributeValue> attributes;

    friend bool operator==(const EntityInstance&, const EntityInstance&) = default;
};

// One header record, argument text kept verbatim between its parentheses.
struct HeaderRecord {
    std::string keyword;
    std::string raw_argument_text;

    friend bool operator==(const HeaderRecord&, const HeaderRecord&) = default;
};

struct RawFile {
    std::vector<HeaderRecord> header_records;
    std::vector<EntityInstance> data_rows;
    std::string schema_name;
};

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

// Minimal decimal form of an optionally signed digit token: no '+', no
// leading zeros, "-0" collapses to "0".
inline std::string canonical_integer_text(std::string_view token) {
    bool negative = false;
    std::size_t i = 0;
    if (i < token.size() && (token[i] == '+' || token[i] == '-')) {
        negative = token[i] == '-';
        ++i;
    }
    while (i + 1 < token.size() && token[i] == '0') ++i;
    std::string_view digits = token.substr(i);
    if (digits.empty()) digits = "0";
    if (digits == "0") negative = false;
    std::string out;
    out.reserve(digits.size() + 1);
    if (negative) out += '-';
    out += digits;
    return out;
}

// Appends every referenced ID in attribute order, duplicates kept.
inline void collect_references(const std::vector<AttributeValue>& attrs,
                               std::vector<EntityId>& out);

inline void collect_references(const AttributeValue& v, std::vector<EntityId>& out) {
    switch (v.kind) {
        case ValueKind::Reference:
            out.push_back(v.ref);
            break;
        case ValueKind::Aggregate:
        case ValueKind::Typed:
            collect_references(v.items, out);
            break;
        default:
            break;
    }
}

inline void collect_references(const std::vector<AttributeValue>& attrs,
                               std::vector<EntityId>& out) {
    for (const AttributeValue& v : attrs) collect_references(v, out);
}

inline std::vector<EntityId> collect_references(const EntityInstance& row) {
    std::vector<EntityId> out;
    collect_references(row.attributes, out);
    return out;
}

}  // namespace ifcnorm
