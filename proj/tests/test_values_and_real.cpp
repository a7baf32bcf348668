#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "ifcnorm/real_text.hpp"
#include "ifcnorm/value.hpp"

using namespace ifcnorm;

TEST_CASE("integer text reduces to minimal decimal form") {
    CHECK(canonical_integer_text("0") == "0");
    CHECK(canonical_integer_text("-0") == "0");
    CHECK(canonical_integer_text("+7") == "7");
    CHECK(canonical_integer_text("007") == "7");
    CHECK(canonical_integer_text("-042") == "-42");
    CHECK(canonical_integer_text("12345678901234567890") == "12345678901234567890");
    CHECK(canonical_integer_text("-000") == "0");
}

TEST_CASE("real canonical text: anchored examples") {
    CHECK(real_canonical_text(10.0) == "10.");
    CHECK(real_canonical_text(1e100) == "1.E100");
    CHECK(real_canonical_text(2.5e-5) == "2.5E-5");
    CHECK(real_canonical_text(-0.0) == "-0.");
    CHECK(real_canonical_text(0.0) == "0.");
    CHECK(real_canonical_text(0.1) == "0.1");
    CHECK(real_canonical_text(-3.25) == "-3.25");
    CHECK(real_canonical_text(1e-5) == "1.E-5");
    CHECK(real_canonical_text(12300.0) == "12300.");
    CHECK(real_canonical_text(6.02214076e23) == "6.02214076E23");
}

TEST_CASE("real canonical text round-trips binary64 exactly") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        double x;
        if (i % 3 == 0) {
            x = std::bit_cast<double>(rng());
            if (!std::isfinite(x)) continue;
        } else if (i % 3 == 1) {
            x = std::uniform_real_distribution<double>(-1e6, 1e6)(rng);
        } else {
            x = std::ldexp(std::uniform_real_distribution<double>(-1, 1)(rng),
                           static_cast<int>(rng() % 600) - 300);
        }
        const std::string text = real_canonical_text(x);
        double back = 0;
        REQUIRE(parse_real_token(text, back) == RealParseStatus::ok);
        CHECK(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(x));
        // canonical form is a fixed point of itself
        CHECK(real_canonical_text(back) == text);
    }
}

TEST_CASE("real canonical text never emits + or e or leading exponent zeros") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 5000; ++i) {
        const double x = std::ldexp(std::uniform_real_distribution<double>(-1, 1)(rng),
                                    static_cast<int>(rng() % 2000) - 1000);
        if (!std::isfinite(x)) continue;
        const std::string t = real_canonical_text(x);
        CHECK(t.find('e') == std::string::npos);
        CHECK(t.find('+') == std::string::npos);
        CHECK(t.find('.') != std::string::npos);
        const auto epos = t.find('E');
        if (epos != std::string::npos) {
            std::size_t d = epos + 1;
            if (d < t.size() && t[d] == '-') ++d;
            REQUIRE(d < t.size());
            CHECK(t[d] != '0');
        }
    }
}

TEST_CASE("real parsing classifies out-of-range literals") {
    double v = 1;
    SECTION("underflow becomes signed zero") {
        REQUIRE(parse_real_token("1.0E-999", v) == RealParseStatus::ok);
        CHECK(std::bit_cast<std::uint64_t>(v) == std::bit_cast<std::uint64_t>(0.0));
        REQUIRE(parse_real_token("-1.0E-999", v) == RealParseStatus::ok);
        CHECK(std::bit_cast<std::uint64_t>(v) == std::bit_cast<std::uint64_t>(-0.0));
    }
    SECTION("overflow is reported") {
        CHECK(parse_real_token("1.0E999", v) == RealParseStatus::overflow);
        CHECK(parse_real_token("-1.0E999", v) == RealParseStatus::overflow);
        CHECK(parse_real_token("123456789E400", v) == RealParseStatus::overflow);
    }
    SECTION("values near the boundary parse") {
        REQUIRE(parse_real_token("1.7976931348623157E308", v) == RealParseStatus::ok);
        CHECK(v == std::numeric_limits<double>::max());
        REQUIRE(parse_real_token("4.9E-324", v) == RealParseStatus::ok);
        CHECK(v == std::numeric_limits<double>::denorm_min());
    }
}

TEST_CASE("attribute values compare structurally") {
    CHECK(AttributeValue::null_value() == AttributeValue::null_value());
    CHECK_FALSE(AttributeValue::null_value() == AttributeValue::derived());
    CHECK(AttributeValue::integer(5) == AttributeValue::integer("5"));
    CHECK_FALSE(AttributeValue::real(0.0) == AttributeValue::real(-0.0));
    CHECK(AttributeValue::reference(3) == AttributeValue::reference(3));
    CHECK_FALSE(AttributeValue::reference(3) == AttributeValue::reference(4));
    const auto agg = AttributeValue::aggregate(
        {AttributeValue::integer(1), AttributeValue::str("x")});
    CHECK(agg == AttributeValue::aggregate({AttributeValue::integer(1), AttributeValue::str("x")}));
    CHECK(AttributeValue::typed("IFCREAL", AttributeValue::real(2.5)) ==
          AttributeValue::typed("IFCREAL", AttributeValue::real(2.5)));
    CHECK_FALSE(AttributeValue::typed("IFCREAL", AttributeValue::real(2.5)) ==
                AttributeValue::typed("IFCLENGTHMEASURE", AttributeValue::real(2.5)));
}

TEST_CASE("collect_references walks aggregates and typed wrappers in order") {
    EntityInstance row;
    row.id = 9;
    row.type_name = "T";
    row.attributes = {
        AttributeValue::reference(4),
        AttributeValue::aggregate({AttributeValue::reference(2),
                                   AttributeValue::typed("W", AttributeValue::reference(4))}),
        AttributeValue::str("no"),
    };
    const auto refs = collect_references(row);
    REQUIRE(refs == std::vector<EntityId>{4, 2, 4});
}
