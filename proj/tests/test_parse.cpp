#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "ifcnorm/parse.hpp"
#include "ifcnorm/value.hpp"

using namespace ifcnorm;

namespace {

std::string wrap(const std::string& rows) {
    return "ISO-10303-21;\nHEADER;\n"
           "FILE_DESCRIPTION((''),'2;1');\n"
           "FILE_NAME('f','t',(''),(''),'','','');\n"
           "FILE_SCHEMA(('IFC4'));\n"
           "ENDSEC;\nDATA;\n" +
           rows + "ENDSEC;\nEND-ISO-10303-21;\n";
}

const EntityInstance& only_row(const RawFile& f) {
    REQUIRE(f.data_rows.size() == 1);
    return f.data_rows.front();
}

}  // namespace

TEST_CASE("minimal file parses with schema and header intact") {
    const RawFile f = parse_file(wrap("#1=IFCWALL($,$,$,$,$,$,$,$,$);\n"));
    CHECK(f.schema_name == "IFC4");
    REQUIRE(f.header_records.size() == 3);
    CHECK(f.header_records[0].keyword == "FILE_DESCRIPTION");
    CHECK(f.header_records[1].keyword == "FILE_NAME");
    CHECK(f.header_records[2].keyword == "FILE_SCHEMA");
    CHECK(f.header_records[1].raw_argument_text == "'f','t',(''),(''),'','',''");
    const EntityInstance& row = only_row(f);
    CHECK(row.id == 1);
    CHECK(row.type_name == "IFCWALL");
    CHECK(row.attributes.size() == 9);
    for (const auto& a : row.attributes) CHECK(a.kind == ValueKind::Null);
}

TEST_CASE("all value kinds parse into the expected shapes") {
    const RawFile f = parse_file(wrap(
        "#1=T($,*,42,-0.5,'it''s',.TRUE.,\"0AF\",#2,(1,(2)),IFCREAL(2.5));\n"
        "#2=U();\n"));
    const EntityInstance& row = f.data_rows.front();
    REQUIRE(row.attributes.size() == 10);
    CHECK(row.attributes[0].kind == ValueKind::Null);
    CHECK(row.attributes[1].kind == ValueKind::Derived);
    CHECK(row.attributes[2] == AttributeValue::integer(42));
    CHECK(row.attributes[3] == AttributeValue::real(-0.5));
    CHECK(row.attributes[4] == AttributeValue::str("it''s"));  // escape kept verbatim
    CHECK(row.attributes[5] == AttributeValue::enumeration("TRUE"));
    CHECK(row.attributes[6] == AttributeValue::binary("0AF"));
    CHECK(row.attributes[7] == AttributeValue::reference(2));
    CHECK(row.attributes[8] ==
          AttributeValue::aggregate({AttributeValue::integer(1),
                                     AttributeValue::aggregate({AttributeValue::integer(2)})}));
    CHECK(row.attributes[9] == AttributeValue::typed("IFCREAL", AttributeValue::real(2.5)));
}

TEST_CASE("numbers: canonical integers, real forms, lenient exponent") {
    const RawFile f = parse_file(wrap("#1=T(+007,-0,1.5E+2,1E5,0.5,-1.,2.5e-5);\n"));
    const auto& a = f.data_rows.front().attributes;
    CHECK(a[0] == AttributeValue::integer("7"));
    CHECK(a[1] == AttributeValue::integer("0"));
    CHECK(a[2] == AttributeValue::real(150.0));
    CHECK(a[3] == AttributeValue::real(100000.0));  // missing '.' tolerated
    CHECK(a[4] == AttributeValue::real(0.5));
    CHECK(a[5] == AttributeValue::real(-1.0));
    CHECK(a[6] == AttributeValue::real(2.5e-5));
}

TEST_CASE("keywords and enumerations fold to uppercase") {
    const RawFile f = parse_file(wrap("#1=ifcWall(.solidWall.,ifcReal(1.));\n"));
    CHECK(f.data_rows.front().type_name == "IFCWALL");
    CHECK(f.data_rows.front().attributes[0] == AttributeValue::enumeration("SOLIDWALL"));
    CHECK(f.data_rows.front().attributes[1].text == "IFCREAL");
}

TEST_CASE("comments and whitespace vanish between tokens") {
    const RawFile f = parse_file(wrap(
        "#1 /* c1 */ = /* c2 */ T /* c3 */ ( 1 /* c4 */ , /* */ 2 ) /* c5 */ ;\n"));
    const EntityInstance& row = only_row(f);
    CHECK(row.attributes[0] == AttributeValue::integer(1));
    CHECK(row.attributes[1] == AttributeValue::integer(2));
}

TEST_CASE("UTF-8 byte order mark is skipped") {
    const RawFile f = parse_file("\xEF\xBB\xBF" + wrap("#1=T();\n"));
    CHECK(only_row(f).type_name == "T");
}

TEST_CASE("strings keep escapes and embedded quotes verbatim") {
    const RawFile f = parse_file(wrap("#1=T('\\X2\\00E9\\X0\\','a''b','');\n"));
    const auto& a = f.data_rows.front().attributes;
    CHECK(a[0] == AttributeValue::str("\\X2\\00E9\\X0\\"));
    CHECK(a[1] == AttributeValue::str("a''b"));
    CHECK(a[2] == AttributeValue::str(""));
}

TEST_CASE("rows may reference forward and arrive in any order") {
    const RawFile f = parse_file(wrap("#2=T(#5);\n#5=U();\n"));
    CHECK(f.data_rows[0].attributes[0] == AttributeValue::reference(5));
}

namespace {

void expect_error(const std::string& text, const std::string& fragment) {
    try {
        parse_file(text);
        FAIL("expected a parse error containing '" << fragment << "'");
    } catch (const ParseError& e) {
        INFO(e.what());
        CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("diagnostics carry positions and reasons") {
    expect_error(wrap("#0=T();\n"), "must be >= 1");
    expect_error(wrap("#1=T();\n#1=U();\n"), "duplicate");
    expect_error(wrap("#1=(A(1)B(2));\n"), "complex");
    expect_error(wrap("#1=!USERTYPE(1);\n"), "user-defined");
    expect_error(wrap("#1=T(#2@);\n"), "expected , or )");
    expect_error(wrap("#1=T(@REMOTE);\n"), "external");
    expect_error(wrap("#1=T('unterminated);\n"), "string");
    expect_error(wrap("#1=T(1); /* no end"), "comment");
    expect_error(wrap("#1=T(1.0E999);\n"), "out of range");
    expect_error(wrap("#1=T(.);\n"), "enumeration");
    expect_error(wrap("#1=T(.5);\n"), "enumeration");  // reals need a leading digit
    expect_error(wrap("#1=T(\"0G\");\n"), "binary");
    expect_error("ISO-10303-21;\nHEADER;\nFILE_NAME('f','t',(''),(''),'','','');\n"
                 "FILE_DESCRIPTION((''),'2;1');\nFILE_SCHEMA(('IFC4'));\n"
                 "ENDSEC;\nDATA;\nENDSEC;\nEND-ISO-10303-21;\n",
                 "FILE_DESCRIPTION");
    expect_error("ISO-10303-21;\nHEADER;\nFILE_DESCRIPTION((''),'2;1');\n"
                 "FILE_NAME('f','t',(''),(''),'','','');\nFILE_SCHEMA(('IFC4'));\n"
                 "ENDSEC;\nEND-ISO-10303-21;\n",
                 "DATA");
    expect_error(wrap("") + "garbage", "trailing");
    expect_error(wrap("#1=T();\n") + "DATA;\nENDSEC;\nEND-ISO-10303-21;\n", "trailing");
}

TEST_CASE("second DATA section is rejected") {
    expect_error(
        "ISO-10303-21;\nHEADER;\nFILE_DESCRIPTION((''),'2;1');\n"
        "FILE_NAME('f','t',(''),(''),'','','');\nFILE_SCHEMA(('IFC4'));\nENDSEC;\n"
        "DATA;\n#1=T();\nENDSEC;\nDATA;\n#2=U();\nENDSEC;\nEND-ISO-10303-21;\n",
        "DATA");
}

TEST_CASE("error positions are 1-based line/column") {
    try {
        parse_file(wrap("#1=T(\n  .BAD_ENUM_NO_CLOSE\n);\n"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() >= 8);  // inside the DATA section
        CHECK(e.column() >= 1);
    }
}

TEST_CASE("nesting depth is capped") {
    std::string deep(100, '(');
    deep += "1";
    deep += std::string(100, ')');
    expect_error(wrap("#1=T(" + deep + ");\n"), "too deep");
}

TEST_CASE("64-bit IDs parse and oversized ones fail") {
    const RawFile f = parse_file(wrap("#18446744073709551615=T();\n"));
    CHECK(f.data_rows.front().id == 18446744073709551615ull);
    expect_error(wrap("#18446744073709551616=T();\n"), "instance ID");
}
