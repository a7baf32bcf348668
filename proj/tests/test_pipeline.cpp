#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "ifcnorm/equivalence.hpp"
#include "ifcnorm/normalize.hpp"
#include "support/model_gen.hpp"
#include "support/textutil.hpp"

using namespace ifcnorm;
using testsupport::GenConfig;
using testsupport::generate_model;
using testsupport::line_diff;
using testsupport::render_rows_any_order;

namespace {

NormalizeOptions default_opts() {
    NormalizeOptions opts;
    opts.hashing.owner_history_mode = OwnerHistoryMode::drop;
    opts.hashing.reencode_guids = true;
    return opts;
}

}  // namespace

TEST_CASE("normalizing twice returns the first output byte for byte") {
    GenConfig cfg;
    cfg.bundles = 50;
    std::string input = generate_model(cfg).text;

    for (OwnerHistoryMode mode :
         {OwnerHistoryMode::keep, OwnerHistoryMode::inline_refs, OwnerHistoryMode::drop}) {
        NormalizeOptions opts = default_opts();
        opts.hashing.owner_history_mode = mode;
        std::string once = normalize_text(input, opts);
        std::string twice = normalize_text(once, opts);
        CHECK(once == twice);
    }
}

TEST_CASE("row order and instance numbering do not affect the output") {
    GenConfig cfg;
    cfg.bundles = 60;
    std::string input = generate_model(cfg).text;
    NormalizeOptions opts = default_opts();
    std::string baseline = normalize_text(input, opts);

    RawFile scrambled = rename_ids(shuffle_rows(parse_file(input), 1234), 5678);
    std::string scrambled_text = render_rows_any_order(scrambled);
    CHECK(scrambled_text != input);
    CHECK(normalize_text(scrambled_text, opts) == baseline);
}

TEST_CASE("duplicated leaf subtrees merge back into one output") {
    GenConfig cfg;
    cfg.bundles = 40;
    std::string input = generate_model(cfg).text;
    NormalizeOptions opts = default_opts();
    NormalizeStats base_stats;
    std::string baseline = normalize_text(input, opts, &base_stats);

    RawFile original = parse_file(input);
    const std::size_t before = original.data_rows.size();
    RawFile padded = duplicate_leaf_subtrees(std::move(original), 0.15, 99);
    const std::size_t copies = padded.data_rows.size() - before;
    REQUIRE(copies > 0);

    NormalizeStats padded_stats;
    std::string padded_out =
        normalize_text(render_rows_any_order(padded), opts, &padded_stats);
    CHECK(padded_out == baseline);
    CHECK(padded_stats.merged_nodes == base_stats.merged_nodes + copies);
    CHECK(padded_stats.output_rows == base_stats.output_rows);
}

TEST_CASE("bookkeeping timestamp edits move exactly one row in inline mode") {
    GenConfig cfg_a;
    cfg_a.bundles = 40;
    GenConfig cfg_b = cfg_a;
    cfg_b.owner_timestamp = 1800000000;  // only the save moment differs

    NormalizeOptions opts = default_opts();
    opts.hashing.owner_history_mode = OwnerHistoryMode::inline_refs;
    std::string out_a = normalize_text(generate_model(cfg_a).text, opts);
    std::string out_b = normalize_text(generate_model(cfg_b).text, opts);

    auto diff = line_diff(out_a, out_b);
    CHECK(diff.only_in_a.size() == 1);
    CHECK(diff.only_in_b.size() == 1);
    // The moved line is the bookkeeping row itself, same ID on both sides.
    REQUIRE(!diff.only_in_a.empty());
    CHECK(diff.only_in_a[0].find("IFCOWNERHISTORY") != std::string::npos);
    CHECK(diff.only_in_b[0].find("IFCOWNERHISTORY") != std::string::npos);
    std::string id_a = diff.only_in_a[0].substr(0, diff.only_in_a[0].find('='));
    std::string id_b = diff.only_in_b[0].substr(0, diff.only_in_b[0].find('='));
    CHECK(id_a == id_b);
}

TEST_CASE("the same edit cascades everywhere in keep mode") {
    GenConfig cfg_a;
    cfg_a.bundles = 40;
    GenConfig cfg_b = cfg_a;
    cfg_b.owner_timestamp = 1800000000;

    NormalizeOptions opts = default_opts();
    opts.hashing.owner_history_mode = OwnerHistoryMode::keep;
    std::string out_a = normalize_text(generate_model(cfg_a).text, opts);
    std::string out_b = normalize_text(generate_model(cfg_b).text, opts);
    auto diff = line_diff(out_a, out_b);
    CHECK(diff.total() > 80);  // every row downstream of the bookkeeping row moved
}

TEST_CASE("the same edit disappears entirely in drop mode") {
    GenConfig cfg_a;
    cfg_a.bundles = 40;
    GenConfig cfg_b = cfg_a;
    cfg_b.owner_timestamp = 1800000000;

    NormalizeOptions opts = default_opts();
    NormalizeStats stats;
    std::string out_a = normalize_text(generate_model(cfg_a).text, opts, &stats);
    std::string out_b = normalize_text(generate_model(cfg_b).text, opts);
    CHECK(out_a == out_b);
    CHECK(stats.removed_owner_history == 5);  // history row + its audit chain
    CHECK(out_a.find("IFCOWNERHISTORY") == std::string::npos);
    CHECK(out_a.find("IFCPERSON") == std::string::npos);
}

TEST_CASE("thread count never changes the bytes") {
    GenConfig cfg;
    cfg.bundles = 80;
    std::string input = generate_model(cfg).text;
    NormalizeOptions opts = default_opts();
    opts.threads = 1;
    std::string serial = normalize_text(input, opts);
    for (unsigned t : {2u, 4u, 8u}) {
        opts.threads = t;
        CHECK(normalize_text(input, opts) == serial);
    }
}

TEST_CASE("stats describe the run") {
    GenConfig cfg;
    cfg.bundles = 30;
    testsupport::GeneratedModel model = generate_model(cfg);
    NormalizeOptions opts = default_opts();
    NormalizeStats stats;
    std::string out = normalize_text(model.text, opts, &stats);

    CHECK(stats.input_rows == model.data_rows);
    CHECK(stats.output_rows > 0);
    CHECK(stats.output_rows ==
          stats.input_rows - stats.removed_owner_history - stats.merged_nodes);
    CHECK(stats.layer_count >= 4);
    CHECK(stats.threads_used > 0);
    CHECK(stats.spilled_nodes == 0);
    CHECK(stats.max_overflow_bound < 1e-6);
    CHECK(stats.guid_rewrites > 0);

    std::uint64_t census_total = 0;
    for (const auto& [type, n] : stats.nodes_per_type) census_total += n;
    CHECK(census_total == stats.output_rows);
    CHECK(stats.nodes_per_type.count("IFCWALL") == 1);
    CHECK(stats.spaces_per_type.at("IFCWALL") == 1);  // tiny model, one space
    CHECK(stats.spaces_allocated == stats.spaces_per_type.size());

    // Rendered form mentions the headline numbers.
    std::string text = render_stats(stats);
    CHECK(text.find("rows in") != std::string::npos);
    CHECK(text.find(std::to_string(stats.input_rows)) != std::string::npos);

    // Output row count matches the actual data section.
    std::size_t rows = 0;
    for (const std::string& line : testsupport::split_lines(out))
        if (!line.empty() && line[0] == '#') ++rows;
    CHECK(rows == stats.output_rows);
}

TEST_CASE("digest manifests survive normalization") {
    GenConfig cfg;
    cfg.bundles = 40;
    std::string input = generate_model(cfg).text;
    NormalizeOptions opts = default_opts();
    std::string output = normalize_text(input, opts);

    HashSetManifest before = hash_manifest_for_text(input, opts.hashing);
    HashSetManifest after = hash_manifest_for_text(output, opts.hashing);
    CHECK(before.schema_name == after.schema_name);
    CHECK(before.options_fingerprint == after.options_fingerprint);
    CHECK(diff_hash_sets(before, after).identical());
}

TEST_CASE("an empty data section normalizes to an empty data section") {
    std::string input =
        "ISO-10303-21;\nHEADER;\n"
        "FILE_DESCRIPTION((''),'2;1');\n"
        "FILE_NAME('','2024-01-01T00:00:00',(''),(''),'','','');\n"
        "FILE_SCHEMA(('IFC4'));\n"
        "ENDSEC;\nDATA;\nENDSEC;\nEND-ISO-10303-21;\n";
    NormalizeOptions opts = default_opts();
    NormalizeStats stats;
    std::string out = normalize_text(input, opts, &stats);
    CHECK(stats.input_rows == 0);
    CHECK(stats.output_rows == 0);
    CHECK(out.find("DATA;\nENDSEC;") != std::string::npos);
    CHECK(normalize_text(out, opts) == out);
}

TEST_CASE("the header timestamp can be stripped on output") {
    GenConfig cfg;
    cfg.bundles = 5;
    cfg.header_timestamp = "2031-12-31T23:59:59";
    NormalizeOptions opts = default_opts();
    opts.writer.strip_header_timestamp = true;
    std::string out = normalize_text(generate_model(cfg).text, opts);
    CHECK(out.find("2031-12-31T23:59:59") == std::string::npos);

    // Two exports that differ only in header timestamp converge.
    GenConfig other = cfg;
    other.header_timestamp = "2032-01-01T00:00:01";
    CHECK(normalize_text(generate_model(other).text, opts) == out);
}

TEST_CASE("atomic writes land complete or not at all") {
    namespace fs = std::filesystem;
    fs::path dir = testsupport::make_temp_dir("atomic");
    fs::path target = dir / "out.ifc";

    write_file_atomic(target.string(), "first version\n");
    CHECK(read_file_bytes(target.string()) == "first version\n");
    write_file_atomic(target.string(), "second version\n");
    CHECK(read_file_bytes(target.string()) == "second version\n");

    // No temp droppings left behind.
    std::size_t entries = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        (void)entry;
        ++entries;
    }
    CHECK(entries == 1);
    fs::remove_all(dir);
}

TEST_CASE("file errors surface as IO errors") {
    CHECK_THROWS_AS(read_file_bytes("/nonexistent_dir_zz/in.ifc"), IoError);
    CHECK_THROWS_AS(write_file_atomic("/nonexistent_dir_zz/out.ifc", "x"), IoError);
}
