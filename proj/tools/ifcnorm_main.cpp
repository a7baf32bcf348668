// ifcnorm - canonicalize STEP/IFC model files so line diffs track real edits.
//
// Exit codes: 0 success, 1 malformed input or model structure, 2 numbering
// capacity exhausted, 3 file I/O failure, 4 diff found differences.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ifcnorm/ifcnorm.hpp"

namespace {

struct CommonFlags {
    std::string owner_history = "drop";
    bool reencode_guids = true;
    std::string unordered_table_path;
    unsigned threads = 0;
};

void add_hash_flags(CLI::App& cmd, CommonFlags& flags) {
    cmd.add_option("--owner-history", flags.owner_history,
                   "Owner-history rows: keep | inline | drop")
        ->check(CLI::IsMember({"keep", "inline", "drop"}))
        ->capture_default_str();
    cmd.add_flag("--reencode-guids,!--no-reencode-guids", flags.reencode_guids,
                 "Rewrite GlobalId of non-element rows from content (default on)");
    cmd.add_option("--unordered-table", flags.unordered_table_path,
                   "File of 'TYPENAME index' lines replacing the built-in list of "
                   "unordered collection attributes");
    cmd.add_option("--threads", flags.threads, "Worker threads, 0 = all cores")
        ->capture_default_str();
}

ifcnorm::HashOptions to_hash_options(const CommonFlags& flags) {
    ifcnorm::HashOptions opts;
    if (flags.owner_history == "keep")
        opts.owner_history_mode = ifcnorm::OwnerHistoryMode::keep;
    else if (flags.owner_history == "inline")
        opts.owner_history_mode = ifcnorm::OwnerHistoryMode::inline_refs;
    else
        opts.owner_history_mode = ifcnorm::OwnerHistoryMode::drop;
    opts.reencode_guids = flags.reencode_guids;
    if (!flags.unordered_table_path.empty())
        opts.unordered_attributes =
            ifcnorm::parse_unordered_table(ifcnorm::read_file_bytes(flags.unordered_table_path));
    return opts;
}

std::string read_input(const std::string& path) {
    if (path != "-") return ifcnorm::read_file_bytes(path);
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    if (std::cin.bad()) throw ifcnorm::IoError("failed reading standard input");
    return std::move(buf).str();
}

void emit_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw ifcnorm::IoError("failed writing standard output");
        return;
    }
    ifcnorm::write_file_atomic(path, content);
}

bool looks_like_step(std::string_view text) {
    std::size_t i = 0;
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
    while (i < text.size() &&
           (text[i] == ' ' || text[i] == '\t' || text[i] == '\r' || text[i] == '\n'))
        ++i;
    return text.compare(i, 13, "ISO-10303-21;") == 0 ||
           text.compare(i, 12, "ISO-10303-21") == 0;
}

ifcnorm::HashSetManifest load_manifest(const std::string& path, const ifcnorm::HashOptions& opts,
                                       unsigned threads) {
    const std::string text = read_input(path);
    if (looks_like_step(text)) return ifcnorm::hash_manifest_for_text(text, opts, threads);
    return ifcnorm::parse_manifest(text);
}

int run(int argc, char** argv) {
    CLI::App app{
        "Normalizes STEP/IFC files: merges rows with identical content, derives "
        "stable instance IDs from content hashes, and emits a canonical, "
        "diff-friendly serialization."};
    app.require_subcommand(1);

    // ---- normalize ----
    auto* cmd_norm = app.add_subcommand(
        "normalize", "Canonicalize a model file (merge, renumber, reserialize)");
    CommonFlags norm_flags;
    std::string norm_input, norm_output = "-";
    std::uint64_t capacity = 65536;
    double spare_rate = 2.0;
    std::string scaling = "pow2";
    bool strip_timestamp = false;
    bool show_stats = false;
    cmd_norm->add_option("input", norm_input, "Input file, - for stdin")->required();
    cmd_norm->add_option("-o,--output", norm_output, "Output file, - for stdout")
        ->capture_default_str();
    add_hash_flags(*cmd_norm, norm_flags);
    cmd_norm->add_option("--capacity", capacity, "IDs per prefix space")
        ->check(CLI::Range(std::uint64_t(256), std::uint64_t(1) << 31))
        ->capture_default_str();
    cmd_norm->add_option("--spare-rate", spare_rate, "Provisioned slots per row (> 1)")
        ->capture_default_str();
    cmd_norm->add_option("--scaling", scaling, "Space count growth: linear | pow2")
        ->check(CLI::IsMember({"linear", "pow2"}))
        ->capture_default_str();
    cmd_norm->add_flag("--strip-timestamp", strip_timestamp,
                       "Blank the header FILE_NAME timestamp field");
    cmd_norm->add_flag("--stats", show_stats, "Print pipeline statistics to stderr");

    // ---- hash ----
    auto* cmd_hash = app.add_subcommand("hash", "Write the content digest manifest of a model");
    CommonFlags hash_flags;
    std::string hash_input, hash_output = "-";
    cmd_hash->add_option("input", hash_input, "Model file, - for stdin")->required();
    cmd_hash->add_option("-o,--output", hash_output, "Output file, - for stdout")
        ->capture_default_str();
    add_hash_flags(*cmd_hash, hash_flags);

    // ---- diff ----
    auto* cmd_diff = app.add_subcommand(
        "diff", "Compare two models (or digest manifests) by content digests");
    CommonFlags diff_flags;
    std::string diff_a, diff_b;
    cmd_diff->add_option("a", diff_a, "Model or manifest")->required();
    cmd_diff->add_option("b", diff_b, "Model or manifest")->required();
    add_hash_flags(*cmd_diff, diff_flags);

    // ---- check ----
    auto* cmd_check = app.add_subcommand(
        "check", "Verify normalization is stable for a file (idempotent, order- and "
                 "ID-independent)");
    CommonFlags check_flags;
    std::string check_input;
    std::uint64_t check_seed = 1;
    cmd_check->add_option("input", check_input, "Model file, - for stdin")->required();
    cmd_check->add_option("--seed", check_seed, "Seed for the scrambled copy")
        ->capture_default_str();
    add_hash_flags(*cmd_check, check_flags);

    CLI11_PARSE(app, argc, argv);

    if (cmd_norm->parsed()) {
        ifcnorm::NormalizeOptions opts;
        opts.hashing = to_hash_options(norm_flags);
        opts.ids.capacity = capacity;
        opts.ids.spare_rate = spare_rate;
        opts.ids.scaling = scaling == "linear" ? ifcnorm::SpaceScaling::linear
                                               : ifcnorm::SpaceScaling::power_of_two;
        opts.writer.strip_header_timestamp = strip_timestamp;
        opts.threads = norm_flags.threads;
        ifcnorm::NormalizeStats stats;
        const std::string out = ifcnorm::normalize_text(read_input(norm_input), opts, &stats);
        emit_output(norm_output, out);
        if (show_stats) std::cerr << ifcnorm::render_stats(stats);
        return 0;
    }

    if (cmd_hash->parsed()) {
        const ifcnorm::HashOptions opts = to_hash_options(hash_flags);
        const ifcnorm::HashSetManifest manifest = ifcnorm::hash_manifest_for_text(
            read_input(hash_input), opts, hash_flags.threads);
        emit_output(hash_output, ifcnorm::render_manifest(manifest));
        return 0;
    }

    if (cmd_diff->parsed()) {
        const ifcnorm::HashOptions opts = to_hash_options(diff_flags);
        const ifcnorm::HashSetManifest a = load_manifest(diff_a, opts, diff_flags.threads);
        const ifcnorm::HashSetManifest b = load_manifest(diff_b, opts, diff_flags.threads);
        const ifcnorm::HashSetDiff d = ifcnorm::diff_hash_sets(a, b);
        if (d.schema_mismatch)
            std::cerr << "warning: schema mismatch (" << a.schema_name << " vs "
                      << b.schema_name << ")\n";
        if (d.fingerprint_mismatch)
            std::cerr << "warning: digests were produced with different hashing options ("
                      << a.options_fingerprint << " vs " << b.options_fingerprint << ")\n";
        for (const std::string& h : d.removed) std::cout << "- " << h << '\n';
        for (const std::string& h : d.added) std::cout << "+ " << h << '\n';
        std::cerr << d.added.size() << " added, " << d.removed.size() << " removed\n";
        return d.identical() ? 0 : 4;
    }

    // check
    {
        ifcnorm::NormalizeOptions opts;
        opts.hashing = to_hash_options(check_flags);
        opts.threads = check_flags.threads;
        const std::string text = read_input(check_input);

        ifcnorm::NormalizeStats stats;
        const std::string first = ifcnorm::normalize_text(text, opts, &stats);
        std::cout << "normalize        ok (" << stats.input_rows << " rows in, "
                  << stats.output_rows << " out)\n";

        const std::string second = ifcnorm::normalize_text(first, opts);
        const bool idempotent = second == first;
        std::cout << "re-normalize     " << (idempotent ? "ok (byte-identical)" : "MISMATCH")
                  << '\n';

        ifcnorm::RawFile scrambled =
            ifcnorm::rename_ids(ifcnorm::shuffle_rows(ifcnorm::parse_file(text), check_seed),
                                check_seed + 1);
        std::sort(scrambled.data_rows.begin(), scrambled.data_rows.end(),
                  [](const ifcnorm::EntityInstance& x, const ifcnorm::EntityInstance& y) {
                      return x.id < y.id;
                  });
        const std::string scrambled_out =
            ifcnorm::normalize_text(ifcnorm::write_file(scrambled), opts);
        const bool stable = scrambled_out == first;
        std::cout << "scrambled copy   " << (stable ? "ok (byte-identical)" : "MISMATCH")
                  << '\n';
        return (idempotent && stable) ? 0 : 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ifcnorm::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ifcnorm::CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ifcnorm::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
