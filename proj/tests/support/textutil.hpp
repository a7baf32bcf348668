#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ifcnorm/normalize.hpp"
#include "ifcnorm/write.hpp"

namespace testsupport {

// Fresh directory under the system temp root; caller owns cleanup (or not -
// the OS temp dir is fine with leftovers from a test run).
inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("ifcnorm_" + tag + "_" + std::to_string(rng()));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_text(const std::filesystem::path& path, std::string_view content) {
    ifcnorm::write_file_atomic(path.string(), content);
}

inline std::string read_text(const std::filesystem::path& path) {
    return ifcnorm::read_file_bytes(path.string());
}

// Serializes rows in their current vector order (write_file insists on
// ID-sorted rows; equivalence tests need arbitrary order).
inline std::string render_rows_any_order(const ifcnorm::RawFile& file,
                                         const ifcnorm::WriterOptions& opt = {}) {
    std::string out = "ISO-10303-21;\nHEADER;\n";
    for (const ifcnorm::HeaderRecord& rec : file.header_records) {
        out += ifcnorm::detail::header_record_text(rec, opt);
        out += '\n';
    }
    out += "ENDSEC;\nDATA;\n";
    for (const ifcnorm::EntityInstance& row : file.data_rows) {
        out += ifcnorm::canonical_row(row);
        out += '\n';
    }
    out += "ENDSEC;\nEND-ISO-10303-21;\n";
    return out;
}

inline std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        lines.emplace_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    return lines;
}

struct LineDiff {
    std::vector<std::string> only_in_a;
    std::vector<std::string> only_in_b;

    std::size_t total() const { return only_in_a.size() + only_in_b.size(); }
};

// Multiset difference of lines (order-insensitive).
inline LineDiff line_diff(std::string_view a, std::string_view b) {
    std::unordered_map<std::string, long> counts;
    for (std::string& line : split_lines(a)) ++counts[std::move(line)];
    for (std::string& line : split_lines(b)) --counts[std::move(line)];
    LineDiff d;
    for (auto& [line, n] : counts) {
        for (long i = 0; i < n; ++i) d.only_in_a.push_back(line);
        for (long i = 0; i > n; --i) d.only_in_b.push_back(line);
    }
    return d;
}

}  // namespace testsupport
