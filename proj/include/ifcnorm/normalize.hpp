#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ifcnorm/diff.hpp"
#include "ifcnorm/graph.hpp"
#include "ifcnorm/hashing.hpp"
#include "ifcnorm/id_assign.hpp"
#include "ifcnorm/parse.hpp"
#include "ifcnorm/write.hpp"

namespace ifcnorm {

struct NormalizeOptions {
    HashOptions hashing;
    IdConfig ids;
    WriterOptions writer;
    unsigned threads = 0;  // 0 = all hardware threads
};

struct StageTimings {
    double parse_ms = 0, structure_ms = 0, digest_ms = 0, merge_ms = 0, guid_ms = 0,
           number_ms = 0, write_ms = 0;
};

struct NormalizeStats {
    std::size_t input_rows = 0;
    std::size_t output_rows = 0;
    std::size_t merged_nodes = 0;
    std::size_t removed_owner_history = 0;
    std::size_t guid_rewrites = 0;
    std::size_t spilled_nodes = 0;
    std::size_t layer_count = 0;
    std::size_t spaces_allocated = 0;
    double max_overflow_bound = 0.0;
    std::map<std::string, std::uint64_t> spaces_per_type;
    std::map<std::string, std::uint64_t> nodes_per_type;
    unsigned threads_used = 0;
    StageTimings timings;
};

namespace detail {

class StageClock {
  public:
    StageClock() : last_(std::chrono::steady_clock::now()) {}
    double lap_ms() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

  private:
    std::chrono::steady_clock::time_point last_;
};

}  // namespace detail

// Everything between parsing and numbering: structure, owner-history policy,
// digests, merging, GlobalId re-encoding. Consumes the rows.
struct ContentPhase {
    ModelGraph graph;
    std::vector<NodeDigest> digests;
    std::size_t removed_owner_history = 0;
    std::size_t merged_nodes = 0;
    std::size_t guid_rewrites = 0;
    StageTimings timings;
};

inline ContentPhase run_content_phase(std::vector<EntityInstance> rows,
                                      const HashOptions& opts, unsigned threads = 0) {
    ContentPhase phase;
    detail::StageClock clock;
    phase.graph = build_graph(std::move(rows));
    phase.removed_owner_history = apply_owner_history(phase.graph, opts.owner_history_mode);
    phase.timings.structure_ms = clock.lap_ms();

    phase.digests = derive_digests(phase.graph, opts, threads);
    phase.timings.digest_ms = clock.lap_ms();

    phase.merged_nodes = merge_redundant(phase.graph, phase.digests, opts).merged_count;
    phase.timings.merge_ms = clock.lap_ms();

    if (opts.reencode_guids) {
        phase.guid_rewrites = reencode_guids(phase.graph, opts, threads);
        // GlobalId text is hashed content, and unifying it can make rows
        // collide that did not before: derive from scratch, merge again. The
        // re-derivation also restores canonical collection order, which the
        // rewrite pass sorts under its own GlobalId-updated digests.
        phase.digests = derive_digests(phase.graph, opts, threads);
        phase.merged_nodes += merge_redundant(phase.graph, phase.digests, opts).merged_count;
        phase.timings.guid_ms = clock.lap_ms();
    }
    return phase;
}

inline std::string normalize_text(std::string_view input, const NormalizeOptions& opts,
                                  NormalizeStats* stats_out = nullptr) {
    opts.ids.validate();
    NormalizeStats stats;
    stats.threads_used = resolve_thread_count(opts.threads);
    detail::StageClock clock;

    RawFile file = parse_file(input);
    stats.input_rows = file.data_rows.size();
    stats.timings.parse_ms = clock.lap_ms();

    ContentPhase phase = run_content_phase(std::move(file.data_rows), opts.hashing, opts.threads);
    file.data_rows.clear();
    stats.removed_owner_history = phase.removed_owner_history;
    stats.merged_nodes = phase.merged_nodes;
    stats.guid_rewrites = phase.guid_rewrites;
    stats.layer_count = phase.graph.layer_groups.size();
    const StageTimings t = phase.timings;
    stats.timings.structure_ms = t.structure_ms;
    stats.timings.digest_ms = t.digest_ms;
    stats.timings.merge_ms = t.merge_ms;
    stats.timings.guid_ms = t.guid_ms;
    clock.lap_ms();

    std::map<std::string, std::uint64_t> census;
    for (const EntityInstance& node : phase.graph.nodes) ++census[node.type_name];
    const PrefixSpacePlan plan = plan_spaces(census, opts.ids);
    for (const TypePlan& tp : plan.types) {
        stats.spaces_per_type[tp.type_name] = tp.space_codes.size();
        stats.nodes_per_type[tp.type_name] = tp.node_count;
        stats.spaces_allocated += tp.space_codes.size();
        stats.max_overflow_bound =
            std::max(stats.max_overflow_bound,
                     overflow_probability(tp.node_count, tp.space_codes.size(), opts.ids.capacity));
    }
    const IdAssignment assignment =
        assign_ids(phase.graph, phase.digests, plan, opts.ids, opts.threads);
    stats.spilled_nodes = assignment.spilled;
    file.data_rows = renumber(std::move(phase.graph.nodes), assignment.new_id);
    stats.output_rows = file.data_rows.size();
    stats.timings.number_ms = clock.lap_ms();

    std::string out = write_file(file, opts.writer);
    stats.timings.write_ms = clock.lap_ms();
    if (stats_out) *stats_out = std::move(stats);
    return out;
}

// The digest manifest for a file, computed exactly the way normalize would.
inline HashSetManifest hash_manifest_for_text(std::string_view input, const HashOptions& opts,
                                              unsigned threads = 0) {
    RawFile file = parse_file(input);
    ContentPhase phase = run_content_phase(std::move(file.data_rows), opts, threads);
    return export_hash_set(phase.digests, file.schema_name, opts);
}

inline std::string render_stats(const NormalizeStats& s) {
    std::ostringstream out;
    out << "rows in               " << s.input_rows << '\n'
        << "rows out              " << s.output_rows << '\n'
        << "merged                " << s.merged_nodes << '\n'
        << "owner history removed " << s.removed_owner_history << '\n'
        << "guids rewritten       " << s.guid_rewrites << '\n'
        << "spilled               " << s.spilled_nodes << '\n'
        << "layers                " << s.layer_count << '\n'
        << "spaces                " << s.spaces_allocated << '\n'
        << "max overflow bound    " << s.max_overflow_bound << '\n'
        << "threads               " << s.threads_used << '\n';
    out << "timings ms parse=" << s.timings.parse_ms << " structure=" << s.timings.structure_ms
        << " digest=" << s.timings.digest_ms << " merge=" << s.timings.merge_ms
        << " guid=" << s.timings.guid_ms << " number=" << s.timings.number_ms
        << " write=" << s.timings.write_ms << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// File I/O
// ---------------------------------------------------------------------------

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return std::move(buf).str();
}

// Write-then-rename: readers of `path` never observe a half-written file,
// and a crash leaves the old content intact.
inline void write_file_atomic(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    std::random_device rd;
    const fs::path tmp =
        target.parent_path() /
        (target.filename().string() + ".tmp" + std::to_string(rd() % 1000000));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot replace " + path);
    }
}

}  // namespace ifcnorm
