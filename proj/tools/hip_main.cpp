// hip: build and query Threat Actor Name Alias Graphs from local CTI
// source snapshots. See README.md for the manifest and rule file formats.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hip/analytics.hpp"
#include "hip/artifact.hpp"
#include "hip/errors.hpp"
#include "hip/util.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
    bool json_errors = false;
};

std::string csv_line(std::initializer_list<std::string> fields) {
    std::string out;
    bool first = true;
    for (const auto& f : fields) {
        if (!first) out += ',';
        out += hip::csv_escape(f);
        first = false;
    }
    out += '\n';
    return out;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::string mapping_ids_field(const std::set<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ';';
        out += id;
    }
    return out;
}

int cmd_build(const GlobalOptions&, const fs::path& manifest,
              const std::optional<fs::path>& rules, const std::optional<fs::path>& taxonomy,
              const std::optional<fs::path>& overrides, const fs::path& out_dir,
              std::optional<long long> epoch) {
    hip::PipelineConfig config;
    config.manifest = manifest;
    config.rules = rules;
    config.taxonomy_rules = taxonomy;
    config.overrides = overrides;

    auto result = hip::run_pipeline(config);
    hip::save_artifact(result, out_dir / "tanag.json", epoch);
    hip::write_file_atomic(out_dir / "build_report.json",
                           hip::build_report(result).dump(2) + "\n");

    std::cout << "built " << result.tanag.vertex_count() << " vertices, "
              << result.tanag.edge_count() << " edges, "
              << result.tanag.components().size() << " clusters -> "
              << (out_dir / "tanag.json").string() << "\n";
    return 0;
}

int cmd_query(const GlobalOptions&, const fs::path& artifact_path, const std::string& name) {
    auto artifact = hip::load_artifact(artifact_path);
    auto result = hip::query(artifact, name);
    std::cout << hip::query_to_json(result).dump(2) << "\n";
    return 0;
}

int cmd_stats(const GlobalOptions&, const fs::path& artifact_path, const fs::path& out_dir) {
    auto artifact = hip::load_artifact(artifact_path);
    auto dist = hip::size_distribution(artifact.tanag);

    std::string csv = "size,count,cdf\n";
    std::size_t i = 0;
    for (const auto& [size, count] : dist.histogram) {
        csv += csv_line({std::to_string(size), std::to_string(count),
                         format_double(dist.cdf[i++].second)});
    }
    hip::write_file_atomic(out_dir / "size_distribution.csv", csv);

    const auto& clusters = artifact.tanag.components();
    nlohmann::json summary;
    summary["clusters"] = dist.cluster_count;
    summary["vertices"] = artifact.tanag.vertex_count();
    summary["edges"] = artifact.tanag.edge_count();
    summary["mean_size"] = dist.mean;
    summary["median_size"] = dist.median;
    summary["fraction_size_1"] = dist.fraction_exactly(1);
    summary["fraction_size_le_4"] = dist.fraction_at_most(4);
    summary["fraction_size_ge_15"] = 1.0 - dist.fraction_at_most(14);
    summary["largest_cluster_size"] = clusters.empty() ? 0 : clusters.front().size();
    hip::write_file_atomic(out_dir / "summary.json", summary.dump(2) + "\n");

    // per-cluster feature vectors and their correlation against cluster size
    auto features = hip::feature_vectors(artifact.tanag, artifact.corpus);
    std::string fcsv = "cluster_id,cluster_size,n_r,n_v,n_y,n_g,n_s\n";
    for (const auto& [cid, v] : features) {
        fcsv += csv_line({std::to_string(cid), std::to_string(v.cluster_size),
                          std::to_string(v.n_r), std::to_string(v.n_v), std::to_string(v.n_y),
                          std::to_string(v.n_g), std::to_string(v.n_s)});
    }
    hip::write_file_atomic(out_dir / "features.csv", fcsv);

    nlohmann::json correlation = nlohmann::json::array();
    for (const auto& row : hip::correlation_table(features)) {
        nlohmann::json j{{"feature", row.feature}};
        if (row.result) {
            j["pearson"] = row.result->pearson_r;
            j["p_pearson"] = row.result->p_pearson;
            j["spearman"] = row.result->spearman_rho;
            j["p_spearman"] = row.result->p_spearman;
            j["kendall"] = row.result->kendall_tau;
            j["p_kendall"] = row.result->p_kendall;
        } else {
            j["error"] = row.error;
        }
        correlation.push_back(std::move(j));
    }
    hip::write_file_atomic(out_dir / "correlation.json", correlation.dump(2) + "\n");

    std::cout << dist.cluster_count << " clusters over " << artifact.tanag.vertex_count()
              << " names; stats written to " << out_dir.string() << "\n";
    return 0;
}

int cmd_bridges(const GlobalOptions&, const fs::path& artifact_path, int min_cluster_size,
                const fs::path& out_dir) {
    auto artifact = hip::load_artifact(artifact_path);

    struct Row {
        hip::WhatIfReport report;
    };
    std::vector<Row> rows;
    for (const auto& bridge : artifact.tanag.bridges()) {
        auto cid = artifact.tanag.cluster_id_of(bridge.a);
        if (!cid) continue;
        if (artifact.tanag.cluster(*cid).size() < min_cluster_size) continue;
        rows.push_back({artifact.tanag.what_if_remove(bridge.a, bridge.b)});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        return x.report.reduction > y.report.reduction;
    });

    std::string csv = "cluster_id,a,b,confidence,mapping_ids,pairs_before,pairs_after,reduction\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        csv += csv_line({std::to_string(r.cluster_id), r.edge.a.display(), r.edge.b.display(),
                         std::to_string(r.edge.confidence), mapping_ids_field(r.edge.mapping_ids),
                         std::to_string(r.pairs_before), std::to_string(r.pairs_after),
                         format_double(r.reduction)});
    }
    hip::write_file_atomic(out_dir / "bridges.csv", csv);
    std::cout << rows.size() << " bridge(s) in clusters of size >= " << min_cluster_size
              << " -> " << (out_dir / "bridges.csv").string() << "\n";
    return 0;
}

int cmd_export(const GlobalOptions&, const fs::path& artifact_path, const std::string& format,
               const std::string& cluster, const fs::path& out_dir) {
    auto fmt = hip::export_format_from_string(format);
    auto artifact = hip::load_artifact(artifact_path);

    std::optional<int> cluster_id;
    std::string stem = "graph";
    if (cluster != "all") {
        try {
            cluster_id = std::stoi(cluster);
        } catch (const std::exception&) {
            throw hip::UnknownClusterId("cluster must be an integer id or \"all\", got \"" +
                                        cluster + "\"");
        }
        stem = "cluster_" + std::to_string(*cluster_id);
    }

    const char* ext = fmt == hip::ExportFormat::json    ? ".json"
                      : fmt == hip::ExportFormat::dot   ? ".dot"
                                                        : ".graphml";
    auto path = out_dir / (stem + ext);
    hip::write_file_atomic(path, hip::export_graph(artifact.tanag, fmt, cluster_id));
    std::cout << "exported " << path.string() << "\n";
    return 0;
}

int cmd_timeline(const GlobalOptions&, const fs::path& artifact_path, int start, int end,
                 const fs::path& out_dir) {
    auto artifact = hip::load_artifact(artifact_path);
    auto result = hip::longitudinal(artifact.corpus, start, end);

    std::string csv = "year,size,count\n";
    for (const auto& snap : result.snapshots) {
        for (const auto& [size, count] : snap.distribution.histogram) {
            csv += csv_line({std::to_string(snap.year_cutoff), std::to_string(size),
                             std::to_string(count)});
        }
    }
    hip::write_file_atomic(out_dir / "timeline.csv", csv);
    std::cout << result.snapshots.size() << " snapshots (" << result.undated_records
              << " undated records excluded) -> " << (out_dir / "timeline.csv").string() << "\n";
    return 0;
}

int cmd_mig(const GlobalOptions&, const fs::path& artifact_path, const std::string& mapping,
            const fs::path& out_dir) {
    auto artifact = hip::load_artifact(artifact_path);
    auto profile = hip::malware_profile(artifact.tanag, artifact.corpus);
    auto result = hip::mig_profile(artifact.tanag, profile, artifact.corpus, mapping);

    std::string csv = "relative_size,mig,subcluster,subcluster_size,cluster_id,cluster_size\n";
    for (const auto& p : result.points) {
        csv += csv_line({format_double(p.relative_size), format_double(p.mig),
                         p.subcluster_canonical, std::to_string(p.subcluster_size),
                         std::to_string(p.cluster_id), std::to_string(p.cluster_size)});
    }
    hip::write_file_atomic(out_dir / "mig.csv", csv);
    std::cout << result.points.size() << " MIG points (" << result.undefined_count
              << " undefined skipped) -> " << (out_dir / "mig.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HiP: threat actor name normalization and alias graph analytics"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_flag("--json-errors", global.json_errors,
                 "emit errors on stderr as machine-readable JSON");

    // build
    auto* build = app.add_subcommand("build", "run the full pipeline and write an artifact");
    fs::path manifest;
    std::optional<fs::path> rules_path, taxonomy_path, overrides_path;
    fs::path out_dir = ".";
    std::optional<long long> epoch;
    build->add_option("--manifest", manifest, "corpus manifest (JSON array of sources)")
        ->required();
    build->add_option("--rules", rules_path, "normalization rules JSON");
    build->add_option("--taxonomy-rules", taxonomy_path, "vendor taxonomy rules JSON");
    build->add_option("--overrides", overrides_path, "attribution override table JSON");
    build->add_option("--out", out_dir, "output directory");
    build->add_option("--epoch", epoch, "fixed epoch recorded in the artifact");

    // query
    auto* query = app.add_subcommand("query", "resolve a raw TA name to its alias cluster");
    fs::path artifact_path = "tanag.json";
    std::string query_name;
    query->add_option("--artifact", artifact_path, "artifact produced by build");
    query->add_option("name", query_name, "raw TA name")->required();

    // stats
    auto* stats = app.add_subcommand("stats", "cluster size distribution and summary");
    fs::path stats_artifact = "tanag.json", stats_out = ".";
    stats->add_option("--artifact", stats_artifact, "artifact produced by build");
    stats->add_option("--out", stats_out, "output directory");

    // bridges
    auto* bridges = app.add_subcommand("bridges", "cut edges with removal impact");
    fs::path bridges_artifact = "tanag.json", bridges_out = ".";
    int min_cluster_size = 2;
    bridges->add_option("--artifact", bridges_artifact, "artifact produced by build");
    bridges->add_option("--min-cluster-size", min_cluster_size,
                        "only clusters with at least this many members");
    bridges->add_option("--out", bridges_out, "output directory");

    // export
    auto* exp = app.add_subcommand("export", "write the graph as json, dot or graphml");
    fs::path export_artifact = "tanag.json", export_out = ".";
    std::string format = "json", cluster = "all";
    exp->add_option("--artifact", export_artifact, "artifact produced by build");
    exp->add_option("--format", format, "json, dot or graphml");
    exp->add_option("--cluster", cluster, "cluster id or \"all\"");
    exp->add_option("--out", export_out, "output directory");

    // timeline
    auto* timeline = app.add_subcommand("timeline", "per-year cluster size histograms");
    fs::path timeline_artifact = "tanag.json", timeline_out = ".";
    int start = 2000, end = 2025;
    timeline->add_option("--artifact", timeline_artifact, "artifact produced by build");
    timeline->add_option("--start", start, "first snapshot year");
    timeline->add_option("--end", end, "last snapshot year");
    timeline->add_option("--out", timeline_out, "output directory");

    // mig
    auto* mig_cmd = app.add_subcommand("mig", "malware intelligence gain scatter");
    fs::path mig_artifact = "tanag.json", mig_out = ".";
    std::string mapping = "malpedia";
    mig_cmd->add_option("--artifact", mig_artifact, "artifact produced by build");
    mig_cmd->add_option("--mapping", mapping, "mapping id defining the alias subsets");
    mig_cmd->add_option("--out", mig_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (build->parsed()) {
            return cmd_build(global, manifest, rules_path, taxonomy_path, overrides_path,
                             out_dir, epoch);
        }
        if (query->parsed()) return cmd_query(global, artifact_path, query_name);
        if (stats->parsed()) return cmd_stats(global, stats_artifact, stats_out);
        if (bridges->parsed()) {
            return cmd_bridges(global, bridges_artifact, min_cluster_size, bridges_out);
        }
        if (exp->parsed()) {
            return cmd_export(global, export_artifact, format, cluster, export_out);
        }
        if (timeline->parsed()) {
            return cmd_timeline(global, timeline_artifact, start, end, timeline_out);
        }
        if (mig_cmd->parsed()) return cmd_mig(global, mig_artifact, mapping, mig_out);
    } catch (const hip::Error& e) {
        if (global.json_errors) {
            nlohmann::json err{{"error", {{"type", e.kind()}, {"message", e.what()}}}};
            std::cerr << err.dump() << "\n";
        } else {
            std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
        }
        return 2;
    } catch (const std::exception& e) {
        if (global.json_errors) {
            nlohmann::json err{{"error", {{"type", "Internal"}, {"message", e.what()}}}};
            std::cerr << err.dump() << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return 2;
    }
    return 1;
}
