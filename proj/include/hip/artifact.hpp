#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hip/analytics.hpp"
#include "hip/ingest.hpp"
#include "hip/tanag.hpp"
#include "json.hpp"

namespace hip {

// Everything produced by one pipeline run. The rule documents used for the
// run ride along so queries against the saved artifact replay the exact
// same normalization and attribution, never the defaults on disk.
struct BuildResult {
    AttributedCorpus corpus;
    Tanag tanag;
    NormalizationRuleSet rules;
    TaxonomyCatalog catalog;
    OverrideTable overrides;
    Corpus raw_corpus_summary;  // descriptors + per-source counts only
};

struct PipelineConfig {
    std::filesystem::path manifest;
    std::optional<std::filesystem::path> rules;
    std::optional<std::filesystem::path> taxonomy_rules;
    std::optional<std::filesystem::path> overrides;
};

// load -> normalize -> attribute -> build. Throws EmptyGraph when the
// manifest yields no names at all.
BuildResult run_pipeline(const PipelineConfig& config);

nlohmann::json artifact_to_json(const BuildResult& result,
                                std::optional<long long> epoch = std::nullopt);
void save_artifact(const BuildResult& result, const std::filesystem::path& path,
                   std::optional<long long> epoch = std::nullopt);

// Throws ArtifactMissing when the file does not exist, ArtifactError on a
// version or schema mismatch.
BuildResult load_artifact(const std::filesystem::path& path);

nlohmann::json build_report(const BuildResult& result);

struct QueryResult {
    std::string input_raw;
    std::string canonical;
    AttributedName attributed;
    int cluster_id = -1;  // -1 when the name is not a vertex
    std::vector<AttributedName> members;
    std::vector<AliasEdge> edges;
    bool is_singleton = false;
    std::string note;
};

// Normalizes and attributes `raw` with the artifact's own rules, then
// returns its cluster. Unknown names yield a singleton result with a note.
QueryResult query(const BuildResult& artifact, const std::string& raw);

nlohmann::json query_to_json(const QueryResult& q);

enum class ExportFormat { json, dot, graphml };
ExportFormat export_format_from_string(const std::string& s);  // UnknownFormat

// Serializes the graph (or one cluster of it) in the requested format.
std::string export_graph(const Tanag& tanag, ExportFormat format,
                         std::optional<int> cluster_id = std::nullopt);

nlohmann::json graph_to_json(const Tanag& tanag, std::optional<int> cluster_id = std::nullopt);
Tanag graph_from_json(const nlohmann::json& doc);

}  // namespace hip
