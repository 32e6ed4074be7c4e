#include "hip/artifact.hpp"

#include <algorithm>

#include "hip/errors.hpp"
#include "hip/util.hpp"

namespace hip {

namespace {

constexpr int kArtifactVersion = 1;
constexpr const char* kArtifactFormat = "hip-tanag";
constexpr const char* kGraphFormat = "hip-graph";

nlohmann::json name_to_json(const AttributedName& n) {
    return {{"id", n.display()}, {"vendor", n.vendor}, {"name", n.name}};
}

AttributedName name_from_json(const nlohmann::json& doc) {
    return {doc.at("vendor").get<std::string>(), doc.at("name").get<std::string>()};
}

nlohmann::json edge_to_json(const AliasEdge& e) {
    return {{"a", e.a.display()},
            {"b", e.b.display()},
            {"confidence", e.confidence},
            {"mapping_ids", e.mapping_ids}};
}

AttributedName name_from_display(const std::string& display) {
    auto pos = display.find(':');
    if (pos == std::string::npos) {
        throw ArtifactError("node id \"" + display + "\" is not in VENDOR:NAME form");
    }
    return {display.substr(0, pos), display.substr(pos + 1)};
}

}  // namespace

BuildResult run_pipeline(const PipelineConfig& config) {
    BuildResult result;
    result.rules = config.rules ? NormalizationRuleSet::load(*config.rules)
                                : NormalizationRuleSet::defaults();
    result.catalog = config.taxonomy_rules ? TaxonomyCatalog::load(*config.taxonomy_rules)
                                           : TaxonomyCatalog::defaults();
    result.overrides =
        config.overrides ? OverrideTable::load(*config.overrides) : OverrideTable::defaults();

    auto corpus = load_corpus(load_manifest(config.manifest));
    auto normalized = normalize_corpus(corpus, result.rules);
    result.corpus = attribute_corpus(normalized, result.catalog, result.overrides);
    result.tanag = Tanag::build(result.corpus);

    result.raw_corpus_summary.descriptors = corpus.descriptors;
    result.raw_corpus_summary.per_source = corpus.per_source;

    if (result.tanag.vertex_count() == 0) {
        throw EmptyGraph("pipeline produced no names (empty manifest or sources)");
    }
    return result;
}

nlohmann::json artifact_to_json(const BuildResult& result, std::optional<long long> epoch) {
    nlohmann::json doc;
    doc["format"] = kArtifactFormat;
    doc["version"] = kArtifactVersion;
    if (epoch) doc["epoch"] = *epoch;

    doc["rules"] = result.rules.to_json();
    doc["taxonomy_rules"] = result.catalog.to_json();
    doc["overrides"] = result.overrides.to_json();
    doc["digests"] = {
        {"rules", fnv1a64_hex(doc["rules"].dump())},
        {"taxonomy_rules", fnv1a64_hex(doc["taxonomy_rules"].dump())},
        {"overrides", fnv1a64_hex(doc["overrides"].dump())},
    };

    nlohmann::json sources = nlohmann::json::array();
    for (const auto& d : result.raw_corpus_summary.descriptors) {
        auto counts = result.raw_corpus_summary.per_source.at(d.id);
        sources.push_back({{"id", d.id},
                           {"kind", to_string(d.kind)},
                           {"path", d.path.string()},
                           {"format", to_string(d.format)},
                           {"records", counts.records},
                           {"assertions", counts.assertions}});
    }

    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : result.corpus.records) {
        nlohmann::json r;
        r["source"] = rec.source_id;
        r["raw_name"] = rec.raw_name;
        r["name"] = name_to_json(rec.name);
        if (!rec.malware_families.empty()) r["families"] = rec.malware_families;
        if (!rec.report_refs.empty()) {
            nlohmann::json refs = nlohmann::json::array();
            for (const auto& ref : rec.report_refs) {
                nlohmann::json j{{"key", ref.key}, {"year", ref.year}};
                if (ref.vendor) j["vendor"] = *ref.vendor;
                if (!ref.sectors.empty()) j["sectors"] = ref.sectors;
                if (!ref.geographies.empty()) j["geographies"] = ref.geographies;
                refs.push_back(std::move(j));
            }
            r["reports"] = std::move(refs);
        }
        records.push_back(std::move(r));
    }

    nlohmann::json assertions = nlohmann::json::array();
    for (const auto& a : result.corpus.assertions) {
        nlohmann::json j;
        j["mapping"] = a.mapping_id;
        j["canonical"] = a.canonical.display();
        nlohmann::json aliases = nlohmann::json::array();
        for (const auto& alias : a.aliases) aliases.push_back(alias.display());
        j["aliases"] = std::move(aliases);
        if (a.earliest_year) j["year"] = *a.earliest_year;
        assertions.push_back(std::move(j));
    }

    nlohmann::json variants;
    for (const auto& [canonical, raws] : result.corpus.variant_index) {
        variants[canonical] = raws;
    }

    doc["corpus"] = {{"sources", std::move(sources)},
                     {"records", std::move(records)},
                     {"assertions", std::move(assertions)},
                     {"variants", std::move(variants)}};
    doc["graph"] = graph_to_json(result.tanag);
    doc["summary"] = build_report(result);
    return doc;
}

void save_artifact(const BuildResult& result, const std::filesystem::path& path,
                   std::optional<long long> epoch) {
    write_file_atomic(path, artifact_to_json(result, epoch).dump(2) + "\n");
}

BuildResult load_artifact(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw ArtifactMissing("artifact not found: " + path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ArtifactError("cannot parse artifact " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != kArtifactFormat) {
        throw ArtifactError(path.string() + " is not a hip-tanag artifact");
    }
    if (doc.value("version", 0) != kArtifactVersion) {
        throw ArtifactError("unsupported artifact version in " + path.string());
    }

    BuildResult result;
    try {
        result.rules = NormalizationRuleSet::from_json(doc.at("rules"));
        result.catalog = TaxonomyCatalog::from_json(doc.at("taxonomy_rules"));
        result.overrides = OverrideTable::from_json(doc.at("overrides"));

        const auto& corpus = doc.at("corpus");
        for (const auto& s : corpus.at("sources")) {
            SourceDescriptor d;
            d.id = s.at("id").get<std::string>();
            d.kind = source_kind_from_string(s.at("kind").get<std::string>());
            d.format = source_format_from_string(s.at("format").get<std::string>());
            d.path = s.at("path").get<std::string>();
            result.raw_corpus_summary.per_source[d.id] = {s.at("records").get<long long>(),
                                                          s.at("assertions").get<long long>()};
            result.raw_corpus_summary.descriptors.push_back(std::move(d));
        }
        for (const auto& r : corpus.at("records")) {
            AttributedRecord rec;
            rec.source_id = r.at("source").get<std::string>();
            rec.raw_name = r.at("raw_name").get<std::string>();
            rec.name = name_from_json(r.at("name"));
            if (r.contains("families")) {
                rec.malware_families = r.at("families").get<std::set<std::string>>();
            }
            if (r.contains("reports")) {
                for (const auto& j : r.at("reports")) {
                    ReportRef ref;
                    ref.key = j.at("key").get<std::string>();
                    ref.year = j.at("year").get<int>();
                    if (j.contains("vendor")) ref.vendor = j.at("vendor").get<std::string>();
                    if (j.contains("sectors")) {
                        ref.sectors = j.at("sectors").get<std::set<std::string>>();
                    }
                    if (j.contains("geographies")) {
                        ref.geographies = j.at("geographies").get<std::set<std::string>>();
                    }
                    rec.report_refs.push_back(std::move(ref));
                }
            }
            result.corpus.records.push_back(std::move(rec));
        }
        for (const auto& a : corpus.at("assertions")) {
            AttributedAssertion assertion;
            assertion.mapping_id = a.at("mapping").get<std::string>();
            assertion.canonical = name_from_display(a.at("canonical").get<std::string>());
            for (const auto& alias : a.at("aliases")) {
                assertion.aliases.push_back(name_from_display(alias.get<std::string>()));
            }
            if (a.contains("year")) assertion.earliest_year = a.at("year").get<int>();
            result.corpus.assertions.push_back(std::move(assertion));
        }
        if (corpus.contains("variants")) {
            for (auto& [canonical, raws] : corpus.at("variants").items()) {
                result.corpus.variant_index[canonical] = raws.get<std::set<std::string>>();
            }
        }

        result.tanag = graph_from_json(doc.at("graph"));
    } catch (const nlohmann::json::exception& e) {
        throw ArtifactError("malformed artifact " + path.string() + ": " + e.what());
    }
    return result;
}

nlohmann::json build_report(const BuildResult& result) {
    nlohmann::json report;
    report["vertices"] = result.tanag.vertex_count();
    report["edges"] = result.tanag.edge_count();
    report["clusters"] = result.tanag.components().size();
    report["taxonomy"] = result.corpus.taxonomy_counts;

    nlohmann::json per_source;
    for (const auto& [id, counts] : result.raw_corpus_summary.per_source) {
        per_source[id] = {{"records", counts.records}, {"assertions", counts.assertions}};
    }
    report["sources"] = std::move(per_source);

    // Mapping sizes in the shape of the published mapping table: number of
    // assertions, average and maximum alias-list length.
    std::map<std::string, std::vector<int>> alias_counts;
    for (const auto& a : result.corpus.assertions) {
        alias_counts[a.mapping_id].push_back(static_cast<int>(a.aliases.size()));
    }
    nlohmann::json mappings;
    for (const auto& [id, counts] : alias_counts) {
        long long total = 0;
        int max = 0;
        for (int c : counts) {
            total += c;
            max = std::max(max, c);
        }
        mappings[id] = {{"size", counts.size()},
                        {"avg_aliases", static_cast<double>(total) / counts.size()},
                        {"max_aliases", max}};
    }
    report["mappings"] = std::move(mappings);

    nlohmann::json warnings = nlohmann::json::array();
    for (const auto& w : result.corpus.warnings) {
        warnings.push_back({{"source", w.source_id}, {"context", w.context},
                            {"message", w.message}});
    }
    report["normalization"] = {{"warnings", std::move(warnings)},
                               {"collapsed_aliases", result.corpus.collapsed_aliases},
                               {"removed_assertions", result.corpus.removed_assertions}};
    return report;
}

QueryResult query(const BuildResult& artifact, const std::string& raw) {
    QueryResult out;
    out.input_raw = raw;
    out.canonical = normalize(raw, artifact.rules);
    out.attributed = attribute(out.canonical, artifact.catalog, artifact.overrides);

    auto cid = artifact.tanag.cluster_id_of(out.attributed);
    if (!cid) {
        out.cluster_id = -1;
        out.members = {out.attributed};
        out.is_singleton = true;
        out.note = "name not present in the corpus; returning it as a singleton";
        return out;
    }
    const auto& cluster = artifact.tanag.cluster(*cid);
    out.cluster_id = *cid;
    out.members = cluster.members;
    out.edges = artifact.tanag.edges_in_cluster(*cid);
    out.is_singleton = cluster.size() == 1;
    return out;
}

nlohmann::json query_to_json(const QueryResult& q) {
    nlohmann::json doc;
    doc["input_raw"] = q.input_raw;
    doc["canonical"] = q.canonical;
    doc["attributed"] = name_to_json(q.attributed);
    doc["cluster_id"] = q.cluster_id;
    nlohmann::json members = nlohmann::json::array();
    for (const auto& m : q.members) members.push_back(m.display());
    doc["members"] = std::move(members);
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : q.edges) edges.push_back(edge_to_json(e));
    doc["edges"] = std::move(edges);
    doc["is_singleton"] = q.is_singleton;
    if (!q.note.empty()) doc["note"] = q.note;
    return doc;
}

ExportFormat export_format_from_string(const std::string& s) {
    if (s == "json") return ExportFormat::json;
    if (s == "dot") return ExportFormat::dot;
    if (s == "graphml") return ExportFormat::graphml;
    throw UnknownFormat("unknown export format \"" + s + "\" (expected json, dot or graphml)");
}

namespace {

struct GraphView {
    std::vector<AttributedName> vertices;
    std::vector<AliasEdge> edges;
};

GraphView view_of(const Tanag& tanag, std::optional<int> cluster_id) {
    GraphView view;
    if (!cluster_id) {
        view.vertices = tanag.vertices();
        view.edges = tanag.edges();
    } else {
        view.vertices = tanag.cluster(*cluster_id).members;  // throws UnknownClusterId
        view.edges = tanag.edges_in_cluster(*cluster_id);
    }
    return view;
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string export_dot(const GraphView& view) {
    std::string out = "graph tanag {\n";
    for (const auto& v : view.vertices) {
        out += "  " + dot_quote(v.display()) + " [vendor=" + dot_quote(v.vendor) + "];\n";
    }
    for (const auto& e : view.edges) {
        std::string mappings;
        for (const auto& id : e.mapping_ids) {
            if (!mappings.empty()) mappings += ';';
            mappings += id;
        }
        out += "  " + dot_quote(e.a.display()) + " -- " + dot_quote(e.b.display()) +
               " [confidence=" + std::to_string(e.confidence) +
               ", mapping_ids=" + dot_quote(mappings) + "];\n";
    }
    out += "}\n";
    return out;
}

std::string export_graphml(const GraphView& view) {
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n"
        "         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n"
        "         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
        "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
        "  <key id=\"vendor\" for=\"node\" attr.name=\"vendor\" attr.type=\"string\"/>\n"
        "  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n"
        "  <key id=\"confidence\" for=\"edge\" attr.name=\"confidence\" attr.type=\"int\"/>\n"
        "  <key id=\"mapping_ids\" for=\"edge\" attr.name=\"mapping_ids\" attr.type=\"string\"/>\n"
        "  <graph id=\"tanag\" edgedefault=\"undirected\">\n";
    for (const auto& v : view.vertices) {
        out += "    <node id=\"" + xml_escape(v.display()) + "\">\n";
        out += "      <data key=\"vendor\">" + xml_escape(v.vendor) + "</data>\n";
        out += "      <data key=\"name\">" + xml_escape(v.name) + "</data>\n";
        out += "    </node>\n";
    }
    std::size_t eid = 0;
    for (const auto& e : view.edges) {
        std::string mappings;
        for (const auto& id : e.mapping_ids) {
            if (!mappings.empty()) mappings += ';';
            mappings += id;
        }
        out += "    <edge id=\"e" + std::to_string(eid++) + "\" source=\"" +
               xml_escape(e.a.display()) + "\" target=\"" + xml_escape(e.b.display()) + "\">\n";
        out += "      <data key=\"confidence\">" + std::to_string(e.confidence) + "</data>\n";
        out += "      <data key=\"mapping_ids\">" + xml_escape(mappings) + "</data>\n";
        out += "    </edge>\n";
    }
    out += "  </graph>\n</graphml>\n";
    return out;
}

}  // namespace

nlohmann::json graph_to_json(const Tanag& tanag, std::optional<int> cluster_id) {
    auto view = view_of(tanag, cluster_id);
    nlohmann::json doc;
    doc["format"] = kGraphFormat;
    doc["version"] = kArtifactVersion;
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& v : view.vertices) nodes.push_back(name_to_json(v));
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : view.edges) edges.push_back(edge_to_json(e));
    nlohmann::json clusters = nlohmann::json::array();
    if (!cluster_id) {
        for (const auto& c : tanag.components()) {
            nlohmann::json members = nlohmann::json::array();
            for (const auto& m : c.members) members.push_back(m.display());
            clusters.push_back({{"id", c.id}, {"size", c.size()}, {"members", std::move(members)}});
        }
    }
    doc["nodes"] = std::move(nodes);
    doc["edges"] = std::move(edges);
    doc["clusters"] = std::move(clusters);
    return doc;
}

Tanag graph_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("format", "") != kGraphFormat) {
        throw ArtifactError("document is not a hip-graph export");
    }
    std::vector<AttributedName> vertices;
    for (const auto& n : doc.at("nodes")) vertices.push_back(name_from_json(n));
    std::vector<Tanag::EdgeSpec> edges;
    for (const auto& e : doc.at("edges")) {
        Tanag::EdgeSpec spec;
        spec.a = name_from_display(e.at("a").get<std::string>());
        spec.b = name_from_display(e.at("b").get<std::string>());
        spec.mapping_ids = e.at("mapping_ids").get<std::set<std::string>>();
        edges.push_back(std::move(spec));
    }
    return Tanag::from_graph(std::move(vertices), edges);
}

std::string export_graph(const Tanag& tanag, ExportFormat format,
                         std::optional<int> cluster_id) {
    switch (format) {
        case ExportFormat::json:
            return graph_to_json(tanag, cluster_id).dump(2) + "\n";
        case ExportFormat::dot:
            return export_dot(view_of(tanag, cluster_id));
        case ExportFormat::graphml:
            return export_graphml(view_of(tanag, cluster_id));
    }
    throw UnknownFormat("unhandled export format");
}

}  // namespace hip
