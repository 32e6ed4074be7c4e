#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "hip/analytics.hpp"
#include "hip/artifact.hpp"
#include "hip/errors.hpp"
#include "hip/normalize.hpp"
#include "hip/stats.hpp"
#include "hip/tanag.hpp"

namespace py = pybind11;
using namespace hip;

namespace {

AttributedName name_from_display(const std::string& display) {
    auto pos = display.find(':');
    if (pos == std::string::npos) {
        throw UnknownEdge("expected VENDOR:NAME, got \"" + display + "\"");
    }
    return {display.substr(0, pos), display.substr(pos + 1)};
}

py::dict edge_dict(const AliasEdge& e) {
    py::dict d;
    d["a"] = e.a.display();
    d["b"] = e.b.display();
    d["confidence"] = e.confidence;
    d["mapping_ids"] = e.mapping_ids;
    return d;
}

py::dict distribution_dict(const SizeDistribution& dist) {
    py::dict d;
    d["histogram"] = dist.histogram;
    py::list cdf;
    for (const auto& [size, frac] : dist.cdf) cdf.append(py::make_tuple(size, frac));
    d["cdf"] = cdf;
    d["mean"] = dist.mean;
    d["median"] = dist.median;
    d["clusters"] = dist.cluster_count;
    return d;
}

py::dict correlation_dict(const CorrelationResult& r) {
    py::dict d;
    d["pearson_r"] = r.pearson_r;
    d["spearman_rho"] = r.spearman_rho;
    d["kendall_tau"] = r.kendall_tau;
    d["p_pearson"] = r.p_pearson;
    d["p_spearman"] = r.p_spearman;
    d["p_kendall"] = r.p_kendall;
    return d;
}

// Python-facing handle over one built pipeline result.
class Graph {
public:
    explicit Graph(BuildResult result) : result_(std::move(result)) {}

    std::size_t vertex_count() const { return result_.tanag.vertex_count(); }
    std::size_t edge_count() const { return result_.tanag.edge_count(); }
    std::size_t cluster_count() const { return result_.tanag.components().size(); }

    std::vector<std::vector<std::string>> clusters() const {
        std::vector<std::vector<std::string>> out;
        for (const auto& c : result_.tanag.components()) {
            std::vector<std::string> members;
            for (const auto& m : c.members) members.push_back(m.display());
            out.push_back(std::move(members));
        }
        return out;
    }

    py::list edges() const {
        py::list out;
        for (const auto& e : result_.tanag.edges()) out.append(edge_dict(e));
        return out;
    }

    py::object query_name(const std::string& raw) const {
        auto q = hip::query(result_, raw);
        py::dict d;
        d["input_raw"] = q.input_raw;
        d["canonical"] = q.canonical;
        d["attributed"] = q.attributed.display();
        d["cluster_id"] = q.cluster_id;
        py::list members;
        for (const auto& m : q.members) members.append(m.display());
        d["members"] = members;
        py::list edges;
        for (const auto& e : q.edges) edges.append(edge_dict(e));
        d["edges"] = edges;
        d["is_singleton"] = q.is_singleton;
        if (!q.note.empty()) d["note"] = q.note;
        return d;
    }

    py::list bridges() const {
        py::list out;
        for (const auto& e : result_.tanag.bridges()) out.append(edge_dict(e));
        return out;
    }

    py::dict what_if_remove(const std::string& a, const std::string& b) const {
        auto report = result_.tanag.what_if_remove(name_from_display(a), name_from_display(b));
        py::dict d;
        d["edge"] = edge_dict(report.edge);
        d["cluster_id"] = report.cluster_id;
        d["pairs_before"] = report.pairs_before;
        d["pairs_after"] = report.pairs_after;
        d["reduction"] = report.reduction;
        py::list parts;
        for (const auto& c : report.resulting) {
            py::list members;
            for (const auto& m : c.members) members.append(m.display());
            parts.append(members);
        }
        d["resulting"] = parts;
        return d;
    }

    py::dict size_distribution() const {
        return distribution_dict(hip::size_distribution(result_.tanag));
    }

    py::list mig_profile(const std::string& mapping_id) const {
        auto profile = malware_profile(result_.tanag, result_.corpus);
        auto mp = hip::mig_profile(result_.tanag, profile, result_.corpus, mapping_id);
        py::list out;
        for (const auto& p : mp.points) {
            py::dict d;
            d["subcluster"] = p.subcluster_canonical;
            d["subcluster_size"] = p.subcluster_size;
            d["cluster_id"] = p.cluster_id;
            d["cluster_size"] = p.cluster_size;
            d["relative_size"] = p.relative_size;
            d["mig"] = p.mig;
            out.append(d);
        }
        return out;
    }

    py::dict feature_vectors() const {
        auto features = hip::feature_vectors(result_.tanag, result_.corpus);
        py::dict out;
        for (const auto& [cid, v] : features) {
            py::dict d;
            d["n_r"] = v.n_r;
            d["n_v"] = v.n_v;
            d["n_y"] = v.n_y;
            d["n_g"] = v.n_g;
            d["n_s"] = v.n_s;
            d["cluster_size"] = v.cluster_size;
            out[py::int_(cid)] = d;
        }
        return out;
    }

    py::list correlation_table() const {
        auto features = hip::feature_vectors(result_.tanag, result_.corpus);
        py::list out;
        for (const auto& row : hip::correlation_table(features)) {
            py::dict d;
            d["feature"] = row.feature;
            if (row.result) {
                d["result"] = correlation_dict(*row.result);
            } else {
                d["error"] = row.error;
            }
            out.append(d);
        }
        return out;
    }

    py::list timeline(int start_year, int end_year) const {
        auto lon = longitudinal(result_.corpus, start_year, end_year);
        py::list out;
        for (const auto& snap : lon.snapshots) {
            py::dict d;
            d["year"] = snap.year_cutoff;
            d["vertices"] = snap.tanag.vertex_count();
            d["histogram"] = snap.distribution.histogram;
            out.append(d);
        }
        return out;
    }

    void save(const std::filesystem::path& path) const { save_artifact(result_, path); }

    std::string export_format(const std::string& format, std::optional<int> cluster) const {
        return export_graph(result_.tanag, export_format_from_string(format), cluster);
    }

private:
    BuildResult result_;
};

Graph build(const std::filesystem::path& manifest,
            std::optional<std::filesystem::path> rules,
            std::optional<std::filesystem::path> taxonomy_rules,
            std::optional<std::filesystem::path> overrides) {
    PipelineConfig config;
    config.manifest = manifest;
    config.rules = rules;
    config.taxonomy_rules = taxonomy_rules;
    config.overrides = overrides;
    return Graph(run_pipeline(config));
}

Graph load(const std::filesystem::path& path) { return Graph(load_artifact(path)); }

}  // namespace

PYBIND11_MODULE(_hip, m) {
    m.doc() = "Threat actor name normalization, alias graph construction, and analytics";

    py::register_exception<Error>(m, "HipError");

    m.def(
        "normalize",
        [](const std::string& raw, std::optional<std::filesystem::path> rules_path) {
            auto rules = rules_path ? NormalizationRuleSet::load(*rules_path)
                                    : NormalizationRuleSet::defaults();
            return normalize(raw, rules);
        },
        py::arg("raw"), py::arg("rules") = py::none(),
        "Canonicalize a raw TA name (uppercase, separator-free, rules applied).");

    m.def(
        "attribute",
        [](const std::string& canonical) {
            auto name = attribute(canonical, TaxonomyCatalog::defaults(),
                                  OverrideTable::defaults());
            return name.display();
        },
        py::arg("canonical"),
        "Attribute a canonical name to a vendor taxonomy; returns VENDOR:NAME.");

    m.def("alias_pair_count",
          static_cast<long long (*)(int)>(&alias_pair_count), py::arg("cluster_size"),
          "Unordered alias pairs implied by transitive closure: n*(n-1)/2.");

    m.def(
        "mig",
        [](const std::set<std::string>& sub, const std::set<std::string>& cluster) {
            return mig(sub, cluster);
        },
        py::arg("subcluster_families"), py::arg("cluster_families"),
        "Malware Intelligence Gain: |cluster families| / |subcluster families|.");

    m.def(
        "correlate",
        [](const std::vector<double>& xs, const std::vector<double>& ys) {
            return correlation_dict(correlate(xs, ys));
        },
        py::arg("xs"), py::arg("ys"),
        "Pearson, Spearman and Kendall tau-b with two-sided p-values.");

    m.def("build", &build, py::arg("manifest"), py::arg("rules") = py::none(),
          py::arg("taxonomy_rules") = py::none(), py::arg("overrides") = py::none(),
          "Run the full pipeline over a corpus manifest and return the graph.");

    m.def("load", &load, py::arg("path"), "Load a graph artifact written by build/save.");

    py::class_<Graph>(m, "Graph")
        .def_property_readonly("vertex_count", &Graph::vertex_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def_property_readonly("cluster_count", &Graph::cluster_count)
        .def("clusters", &Graph::clusters, "Cluster members, largest cluster first.")
        .def("edges", &Graph::edges)
        .def("query", &Graph::query_name, py::arg("raw"),
             "Resolve a raw name to its alias cluster with full edge provenance.")
        .def("bridges", &Graph::bridges, "Cut edges in deterministic order.")
        .def("what_if_remove", &Graph::what_if_remove, py::arg("a"), py::arg("b"),
             "Impact of removing one edge: resulting components and pair counts.")
        .def("size_distribution", &Graph::size_distribution)
        .def("mig_profile", &Graph::mig_profile, py::arg("mapping_id") = "malpedia")
        .def("feature_vectors", &Graph::feature_vectors)
        .def("correlation_table", &Graph::correlation_table)
        .def("timeline", &Graph::timeline, py::arg("start_year") = 2000,
             py::arg("end_year") = 2025)
        .def("save", &Graph::save, py::arg("path"))
        .def("export", &Graph::export_format, py::arg("format"),
             py::arg("cluster") = py::none(),
             "Serialize the graph (or one cluster) as json, dot or graphml text.");

#ifdef VERSION_INFO
#define HIP_STR(x) #x
#define HIP_XSTR(x) HIP_STR(x)
    m.attr("__version__") = HIP_XSTR(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
