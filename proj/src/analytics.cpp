#include "hip/analytics.hpp"

#include <algorithm>

#include "hip/errors.hpp"

namespace hip {

double SizeDistribution::fraction_at_most(int s) const {
    if (cluster_count == 0) return 0.0;
    long long acc = 0;
    for (const auto& [size, count] : histogram) {
        if (size > s) break;
        acc += count;
    }
    return static_cast<double>(acc) / static_cast<double>(cluster_count);
}

double SizeDistribution::fraction_exactly(int s) const {
    if (cluster_count == 0) return 0.0;
    auto it = histogram.find(s);
    if (it == histogram.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(cluster_count);
}

SizeDistribution distribution_from_sizes(const std::vector<int>& sizes) {
    SizeDistribution out;
    out.cluster_count = static_cast<long long>(sizes.size());
    if (sizes.empty()) return out;

    long long total = 0;
    for (int s : sizes) {
        ++out.histogram[s];
        total += s;
    }
    long long acc = 0;
    for (const auto& [size, count] : out.histogram) {
        acc += count;
        out.cdf.emplace_back(size,
                             static_cast<double>(acc) / static_cast<double>(out.cluster_count));
    }
    out.mean = static_cast<double>(total) / static_cast<double>(out.cluster_count);

    std::vector<int> sorted = sizes;
    std::sort(sorted.begin(), sorted.end());
    auto n = sorted.size();
    out.median = (n % 2 == 1)
                     ? sorted[n / 2]
                     : (static_cast<double>(sorted[n / 2 - 1]) + sorted[n / 2]) / 2.0;
    return out;
}

SizeDistribution size_distribution(const Tanag& tanag) {
    if (tanag.vertex_count() == 0) {
        throw EmptyGraph("cannot compute a size distribution over an empty graph");
    }
    std::vector<int> sizes;
    sizes.reserve(tanag.components().size());
    for (const auto& c : tanag.components()) sizes.push_back(c.size());
    return distribution_from_sizes(sizes);
}

double mig(const std::set<std::string>& subcluster_families,
           const std::set<std::string>& cluster_families) {
    if (subcluster_families.empty()) {
        throw EmptySubclusterFamilies("MIG undefined: subcluster has no known families");
    }
    return static_cast<double>(cluster_families.size()) /
           static_cast<double>(subcluster_families.size());
}

MalwareProfile malware_profile(const Tanag& tanag, const AttributedCorpus& corpus) {
    MalwareProfile out;
    for (const auto& rec : corpus.records) {
        if (rec.malware_families.empty()) continue;
        auto& families = out.per_name[rec.name.display()];
        families.insert(rec.malware_families.begin(), rec.malware_families.end());
    }
    for (const auto& [display, families] : out.per_name) {
        auto pos = display.find(':');
        AttributedName name{display.substr(0, pos), display.substr(pos + 1)};
        if (auto cid = tanag.cluster_id_of(name)) {
            out.per_cluster[*cid].insert(families.begin(), families.end());
        }
    }
    return out;
}

MigProfile mig_profile(const Tanag& tanag, const MalwareProfile& profile,
                       const AttributedCorpus& corpus, const std::string& mapping_id) {
    MigProfile out;
    auto families_of = [&](const AttributedName& name) -> const std::set<std::string>* {
        auto it = profile.per_name.find(name.display());
        return it == profile.per_name.end() ? nullptr : &it->second;
    };

    for (const auto& assertion : corpus.assertions) {
        if (assertion.mapping_id != mapping_id) continue;
        auto cid = tanag.cluster_id_of(assertion.canonical);
        if (!cid) continue;
        auto cluster_it = profile.per_cluster.find(*cid);
        if (cluster_it == profile.per_cluster.end()) {
            ++out.undefined_count;
            continue;
        }

        std::set<std::string> sub_families;
        std::set<std::string> members;
        members.insert(assertion.canonical.display());
        if (auto* f = families_of(assertion.canonical)) {
            sub_families.insert(f->begin(), f->end());
        }
        for (const auto& alias : assertion.aliases) {
            members.insert(alias.display());
            if (auto* f = families_of(alias)) sub_families.insert(f->begin(), f->end());
        }
        if (sub_families.empty()) {
            ++out.undefined_count;
            continue;
        }

        const auto& parent = tanag.cluster(*cid);
        MigPoint point;
        point.subcluster_canonical = assertion.canonical.display();
        point.subcluster_size = static_cast<int>(members.size());
        point.cluster_id = *cid;
        point.cluster_size = parent.size();
        point.relative_size =
            static_cast<double>(members.size()) / static_cast<double>(parent.size());
        point.mig = mig(sub_families, cluster_it->second);
        out.points.push_back(std::move(point));
    }
    return out;
}

std::map<int, ClusterFeatureVector> feature_vectors(const Tanag& tanag,
                                                    const AttributedCorpus& corpus) {
    struct FeatureSets {
        std::set<std::string> reports;
        std::set<std::string> vendors;
        std::set<int> years;
        std::set<std::string> geographies;
        std::set<std::string> sectors;
    };
    std::map<int, FeatureSets> sets;

    for (const auto& rec : corpus.records) {
        auto cid = tanag.cluster_id_of(rec.name);
        if (!cid) continue;
        auto& fs = sets[*cid];
        for (const auto& ref : rec.report_refs) {
            fs.reports.insert(ref.key);
            if (ref.vendor) fs.vendors.insert(*ref.vendor);
            fs.years.insert(ref.year);
            fs.geographies.insert(ref.geographies.begin(), ref.geographies.end());
            fs.sectors.insert(ref.sectors.begin(), ref.sectors.end());
        }
    }

    std::map<int, ClusterFeatureVector> out;
    for (const auto& cluster : tanag.components()) {
        ClusterFeatureVector v;
        v.cluster_size = cluster.size();
        if (auto it = sets.find(cluster.id); it != sets.end()) {
            v.n_r = static_cast<long long>(it->second.reports.size());
            v.n_v = static_cast<long long>(it->second.vendors.size());
            v.n_y = static_cast<long long>(it->second.years.size());
            v.n_g = static_cast<long long>(it->second.geographies.size());
            v.n_s = static_cast<long long>(it->second.sectors.size());
        }
        out[cluster.id] = v;
    }
    return out;
}

std::vector<CorrelationRow> correlation_table(
    const std::map<int, ClusterFeatureVector>& features) {
    std::vector<double> sizes;
    sizes.reserve(features.size());
    for (const auto& [cid, v] : features) sizes.push_back(v.cluster_size);

    auto extract = [&](auto member) {
        std::vector<double> xs;
        xs.reserve(features.size());
        for (const auto& [cid, v] : features) {
            xs.push_back(static_cast<double>(v.*member));
        }
        return xs;
    };

    std::vector<std::pair<std::string, std::vector<double>>> columns = {
        {"n_r", extract(&ClusterFeatureVector::n_r)},
        {"n_v", extract(&ClusterFeatureVector::n_v)},
        {"n_y", extract(&ClusterFeatureVector::n_y)},
        {"n_g", extract(&ClusterFeatureVector::n_g)},
        {"n_s", extract(&ClusterFeatureVector::n_s)},
    };

    std::vector<CorrelationRow> table;
    for (auto& [feature, xs] : columns) {
        CorrelationRow row;
        row.feature = feature;
        try {
            row.result = correlate(xs, sizes);
        } catch (const Error& e) {
            row.error = e.what();
        }
        table.push_back(std::move(row));
    }
    return table;
}

LongitudinalResult longitudinal(const AttributedCorpus& corpus, int start_year, int end_year) {
    if (end_year < start_year) {
        throw ConfigError("end year precedes start year");
    }

    auto earliest_record_year = [](const AttributedRecord& rec) -> std::optional<int> {
        std::optional<int> year;
        for (const auto& ref : rec.report_refs) {
            if (!year || ref.year < *year) year = ref.year;
        }
        return year;
    };

    LongitudinalResult out;
    bool any_dated = false;
    for (const auto& rec : corpus.records) {
        if (earliest_record_year(rec)) any_dated = true;
        else ++out.undated_records;
    }
    for (const auto& assertion : corpus.assertions) {
        if (assertion.earliest_year) any_dated = true;
        else ++out.undated_assertions;
    }
    if (!any_dated) {
        throw NoTimestampedRecords("no record or assertion carries a report year");
    }

    for (int i = 0; i <= end_year - start_year; ++i) {
        int cutoff = start_year + i;
        AttributedCorpus slice;
        for (const auto& rec : corpus.records) {
            auto year = earliest_record_year(rec);
            if (year && *year <= cutoff) slice.records.push_back(rec);
        }
        for (const auto& assertion : corpus.assertions) {
            if (assertion.earliest_year && *assertion.earliest_year <= cutoff) {
                slice.assertions.push_back(assertion);
            }
        }

        Snapshot snap;
        snap.index = i;
        snap.year_cutoff = cutoff;
        snap.record_count = static_cast<long long>(slice.records.size());
        snap.tanag = Tanag::build(slice);
        std::vector<int> sizes;
        for (const auto& c : snap.tanag.components()) sizes.push_back(c.size());
        snap.distribution = distribution_from_sizes(sizes);
        out.snapshots.push_back(std::move(snap));
    }
    return out;
}

}  // namespace hip
