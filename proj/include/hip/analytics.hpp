#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hip/stats.hpp"
#include "hip/tanag.hpp"

namespace hip {

struct SizeDistribution {
    std::map<int, long long> histogram;          // size -> cluster count
    std::vector<std::pair<int, double>> cdf;     // (size, cumulative fraction)
    double mean = 0.0;
    double median = 0.0;
    long long cluster_count = 0;

    // Fraction of clusters with size <= s (0 when the histogram is empty).
    double fraction_at_most(int s) const;
    double fraction_exactly(int s) const;
};

SizeDistribution distribution_from_sizes(const std::vector<int>& sizes);

// Histogram/CDF/mean/median over cluster sizes. Throws EmptyGraph.
SizeDistribution size_distribution(const Tanag& tanag);

// Malware Intelligence Gain: |cluster families| / |subcluster families|.
// Undefined (throws EmptySubclusterFamilies) when the subcluster has none.
double mig(const std::set<std::string>& subcluster_families,
           const std::set<std::string>& cluster_families);

// Family sets per attributed name (display form) and per cluster.
struct MalwareProfile {
    std::map<std::string, std::set<std::string>> per_name;
    std::map<int, std::set<std::string>> per_cluster;
};

MalwareProfile malware_profile(const Tanag& tanag, const AttributedCorpus& corpus);

struct MigPoint {
    std::string subcluster_canonical;  // display of the assertion's canonical
    int subcluster_size = 0;
    int cluster_id = 0;
    int cluster_size = 0;
    double relative_size = 0.0;
    double mig = 0.0;
};

struct MigProfile {
    std::vector<MigPoint> points;
    long long undefined_count = 0;  // subclusters with no known families
};

// One point per alias subset defined by the given mapping (canonical plus
// its asserted aliases), scored against the parent cluster's family union.
MigProfile mig_profile(const Tanag& tanag, const MalwareProfile& profile,
                       const AttributedCorpus& corpus, const std::string& mapping_id);

struct ClusterFeatureVector {
    long long n_r = 0;  // distinct reports citing any member
    long long n_v = 0;  // distinct vendors across those reports
    long long n_y = 0;  // distinct years
    long long n_g = 0;  // distinct geographies
    long long n_s = 0;  // distinct sectors
    int cluster_size = 0;
};

// Per-name report features aggregated to cluster level with distinct-set
// semantics: duplicating a record changes nothing.
std::map<int, ClusterFeatureVector> feature_vectors(const Tanag& tanag,
                                                    const AttributedCorpus& corpus);

struct CorrelationRow {
    std::string feature;
    std::optional<CorrelationResult> result;
    std::string error;  // set when the row's correlation is undefined
};

// One row per feature in {n_r, n_v, n_y, n_g, n_s}, correlated against
// cluster size. Per-row errors are captured, not thrown.
std::vector<CorrelationRow> correlation_table(
    const std::map<int, ClusterFeatureVector>& features);

struct Snapshot {
    int index = 0;
    int year_cutoff = 0;
    Tanag tanag;
    SizeDistribution distribution;  // empty-histogram form for empty graphs
    long long record_count = 0;
};

struct LongitudinalResult {
    std::vector<Snapshot> snapshots;
    long long undated_records = 0;
    long long undated_assertions = 0;
};

// Sub-dataset D_i = records and assertions whose earliest report year is
// <= start_year + i. Entries without a year are excluded and counted.
// Throws NoTimestampedRecords when nothing carries a year.
LongitudinalResult longitudinal(const AttributedCorpus& corpus, int start_year = 2000,
                                int end_year = 2025);

}  // namespace hip
