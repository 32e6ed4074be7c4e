#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hip {

enum class SourceKind { taxonomy, mapping, reports, mixed };

enum class SourceFormat { misp_galaxy, malpedia, microsoft, generic_csv };

SourceKind source_kind_from_string(const std::string& s);
SourceFormat source_format_from_string(const std::string& s);
std::string to_string(SourceKind k);
std::string to_string(SourceFormat f);

struct SourceDescriptor {
    std::string id;
    SourceKind kind = SourceKind::mixed;
    std::filesystem::path path;
    SourceFormat format = SourceFormat::generic_csv;
};

// One CTI report citation attached to a record. `key` identifies the report
// across records: sources may cite the same report for several TA names and
// feature extraction must count it once.
struct ReportRef {
    int year = 0;
    std::optional<std::string> vendor;
    std::set<std::string> sectors;
    std::set<std::string> geographies;
    std::string key;
};

// A TA entry exactly as it appears in a source file; no normalization yet.
struct RawSourceRecord {
    std::string source_id;
    std::string raw_name;
    std::vector<std::string> aliases;
    std::set<std::string> malware_families;
    std::vector<ReportRef> report_refs;
    std::map<std::string, std::string> meta;
};

// A claim "canonical_raw has aliases alias_raws", attributed to one mapping.
struct MappingAssertion {
    std::string mapping_id;
    std::string canonical_raw;
    std::vector<std::string> alias_raws;
    // Earliest report year of the record the assertion came from, when known.
    // Drives the longitudinal sub-dataset cutoffs.
    std::optional<int> earliest_year;
};

struct SourceCounts {
    long long records = 0;
    long long assertions = 0;
};

struct Corpus {
    std::vector<SourceDescriptor> descriptors;  // sorted by id
    std::vector<RawSourceRecord> records;       // source id order, then file order
    std::vector<MappingAssertion> assertions;
    std::map<std::string, SourceCounts> per_source;
};

}  // namespace hip
