#pragma once

#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "hip/normalize.hpp"
#include "json.hpp"

namespace hip {

// Canonical name tagged with the vendor taxonomy it belongs to; "UNK" when
// no taxonomy claims it. Display form VENDOR:NAME is the graph node id.
struct AttributedName {
    std::string vendor;
    std::string name;

    std::string display() const { return vendor + ":" + name; }

    bool operator==(const AttributedName& other) const {
        return vendor == other.vendor && name == other.name;
    }
    bool operator<(const AttributedName& other) const {
        return display() < other.display();
    }
};

struct TaxonomyRule {
    enum class Kind { pattern, list };

    std::string vendor;
    Kind kind = Kind::pattern;
    std::string pattern;             // kind == pattern
    std::set<std::string> names;     // kind == list
    int priority = 0;                // lower wins

    bool matches(const std::string& canonical) const;

private:
    friend struct TaxonomyCatalog;
    std::regex compiled_;
};

struct TaxonomyCatalog {
    std::vector<TaxonomyRule> rules;  // sorted by priority

    static TaxonomyCatalog defaults();
    static TaxonomyCatalog from_json(const nlohmann::json& doc);
    static TaxonomyCatalog load(const std::filesystem::path& path);

    nlohmann::json to_json() const;
    std::set<std::string> vendors() const;
};

struct OverrideTable {
    std::map<std::string, std::string> entries;  // canonical name -> vendor

    static OverrideTable defaults();
    static OverrideTable from_json(const nlohmann::json& doc);
    static OverrideTable load(const std::filesystem::path& path);

    nlohmann::json to_json() const;

    // Overrides must reference a vendor known to the catalog (or UNK).
    void validate(const TaxonomyCatalog& catalog) const;
};

// Total: override first, then lowest-priority matching rule, then UNK.
AttributedName attribute(const std::string& canonical, const TaxonomyCatalog& catalog,
                         const OverrideTable& overrides);

struct AttributedRecord {
    std::string source_id;
    std::string raw_name;
    AttributedName name;
    std::set<std::string> malware_families;
    std::vector<ReportRef> report_refs;
};

struct AttributedAssertion {
    std::string mapping_id;
    AttributedName canonical;
    std::vector<AttributedName> aliases;
    std::optional<int> earliest_year;
};

struct AttributedCorpus {
    std::vector<AttributedRecord> records;
    std::vector<AttributedAssertion> assertions;
    std::map<std::string, std::set<std::string>> variant_index;
    std::map<std::string, long long> taxonomy_counts;  // vendor -> distinct names
    std::vector<NormalizationWarning> warnings;
    long long collapsed_aliases = 0;
    long long removed_assertions = 0;
};

AttributedCorpus attribute_corpus(const NormalizedCorpus& nc, const TaxonomyCatalog& catalog,
                                  const OverrideTable& overrides);

}  // namespace hip
