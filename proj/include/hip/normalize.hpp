#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hip/corpus.hpp"
#include "json.hpp"

namespace hip {

// The canonicalization rule set. All entries are stored in final canonical
// form (uppercase, separator-free) so matching is case- and
// separator-insensitive by construction.
struct NormalizationRuleSet {
    std::map<std::string, std::string> misspellings;  // wrong -> right
    std::vector<std::string> prefixes;                // default: THE
    std::vector<std::string> suffixes;                // collective terms
    std::set<std::string> vendor_tokens;              // parenthesized vendor tags

    static NormalizationRuleSet defaults();
    static NormalizationRuleSet from_json(const nlohmann::json& doc);
    static NormalizationRuleSet load(const std::filesystem::path& path);

    nlohmann::json to_json() const;

    // Throws ConfigError when an entry is not in canonical form, a key maps
    // to itself, or the misspelling map is not idempotent.
    void validate() const;
};

// Canonicalizes one raw TA name. Pipeline order: trailing parenthesized
// vendor tag, separator collapse + uppercase, leading prefix, trailing
// collective suffix, misspelling lookup. Deterministic and idempotent.
// Throws EmptyAfterNormalization when nothing is left.
std::string normalize(std::string_view raw, const NormalizationRuleSet& rules);

struct NormalizedRecord {
    std::string source_id;
    std::string raw_name;
    std::string canonical;
    std::set<std::string> malware_families;
    std::vector<ReportRef> report_refs;
};

struct NormalizedAssertion {
    std::string mapping_id;
    std::string canonical;
    std::vector<std::string> aliases;  // canonical, deduplicated, != canonical
    std::optional<int> earliest_year;
};

struct NormalizationWarning {
    std::string source_id;
    std::string context;  // offending raw string or record reference
    std::string message;
};

struct NormalizedCorpus {
    std::vector<NormalizedRecord> records;
    std::vector<NormalizedAssertion> assertions;
    // canonical -> set of raw spellings observed for it
    std::map<std::string, std::set<std::string>> variant_index;
    std::vector<NormalizationWarning> warnings;
    long long collapsed_aliases = 0;   // aliases dropped: equal to their canonical
    long long removed_assertions = 0;  // assertions left with zero aliases
};

// Rewrites every raw name in the corpus with its canonical form. Names that
// reduce to nothing are dropped and reported as warnings with record context.
NormalizedCorpus normalize_corpus(const Corpus& corpus, const NormalizationRuleSet& rules);

}  // namespace hip
