#include "hip/normalize.hpp"

#include <algorithm>

#include "hip/default_rules.hpp"
#include "hip/errors.hpp"
#include "hip/util.hpp"

namespace hip {

namespace {

// Name separators per the canonical-form convention: whitespace (incl. line
// breaks), dashes, underscores and slashes. Parentheses also delimit tokens
// so that a non-vendor parenthesized tail ("Black Energy (Group)") feeds its
// content to the collective-suffix rule instead of surviving collapse.
bool is_separator(char c) {
    switch (c) {
        case ' ': case '\t': case '\r': case '\n': case '\v': case '\f':
        case '-': case '_': case '/': case '\\':
        case '(': case ')':
            return true;
        default:
            return false;
    }
}

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : s) {
        if (is_separator(c)) {
            if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
        } else {
            cur += (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::string concat(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) out += tokens[i];
    return out;
}

bool is_canonical_form(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (is_separator(c)) return false;
        if (c >= 'a' && c <= 'z') return false;
    }
    return true;
}

// Strips a trailing "(VENDOR)" tag from the raw string when the token inside
// the parentheses canonicalizes to a known vendor name.
std::string_view strip_vendor_tag(std::string_view s, const NormalizationRuleSet& rules) {
    if (s.empty() || s.back() != ')') return s;
    auto open = s.rfind('(');
    if (open == std::string_view::npos) return s;
    auto inner = tokenize(s.substr(open + 1, s.size() - open - 2));
    auto token = concat(inner, 0, inner.size());
    if (token.empty() || !rules.vendor_tokens.count(token)) return s;
    return trim(s.substr(0, open));
}

}  // namespace

std::string normalize(std::string_view raw, const NormalizationRuleSet& rules) {
    auto s = trim(raw);
    if (s.empty()) {
        throw EmptyAfterNormalization("name is empty after trimming whitespace");
    }

    s = strip_vendor_tag(s, rules);
    auto tokens = tokenize(s);
    if (tokens.empty()) {
        throw EmptyAfterNormalization("\"" + std::string(raw) +
                                      "\" reduces to an empty name");
    }

    std::size_t begin = 0, end = tokens.size();

    // Leading prefix, at most once; never fires when it would consume the
    // whole name (idempotence: normalize must accept its own output).
    for (const auto& prefix : rules.prefixes) {
        bool matched = false;
        for (std::size_t k = 1; k < end - begin; ++k) {
            auto head = concat(tokens, begin, begin + k);
            if (head.size() > prefix.size()) break;
            if (head == prefix) {
                begin += k;
                matched = true;
                break;
            }
        }
        if (matched) break;
    }

    // Trailing collective suffix, at most once, longest match first so
    // compound terms ("Cyberespionage Group") strip in one pass. The suffix
    // must be a run of whole tokens in the raw spelling, which keeps names
    // like APT32 intact, and the remainder must keep at least 3 characters.
    {
        std::size_t best_k = 0;
        std::size_t best_len = 0;
        for (const auto& suffix : rules.suffixes) {
            for (std::size_t k = 1; k < end - begin; ++k) {
                auto tail = concat(tokens, end - k, end);
                if (tail.size() > suffix.size()) break;
                if (tail == suffix) {
                    if (suffix.size() > best_len &&
                        concat(tokens, begin, end - k).size() >= 3) {
                        best_k = k;
                        best_len = suffix.size();
                    }
                    break;
                }
            }
        }
        end -= best_k;
    }

    auto canonical = concat(tokens, begin, end);
    if (auto it = rules.misspellings.find(canonical); it != rules.misspellings.end()) {
        canonical = it->second;
    }
    return canonical;
}

NormalizationRuleSet NormalizationRuleSet::defaults() {
    return from_json(nlohmann::json::parse(kDefaultNormalizationRules));
}

NormalizationRuleSet NormalizationRuleSet::from_json(const nlohmann::json& doc) {
    NormalizationRuleSet rules;
    if (!doc.is_object()) {
        throw ConfigError("normalization rules must be a JSON object");
    }
    if (doc.contains("misspellings")) {
        for (auto& [k, v] : doc.at("misspellings").items()) {
            rules.misspellings[k] = v.get<std::string>();
        }
    }
    if (doc.contains("prefixes")) {
        rules.prefixes = doc.at("prefixes").get<std::vector<std::string>>();
    }
    if (doc.contains("suffixes")) {
        rules.suffixes = doc.at("suffixes").get<std::vector<std::string>>();
    }
    if (doc.contains("vendor_tokens")) {
        for (auto& v : doc.at("vendor_tokens")) {
            rules.vendor_tokens.insert(v.get<std::string>());
        }
    }
    rules.validate();
    return rules;
}

NormalizationRuleSet NormalizationRuleSet::load(const std::filesystem::path& path) {
    auto text = read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse rules file " + path.string() + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json NormalizationRuleSet::to_json() const {
    nlohmann::json doc;
    doc["misspellings"] = misspellings;
    doc["prefixes"] = prefixes;
    doc["suffixes"] = suffixes;
    doc["vendor_tokens"] = vendor_tokens;
    return doc;
}

void NormalizationRuleSet::validate() const {
    for (const auto& [wrong, right] : misspellings) {
        if (!is_canonical_form(wrong) || !is_canonical_form(right)) {
            throw ConfigError("misspelling entry not in canonical form: \"" + wrong +
                              "\" -> \"" + right + "\"");
        }
        if (wrong == right) {
            throw ConfigError("misspelling entry maps to itself: \"" + wrong + "\"");
        }
        if (misspellings.count(right)) {
            throw ConfigError("misspelling map is not idempotent: \"" + right +
                              "\" is both a correction and a key");
        }
    }
    for (const auto& p : prefixes) {
        if (!is_canonical_form(p)) throw ConfigError("prefix not in canonical form: " + p);
    }
    for (const auto& s : suffixes) {
        if (!is_canonical_form(s)) throw ConfigError("suffix not in canonical form: " + s);
    }
    for (const auto& v : vendor_tokens) {
        if (!is_canonical_form(v)) throw ConfigError("vendor token not in canonical form: " + v);
    }
}

NormalizedCorpus normalize_corpus(const Corpus& corpus, const NormalizationRuleSet& rules) {
    NormalizedCorpus out;

    auto normalize_or_warn = [&](const std::string& raw, const std::string& source_id,
                                 const std::string& context) -> std::optional<std::string> {
        try {
            auto canonical = normalize(raw, rules);
            out.variant_index[canonical].insert(raw);
            return canonical;
        } catch (const EmptyAfterNormalization& e) {
            out.warnings.push_back({source_id, context, e.what()});
            return std::nullopt;
        }
    };

    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
        const auto& rec = corpus.records[i];
        auto ctx = rec.source_id + " record #" + std::to_string(i);
        auto canonical = normalize_or_warn(rec.raw_name, rec.source_id, ctx);
        if (!canonical) continue;
        NormalizedRecord nr;
        nr.source_id = rec.source_id;
        nr.raw_name = rec.raw_name;
        nr.canonical = *canonical;
        nr.malware_families = rec.malware_families;
        nr.report_refs = rec.report_refs;
        out.records.push_back(std::move(nr));
    }

    for (const auto& assertion : corpus.assertions) {
        auto ctx = assertion.mapping_id + " assertion \"" + assertion.canonical_raw + "\"";
        auto canonical = normalize_or_warn(assertion.canonical_raw, assertion.mapping_id, ctx);
        if (!canonical) continue;

        NormalizedAssertion na;
        na.mapping_id = assertion.mapping_id;
        na.canonical = *canonical;
        na.earliest_year = assertion.earliest_year;
        std::set<std::string> seen;
        for (const auto& raw_alias : assertion.alias_raws) {
            auto alias = normalize_or_warn(raw_alias, assertion.mapping_id, ctx);
            if (!alias) continue;
            if (*alias == *canonical) {
                ++out.collapsed_aliases;
                continue;
            }
            if (seen.insert(*alias).second) {
                na.aliases.push_back(*alias);
            }
        }
        if (na.aliases.empty()) {
            ++out.removed_assertions;
            continue;
        }
        out.assertions.push_back(std::move(na));
    }

    return out;
}

}  // namespace hip
