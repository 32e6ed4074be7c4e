#include "hip/attribute.hpp"

#include <algorithm>

#include "hip/default_rules.hpp"
#include "hip/errors.hpp"
#include "hip/util.hpp"

namespace hip {

bool TaxonomyRule::matches(const std::string& canonical) const {
    if (kind == Kind::list) return names.count(canonical) > 0;
    return std::regex_match(canonical, compiled_);
}

TaxonomyCatalog TaxonomyCatalog::defaults() {
    return from_json(nlohmann::json::parse(kDefaultTaxonomyRules));
}

TaxonomyCatalog TaxonomyCatalog::from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) {
        throw ConfigError("taxonomy rules must be a JSON array");
    }
    TaxonomyCatalog catalog;
    std::set<int> priorities;
    for (const auto& entry : doc) {
        TaxonomyRule rule;
        rule.vendor = entry.at("vendor").get<std::string>();
        if (rule.vendor.empty()) throw ConfigError("taxonomy rule with empty vendor");
        rule.priority = entry.at("priority").get<int>();
        if (!priorities.insert(rule.priority).second) {
            throw ConfigError("duplicate taxonomy rule priority " +
                              std::to_string(rule.priority));
        }
        auto kind = entry.at("kind").get<std::string>();
        if (kind == "pattern") {
            rule.kind = TaxonomyRule::Kind::pattern;
            rule.pattern = entry.at("value").get<std::string>();
            try {
                rule.compiled_ = std::regex(rule.pattern, std::regex::ECMAScript);
            } catch (const std::regex_error& e) {
                throw ConfigError("taxonomy pattern for " + rule.vendor +
                                  " does not compile: " + e.what());
            }
        } else if (kind == "list") {
            rule.kind = TaxonomyRule::Kind::list;
            for (const auto& n : entry.at("value")) {
                rule.names.insert(n.get<std::string>());
            }
        } else {
            throw ConfigError("taxonomy rule kind must be \"pattern\" or \"list\", got \"" +
                              kind + "\"");
        }
        catalog.rules.push_back(std::move(rule));
    }
    std::sort(catalog.rules.begin(), catalog.rules.end(),
              [](const TaxonomyRule& a, const TaxonomyRule& b) {
                  return a.priority < b.priority;
              });
    return catalog;
}

TaxonomyCatalog TaxonomyCatalog::load(const std::filesystem::path& path) {
    auto text = read_file(path);
    try {
        return from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse taxonomy rules " + path.string() + ": " + e.what());
    }
}

nlohmann::json TaxonomyCatalog::to_json() const {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& rule : rules) {
        nlohmann::json entry;
        entry["vendor"] = rule.vendor;
        entry["priority"] = rule.priority;
        if (rule.kind == TaxonomyRule::Kind::pattern) {
            entry["kind"] = "pattern";
            entry["value"] = rule.pattern;
        } else {
            entry["kind"] = "list";
            entry["value"] = rule.names;
        }
        doc.push_back(std::move(entry));
    }
    return doc;
}

std::set<std::string> TaxonomyCatalog::vendors() const {
    std::set<std::string> out;
    for (const auto& rule : rules) out.insert(rule.vendor);
    return out;
}

OverrideTable OverrideTable::defaults() {
    return from_json(nlohmann::json::parse(kDefaultOverrides));
}

OverrideTable OverrideTable::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("override table must be a JSON object");
    OverrideTable table;
    for (auto& [name, vendor] : doc.items()) {
        table.entries[name] = vendor.get<std::string>();
    }
    return table;
}

OverrideTable OverrideTable::load(const std::filesystem::path& path) {
    auto text = read_file(path);
    try {
        return from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse overrides " + path.string() + ": " + e.what());
    }
}

nlohmann::json OverrideTable::to_json() const {
    return nlohmann::json(entries);
}

void OverrideTable::validate(const TaxonomyCatalog& catalog) const {
    auto known = catalog.vendors();
    for (const auto& [name, vendor] : entries) {
        if (vendor != "UNK" && !known.count(vendor)) {
            throw ConfigError("override \"" + name + "\" references unknown vendor \"" +
                              vendor + "\"");
        }
    }
}

AttributedName attribute(const std::string& canonical, const TaxonomyCatalog& catalog,
                         const OverrideTable& overrides) {
    if (auto it = overrides.entries.find(canonical); it != overrides.entries.end()) {
        return {it->second, canonical};
    }
    for (const auto& rule : catalog.rules) {
        if (rule.matches(canonical)) {
            return {rule.vendor, canonical};
        }
    }
    return {"UNK", canonical};
}

AttributedCorpus attribute_corpus(const NormalizedCorpus& nc, const TaxonomyCatalog& catalog,
                                  const OverrideTable& overrides) {
    overrides.validate(catalog);

    AttributedCorpus out;
    out.variant_index = nc.variant_index;
    out.warnings = nc.warnings;
    out.collapsed_aliases = nc.collapsed_aliases;
    out.removed_assertions = nc.removed_assertions;

    // Attribution is a pure function of the canonical string; memoize so the
    // taxonomy table can be counted over distinct names afterwards.
    std::map<std::string, AttributedName> cache;
    auto attributed = [&](const std::string& canonical) -> const AttributedName& {
        auto it = cache.find(canonical);
        if (it == cache.end()) {
            it = cache.emplace(canonical, attribute(canonical, catalog, overrides)).first;
        }
        return it->second;
    };

    for (const auto& rec : nc.records) {
        AttributedRecord ar;
        ar.source_id = rec.source_id;
        ar.raw_name = rec.raw_name;
        ar.name = attributed(rec.canonical);
        ar.malware_families = rec.malware_families;
        ar.report_refs = rec.report_refs;
        out.records.push_back(std::move(ar));
    }
    for (const auto& assertion : nc.assertions) {
        AttributedAssertion aa;
        aa.mapping_id = assertion.mapping_id;
        aa.canonical = attributed(assertion.canonical);
        aa.earliest_year = assertion.earliest_year;
        for (const auto& alias : assertion.aliases) {
            aa.aliases.push_back(attributed(alias));
        }
        out.assertions.push_back(std::move(aa));
    }

    for (const auto& [canonical, name] : cache) {
        ++out.taxonomy_counts[name.vendor];
    }
    return out;
}

}  // namespace hip
