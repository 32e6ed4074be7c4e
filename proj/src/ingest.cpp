#include "hip/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <ctime>

#include "hip/errors.hpp"
#include "hip/util.hpp"
#include "json.hpp"

namespace hip {

namespace {

// ordered_json keeps file order for object keys (Malpedia actors).
using ojson = nlohmann::ordered_json;

int current_year() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    return tm.tm_year + 1900;
}

std::string record_ctx(const SourceDescriptor& d, std::size_t index) {
    return d.id + " (" + d.path.string() + ") record #" + std::to_string(index);
}

void check_name(const std::string& raw_name, const SourceDescriptor& d, std::size_t index) {
    if (trim(raw_name).empty()) {
        throw MalformedSource(record_ctx(d, index) + ": empty TA name");
    }
}

// Shared record assembly: drops empty and self-referential aliases, dedups
// the rest in file order, and derives the mapping assertion.
void push_entry(LoadResult& out, const SourceDescriptor& d, std::size_t index,
                RawSourceRecord rec, const std::vector<std::string>& aliases) {
    check_name(rec.raw_name, d, index);
    std::set<std::string> seen;
    for (const auto& alias : aliases) {
        if (trim(alias).empty()) continue;
        if (alias == rec.raw_name) continue;
        if (seen.insert(alias).second) rec.aliases.push_back(alias);
    }

    if (!rec.aliases.empty()) {
        MappingAssertion assertion;
        assertion.mapping_id = d.id;
        assertion.canonical_raw = rec.raw_name;
        assertion.alias_raws = rec.aliases;
        for (const auto& ref : rec.report_refs) {
            if (!assertion.earliest_year || ref.year < *assertion.earliest_year) {
                assertion.earliest_year = ref.year;
            }
        }
        out.assertions.push_back(std::move(assertion));
    }
    out.records.push_back(std::move(rec));
}

ojson parse_json_checked(const std::string& text, const SourceDescriptor& d) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedSource(d.id + " (" + d.path.string() + "): " + e.what());
    }
}

std::vector<std::string> string_array(const ojson& value, const SourceDescriptor& d,
                                      std::size_t index, const char* what) {
    if (!value.is_array()) {
        throw MalformedSource(record_ctx(d, index) + ": " + what + " must be an array");
    }
    std::vector<std::string> out;
    for (const auto& item : value) {
        if (!item.is_string()) {
            throw MalformedSource(record_ctx(d, index) + ": " + what +
                                  " entries must be strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

void stash_meta(RawSourceRecord& rec, const std::string& key, const ojson& value) {
    if (value.is_string()) rec.meta[key] = value.get<std::string>();
    else if (value.is_number_integer()) rec.meta[key] = std::to_string(value.get<long long>());
    else if (value.is_boolean()) rec.meta[key] = value.get<bool>() ? "true" : "false";
}

void load_misp_galaxy(const std::string& text, const SourceDescriptor& d, LoadResult& out) {
    auto doc = parse_json_checked(text, d);
    const ojson* values = &doc;
    if (doc.is_object()) {
        if (!doc.contains("values")) {
            throw MalformedSource(d.id + ": galaxy object without \"values\" array");
        }
        values = &doc.at("values");
    }
    if (!values->is_array()) {
        throw MalformedSource(d.id + ": expected an array of galaxy cluster values");
    }

    std::size_t index = 0;
    for (const auto& entry : *values) {
        if (!entry.is_object() || !entry.contains("value") || !entry.at("value").is_string()) {
            throw MalformedSource(record_ctx(d, index) + ": missing string \"value\"");
        }
        RawSourceRecord rec;
        rec.source_id = d.id;
        rec.raw_name = entry.at("value").get<std::string>();
        std::vector<std::string> aliases;
        if (entry.contains("meta") && entry.at("meta").is_object()) {
            const auto& meta = entry.at("meta");
            if (meta.contains("synonyms")) {
                aliases = string_array(meta.at("synonyms"), d, index, "meta.synonyms");
            }
            for (auto& [key, value] : meta.items()) {
                if (key != "synonyms") stash_meta(rec, key, value);
            }
        }
        push_entry(out, d, index, std::move(rec), aliases);
        ++index;
    }
}

void load_malpedia(const std::string& text, const SourceDescriptor& d, LoadResult& out) {
    auto doc = parse_json_checked(text, d);
    if (!doc.is_object()) {
        throw MalformedSource(d.id + ": expected an object of actor entries");
    }
    std::size_t index = 0;
    for (auto& [actor, entry] : doc.items()) {
        if (!entry.is_object()) {
            throw MalformedSource(record_ctx(d, index) + ": actor entry must be an object");
        }
        RawSourceRecord rec;
        rec.source_id = d.id;
        rec.raw_name = actor;
        std::vector<std::string> aliases;
        if (entry.contains("synonyms")) {
            aliases = string_array(entry.at("synonyms"), d, index, "synonyms");
        }
        if (entry.contains("families")) {
            for (auto& f : string_array(entry.at("families"), d, index, "families")) {
                rec.malware_families.insert(f);
            }
        }
        for (auto& [key, value] : entry.items()) {
            if (key != "synonyms" && key != "families") stash_meta(rec, key, value);
        }
        push_entry(out, d, index, std::move(rec), aliases);
        ++index;
    }
}

void load_microsoft(const std::string& text, const SourceDescriptor& d, LoadResult& out) {
    auto rows = parse_csv(text);
    if (rows.empty()) return;
    // Header row is required; every later row is one actor, first column the
    // name and each remaining non-empty cell one alias.
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.empty() || trim(row[0]).empty()) {
            throw MalformedSource(record_ctx(d, r - 1) + ": empty TA name");
        }
        RawSourceRecord rec;
        rec.source_id = d.id;
        rec.raw_name = row[0];
        std::vector<std::string> aliases(row.begin() + 1, row.end());
        push_entry(out, d, r - 1, std::move(rec), aliases);
    }
}

std::set<std::string> semicolon_set(const std::string& cell) {
    std::set<std::string> out;
    for (auto& item : split(cell, ';')) {
        auto t = trim(item);
        if (!t.empty()) out.insert(std::string(t));
    }
    return out;
}

void load_generic_csv(const std::string& text, const SourceDescriptor& d, LoadResult& out) {
    auto rows = parse_csv(text);
    if (rows.empty()) return;

    std::map<std::string, std::size_t> columns;
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
        columns[upper_ascii(trim(rows[0][c]))] = c;
    }
    if (!columns.count("NAME")) {
        throw MalformedSource(d.id + " (" + d.path.string() + "): missing \"name\" column");
    }
    auto cell = [&](const std::vector<std::string>& row, const char* col) -> std::string {
        auto it = columns.find(col);
        if (it == columns.end() || it->second >= row.size()) return {};
        return row[it->second];
    };

    const int max_year = current_year() + 1;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::size_t index = r - 1;
        RawSourceRecord rec;
        rec.source_id = d.id;
        rec.raw_name = cell(row, "NAME");
        check_name(rec.raw_name, d, index);

        std::vector<std::string> aliases;
        for (auto& a : split(cell(row, "ALIASES"), ';')) {
            if (!trim(a).empty()) aliases.push_back(a);
        }
        for (auto& f : semicolon_set(cell(row, "FAMILIES"))) {
            rec.malware_families.insert(f);
        }

        auto year_cell = trim(cell(row, "YEAR"));
        if (!year_cell.empty()) {
            int year = 0;
            auto [ptr, ec] = std::from_chars(year_cell.data(),
                                             year_cell.data() + year_cell.size(), year);
            if (ec != std::errc{} || ptr != year_cell.data() + year_cell.size()) {
                throw MalformedSource(record_ctx(d, index) + ": bad year \"" +
                                      std::string(year_cell) + "\"");
            }
            if (year < 1990 || year > max_year) {
                throw MalformedSource(record_ctx(d, index) + ": year " +
                                      std::to_string(year) + " out of range");
            }
            ReportRef ref;
            ref.year = year;
            auto vendor = trim(cell(row, "VENDOR"));
            if (!vendor.empty()) ref.vendor = std::string(vendor);
            ref.sectors = semicolon_set(cell(row, "SECTOR"));
            ref.geographies = semicolon_set(cell(row, "GEO"));
            auto report_id = trim(cell(row, "REPORT_ID"));
            ref.key = report_id.empty()
                          ? d.id + "#" + std::to_string(index)
                          : d.id + "/" + std::string(report_id);
            rec.report_refs.push_back(std::move(ref));
        }
        push_entry(out, d, index, std::move(rec), aliases);
    }
}

}  // namespace

LoadResult load_source(const SourceDescriptor& descriptor) {
    auto text = read_file(descriptor.path);
    if (auto bad = find_invalid_utf8(text); bad != std::string_view::npos) {
        throw MalformedSource(descriptor.id + " (" + descriptor.path.string() +
                              "): invalid UTF-8 at byte " + std::to_string(bad));
    }

    LoadResult out;
    switch (descriptor.format) {
        case SourceFormat::misp_galaxy: load_misp_galaxy(text, descriptor, out); break;
        case SourceFormat::malpedia: load_malpedia(text, descriptor, out); break;
        case SourceFormat::microsoft: load_microsoft(text, descriptor, out); break;
        case SourceFormat::generic_csv: load_generic_csv(text, descriptor, out); break;
    }
    return out;
}

Corpus load_corpus(std::vector<SourceDescriptor> descriptors) {
    std::sort(descriptors.begin(), descriptors.end(),
              [](const SourceDescriptor& a, const SourceDescriptor& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < descriptors.size(); ++i) {
        if (descriptors[i].id == descriptors[i - 1].id) {
            throw DuplicateSourceId("duplicate source id \"" + descriptors[i].id + "\"");
        }
    }

    Corpus corpus;
    corpus.descriptors = descriptors;
    for (const auto& d : descriptors) {
        auto loaded = load_source(d);
        auto& counts = corpus.per_source[d.id];
        counts.records = static_cast<long long>(loaded.records.size());
        counts.assertions = static_cast<long long>(loaded.assertions.size());
        std::move(loaded.records.begin(), loaded.records.end(),
                  std::back_inserter(corpus.records));
        std::move(loaded.assertions.begin(), loaded.assertions.end(),
                  std::back_inserter(corpus.assertions));
    }
    return corpus;
}

std::vector<SourceDescriptor> load_manifest(const std::filesystem::path& path) {
    auto text = read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedSource("manifest " + path.string() + ": " + e.what());
    }
    if (!doc.is_array()) {
        throw MalformedSource("manifest " + path.string() + ": expected a JSON array");
    }

    auto base = path.parent_path();
    std::vector<SourceDescriptor> out;
    for (const auto& entry : doc) {
        SourceDescriptor d;
        d.id = entry.at("id").get<std::string>();
        d.kind = source_kind_from_string(entry.at("kind").get<std::string>());
        d.format = source_format_from_string(entry.at("format").get<std::string>());
        std::filesystem::path p = entry.at("path").get<std::string>();
        d.path = p.is_absolute() ? p : base / p;
        out.push_back(std::move(d));
    }
    return out;
}

SourceKind source_kind_from_string(const std::string& s) {
    if (s == "taxonomy") return SourceKind::taxonomy;
    if (s == "mapping") return SourceKind::mapping;
    if (s == "reports") return SourceKind::reports;
    if (s == "mixed") return SourceKind::mixed;
    throw UnknownFormat("unknown source kind \"" + s + "\"");
}

SourceFormat source_format_from_string(const std::string& s) {
    if (s == "misp_galaxy") return SourceFormat::misp_galaxy;
    if (s == "malpedia") return SourceFormat::malpedia;
    if (s == "microsoft") return SourceFormat::microsoft;
    if (s == "generic_csv") return SourceFormat::generic_csv;
    throw UnknownFormat("unknown source format \"" + s + "\"");
}

std::string to_string(SourceKind k) {
    switch (k) {
        case SourceKind::taxonomy: return "taxonomy";
        case SourceKind::mapping: return "mapping";
        case SourceKind::reports: return "reports";
        case SourceKind::mixed: return "mixed";
    }
    return "mixed";
}

std::string to_string(SourceFormat f) {
    switch (f) {
        case SourceFormat::misp_galaxy: return "misp_galaxy";
        case SourceFormat::malpedia: return "malpedia";
        case SourceFormat::microsoft: return "microsoft";
        case SourceFormat::generic_csv: return "generic_csv";
    }
    return "generic_csv";
}

}  // namespace hip
