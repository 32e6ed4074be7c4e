#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "hip/corpus.hpp"

namespace hip {

struct LoadResult {
    std::vector<RawSourceRecord> records;
    std::vector<MappingAssertion> assertions;
};

// Parses one snapshot file under the descriptor's format. Raw strings are
// preserved byte-for-byte; the only load-time edits are alias deduplication
// and dropping aliases equal to the record's own name.
//
// Supported formats:
//   misp_galaxy  JSON array of {value, meta.synonyms} objects, or an object
//                with a "values" array in that shape
//   malpedia     JSON object: actor name -> {synonyms: [...], families: [...]}
//   microsoft    CSV, row per actor: first column name, remaining columns aliases
//   generic_csv  CSV with header: name, aliases (;-separated), and optional
//                year, vendor, sector, geo, families, report_id columns
LoadResult load_source(const SourceDescriptor& descriptor);

// Loads every descriptor and merges the results, ordered by source id and
// then file order. Throws DuplicateSourceId when ids repeat.
Corpus load_corpus(std::vector<SourceDescriptor> descriptors);

// Reads a manifest (JSON array of {id, kind, path, format}); paths are
// resolved relative to the manifest's directory.
std::vector<SourceDescriptor> load_manifest(const std::filesystem::path& path);

}  // namespace hip
