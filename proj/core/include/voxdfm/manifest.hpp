#pragma once

#include "voxdfm/dataset.hpp"

#include <string>
#include <vector>

namespace voxdfm {

// Corpus description on disk: UTF-8, one JSON object per line. The first
// line is a header with the format tag ("voxdfm-manifest/1"), the full
// DatasetSpec, the record count and the skip count; each following line is
// one record. Writing is byte-deterministic for a given input.
struct Manifest {
    DatasetSpec spec;
    std::vector<SampleRecord> records;
    int skipped = 0;
};

void write_manifest(const Manifest& m, const std::string& path);

// Throws SchemaError on an unknown format tag, FormatError on lines that
// do not parse, IoError on filesystem failure. Labels are read as stored;
// verify_labels recomputes them.
Manifest read_manifest(const std::string& path);

// Ids of records whose stored label disagrees with the rule oracle
// re-run on their parameters.
std::vector<std::string> verify_labels(const Manifest& m);

// The spec object from the manifest header as standalone JSON text, for
// config files that embed a DatasetSpec. Key order is stable; parsing
// throws SchemaError.
std::string dataset_spec_to_json(const DatasetSpec& spec);
DatasetSpec dataset_spec_from_json(const std::string& text);

} // namespace voxdfm
