#pragma once

#include <filesystem>

#include "locsnn/spike_tensor.hpp"

namespace locsnn {

/// Reads a dataset from its manifest. The manifest is line-oriented text:
///
///   locsnn-dataset v1
///   channels <N>
///   steps <T>
///   classes <K>
///   sample <id> <label> <event-file path relative to the manifest>
///   ...
///
/// Blank lines and lines starting with '#' are ignored after the header
/// line. Each event file holds one "taxel,step" pair per line (0-based),
/// again with '#' comments and blank lines allowed; an empty file is a
/// valid all-zero sample.
///
/// Throws IoError for unreadable files and ValidationError for malformed
/// content, shape violations, or out-of-range labels, naming the file.
Dataset read_dataset(const std::filesystem::path& manifest_path);

/// Writes `dataset` as a manifest at `manifest_path` plus one event file per
/// sample under an `events/` directory next to it. Inverse of read_dataset:
/// a write/read round-trip reproduces tensors and labels exactly. Output is
/// byte-deterministic for a given dataset.
void write_dataset(const std::filesystem::path& manifest_path, const Dataset& dataset);

}  // namespace locsnn
