// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "neimkit/pod.hpp"

namespace neimkit {

/// %.17g formatting: the shortest fixed recipe that round-trips doubles and
/// re-emits byte-identically after a parse.
std::string format_double(double value);

/// Snapshot file: one '#' metadata line, one column-header row, then one row
/// per snapshot (parameter value first, solution entries after).
struct SnapshotFile {
    std::string metadata;  // content of the leading comment line, without "# "
    SnapshotSet set;       // 1-D parameters
};

void write_snapshot_csv(const std::filesystem::path& path, const SnapshotFile& file);
SnapshotFile read_snapshot_csv(const std::filesystem::path& path);

/// Generic cell table; cells are kept as strings so parse -> re-emit is
/// byte-identical by construction.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace neimkit
