// SPDX-License-Identifier: Apache-2.0
//
// Column-oriented numeric tables with exact CSV round-tripping, plus file
// helpers and SHA-256 digests.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sgrecon {

struct Table {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
    /// -1 when absent.
    int index_of(std::string_view name) const noexcept;
    /// Throws std::out_of_range when absent.
    const std::vector<double>& column(std::string_view name) const;
    std::vector<double>& column(std::string_view name);
    void add(std::string name, std::vector<double> values);
};

/// Columns written as integers rather than decimals.
bool is_integer_column(std::string_view name) noexcept;

/// Header plus one LF-terminated line per row; decimals are shortest round-trip.
std::string format_csv(const Table& table);

/// Parses a numeric CSV with a header row. Throws DatasetError naming
/// `label` on ragged rows, empty input or non-numeric cells.
Table parse_csv(std::string_view text, const std::string& label);

/// Throws DatasetError if the file cannot be read.
std::string read_file(const std::filesystem::path& path);
/// Throws DatasetError if the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);

} // namespace sgrecon
