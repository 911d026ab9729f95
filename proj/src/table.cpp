// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/table.hpp"
#include "sgrecon/numfmt.hpp"
#include "sgrecon/types.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sgrecon {

int Table::index_of(std::string_view name) const noexcept
{
    const auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

const std::vector<double>& Table::column(std::string_view name) const
{
    const int k = index_of(name);
    if (k < 0) {
        throw std::out_of_range("table has no column '" + std::string(name) + "'");
    }
    return columns[static_cast<std::size_t>(k)];
}

std::vector<double>& Table::column(std::string_view name)
{
    return const_cast<std::vector<double>&>(static_cast<const Table&>(*this).column(name));
}

void Table::add(std::string name, std::vector<double> values)
{
    if (!columns.empty() && values.size() != rows()) {
        throw std::invalid_argument("column '" + name + "' has the wrong length");
    }
    names.push_back(std::move(name));
    columns.push_back(std::move(values));
}

bool is_integer_column(std::string_view name) noexcept
{
    return name == "t" || name == "tx_count" || name == "attack_label";
}

std::string format_csv(const Table& table)
{
    std::string out;
    const std::size_t ncol = table.names.size();
    out.reserve((table.rows() + 1) * ncol * 20);
    for (std::size_t k = 0; k < ncol; ++k) {
        if (k > 0) {
            out += ',';
        }
        out += table.names[k];
    }
    out += '\n';
    std::vector<bool> integer(ncol);
    for (std::size_t k = 0; k < ncol; ++k) {
        integer[k] = is_integer_column(table.names[k]);
    }
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t k = 0; k < ncol; ++k) {
            if (k > 0) {
                out += ',';
            }
            const double v = table.columns[k][r];
            if (integer[k]) {
                append_int(out, static_cast<std::int64_t>(v));
            } else {
                append_double(out, v);
            }
        }
        out += '\n';
    }
    return out;
}

Table parse_csv(std::string_view text, const std::string& label)
{
    if (text.empty()) {
        throw DatasetError(label + ": empty file");
    }
    Table table;
    std::size_t pos = 0;
    const auto next_line = [&](std::string_view& line) {
        if (pos >= text.size()) {
            return false;
        }
        const auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            line = text.substr(pos);
            pos = text.size();
        } else {
            line = text.substr(pos, end - pos);
            pos = end + 1;
        }
        return true;
    };
    std::string_view line;
    next_line(line);
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        table.names.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    table.columns.resize(table.names.size());
    std::size_t row = 0;
    while (next_line(line)) {
        ++row;
        if (line.empty() && pos >= text.size()) {
            break;
        }
        std::size_t k = 0;
        start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const auto cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
            if (k >= table.names.size()) {
                throw DatasetError(label + ": row " + std::to_string(row) + " has too many fields");
            }
            const auto value = parse_double(cell);
            if (!value) {
                throw DatasetError(label + ": row " + std::to_string(row) + " column '" + table.names[k] +
                                   "' is not numeric");
            }
            table.columns[k].push_back(*value);
            ++k;
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (k != table.names.size()) {
            throw DatasetError(label + ": row " + std::to_string(row) + " has " + std::to_string(k) + " fields, expected " +
                               std::to_string(table.names.size()));
        }
    }
    return table;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DatasetError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw DatasetError("cannot read " + path.string());
    }
    return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DatasetError("cannot create " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
        throw DatasetError("cannot write " + path.string());
    }
}

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

} // namespace sgrecon
