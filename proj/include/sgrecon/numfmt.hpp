// SPDX-License-Identifier: Apache-2.0
//
// Locale-independent number formatting and parsing for exported text files.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sgrecon {

/// Shortest decimal form that parses back to the same double.
void append_double(std::string& out, double value);
std::string format_double(double value);
void append_int(std::string& out, std::int64_t value);

std::optional<double> parse_double(std::string_view text) noexcept;
std::optional<std::int64_t> parse_int(std::string_view text) noexcept;

} // namespace sgrecon
