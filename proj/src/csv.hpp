// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SOFTSPACE_SRC_CSV_HPP
#define SOFTSPACE_SRC_CSV_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace softspace::csv {

/// RFC 4180 quoting, only when the field needs it.
std::string quote(std::string_view field);

/// Reads one logical record (quoted fields may span lines). Returns nullopt
/// at end of input. Trailing '\r' is dropped.
std::optional<std::vector<std::string>> read_record(std::istream& in);

}  // namespace softspace::csv

#endif  // SOFTSPACE_SRC_CSV_HPP
