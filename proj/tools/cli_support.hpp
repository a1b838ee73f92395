// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace detsamp::cli {

/// Replaces `--config <file>` (or `--config=<file>`) with the file's keys as
/// `--key value` arguments placed right after the subcommand name, so flags
/// given on the command line take precedence. The file must hold a flat JSON
/// object; arrays become comma-separated lists, `true` becomes a bare flag.
/// Throws detsamp::Error(InvalidInput) on malformed files.
[[nodiscard]] std::vector<std::string> expand_config(const std::vector<std::string>& args);

/// Writes `contents` to `path` via a temporary file and rename; "-" is stdout.
void write_output(const std::string& path, std::string_view contents);

[[nodiscard]] std::vector<double> parse_double_list(std::string_view text, std::string_view name);
[[nodiscard]] std::vector<std::size_t> parse_count_list(std::string_view text, std::string_view name);
[[nodiscard]] std::vector<std::string> split_list(std::string_view text);

}  // namespace detsamp::cli
