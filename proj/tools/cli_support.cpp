// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli_support.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>
#include <unistd.h>

#include "detsamp/error.hpp"

namespace detsamp::cli {

namespace {

using nlohmann::json;

std::string scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw Error(ErrorCode::InvalidInput, "config key '" + key + "' has an unsupported value");
}

std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("config file: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::InvalidInput, "config file must hold a JSON object");

  std::vector<std::string> out;
  for (const auto& [key, value] : doc.items()) {
    if (key == "config") throw Error(ErrorCode::InvalidInput, "config files cannot nest");
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ',';
        joined += scalar_text(item, key);
      }
      out.push_back(flag);
      out.push_back(joined);
    } else {
      out.push_back(flag);
      out.push_back(scalar_text(value, key));
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw Error(ErrorCode::InvalidInput, "--config needs a file");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;

  // rest[0] is the program name, rest[1] the subcommand.
  const auto extra = config_args(config_path);
  std::vector<std::string> out;
  const std::size_t head = std::min<std::size_t>(2, rest.size());
  out.insert(out.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(head));
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(head), rest.end());
  return out;
}

void write_output(const std::string& path, std::string_view contents) {
  if (path == "-") {
    std::cout.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    std::cout.flush();
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::InvalidInput, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::InvalidInput, "cannot move output into place: " + ec.message());
  }
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    std::string item(text.substr(start, end - start));
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? std::string() : item.substr(first, last - first + 1);
    if (!item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view name) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidInput, std::string(name) + ": '" + item + "' is not a finite number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidInput, std::string(name) + " must not be empty");
  return out;
}

std::vector<std::size_t> parse_count_list(std::string_view text, std::string_view name) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw Error(ErrorCode::InvalidInput, std::string(name) + ": '" + item + "' is not a count");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidInput, std::string(name) + " must not be empty");
  return out;
}

}  // namespace detsamp::cli
