#pragma once

// Flat `key = value` files with `[section]` headers, plus the value parsers
// shared by the config reader and the CLI.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ckpt {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigFile {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
    mutable bool used = false;
  };

  static ConfigFile parse(std::istream& in, const std::string& source_name = "<config>");
  static ConfigFile load(const std::filesystem::path& path);

  // Keys before any header live in section "".
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::size_t line_of(const std::string& section, const std::string& key) const;
  // "section.key" names of entries never read through get().
  std::vector<std::string> unused_keys() const;
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

// Seconds from "600", "600s", "10min", "1.5h", "3d" or "2y" (365-day years).
double parse_duration(std::string_view text);
double parse_real(std::string_view text);
// Accepts plain integers and powers written as "2^16".
std::int64_t parse_count(std::string_view text);
bool parse_bool(std::string_view text);
// Comma-separated items, trimmed, empty items dropped.
std::vector<std::string> split_list(std::string_view text);
std::string_view trim_view(std::string_view text);

}  // namespace ckpt
