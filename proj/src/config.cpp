#include "ckpt/config.hpp"

#include "ckpt/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace ckpt {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view trim_view(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

ConfigFile ConfigFile::parse(std::istream& in, const std::string& source_name) {
  ConfigFile file;
  file.source_ = source_name;
  std::string section;
  std::string line;
  std::size_t number = 0;
  auto fail = [&](const std::string& message) {
    throw ConfigError(source_name + ":" + std::to_string(number) + ": " + message);
  };
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = trim_view(line);
    if (text.empty() || text.front() == '#' || text.front() == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') fail("unterminated section header");
      section = lower(trim_view(text.substr(1, text.size() - 2)));
      if (section.empty()) fail("empty section name");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    const std::string key = lower(trim_view(text.substr(0, eq)));
    std::string_view value = trim_view(text.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string_view::npos) value = trim_view(value.substr(0, hash));
    if (key.empty()) fail("empty key");
    auto& entries = file.sections_[section];
    if (entries.count(key)) fail("duplicate key '" + key + "'");
    entries[key] = Entry{std::string(value), number, false};
  }
  return file;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  return parse(in, path.string());
}

std::optional<std::string> ConfigFile::get(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  const auto e = s->second.find(key);
  if (e == s->second.end()) return std::nullopt;
  e->second.used = true;
  return e->second.value;
}

std::size_t ConfigFile::line_of(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return 0;
  const auto e = s->second.find(key);
  return e == s->second.end() ? 0 : e->second.line;
}

std::vector<std::string> ConfigFile::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [name, entries] : sections_) {
    for (const auto& [key, entry] : entries) {
      if (!entry.used) out.push_back(name.empty() ? key : name + "." + key);
    }
  }
  return out;
}

double parse_real(std::string_view text) {
  text = trim_view(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

double parse_duration(std::string_view text) {
  text = trim_view(text);
  std::size_t split = text.size();
  while (split > 0 && std::isalpha(static_cast<unsigned char>(text[split - 1]))) --split;
  const std::string unit = lower(text.substr(split));
  const double value = parse_real(text.substr(0, split));
  double scale = 0.0;
  if (unit.empty() || unit == "s") scale = 1.0;
  else if (unit == "min") scale = kSecondsPerMinute;
  else if (unit == "h") scale = kSecondsPerHour;
  else if (unit == "d") scale = kSecondsPerDay;
  else if (unit == "y") scale = kSecondsPerYear;
  else throw ConfigError("unknown duration unit '" + unit + "' (use s, min, h, d or y)");
  return value * scale;
}

std::int64_t parse_count(std::string_view text) {
  text = trim_view(text);
  auto parse_int = [&](std::string_view part) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw ConfigError("not an integer: '" + std::string(text) + "'");
    }
    return value;
  };
  if (const auto caret = text.find('^'); caret != std::string_view::npos) {
    const std::int64_t base = parse_int(trim_view(text.substr(0, caret)));
    const std::int64_t exponent = parse_int(trim_view(text.substr(caret + 1)));
    if (base < 1 || exponent < 0 || exponent > 62) throw ConfigError("power out of range: '" + std::string(text) + "'");
    std::int64_t value = 1;
    for (std::int64_t i = 0; i < exponent; ++i) {
      if (value > INT64_MAX / base) throw ConfigError("power overflows: '" + std::string(text) + "'");
      value *= base;
    }
    return value;
  }
  return parse_int(text);
}

bool parse_bool(std::string_view text) {
  const std::string v = lower(trim_view(text));
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError("not a boolean: '" + v + "'");
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view item = trim_view(text.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

}  // namespace ckpt
