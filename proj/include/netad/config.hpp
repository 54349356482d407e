#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netad {

/// One setting, keyed "section.name". line is 1-based within its source, 0 for
/// settings that did not come from a file.
struct Setting {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::string source;
};

/// Reads `[section]` headers and `key = value` lines. Blank lines and lines
/// starting with '#' or ';' are skipped. Keys outside `valid_keys` raise a
/// ParseError naming the nearest valid key.
std::vector<Setting> parse_ini(std::istream& in, std::span<const std::string> valid_keys,
                               std::string_view source = "config");
std::vector<Setting> parse_ini_file(const std::string& path, std::span<const std::string> valid_keys);

/// NETAD_<SECTION>_<NAME> (upper case) for every valid key that is set.
std::vector<Setting> env_settings(std::span<const std::string> valid_keys, std::string_view prefix = "NETAD_");
std::string env_name(std::string_view key, std::string_view prefix = "NETAD_");

std::size_t edit_distance(std::string_view a, std::string_view b);
std::string nearest_key(std::string_view key, std::span<const std::string> valid_keys);

// Typed conversions. Failures raise ParseError carrying the setting's line.
double to_real(const Setting& s);
std::size_t to_count(const Setting& s);
std::uint64_t to_u64(const Setting& s);
std::vector<double> to_real_list(const Setting& s);
std::vector<std::size_t> to_count_list(const Setting& s);
std::vector<std::string> to_string_list(const Setting& s);

}  // namespace netad
