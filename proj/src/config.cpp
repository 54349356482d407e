#include "netad/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>

#include "netad/error.hpp"

namespace netad {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void type_error(const Setting& s, std::string_view expected) {
  std::string where = s.line ? "" : " (from " + s.source + ")";
  throw ParseError("key '" + s.key + "' expects " + std::string(expected) + ", got '" + s.value + "'" + where,
                   s.line);
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(trim(v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

bool parse_real_field(std::string_view f, double& out) {
  const auto* end = f.data() + f.size();
  auto [p, ec] = std::from_chars(f.data(), end, out);
  return ec == std::errc{} && p == end && std::isfinite(out);
}

bool parse_count_field(std::string_view f, std::size_t& out) {
  const auto* end = f.data() + f.size();
  auto [p, ec] = std::from_chars(f.data(), end, out);
  return ec == std::errc{} && p == end;
}

}  // namespace

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string nearest_key(std::string_view key, std::span<const std::string> valid_keys) {
  std::string best;
  std::size_t best_d = static_cast<std::size_t>(-1);
  for (const auto& k : valid_keys) {
    const auto d = edit_distance(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

std::vector<Setting> parse_ini(std::istream& in, std::span<const std::string> valid_keys, std::string_view source) {
  std::vector<Setting> out;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ParseError("empty section name", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const auto name = trim(line.substr(0, eq));
    if (name.empty()) throw ParseError("missing key before '='", line_no);
    std::string key = section.empty() ? std::string(name) : section + "." + std::string(name);
    if (std::find(valid_keys.begin(), valid_keys.end(), key) == valid_keys.end()) {
      throw ParseError("unknown key '" + key + "' (did you mean '" + nearest_key(key, valid_keys) + "'?)", line_no);
    }
    out.push_back(Setting{std::move(key), std::string(trim(line.substr(eq + 1))), line_no, std::string(source)});
  }
  return out;
}

std::vector<Setting> parse_ini_file(const std::string& path, std::span<const std::string> valid_keys) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_ini(in, valid_keys, path);
}

std::string env_name(std::string_view key, std::string_view prefix) {
  std::string name(prefix);
  for (char c : key) name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

std::vector<Setting> env_settings(std::span<const std::string> valid_keys, std::string_view prefix) {
  std::vector<Setting> out;
  for (const auto& k : valid_keys) {
    const auto name = env_name(k, prefix);
    if (const char* v = std::getenv(name.c_str())) out.push_back(Setting{k, std::string(trim(v)), 0, name});
  }
  return out;
}

double to_real(const Setting& s) {
  double v = 0.0;
  if (!parse_real_field(trim(s.value), v)) type_error(s, "a real number");
  return v;
}

std::size_t to_count(const Setting& s) {
  std::size_t v = 0;
  if (!parse_count_field(trim(s.value), v)) type_error(s, "a non-negative integer");
  return v;
}

std::uint64_t to_u64(const Setting& s) {
  std::uint64_t v = 0;
  const auto f = trim(s.value);
  const auto* end = f.data() + f.size();
  auto [p, ec] = std::from_chars(f.data(), end, v);
  if (ec != std::errc{} || p != end) type_error(s, "a non-negative integer");
  return v;
}

std::vector<double> to_real_list(const Setting& s) {
  std::vector<double> out;
  for (auto f : split_list(s.value)) {
    double v = 0.0;
    if (!parse_real_field(f, v)) type_error(s, "a comma-separated list of reals");
    out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> to_count_list(const Setting& s) {
  std::vector<std::size_t> out;
  for (auto f : split_list(s.value)) {
    std::size_t v = 0;
    if (!parse_count_field(f, v)) type_error(s, "a comma-separated list of integers");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> to_string_list(const Setting& s) {
  std::vector<std::string> out;
  for (auto f : split_list(s.value)) {
    if (f.empty()) type_error(s, "a comma-separated list of names");
    out.emplace_back(f);
  }
  return out;
}

}  // namespace netad
