#include "netad/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "netad/error.hpp"

namespace netad {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header, expected '" + std::string(header) + "'", 1);
  if (trim(line) != header) {
    throw ParseError("bad header '" + std::string(trim(line)) + "', expected '" + std::string(header) + "'", 1);
  }
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double parse_real(std::string_view field, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError("expected a number, got '" + std::string(field) + "'", line);
  }
  return value;
}

void write_flows(std::ostream& out, const std::vector<FlowRecord>& flows) {
  out << "start_time,duration,size_bytes,src_ip,label\n";
  for (const auto& f : flows) {
    out << format_real(f.start_time) << ',' << format_real(f.duration) << ','
        << format_real(f.size_bytes) << ',' << f.user.to_string() << ',';
    if (f.label) out << (*f.label == Label::anomalous ? '1' : '0');
    out << '\n';
  }
}

std::vector<FlowRecord> read_flows(std::istream& in) {
  expect_header(in, "start_time,duration,size_bytes,src_ip,label");
  std::vector<FlowRecord> flows;
  std::string line;
  std::size_t lineno = 1;
  double last_start = -INFINITY;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 5) throw ParseError("expected 5 fields, got " + std::to_string(fields.size()), lineno);
    FlowRecord f;
    f.start_time = parse_real(fields[0], lineno);
    f.duration = parse_real(fields[1], lineno);
    f.size_bytes = parse_real(fields[2], lineno);
    if (f.start_time < 0 || f.duration < 0 || f.size_bytes < 0) {
      throw ParseError("negative time, duration or size", lineno);
    }
    try {
      f.user = IpAddress::parse(fields[3]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    if (fields[4] == "1") {
      f.label = Label::anomalous;
    } else if (fields[4] == "0") {
      f.label = Label::nominal;
    } else if (!fields[4].empty()) {
      throw ParseError("label must be 0, 1 or empty", lineno);
    }
    if (f.start_time < last_start) throw ParseError("flows not sorted by start_time", lineno);
    last_start = f.start_time;
    flows.push_back(f);
  }
  return flows;
}

void write_packets(std::ostream& out, const std::vector<PacketRecord>& packets) {
  out << "time,size_bytes,user_ip\n";
  for (const auto& p : packets) {
    out << format_real(p.start_time) << ',' << format_real(p.size_bytes) << ','
        << p.user.to_string() << '\n';
  }
}

std::vector<PacketRecord> read_packets(std::istream& in) {
  expect_header(in, "time,size_bytes,user_ip");
  std::vector<PacketRecord> packets;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 3) throw ParseError("expected 3 fields, got " + std::to_string(fields.size()), lineno);
    PacketRecord p;
    p.start_time = parse_real(fields[0], lineno);
    p.size_bytes = parse_real(fields[1], lineno);
    if (p.start_time < 0 || p.size_bytes < 0) throw ParseError("negative time or size", lineno);
    try {
      p.user = IpAddress::parse(fields[2]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    packets.push_back(p);
  }
  return packets;
}

void write_flows_file(const std::string& path, const std::vector<FlowRecord>& flows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  write_flows(out, flows);
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

std::vector<FlowRecord> read_flows_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return read_flows(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

}  // namespace netad
