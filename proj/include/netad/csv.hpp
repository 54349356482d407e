#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "netad/flow_model.hpp"

namespace netad {

/// Formats with 9 significant digits, the precision of every CSV this library writes.
std::string format_real(double value);

/// Splits one CSV line on commas. No quoting: none of our formats need it.
std::vector<std::string_view> split_csv_line(std::string_view line);

double parse_real(std::string_view field, std::size_t line);

// Flow CSV: start_time,duration,size_bytes,src_ip,label  (label is 0, 1 or empty)
void write_flows(std::ostream& out, const std::vector<FlowRecord>& flows);
std::vector<FlowRecord> read_flows(std::istream& in);

// Packet CSV: time,size_bytes,user_ip
void write_packets(std::ostream& out, const std::vector<PacketRecord>& packets);
std::vector<PacketRecord> read_packets(std::istream& in);

void write_flows_file(const std::string& path, const std::vector<FlowRecord>& flows);
std::vector<FlowRecord> read_flows_file(const std::string& path);

}  // namespace netad
