#include "netad/flow_model.hpp"

#include <charconv>
#include <cstdlib>

#include "netad/error.hpp"

namespace netad {

IpAddress IpAddress::parse(std::string_view dotted) {
  IpAddress ip;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    if (k > 0) {
      if (pos >= dotted.size() || dotted[pos] != '.') {
        throw ParseError("malformed IPv4 address '" + std::string(dotted) + "'", 0);
      }
      ++pos;
    }
    unsigned value = 0;
    const char* first = dotted.data() + pos;
    const char* last = dotted.data() + dotted.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first || value > 255) {
      throw ParseError("malformed IPv4 address '" + std::string(dotted) + "'", 0);
    }
    ip.octets[k] = static_cast<std::uint8_t>(value);
    pos = static_cast<std::size_t>(ptr - dotted.data());
  }
  if (pos != dotted.size()) {
    throw ParseError("malformed IPv4 address '" + std::string(dotted) + "'", 0);
  }
  return ip;
}

IpAddress IpAddress::from_uint(std::uint32_t value) {
  IpAddress ip;
  for (int k = 3; k >= 0; --k) {
    ip.octets[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(value & 0xffU);
    value >>= 8;
  }
  return ip;
}

std::uint32_t IpAddress::to_uint() const noexcept {
  std::uint32_t v = 0;
  for (auto o : octets) v = (v << 8) | o;
  return v;
}

std::string IpAddress::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < 4; ++k) {
    if (k > 0) s += '.';
    s += std::to_string(octets[k]);
  }
  return s;
}

double ip_distance(const IpAddress& a, const IpAddress& b) noexcept {
  double d = 0.0;
  double weight = 256.0 * 256.0 * 256.0;
  for (std::size_t k = 0; k < 4; ++k) {
    d += weight * std::abs(int{a.octets[k]} - int{b.octets[k]});
    weight /= 256.0;
  }
  return d;
}

}  // namespace netad
