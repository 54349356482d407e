#include <doctest.h>

#include <sstream>

#include "netad/csv.hpp"
#include "netad/error.hpp"
#include "netad/flow_model.hpp"
#include "netad/random.hpp"

using namespace netad;

TEST_CASE("ip distance weights octets by position") {
  CHECK(ip_distance(IpAddress::parse("10.0.0.1"), IpAddress::parse("10.0.0.5")) == 4.0);
  CHECK(ip_distance(IpAddress::parse("192.168.1.7"), IpAddress::parse("192.168.1.7")) == 0.0);
  CHECK(ip_distance(IpAddress::parse("192.168.2.1"), IpAddress::parse("192.168.1.1")) == 256.0);
  CHECK(ip_distance(IpAddress::parse("195.168.1.50"), IpAddress::parse("192.168.1.50")) == 3.0 * 256 * 256 * 256);
}

TEST_CASE("ip distance is a metric on random triples") {
  Rng rng(7, 0);
  for (int t = 0; t < 2000; ++t) {
    auto draw = [&] { return IpAddress::from_uint(static_cast<std::uint32_t>(rng.uniform() * 4294967296.0)); };
    const auto a = draw(), b = draw(), c = draw();
    CHECK(ip_distance(a, b) >= 0.0);
    CHECK(ip_distance(a, b) == ip_distance(b, a));
    CHECK((ip_distance(a, b) == 0.0) == (a == b));
    CHECK(ip_distance(a, c) <= ip_distance(a, b) + ip_distance(b, c));
  }
}

TEST_CASE("address parsing") {
  CHECK(IpAddress::parse("1.2.3.4").to_string() == "1.2.3.4");
  CHECK(IpAddress::from_uint(IpAddress::parse("10.20.30.40").to_uint()).to_string() == "10.20.30.40");
  CHECK_THROWS(IpAddress::parse("256.1.1.1"));
  CHECK_THROWS(IpAddress::parse("1.2.3"));
  CHECK_THROWS(IpAddress::parse("1.2.3.4.5"));
  CHECK_THROWS(IpAddress::parse("a.b.c.d"));
  CHECK_THROWS(IpAddress::parse(""));
}

TEST_CASE("flow CSV round-trips random datasets") {
  Rng rng(3, 0);
  std::vector<FlowRecord> flows;
  double t = 0.0;
  for (int i = 0; i < 500; ++i) {
    t += rng.exponential(10.0);
    std::optional<Label> label;
    const double u = rng.uniform();
    if (u < 0.3) label = Label::anomalous;
    else if (u < 0.8) label = Label::nominal;
    flows.push_back(FlowRecord{IpAddress::from_uint(static_cast<std::uint32_t>(rng.uniform() * 4294967296.0)),
                               rng.uniform() * 1e5, rng.exponential(2.0), t, label});
  }
  std::stringstream ss;
  write_flows(ss, flows);
  const auto back = read_flows(ss);
  REQUIRE(back.size() == flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i) {
    CHECK(back[i].user == flows[i].user);
    CHECK(back[i].label == flows[i].label);
    CHECK(back[i].start_time == doctest::Approx(flows[i].start_time).epsilon(1e-8));
    CHECK(back[i].size_bytes == doctest::Approx(flows[i].size_bytes).epsilon(1e-8));
    CHECK(back[i].duration == doctest::Approx(flows[i].duration).epsilon(1e-8));
  }
  // A second trip is exact: the text is already at declared precision.
  std::stringstream again;
  write_flows(again, back);
  std::stringstream first;
  write_flows(first, flows);
  CHECK(again.str() == first.str());
}

TEST_CASE("flow CSV header and labels") {
  std::stringstream ss;
  write_flows(ss, {FlowRecord{IpAddress::parse("10.0.0.1"), 100, 1, 0, Label::anomalous},
                   FlowRecord{IpAddress::parse("10.0.0.2"), 50, 0, 2, std::nullopt}});
  CHECK(ss.str() == "start_time,duration,size_bytes,src_ip,label\n0,1,100,10.0.0.1,1\n2,0,50,10.0.0.2,\n");
}

TEST_CASE("flow CSV rejects malformed input with a line number") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_flows(in);
  };
  const std::string header = "start_time,duration,size_bytes,src_ip,label\n";
  CHECK_THROWS_AS(parse("time,size\n"), ParseError);
  CHECK_THROWS_AS(parse(header + "0,1,100,10.0.0.300,0\n"), Error);
  CHECK_THROWS_AS(parse(header + "0,1,-5,10.0.0.1,0\n"), ParseError);
  CHECK_THROWS_AS(parse(header + "0,1,5,10.0.0.1,2\n"), ParseError);
  CHECK_THROWS_AS(parse(header + "0,1,abc,10.0.0.1,0\n"), ParseError);
  CHECK_THROWS_AS(parse(header + "0,1,5,10.0.0.1\n"), ParseError);
  try {
    parse(header + "0,1,5,10.0.0.1,0\n5,1,5,10.0.0.1,0\n3,1,5,10.0.0.1,0\n");
    FAIL("unsorted input accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("packet CSV round-trip") {
  std::vector<PacketRecord> packets{{IpAddress::parse("10.0.0.1"), 60, 0.5}, {IpAddress::parse("10.0.0.2"), 1500, 1.25}};
  std::stringstream ss;
  write_packets(ss, packets);
  CHECK(ss.str().rfind("time,size_bytes,user_ip\n", 0) == 0);
  const auto back = read_packets(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1].user == packets[1].user);
  CHECK(back[1].size_bytes == 1500);
  CHECK(back[1].start_time == 1.25);
}
