#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "netad/art.hpp"
#include "netad/error.hpp"
#include "netad/random.hpp"

using namespace netad;

namespace {

std::vector<RealVector> blobs(std::uint64_t seed, std::size_t n) {
  Rng rng(seed, 0);
  const RealVector centers[] = {{0.2, 0.2, 0.2, 0.2}, {0.8, 0.7, 0.3, 0.5}, {0.5, 0.9, 0.9, 0.1}};
  std::vector<RealVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = centers[rng.index(3)];
    RealVector g(4);
    for (std::size_t j = 0; j < 4; ++j) g[j] = std::clamp(rng.normal(c[j], 0.08), 0.0, 1.0);
    out.push_back(g);
  }
  return out;
}

// One pass of the clustering from fixed starting centers, written out
// independently. Returns the assignment and checks the acceptance test at
// every step.
std::vector<std::size_t> replay_pass(const std::vector<RealVector>& pts, std::vector<RealVector> centers,
                                     const ArtConfig& cfg, bool& accepted) {
  std::vector<double> count(centers.size(), 0.0);
  std::vector<std::size_t> out;
  accepted = true;
  for (const auto& g : pts) {
    std::size_t best = centers.size();
    double best_e = INFINITY;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      double d = 0.0, e = 0.0;
      for (std::size_t j = 0; j < 4; ++j) {
        d += std::pow((g[j] - centers[k][j]) / (1.0 - cfg.vigilance[j]), 2);
        e += std::pow(g[j] - centers[k][j], 2);
      }
      if (d < cfg.radius && e < best_e) {
        best = k;
        best_e = e;
      }
    }
    if (best == centers.size()) {
      accepted = false;  // a converged state never opens a new cluster
      centers.push_back(g);
      count.push_back(1);
    } else {
      for (std::size_t j = 0; j < 4; ++j) centers[best][j] = (count[best] * centers[best][j] + g[j]) / (count[best] + 1);
      count[best] += 1;
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace

TEST_CASE("normalization") {
  std::vector<ArtFlow> f{{2, 5, 10, 1, 0}, {6, 5, 30, 3, 1}, {4, 5, 20, 2, 2}};
  const auto n = normalize_art(f);
  CHECK(n[0][0] == 0.0);
  CHECK(n[1][0] == 1.0);
  CHECK(n[2][0] == 0.5);
  for (const auto& g : n) CHECK(g[1] == 0.0);

  Rng rng(1, 0);
  std::vector<ArtFlow> r;
  for (int i = 0; i < 200; ++i)
    r.push_back(ArtFlow{1 + rng.index(50), rng.uniform() * 1e9, rng.exponential(4000), rng.exponential(2), double(i)});
  const auto m = normalize_art(r);
  for (std::size_t j = 0; j < 4; ++j) {
    std::vector<std::size_t> by_raw(r.size()), by_norm(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) by_raw[i] = by_norm[i] = i;
    auto raw = [&](std::size_t i) {
      const double v[] = {double(r[i].flow_count), r[i].dist_to_server, r[i].size_bytes, r[i].duration};
      return v[j];
    };
    std::stable_sort(by_raw.begin(), by_raw.end(), [&](auto a, auto b) { return raw(a) < raw(b); });
    std::stable_sort(by_norm.begin(), by_norm.end(), [&](auto a, auto b) { return m[a][j] < m[b][j]; });
    CHECK(by_raw == by_norm);
    for (const auto& g : m) {
      CHECK(g[j] >= 0.0);
      CHECK(g[j] <= 1.0);
    }
  }
}

TEST_CASE("vigilance distance") {
  const RealVector zero(4, 0.0);
  CHECK(art_distance(RealVector{1, 2, 0, 0}, RealVector{0, 0, 0, 0}, zero) == 5.0);
  CHECK(art_distance(RealVector{0.3, 0.4}, RealVector{0.3, 0.4}, RealVector{0.5, 0.5}) == 0.0);
  CHECK(art_distance(RealVector{1, 1}, RealVector{0, 0}, RealVector{0.5, 0}) == doctest::Approx(5.0));
  CHECK_THROWS_AS(art_distance(RealVector{1}, RealVector{1, 2}, RealVector{0, 0}), DimensionError);
}

TEST_CASE("center update is a running mean") {
  CHECK(update_center(RealVector{0.5, 0.5}, 1, RealVector{1, 1}) == RealVector{0.75, 0.75});
  CHECK(update_center(RealVector{0.1, 0.9}, 0, RealVector{0.3, 0.4}) == RealVector{0.3, 0.4});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto pts = blobs(seed, 10 + seed * 7);
    RealVector c(4, 0.0), mean(4, 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) c = update_center(c, i, pts[i]);
    for (const auto& g : pts)
      for (std::size_t j = 0; j < 4; ++j) mean[j] += g[j];
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(c[j] - mean[j] / pts.size()) <= 1e-12);
  }
}

TEST_CASE("small clustering examples") {
  ArtConfig cfg;
  const auto one = art_cluster_points(std::vector<RealVector>{{0.1, 0.2, 0.3, 0.4}}, cfg);
  CHECK(one.cluster_count() == 1);
  CHECK(one.centers[0] == RealVector{0.1, 0.2, 0.3, 0.4});
  CHECK(one.converged);

  const auto two = art_cluster_points(std::vector<RealVector>{{0, 0, 0, 0}, {1, 1, 1, 1}}, cfg);
  CHECK(two.cluster_count() == 2);
  CHECK(two.size(0) == 1);
  CHECK(two.size(1) == 1);

  // zero vigilance and an unbounded radius give one cluster at the mean
  ArtConfig wide;
  wide.vigilance = RealVector(4, 0.0);
  wide.radius = 1e300;
  const auto pts = blobs(3, 100);
  const auto all = art_cluster_points(pts, wide);
  REQUIRE(all.cluster_count() == 1);
  for (std::size_t j = 0; j < 4; ++j) {
    double m = 0.0;
    for (const auto& g : pts) m += g[j];
    CHECK(all.centers[0][j] == doctest::Approx(m / 100).epsilon(1e-12));
  }
}

TEST_CASE("equilibrium is a fixed point of one more pass") {
  ArtConfig cfg;
  cfg.radius = 0.05;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto pts = blobs(seed, 300);
    const auto s = art_cluster_points(pts, cfg);
    REQUIRE(s.converged);
    // partition and centers
    std::vector<int> seen(pts.size(), 0);
    for (std::size_t k = 0; k < s.cluster_count(); ++k) {
      REQUIRE_FALSE(s.members[k].empty());
      RealVector mean(4, 0.0);
      for (auto i : s.members[k]) {
        ++seen[i];
        CHECK(s.assignment[i] == k);
        for (std::size_t j = 0; j < 4; ++j) mean[j] += pts[i][j] / s.size(k);
      }
      for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(s.centers[k][j] - mean[j]) <= 1e-9);
    }
    for (int c : seen) CHECK(c == 1);
    bool accepted = false;
    CHECK(replay_pass(pts, s.centers, cfg, accepted) == s.assignment);
    CHECK(accepted);
  }
}

TEST_CASE("flag rule") {
  // |C| = 2, |G| = 100, tau = 0.5: clusters under 25 flows are flagged
  ArtClusterState s;
  s.centers = {RealVector{0}, RealVector{1}};
  s.members.resize(2);
  for (std::size_t i = 0; i < 100; ++i) {
    const std::size_t k = i < 24 ? 0 : 1;
    s.members[k].push_back(i);
    s.assignment.push_back(k);
  }
  auto f = flag_art_clusters(s, 0.5);
  CHECK(f[0]);
  CHECK_FALSE(f[99]);
  CHECK(std::count(f.begin(), f.end(), true) == 24);
  CHECK(art_size_ratios(s)[0] == doctest::Approx(0.48));

  s.members[0].push_back(s.members[1].front());
  s.members[1].erase(s.members[1].begin());
  s.assignment[24] = 0;
  f = flag_art_clusters(s, 0.5);
  CHECK(std::count(f.begin(), f.end(), true) == 0);  // 25 is not below 25

  ArtConfig cfg;
  cfg.radius = 0.02;
  const auto c = art_cluster_points(blobs(4, 400), cfg);
  const auto none = flag_art_clusters(c, 0.0);
  CHECK(std::count(none.begin(), none.end(), true) == 0);
  std::vector<bool> prev(c.flow_count(), false);
  for (int t = 0; t <= 50; ++t) {
    const auto cur = flag_art_clusters(c, t / 50.0);
    for (std::size_t i = 0; i < cur.size(); ++i)
      if (prev[i]) CHECK(cur[i]);
    prev = cur;
  }
}

TEST_CASE("ART config validation and output") {
  ArtConfig bad;
  bad.vigilance = {1.0, 0, 0, 0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = ArtConfig{};
  bad.radius = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = ArtConfig{};
  bad.tau = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(art_cluster_points(std::vector<RealVector>{}, ArtConfig{}), ConfigError);
  CHECK_THROWS_AS(art_cluster_points(std::vector<RealVector>{{1, 2}}, ArtConfig{}), DimensionError);

  const auto s = art_cluster_points(std::vector<RealVector>{{0, 0, 0, 0}, {1, 1, 1, 1}, {1, 1, 1, 1}}, ArtConfig{});
  std::ostringstream flows, clusters;
  write_art_flows(flows, s, 0.9);
  CHECK(flows.str() == "flow_index,cluster_id,flagged\n0,0,1\n1,1,0\n2,1,0\n");
  write_art_clusters(clusters, s, 0.9);
  CHECK(clusters.str() == "cluster_id,size,center_1,center_2,center_3,center_4,flagged\n0,1,0,0,0,0,1\n1,2,1,1,1,1,0\n");
}
