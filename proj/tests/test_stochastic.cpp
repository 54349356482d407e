#include <doctest.h>

#include <cmath>
#include <sstream>

#include "netad/error.hpp"
#include "netad/random.hpp"
#include "netad/stochastic.hpp"
#include "oracles.hpp"

using namespace netad;

namespace {

EmpiricalMeasure em(std::vector<double> p) { return EmpiricalMeasure{std::move(p), 1}; }

std::vector<double> random_simplex(Rng& rng, std::size_t n, bool zeros) {
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& x : p) {
    x = (zeros && rng.uniform() < 0.3) ? 0.0 : rng.exponential(1.0);
    s += x;
  }
  if (s == 0.0) {
    p[0] = 1.0;
    s = 1.0;
  }
  for (auto& x : p) x /= s;
  return p;
}

std::vector<FlowState> seq(std::initializer_list<std::size_t> s) {
  std::vector<FlowState> out;
  for (auto x : s) out.push_back(FlowState{x});
  return out;
}

// Three users, two sizes, steady one-second spacing.
std::vector<FlowRecord> small_reference(std::size_t n) {
  const IpAddress users[] = {IpAddress::parse("10.0.0.1"), IpAddress::parse("10.0.0.2"), IpAddress::parse("10.0.9.1")};
  std::vector<FlowRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    FlowRecord f;
    f.user = users[i % 3];
    f.size_bytes = (i % 2 == 0) ? 100.0 : 900.0;
    f.duration = 1.0 + static_cast<double>(i % 3);
    f.start_time = static_cast<double>(i);
    out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("relative entropy examples") {
  CHECK(relative_entropy(em({1, 0}), em({0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(relative_entropy(em({0.25, 0.75}), em({0.25, 0.75})) == 0.0);
  CHECK(relative_entropy(em({0, 1}), em({0.9, 0.1})) == doctest::Approx(std::log(10.0)).epsilon(1e-12));
  CHECK_THROWS_AS(relative_entropy(em({1}), em({0.5, 0.5})), DimensionError);
}

TEST_CASE("relative entropy agrees with the direct sum") {
  Rng rng(3, 0);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 2 + rng.index(30);
    auto p = random_simplex(rng, n, true);
    auto q = random_simplex(rng, n, false);
    const double got = relative_entropy(em(p), em(q));
    const double want = oracle::kl(p, q);
    CHECK(got >= 0.0);
    CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, want));
  }
}

TEST_CASE("Markov divergence examples") {
  const auto q = transition_measure(seq({0, 1, 0, 1, 0}), 2);
  const auto pi = smoothed_transitions(seq({}), 2, 1.0);  // uniform 1/4 per pair
  CHECK(relative_entropy_markov(q, pi) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(relative_entropy_markov(q, q) == doctest::Approx(0.0));
  // a scaled joint measure has the same conditionals
  TransitionMeasure r = pi;
  r.probs = {0.1, 0.1, 0.4, 0.4};
  TransitionMeasure s = pi;
  s.probs = {0.3, 0.3, 0.2, 0.2};
  CHECK(relative_entropy_markov(r, s) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(relative_entropy_markov(q, smoothed_transitions(seq({}), 3, 1.0)), DimensionError);
}

TEST_CASE("Markov divergence agrees with the conditional oracle") {
  Rng rng(4, 0);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t d = 2 + rng.index(8);
    TransitionMeasure q{d, random_simplex(rng, d * d, true), 10};
    TransitionMeasure pi{d, random_simplex(rng, d * d, false), 10};
    const double want = oracle::kl_markov(q.probs, pi.probs, d);
    const double got = relative_entropy_markov(q, pi);
    CHECK(std::abs(got - std::max(want, 0.0)) <= 1e-10);
  }
}

TEST_CASE("Sanov threshold") {
  CHECK(sanov_threshold(0.01, 100) == doctest::Approx(0.046052).epsilon(1e-5));
  CHECK(sanov_threshold(0.01, 1) == doctest::Approx(-std::log(0.01)));
  double prev = INFINITY;
  for (std::size_t n = 1; n < 500; n += 7) {
    const double eta = sanov_threshold(0.05, n);
    CHECK(eta < prev);
    prev = eta;
  }
  CHECK(sanov_threshold(0.001, 50) > sanov_threshold(0.01, 50));
  CHECK_THROWS_AS(sanov_threshold(0.0, 10), ConfigError);
  CHECK_THROWS_AS(sanov_threshold(1.0, 10), ConfigError);
  CHECK_THROWS_AS(sanov_threshold(0.1, 0), ConfigError);
}

TEST_CASE("smoothing keeps every cell positive and sums to one") {
  const auto s = seq({0, 0, 1, 0, 2});
  const auto mu = smoothed_measure(s, 4, 0.5);
  CHECK(mu.probs[0] == doctest::Approx(3.5 / 7.0));
  CHECK(mu.probs[3] == doctest::Approx(0.5 / 7.0));
  const auto pi = smoothed_transitions(s, 4, 0.25);
  double total = 0.0;
  for (double p : pi.probs) {
    CHECK(p > 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(pi.at(0, 0) == doctest::Approx(1.25 / 8.0));
}

TEST_CASE("reference model from flows") {
  const auto flows = small_reference(60);
  ReferenceOptions opts;
  opts.clusters = 2;
  opts.levels = QuantLevels{1, 2, 1};
  const auto ref = build_reference(flows, opts);
  CHECK(ref.alphabet_size() == 4);
  CHECK(ref.states.size() == 60);
  double total = 0.0;
  for (double p : ref.mu.probs) total += p;
  CHECK(total == doctest::Approx(1.0));
  // default pseudo-count is 1/|Sigma|
  std::vector<std::size_t> count(4, 0);
  for (auto s : ref.states) ++count[s.symbol];
  for (std::size_t i = 0; i < 4; ++i) CHECK(ref.mu.probs[i] == doctest::Approx((count[i] + 0.25) / 61.0));

  opts.pseudo_count = 0.0;
  CHECK_THROWS_AS(build_reference(flows, opts), ConfigError);
  CHECK_THROWS_AS(build_reference(std::span<const FlowRecord>(flows.data(), 1), ReferenceOptions{}), ConfigError);
}

TEST_CASE("model-free detector scores windows against mu") {
  const auto flows = small_reference(90);
  ReferenceOptions opts;
  opts.clusters = 2;
  opts.levels = QuantLevels{1, 2, 1};
  const auto ref = build_reference(flows, opts);
  auto states = ref.states;
  // a run of a single state late in the sequence
  for (std::size_t i = 40; i < 90; ++i) states[i] = states[61];
  const auto t = start_times<FlowRecord>(flows);
  const auto windows = partition_windows(t, WindowConfig{10, 30});
  const auto v = detect_model_free(windows, states, ref, StochasticOptions{});
  REQUIRE(v.size() == windows.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto ws = window_states(windows[j], states);
    const auto e = empirical_measure(ws, ref.alphabet_size());
    CHECK(v[j].score == doctest::Approx(oracle::kl(e.probs, ref.mu.probs)).epsilon(1e-12));
    CHECK(v[j].threshold == doctest::Approx(-std::log(0.01) / static_cast<double>(ws.size())));
    CHECK(v[j].flagged == (v[j].score >= v[j].threshold));
  }
  // a pure single-state window scores about -ln mu of that state
  const double rare = -std::log(ref.mu.probs[states[61].symbol]);
  CHECK(v.back().score == doctest::Approx(rare).epsilon(1e-12));
  CHECK(v.back().flagged);
  CHECK_FALSE(v.front().flagged);

  StochasticOptions fixed;
  fixed.mode = ThresholdMode::fixed_mean;
  for (const auto& w : detect_model_free(windows, states, ref, fixed))
    CHECK(w.threshold == doctest::Approx(-std::log(0.01) / 30.0));
  StochasticOptions bad;
  bad.epsilon = 2.0;
  CHECK_THROWS_AS(detect_model_free(windows, states, ref, bad), ConfigError);
}

TEST_CASE("model-based detector marks single-flow windows degenerate") {
  const auto flows = small_reference(30);
  ReferenceOptions opts;
  opts.clusters = 2;
  opts.levels = QuantLevels{1, 2, 1};
  const auto ref = build_reference(flows, opts);
  std::vector<Window> windows{{0, 0.0, {0}}, {1, 1.0, {1, 2, 3, 4}}};
  const auto v = detect_model_based(windows, ref.states, ref, StochasticOptions{});
  CHECK(v[0].degenerate);
  CHECK_FALSE(v[0].flagged);
  CHECK(std::isinf(v[0].threshold));
  CHECK_FALSE(v[1].degenerate);
  const auto q = transition_measure(window_states(windows[1], ref.states), ref.alphabet_size());
  CHECK(v[1].score == doctest::Approx(std::max(0.0, oracle::kl_markov(q.probs, ref.pi.probs, 4))));
}

TEST_CASE("verdict CSV round trip") {
  std::vector<WindowVerdict> v{{0, 0, 10, 0.5, 0.1, true, false}, {1, 30, 1, 0, INFINITY, false, true}};
  std::stringstream s;
  write_verdicts(s, v);
  CHECK(s.str().rfind("window_index,start_time,score,threshold,flagged\n0,0,0.5,0.1,1\n", 0) == 0);
  const auto back = read_verdicts(s);
  REQUIRE(back.size() == 2);
  CHECK(back[0].score == 0.5);
  CHECK(back[0].flagged);
  CHECK(back[1].degenerate);
  std::istringstream bad("nope\n");
  CHECK_THROWS_AS(read_verdicts(bad), ParseError);
}
