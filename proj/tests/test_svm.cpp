#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <sstream>

#include "netad/error.hpp"
#include "netad/random.hpp"
#include "netad/svm.hpp"
#include "netad/svm_detect.hpp"
#include "oracles.hpp"

using namespace netad;

namespace {

std::vector<RealVector> cloud(std::uint64_t seed, std::size_t n, std::size_t dim) {
  Rng rng(seed, 0);
  std::vector<RealVector> out(n, RealVector(dim));
  for (auto& x : out)
    for (auto& c : x) c = rng.normal(0.0, 1.0);
  return out;
}

std::vector<std::vector<double>> gram(const std::vector<RealVector>& x, double gamma) {
  std::vector<std::vector<double>> k(x.size(), std::vector<double>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) k[i][j] = rbf_kernel(x[i], x[j], gamma);
  return k;
}

}  // namespace

TEST_CASE("RBF kernel") {
  const RealVector a{0, 0}, b{1, 0}, c{1, 1};
  CHECK(rbf_kernel(a, a, 3.0) == 1.0);
  CHECK(rbf_kernel(a, b, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(rbf_kernel(a, c, 0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(rbf_kernel(b, c, 2.0) == rbf_kernel(c, b, 2.0));
  CHECK_THROWS_AS(rbf_kernel(a, RealVector{1}, 1.0), DimensionError);
}

TEST_CASE("standardizer and default gamma") {
  const std::vector<RealVector> x{{1, 5}, {3, 5}, {5, 5}};
  const auto s = Standardizer::fit(x);
  CHECK(s.mean == RealVector{3, 5});
  CHECK(s.scale[1] == 1.0);
  const auto y = s.apply_all(x);
  CHECK(y[0][0] == doctest::Approx(-y[2][0]));
  CHECK(y[1][0] == 0.0);
  // unit variance per coordinate in 3 dims: gamma = 1/3
  const auto z = Standardizer::fit(cloud(1, 500, 3)).apply_all(cloud(1, 500, 3));
  CHECK(default_gamma(z) == doctest::Approx(1.0 / 3.0).epsilon(0.02));
}

TEST_CASE("dual solution matches a projected-gradient oracle") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto x = cloud(seed, 25 + seed * 5, 2);
    OcsvmParams p;
    p.nu = 0.1 + 0.1 * static_cast<double>(seed % 4);
    p.gamma = 0.5;
    p.tol = 1e-9;
    const auto dual = solve_one_class_dual(x, p);
    const double u = 1.0 / (p.nu * static_cast<double>(x.size()));
    CHECK(dual.upper == doctest::Approx(u));
    double sum = 0.0;
    for (double a : dual.alpha) {
      CHECK(a >= -1e-12);
      CHECK(a <= u + 1e-12);
      sum += a;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    const auto k = gram(x, p.gamma);
    const double want = oracle::one_class_dual_optimum(k, u);
    CHECK(std::abs(oracle::qp_objective(k, dual.alpha) - want) <= 1e-6);
    CHECK(std::abs(dual.objective - want) <= 1e-6);
    CHECK(dual.kkt_residual() <= 1e-6);
  }
}

TEST_CASE("nu bounds the outlier and support fractions") {
  for (double nu : {0.05, 0.1, 0.3}) {
    const auto x = cloud(11, 200, 2);
    OcsvmParams p;
    p.nu = nu;
    p.gamma = 0.5;
    p.tol = 1e-8;
    const auto model = train_ocsvm(x, p);
    std::size_t outliers = 0;
    for (const auto& v : x)
      if (decision_value(model, v) < -1e-6) ++outliers;
    const double l = static_cast<double>(x.size());
    CHECK(static_cast<double>(outliers) / l <= nu + 1e-9);
    CHECK(static_cast<double>(model.support_vectors.size()) / l >= nu - 1e-9);
  }
}

TEST_CASE("decision value is the kernel expansion minus rho") {
  const auto x = cloud(5, 80, 3);
  OcsvmParams p;
  p.nu = 0.2;
  p.gamma = 0.3;
  const auto model = train_ocsvm(x, p);
  const auto probe = cloud(6, 40, 3);
  for (const auto& z : probe) {
    double s = 0.0;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
      double d = 0.0;
      for (std::size_t c = 0; c < 3; ++c) d += (model.support_vectors[i][c] - z[c]) * (model.support_vectors[i][c] - z[c]);
      s += model.alphas[i] * std::exp(-p.gamma * d);
    }
    CHECK(std::abs(decision_value(model, z) - (s - model.rho)) <= 1e-10);
  }
  // far away every kernel term vanishes
  CHECK(decision_value(model, RealVector{1e3, 1e3, 1e3}) == doctest::Approx(-model.rho));
}

TEST_CASE("identical points and duplicates") {
  std::vector<RealVector> same(20, RealVector{2.0, -1.0});
  OcsvmParams p;
  p.nu = 0.5;
  p.gamma = 1.0;
  const auto model = train_ocsvm(same, p);
  CHECK(model.rho == doctest::Approx(1.0));
  CHECK(decision_value(model, same[0]) == doctest::Approx(0.0).epsilon(1e-9));

  auto x = cloud(8, 30, 2);
  x.push_back(x[3]);
  p.nu = 0.2;
  const auto m2 = train_ocsvm(x, p);
  CHECK(decision_value(m2, x[3]) == decision_value(m2, x.back()));
}

TEST_CASE("solver input errors") {
  OcsvmParams p;
  CHECK_THROWS_AS(solve_one_class_dual(std::vector<RealVector>{{1.0}}, p), ConfigError);
  p.nu = 0.01;  // nu * l < 1
  CHECK_THROWS_AS(solve_one_class_dual(cloud(1, 10, 2), p), ConfigError);
  p.nu = 0.5;
  p.max_iterations = 1;
  CHECK_THROWS_AS(solve_one_class_dual(cloud(1, 50, 2), p), ConvergenceError);
}

TEST_CASE("flow SVM flags an isolated flow") {
  std::vector<DistilledFlow> flows;
  Rng rng(2, 0);
  for (int i = 0; i < 300; ++i)
    flows.push_back(DistilledFlow{0, rng.normal(10, 1), rng.normal(2000, 100), rng.exponential(2), double(i)});
  std::vector<DistilledFlow> probe(flows.begin(), flows.begin() + 50);
  probe.push_back(DistilledFlow{0, 10, 40000, 2, 300.0});
  FlowSvmOptions opts;
  opts.nu = 0.01;
  const auto v = detect_flow_svm(flows, probe, opts);
  REQUIRE(v.size() == probe.size());
  CHECK(v.back().flagged);
  CHECK(v.back().score < 0.0);
  std::size_t flagged = 0;
  for (const auto& f : v) flagged += f.flagged;
  CHECK(flagged <= 3);

  // trained on itself, outliers beyond the solver tolerance stay under nu
  const auto self = detect_flow_svm(flows, opts);
  std::size_t self_flagged = 0;
  for (const auto& f : self) self_flagged += f.score < -1e-3;
  CHECK(self_flagged <= 3);
  CHECK(flow_svm_feature(flows[0]) == RealVector{flows[0].dist_to_center, flows[0].size_bytes, flows[0].duration});

  std::stringstream s;
  write_flow_verdicts(s, v);
  CHECK(s.str().rfind("flow_index,start_time,score,flagged\n", 0) == 0);
  const auto back = read_flow_verdicts(s);
  REQUIRE(back.size() == v.size());
  CHECK(back.back().flagged);
}

TEST_CASE("window feature layout") {
  std::vector<FlowState> states{{0}, {1}, {1}, {0}};
  const Window w{0, 0.0, {0, 1, 2, 3}};
  const auto y = window_feature(w, states, 2);
  REQUIRE(y.size() == 2 + 4 + 1);
  CHECK(y[0] == 0.5);
  CHECK(y[1] == 0.5);
  // pairs 01, 11, 10
  CHECK(y[2] == 0.0);
  CHECK(y[3] == doctest::Approx(1.0 / 3.0));
  CHECK(y[4] == doctest::Approx(1.0 / 3.0));
  CHECK(y[5] == doctest::Approx(1.0 / 3.0));
  CHECK(y[6] == 4.0);
}

TEST_CASE("exported flow SVM model reproduces the scores") {
  std::vector<DistilledFlow> flows;
  Rng rng(3, 0);
  for (int i = 0; i < 200; ++i)
    flows.push_back(DistilledFlow{0, rng.normal(5, 2), rng.normal(3000, 400), rng.exponential(1), double(i)});
  FlowSvmOptions opts;
  opts.nu = 0.05;
  const auto det = fit_flow_svm(flows, opts);
  std::stringstream s;
  det.write(s);

  // parse the CSV back by hand and rescore from it alone
  std::map<std::string, double> meta;
  std::string line;
  std::getline(s, line);
  CHECK(line == "key,value");
  while (std::getline(s, line) && !line.empty()) {
    const auto comma = line.find(',');
    meta[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  std::getline(s, line);
  CHECK(line == "alpha,x0,x1,x2");
  std::vector<std::vector<double>> rows;
  while (std::getline(s, line)) {
    std::vector<double> r;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
    REQUIRE(r.size() == 4);
    rows.push_back(r);
  }
  CHECK(rows.size() == det.model.support_vectors.size());
  CHECK(meta.at("nu") == doctest::Approx(0.05));
  const char* names[] = {"dist", "size", "duration"};
  const auto verdicts = score_flows(det, flows);
  const auto wrapped = detect_flow_svm(flows, flows, opts);
  for (std::size_t i = 0; i < flows.size(); i += 7) {
    const double raw[] = {flows[i].dist_to_center, flows[i].size_bytes, flows[i].duration};
    double sum = 0.0;
    for (const auto& r : rows) {
      double d = 0.0;
      for (int c = 0; c < 3; ++c) {
        const std::string n = names[c];
        const double z = (raw[c] - meta.at("mean_" + n)) / meta.at("scale_" + n);
        d += (r[c + 1] - z) * (r[c + 1] - z);
      }
      sum += r[0] * std::exp(-meta.at("gamma") * d);
    }
    // 9 significant digits in the file
    CHECK(verdicts[i].score == doctest::Approx(sum - meta.at("rho")).epsilon(1e-6).scale(1.0));
    CHECK(verdicts[i].score == wrapped[i].score);
  }
}

TEST_CASE("window SVM detector matches the one-shot function") {
  Rng rng(4, 0);
  std::vector<FlowState> states;
  for (int i = 0; i < 400; ++i) states.push_back(FlowState{static_cast<std::size_t>(rng.uniform() * 3.0)});
  std::vector<Window> windows;
  for (std::size_t j = 0; j < 30; ++j) {
    Window w{j, double(j) * 10.0, {}};
    for (std::size_t k = j * 10; k < j * 10 + 40 + j % 5; ++k) w.members.push_back(k);
    windows.push_back(w);
  }
  windows.push_back(Window{30, 300.0, {5}});
  WindowSvmOptions opts;
  opts.nu = 0.2;
  const auto det = fit_window_svm(windows, states, 3, opts);
  CHECK(det.count_mean == doctest::Approx(42.0));
  const auto a = score_windows(det, windows, states);
  const auto b = detect_window_svm(windows, states, 3, opts);
  REQUIRE(a.size() == b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    CHECK(a[j].score == b[j].score);
    CHECK(a[j].flagged == b[j].flagged);
  }
  CHECK(a.back().degenerate);
  CHECK_FALSE(a.back().flagged);

  std::stringstream s;
  det.write(s);
  const auto text = s.str();
  CHECK(text.find("count_mean,42\n") != std::string::npos);
  CHECK(text.find("input_dim,13\n") != std::string::npos);
  CHECK(text.find("\n\nalpha,x0") != std::string::npos);
}
