#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "cognoise/inference/diagnostics.hpp"
#include "cognoise/math.hpp"
#include "cognoise/rng.hpp"

using namespace cognoise;

TEST_CASE("rhat on iid chains is close to one") {
  rng::Stream s(1);
  std::vector<std::vector<double>> chains(4);
  for (auto& c : chains) {
    for (int i = 0; i < 10000; ++i) c.push_back(s.normal());
  }
  const double r = infer::rhat(chains);
  CHECK(r > 0.999);
  CHECK(r < 1.01);
}

TEST_CASE("rhat flags disjoint chains") {
  rng::Stream s(2);
  std::vector<std::vector<double>> chains(4);
  for (std::size_t c = 0; c < 4; ++c) {
    const double shift = c < 2 ? 0.0 : 10.0;
    for (int i = 0; i < 500; ++i) chains[c].push_back(s.normal() + shift);
  }
  CHECK(infer::rhat(chains) > 2.0);
}

TEST_CASE("rhat flags degenerate chains") {
  std::vector<std::vector<double>> chains(2, std::vector<double>(100, 3.25));
  CHECK(std::isinf(infer::rhat(chains)));
  CHECK_THROWS_AS(infer::rhat(std::vector<std::vector<double>>(1)), std::invalid_argument);
}

TEST_CASE("hdi window scan") {
  // 100 equally spaced values: every width-95 window ties, lowest start wins
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(static_cast<double>(i));
  const auto h = infer::hdi(v, 0.95);
  CHECK(h.first == 1.0);
  CHECK(h.second == 95.0);
  CHECK_THROWS_AS(infer::hdi(v, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(infer::hdi(v, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(infer::hdi(std::vector<double>(5, 1.0), 0.95), std::invalid_argument);
}

TEST_CASE("hdi equals brute force on random samples") {
  rng::Stream s(7);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 20 + static_cast<int>(s.uniform_int(0, 180));
    std::vector<double> v;
    for (int i = 0; i < n; ++i) {
      // mix of normal and lognormal to get skewed samples
      v.push_back(rep % 2 == 0 ? s.normal() : std::exp(s.normal()));
    }
    const double mass = 0.5 + 0.45 * s.uniform();
    const auto fast = infer::hdi(v, mass);

    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const auto w = static_cast<std::size_t>(std::ceil(mass * n));
    double best_width = std::numeric_limits<double>::infinity();
    std::pair<double, double> brute{0, 0};
    for (std::size_t i = 0; i + w <= sorted.size(); ++i) {
      const double width = sorted[i + w - 1] - sorted[i];
      if (width < best_width) {
        best_width = width;
        brute = {sorted[i], sorted[i + w - 1]};
      }
    }
    CHECK(fast.first == brute.first);
    CHECK(fast.second == brute.second);
  }
}

TEST_CASE("hdi of a symmetric unimodal sample brackets the center") {
  rng::Stream s(3);
  std::vector<double> v;
  for (int i = 0; i < 20000; ++i) v.push_back(s.normal());
  const auto h = infer::hdi(v, 0.95);
  CHECK(h.first == Catch::Approx(-1.96).margin(0.12));
  CHECK(h.second == Catch::Approx(1.96).margin(0.12));
}

namespace {

infer::PosteriorDraws toy_draws() {
  // altruism-full style dims with two chains of synthetic values
  infer::PosteriorDraws d;
  d.names = {"mu_nu_so_B", "mu_nu_so_T", "mu_nu_b_B", "mu_nu_b_T", "mu_b", "mu_mu_r",
             "tau_nu_so", "tau_nu_b", "tau_b", "tau_mu_r",
             "omega_nu_so_nu_b", "omega_nu_so_b", "omega_nu_b_b",
             "omega_nu_so_mu_r", "omega_nu_b_mu_r", "omega_b_mu_r"};
  d.n_chains = 2;
  d.n_draws = 500;
  rng::Stream s(11);
  d.values.resize(d.n_chains * d.n_draws * d.names.size());
  std::size_t at = 0;
  for (std::size_t c = 0; c < d.n_chains; ++c) {
    for (std::size_t i = 0; i < d.n_draws; ++i) {
      const double base = std::log(0.313);
      d.values[at++] = base + 0.001 * s.normal();       // mu_nu_so_B (tight)
      d.values[at++] = std::log(0.399) + 0.01 * s.normal();
      d.values[at++] = std::log(0.19) + 0.01 * s.normal();
      d.values[at++] = std::log(0.19) + 0.01 * s.normal();
      d.values[at++] = -0.795 + 0.01 * s.normal();
      d.values[at++] = std::log(0.515) + 0.01 * s.normal();
      d.values[at++] = 1e-9 + std::abs(1e-4 * s.normal());  // tau_nu_so ~ 0
      d.values[at++] = 0.3 + 0.01 * std::abs(s.normal());
      d.values[at++] = 0.2 + 0.01 * std::abs(s.normal());
      d.values[at++] = 1e-9 + std::abs(1e-4 * s.normal());  // tau_mu_r ~ 0
      for (int o = 0; o < 6; ++o) d.values[at++] = 0.5 + 0.001 * s.normal();
    }
  }
  d.meta = {{"seed", 1}};
  return d;
}

}  // namespace

TEST_CASE("summarize emits raw and derived rows") {
  const auto draws = toy_draws();
  const infer::ModelSpec spec{infer::Variant::altruism_full, true};
  const auto rows = infer::summarize(draws, &spec);
  auto find = [&](const std::string& name) -> const infer::SummaryRow& {
    for (const auto& r : rows) {
      if (r.name == name) return r;
    }
    FAIL("missing row " + name);
    return rows.front();
  };
  // with tau_nu_so ~ 0, the hypermean of nu_so_B concentrates at 0.313 and
  // the derived alpha row reproduces the evidence-weight identity
  CHECK(find("nu_so_B").mean == Catch::Approx(0.313).margin(1e-3));
  CHECK(find("alpha_B").mean == Catch::Approx(0.911).margin(1.5e-3));
  CHECK(find("alpha_T").mean == Catch::Approx(0.862).margin(4e-3));
  // median-convention row also present
  CHECK(find("nu_so_B_med").mean == Catch::Approx(0.313).margin(1e-3));
  CHECK(find("beta").mean == Catch::Approx(0.316).margin(3e-3));
  // with the magnitude prior mean at 0.515 the thresholds mirror the
  // published identities: delta = 0.515^-(1-alpha)
  CHECK(find("delta_B").mean ==
        Catch::Approx(model::prior_threshold(0.515, 0.911)).margin(5e-3));
  CHECK(find("delta_T").mean ==
        Catch::Approx(model::prior_threshold(0.515, 0.862)).margin(5e-3));
  CHECK(std::isfinite(find("mu_nu_so_B").rhat));
}

TEST_CASE("summary of constant draws degenerates cleanly") {
  infer::PosteriorDraws d;
  d.names = {"x"};
  d.n_chains = 2;
  d.n_draws = 50;
  d.values.assign(2 * 50, 4.2);
  const auto rows = infer::summarize(d, nullptr);
  CHECK(rows[0].sd == 0.0);
  CHECK(rows[0].hdi_lo == 4.2);
  CHECK(rows[0].hdi_hi == 4.2);
  CHECK(std::isinf(rows[0].rhat));
}

TEST_CASE("summary statistics match an independent one-pass routine") {
  const auto draws = toy_draws();
  const auto rows = infer::summarize(draws, nullptr);
  for (std::size_t k = 0; k < draws.n_dims(); ++k) {
    const auto col = draws.column(k);
    math::Welford acc;
    for (double v : col) acc.add(v);
    CHECK(rows[k].mean == Catch::Approx(acc.mean()).margin(1e-10));
    CHECK(rows[k].sd == Catch::Approx(acc.sd()).margin(1e-10));
  }
}

TEST_CASE("prob statements") {
  const auto draws = toy_draws();
  const infer::ModelSpec spec{infer::Variant::altruism_full, true};
  CHECK(infer::prob_statement(draws, &spec, "nu_so_T>nu_so_B") == 1.0);
  CHECK(infer::prob_statement(draws, &spec, "nu_so_B>nu_so_T") == 0.0);
  const double p = infer::prob_statement(draws, &spec, "mu_b< -0.795");
  CHECK(p == Catch::Approx(0.5).margin(0.05));
  CHECK(infer::prob_statement(draws, &spec, "delta_T>delta_B") > 0.9);
  CHECK_THROWS_AS(infer::prob_statement(draws, &spec, "nonsense"), config_error);
  CHECK_THROWS_AS(infer::prob_statement(draws, &spec, "ghost>1"), std::invalid_argument);
}

TEST_CASE("extract correlations summarizes omega entries") {
  const auto draws = toy_draws();
  const auto rows = infer::extract_correlations(draws);
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.name.rfind("omega_", 0) == 0);
    CHECK(r.mean == Catch::Approx(0.5).margin(0.01));
  }
}

TEST_CASE("posterior predictive curve is monotone and banded") {
  const auto draws = toy_draws();
  const infer::ModelSpec spec{infer::Variant::altruism_full, true};
  std::vector<std::pair<std::int64_t, std::int64_t>> grid;
  for (int i = 1; i <= 10; ++i) grid.emplace_back(100 * i, 1000);
  const auto curve = infer::posterior_predictive(draws, spec, grid, 60, 80, 5);
  REQUIRE(curve.size() == 2 * grid.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(curve[i].hdi_lo <= curve[i].mean);
    CHECK(curve[i].mean <= curve[i].hdi_hi);
  }
  // mean curve nondecreasing in ratio within each group
  for (int g = 0; g < 2; ++g) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
      CHECK(curve[g * grid.size() + i].mean >= curve[g * grid.size() + i - 1].mean);
    }
  }
}
