#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cognoise/design.hpp"
#include "cognoise/errors.hpp"
#include "cognoise/math.hpp"
#include "cognoise/model.hpp"
#include "cognoise/rng.hpp"

using namespace cognoise;
using model::IndividualParams;
using model::NumberParams;
using model::RandomUtilityParams;

namespace {

// Straightforward reference evaluation of the altruism choice rule, kept
// independent of the implementation path it checks.
double ref_prob_self(double beta, double mu_r, double nu_so, double nu_b, double ratio) {
  const double alpha = 1.0 / (1.0 + nu_so * nu_so);
  const double ln_delta = -(1.0 - alpha) * std::log(mu_r);
  const double num = alpha * std::log(ratio) - std::log(beta / (1.0 - beta)) - ln_delta;
  return 0.5 * std::erfc(-num / std::sqrt(nu_so * nu_so * alpha * alpha + nu_b * nu_b) *
                         M_SQRT1_2);
}

std::vector<design::TrialSpec> uniform_ratio_grid() {
  std::vector<design::TrialSpec> g;
  for (int i = 1; i <= 12; ++i) {
    g.push_back({design::Task::altruism, i - 1, 0, i - 1, 100 * i, 1000});
  }
  return g;
}

}  // namespace

TEST_CASE("evidence weight identities") {
  CHECK(model::evidence_weight(0.0, 1.0) == 1.0);
  CHECK(model::evidence_weight(0.313, 1.0) == Catch::Approx(0.9108).margin(5e-5));
  CHECK(model::evidence_weight(0.172, 1.0) == Catch::Approx(0.971).margin(5e-4));
  CHECK_THROWS_AS(model::evidence_weight(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(model::evidence_weight(0.3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(model::evidence_weight(std::nan(""), 1.0), std::invalid_argument);
}

TEST_CASE("evidence weight is continuous and strictly decreasing") {
  double prev = model::evidence_weight(0.0, 1.0);
  CHECK(prev == 1.0);
  for (int i = 1; i <= 100; ++i) {
    const double nu = 0.05 * i;
    const double w = model::evidence_weight(nu, 1.0);
    CHECK(w < prev);
    CHECK(w > 0.0);
    prev = w;
  }
}

TEST_CASE("prior threshold identities") {
  CHECK(model::prior_threshold(1.0, 0.7) == 1.0);
  for (double a : {0.05, 0.3, 0.77, 1.0}) CHECK(model::prior_threshold(1.0, a) == 1.0);
  for (double m : {0.2, 0.6, 1.7, 4.0}) CHECK(model::prior_threshold(m, 1.0) == 1.0);
  CHECK(model::prior_threshold(0.515, 0.962) == Catch::Approx(1.0256).margin(1e-4));
  CHECK(model::prior_threshold(0.474, 0.939) == Catch::Approx(1.0466).margin(1e-4));
  // delta > 1 iff mu_r < 1 (for alpha < 1)
  CHECK(model::prior_threshold(0.5, 0.9) > 1.0);
  CHECK(model::prior_threshold(1.5, 0.9) < 1.0);
  CHECK_THROWS_AS(model::prior_threshold(0.0, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(model::prior_threshold(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(model::prior_threshold(0.5, 1.1), std::invalid_argument);
}

TEST_CASE("prob_self spec values") {
  const IndividualParams sym{0.5, 0.25, 0.25, 1.0};
  CHECK(model::prob_self(sym, 500, 500) == 0.5);

  const IndividualParams p{0.3, 0.25, 0.25, 1.0};
  CHECK(model::prob_self_ratio(p, 0.474) == Catch::Approx(0.6633).margin(1e-4));
  CHECK(model::prob_self_ratio(p, 0.474) ==
        Catch::Approx(ref_prob_self(0.3, 1.0, 0.25, 0.25, 0.474)).margin(1e-12));

  // log-symmetry at beta = 0.5, mu_r = 1
  for (double r : {1.1, 1.3, 1.5, 2.0, 3.0}) {
    CHECK(model::prob_self_ratio(sym, r) + model::prob_self_ratio(sym, 1.0 / r) ==
          Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("prob_self conventions and errors") {
  const IndividualParams p{0.3, 0.25, 0.25, 1.0};
  CHECK(model::prob_self(p, 0, 655) == 0.0);
  CHECK_THROWS_AS(model::prob_self(p, 100, 0), std::invalid_argument);
  CHECK_THROWS_AS(model::prob_self(p, -1, 655), std::invalid_argument);
  const IndividualParams det{0.3, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(model::prob_self(det, 100, 655), deterministic_limit_error);
  CHECK_THROWS_AS(model::prob_self(det, 0, 655), deterministic_limit_error);
}

TEST_CASE("prob_self monotone in both payments") {
  const IndividualParams p{0.35, 0.4, 0.2, 0.8};
  double prev = 0.0;
  for (std::int64_t self = 50; self <= 2000; self += 150) {
    const double v = model::prob_self(p, self, 926);
    CHECK(v > prev);
    prev = v;
  }
  prev = 1.0;
  for (std::int64_t other = 200; other <= 3000; other += 200) {
    const double v = model::prob_self(p, 655, other);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("prob_A spec values") {
  // numerator vanishes for any nu when the prior mean sits on the objective
  // threshold ratio 1/2
  for (double nu : {0.05, 0.198, 0.5, 1.5}) {
    const NumberParams p{nu, 0.5};
    CHECK(model::prob_A_ratio(p, 0.5) == Catch::Approx(0.5).margin(1e-14));
  }
  const NumberParams p{0.198, 0.515};
  CHECK(model::prob_A(p, 600, 1000) == Catch::Approx(0.8223).margin(1e-3));
  // independent evaluation with the published rounded alpha/delta
  const double alpha = 0.962;
  const double num = alpha * std::log(0.6) + std::log(2.0) - std::log(1.026);
  CHECK(model::prob_A(p, 600, 1000) ==
        Catch::Approx(math::norm_cdf(num / (alpha * 0.198))).margin(7e-4));

  // step-function limit
  const NumberParams tiny{1e-8, 1.0};
  CHECK(model::prob_A_ratio(tiny, 0.6) > 1.0 - 1e-12);
  CHECK(model::prob_A_ratio(tiny, 0.4) < 1e-12);

  CHECK_THROWS_AS(model::prob_A(p, 0, 1000), std::invalid_argument);
  CHECK_THROWS_AS(model::prob_A(p, 600, 0), std::invalid_argument);
  const NumberParams det{0.0, 1.0};
  CHECK_THROWS_AS(model::prob_A(det, 600, 1000), deterministic_limit_error);
}

TEST_CASE("random utility benchmark") {
  const RandomUtilityParams even{0.5, 1.3};
  CHECK(model::prob_self_random_utility(even, 700, 700) == 0.5);
  const RandomUtilityParams lazy{0.37, 1e-12};
  CHECK(model::prob_self_random_utility(lazy, 100, 1800) == Catch::Approx(0.5).margin(1e-9));
  const RandomUtilityParams p{0.3, 1.0};
  CHECK(model::prob_self_random_utility(p, 200, 300) ==
        Catch::Approx(1.0 / (1.0 + std::exp(-0.5))).margin(1e-12));
  CHECK(model::prob_self_random_utility(p, 200, 300) == Catch::Approx(0.6225).margin(1e-4));
  // overflow safety
  const RandomUtilityParams hot{0.3, 500.0};
  CHECK(model::prob_self_random_utility(hot, 2000, 100) == 1.0);
  CHECK(model::prob_self_random_utility(hot, 0, 2000) == 0.0);
}

TEST_CASE("linear-encoding variant") {
  // alpha = 1 makes delta = 0; indifference when b = self/other
  const IndividualParams pin{0.375, 0.0, 0.3, 1.0};
  CHECK(model::prob_self_linear(pin, 600, 1000) == Catch::Approx(0.5).margin(1e-14));
  // alpha = 0.9 (nu_so = 1/3), mu_r = 1 gives delta = 0.1: b = 0.8 at ratio 1
  const IndividualParams p2{0.8 / 1.8, 1.0 / 3.0, 0.25, 1.0};
  CHECK(model::prob_self_linear(p2, 1000, 1000) == Catch::Approx(0.5).margin(1e-12));
  // independent hand evaluation
  const IndividualParams p3{0.3, 0.25, 0.25, 1.0};
  const double alpha = 1.0 / (1.0 + 0.0625);
  const double delta = (1.0 - alpha) * 1.0;
  const double num = alpha * 0.6 - 3.0 / 7.0 - delta;
  const double den = std::sqrt(0.0625 * alpha * alpha + 0.0625);
  CHECK(model::prob_self_linear(p3, 600, 1000) ==
        Catch::Approx(math::norm_cdf(num / den)).margin(1e-12));
}

TEST_CASE("indifference ratio") {
  const IndividualParams even{0.5, 0.25, 0.25, 1.0};
  CHECK(model::indifference_ratio(even) == 1.0);

  const IndividualParams p{0.3, 0.25, 0.4, 1.0};
  const double expected = std::pow(0.3 / 0.7, 1.0 / (1.0 / 1.0625));
  CHECK(model::indifference_ratio(p) == Catch::Approx(expected).margin(1e-14));

  // exactly invariant to nu_b (bit-identical)
  for (double nub : {0.01, 0.25, 1.0, 4.0}) {
    const IndividualParams q{0.3, 0.25, nub, 1.0};
    CHECK(model::indifference_ratio(q) == model::indifference_ratio(p));
  }

  // prob_self at the indifference ratio is 1/2 for randomized parameters
  rng::Stream s(2024);
  for (int i = 0; i < 200; ++i) {
    IndividualParams q{0.05 + 0.9 * s.uniform(), 0.05 + 1.5 * s.uniform(),
                       0.05 + 1.5 * s.uniform(), std::exp(s.normal() * 0.5)};
    const double rstar = model::indifference_ratio(q);
    CHECK(model::prob_self_ratio(q, rstar) == Catch::Approx(0.5).margin(1e-12));
  }
}

TEST_CASE("mean choice over grid basics") {
  const IndividualParams p{0.3, 0.25, 0.25, 1.0};
  const auto grid = design::altruism_grid();
  const std::vector<design::TrialSpec> single(grid.begin(), grid.begin() + 1);
  CHECK(model::mean_choice_over_grid(p, single) ==
        model::prob_self(p, single[0].self_cents, single[0].other_cents));
  CHECK_THROWS_AS(model::mean_choice_over_grid(p, std::vector<design::TrialSpec>{}),
                  std::invalid_argument);
}

TEST_CASE("noise sweeps on the experimental grid") {
  const auto grid = design::altruism_grid();
  // more payment noise raises the average at mu_r = 1
  double prev = 0.0;
  for (double nu : {0.25, 0.5, 1.0}) {
    const double avg = model::mean_choice_over_grid({0.3, nu, 0.25, 1.0}, grid);
    CHECK(avg > prev);
    prev = avg;
  }
  // more preference noise lowers it at mu_r = 1
  prev = 1.0;
  for (double nu : {0.25, 0.5, 1.0}) {
    const double avg = model::mean_choice_over_grid({0.3, 0.25, nu, 1.0}, grid);
    CHECK(avg < prev);
    prev = avg;
  }
}

TEST_CASE("noise direction checks on a uniform ratio grid") {
  const auto grid = uniform_ratio_grid();
  // payment noise: up for mu_r in {1, 1.5}, down for mu_r = 0.5
  for (double mur : {1.0, 1.5}) {
    double prev = 0.0;
    for (double nu : {0.25, 0.5, 1.0}) {
      const double avg = model::mean_choice_over_grid({0.3, nu, 0.25, mur}, grid);
      CHECK(avg > prev);
      prev = avg;
    }
  }
  {
    double prev = 1.0;
    for (double nu : {0.25, 0.5, 1.0}) {
      const double avg = model::mean_choice_over_grid({0.3, nu, 0.25, 0.5}, grid);
      CHECK(avg < prev);
      prev = avg;
    }
  }
  // preference noise: down for every prior mean
  for (double mur : {0.5, 1.0, 1.5}) {
    double prev = 1.0;
    for (double nu : {0.25, 0.5, 1.0}) {
      const double avg = model::mean_choice_over_grid({0.3, 0.25, nu, mur}, grid);
      CHECK(avg < prev);
      prev = avg;
    }
  }
}

TEST_CASE("indifference crossing is invariant to preference noise") {
  for (double nub : {0.25, 0.5, 1.0}) {
    const IndividualParams p{0.3, 0.25, nub, 1.0};
    const double rstar = model::indifference_ratio(p);
    CHECK(model::prob_self_ratio(p, rstar * 0.999) < 0.5);
    CHECK(model::prob_self_ratio(p, rstar * 1.001) > 0.5);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((IndividualParams{0.0, 0.2, 0.2, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((IndividualParams{1.0, 0.2, 0.2, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((IndividualParams{0.3, -0.2, 0.2, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((IndividualParams{0.3, 0.2, 0.2, 0.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((NumberParams{-1.0, 0.5}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((RandomUtilityParams{0.3, 0.0}).validate(), std::invalid_argument);
  CHECK((IndividualParams{0.25, 0.0, 0.2, 1.0}).b() == Catch::Approx(1.0 / 3.0));
  CHECK(IndividualParams::sigma_r == 1.0);
  CHECK(NumberParams::threshold == 0.5);
}
