#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cognoise/design.hpp"
#include "cognoise/model.hpp"
#include "cognoise/rng.hpp"
#include "cognoise/simulate.hpp"

using namespace cognoise;

namespace {

hier::HyperParams fig3a_like_hyper() {
  hier::HyperParams h;
  h.slots = {{"nu_so", true, std::log(0.31), std::log(0.40)},
             {"nu_b", true, std::log(0.19), std::log(0.19)},
             {"b", false, -0.795, -0.795},
             {"mu_r", false, std::log(1.05), std::log(1.05)}};
  h.tau = {0.3, 0.3, 0.206, 0.3};
  h.omega = {1.0, 0.5, 0.0, 0.0,  //
             0.5, 1.0, 0.0, 0.0,  //
             0.0, 0.0, 1.0, 0.0,  //
             0.0, 0.0, 0.0, 1.0};
  return h;
}

}  // namespace

TEST_CASE("forced extreme probabilities") {
  const model::IndividualParams greedy{0.01, 0.05, 0.05, 1.0};
  std::vector<design::TrialSpec> trials;
  for (int i = 0; i < 50; ++i) trials.push_back({design::Task::altruism, i, 0, i, 100000, 100});
  const auto recs = sim::simulate_choices(greedy, trials, rng::Stream(1));
  REQUIRE(recs.size() == 50);
  for (const auto& r : recs) CHECK(r.choice == 1);
}

TEST_CASE("symmetric case hits one half") {
  const model::IndividualParams sym{0.5, 0.25, 0.25, 1.0};
  std::vector<design::TrialSpec> trials;
  const int n = 10000;
  for (int i = 0; i < n; ++i) trials.push_back({design::Task::altruism, i, 0, i, 700, 700});
  const auto recs = sim::simulate_choices(sym, trials, rng::Stream(5));
  int ones = 0;
  for (const auto& r : recs) ones += r.choice;
  const double rate = static_cast<double>(ones) / n;
  CHECK(std::abs(rate - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("choice draws are independent of record iteration order") {
  const model::IndividualParams p{0.3, 0.3, 0.2, 1.0};
  auto trials = design::expand_and_shuffle(design::altruism_grid(), 5, 3);
  const auto recs = sim::simulate_choices(p, trials, rng::Stream(17));
  auto reversed = trials;
  std::reverse(reversed.begin(), reversed.end());
  const auto recs2 = sim::simulate_choices(p, reversed, rng::Stream(17));
  for (const auto& a : recs) {
    bool found = false;
    for (const auto& b : recs2) {
      if (b.round == a.round) {
        CHECK(b.choice == a.choice);
        found = true;
        break;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("simulate_dataset shapes and determinism") {
  const auto hyper = fig3a_like_hyper();
  sim::DesignBundle bundle;
  bundle.altruism = design::expand_and_shuffle(design::altruism_grid(), 5, 7);
  bundle.number = design::expand_and_shuffle(design::number_grid(), 5, 7);

  SECTION("one participant per group, one trial") {
    sim::DesignBundle tiny;
    tiny.altruism = {bundle.altruism.front()};
    const auto ds = sim::simulate_dataset(hyper, tiny, 1, 1, 42, sim::TaskMode::altruism);
    CHECK(ds.records.size() == 2);
    CHECK(ds.participants.size() == 2);
  }

  SECTION("150+150 participants over 240 trials give 72000 records") {
    const auto ds = sim::simulate_dataset(hyper, bundle, 150, 150, 42, sim::TaskMode::altruism);
    CHECK(ds.records.size() == 72000);
  }

  SECTION("byte-identical under a fixed seed") {
    const auto a = sim::simulate_dataset(hyper, bundle, 5, 5, 11, sim::TaskMode::combined);
    const auto b = sim::simulate_dataset(hyper, bundle, 5, 5, 11, sim::TaskMode::combined);
    CHECK(a.records == b.records);
    const auto c = sim::simulate_dataset(hyper, bundle, 5, 5, 12, sim::TaskMode::combined);
    CHECK(a.records != c.records);
  }

  SECTION("combined mode produces both tasks per participant") {
    const auto ds = sim::simulate_dataset(hyper, bundle, 2, 2, 11, sim::TaskMode::combined);
    CHECK(ds.records.size() == 4 * (240 + 200));
    int altruism = 0;
    int number = 0;
    for (const auto& r : ds.records) {
      (r.task == design::Task::altruism ? altruism : number) += 1;
    }
    CHECK(altruism == 4 * 240);
    CHECK(number == 4 * 200);
  }
}

TEST_CASE("simulated parameters respect type invariants") {
  const auto hyper = fig3a_like_hyper();
  const auto pop = hier::draw_participants(hyper, 2000, hier::kGroupTreatment, rng::Stream(3));
  for (const auto& p : pop) {
    const auto params = sim::altruism_params(hyper, p);
    CHECK(params.beta > 0.0);
    CHECK(params.beta < 1.0);
    CHECK(params.nu_so > 0.0);
    CHECK(params.nu_b > 0.0);
    CHECK(params.mu_r > 0.0);
  }
}

TEST_CASE("homogeneous population at published posterior means") {
  // Baseline parameters reproduce the observed baseline rate within 3pp; the
  // treatment side of the same identity is checked (and documented) in the
  // acceptance suite.
  const model::IndividualParams base{0.316, 0.313, 0.186, 1.049};
  const auto grid = design::altruism_grid();
  const double avg = model::mean_choice_over_grid(base, grid);
  CHECK(std::abs(avg - 0.4518) < 0.03);
  // Bernoulli simulation agrees with the analytic average
  auto trials = design::expand_and_shuffle(design::altruism_grid(), 5, 1);
  const auto recs = sim::simulate_choices(base, trials, rng::Stream(8));
  double rate = 0.0;
  for (const auto& r : recs) rate += r.choice;
  rate /= static_cast<double>(recs.size());
  CHECK(std::abs(rate - avg) < 3.0 * std::sqrt(0.25 / 240.0));
}

TEST_CASE("number task reuses nu and mu_r for combined corpora") {
  const auto hyper = fig3a_like_hyper();
  const auto pop = hier::draw_participants(hyper, 3, hier::kGroupBaseline, rng::Stream(2));
  for (const auto& p : pop) {
    const auto np = sim::number_params(hyper, p);
    CHECK(np.nu_ab == p.theta[0]);
    CHECK(np.mu_rp == p.theta[3]);
  }
}
