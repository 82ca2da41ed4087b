#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cognoise/design.hpp"
#include "cognoise/errors.hpp"
#include "cognoise/hierarchy.hpp"
#include "cognoise/model.hpp"
#include "cognoise/rng.hpp"

namespace cognoise::sim {

/// One observed binary decision. choice = 1 means self (altruism task) or A
/// (number task) was taken.
struct ChoiceRecord {
  std::string participant_id;
  int group = hier::kGroupBaseline;
  design::Task task = design::Task::altruism;
  int game_id = 0;
  int repetition = 0;
  int round = 0;
  std::int64_t self_cents = 0;
  std::int64_t other_cents = 0;
  int choice = 0;

  friend bool operator==(const ChoiceRecord&, const ChoiceRecord&) = default;
};

using ChoiceDataset = std::vector<ChoiceRecord>;

enum class TaskMode { altruism, number, combined };

inline TaskMode parse_task_mode(const std::string& s) {
  if (s == "altruism") return TaskMode::altruism;
  if (s == "number") return TaskMode::number;
  if (s == "combined") return TaskMode::combined;
  throw config_error("unknown task '" + s + "' (expected altruism, number or combined)");
}

namespace detail {
/// Bernoulli draw per trial from a counter-based stream keyed on the trial's
/// (task, round), so record order never affects the dataset.
template <typename ProbFn>
void simulate_task(const ProbFn& prob, std::span<const design::TrialSpec> trials,
                   const rng::Stream& participant_stream, const std::string& id, int group,
                   ChoiceDataset& out) {
  for (const auto& t : trials) {
    const double p = prob(t);
    rng::Stream s = participant_stream.derive(
        "sim.choice", static_cast<std::uint64_t>(t.task), static_cast<std::uint64_t>(t.round));
    ChoiceRecord r;
    r.participant_id = id;
    r.group = group;
    r.task = t.task;
    r.game_id = t.game_id;
    r.repetition = t.repetition;
    r.round = t.round;
    r.self_cents = t.self_cents;
    r.other_cents = t.other_cents;
    r.choice = s.uniform() < p ? 1 : 0;
    out.push_back(std::move(r));
  }
}
}  // namespace detail

inline ChoiceDataset simulate_choices(const model::IndividualParams& params,
                                      std::span<const design::TrialSpec> trials,
                                      const rng::Stream& stream,
                                      const std::string& id = "P0000",
                                      int group = hier::kGroupBaseline) {
  ChoiceDataset out;
  out.reserve(trials.size());
  detail::simulate_task(
      [&](const design::TrialSpec& t) { return model::prob_self(params, t.self_cents, t.other_cents); },
      trials, stream, id, group, out);
  return out;
}

inline ChoiceDataset simulate_choices(const model::NumberParams& params,
                                      std::span<const design::TrialSpec> trials,
                                      const rng::Stream& stream,
                                      const std::string& id = "P0000",
                                      int group = hier::kGroupBaseline) {
  ChoiceDataset out;
  out.reserve(trials.size());
  detail::simulate_task(
      [&](const design::TrialSpec& t) { return model::prob_A(params, t.self_cents, t.other_cents); },
      trials, stream, id, group, out);
  return out;
}

inline ChoiceDataset simulate_choices(const model::RandomUtilityParams& params,
                                      std::span<const design::TrialSpec> trials,
                                      const rng::Stream& stream,
                                      const std::string& id = "P0000",
                                      int group = hier::kGroupBaseline) {
  ChoiceDataset out;
  out.reserve(trials.size());
  detail::simulate_task(
      [&](const design::TrialSpec& t) {
        return model::prob_self_random_utility(params, t.self_cents, t.other_cents);
      },
      trials, stream, id, group, out);
  return out;
}

namespace detail {
inline int require_slot(const hier::HyperParams& hyper, const char* primary,
                        const char* fallback = nullptr) {
  int idx = hyper.slot_index(primary);
  if (idx < 0 && fallback != nullptr) idx = hyper.slot_index(fallback);
  if (idx < 0) {
    throw data_error(std::string("hyper parameters are missing slot '") + primary + "'");
  }
  return idx;
}
}  // namespace detail

/// Map a drawn participant onto the altruism choice rule. The joint noise slot
/// nu_soa doubles as nu_so when simulating combined-task corpora.
inline model::IndividualParams altruism_params(const hier::HyperParams& hyper,
                                               const hier::Participant& p) {
  const int i_nu = detail::require_slot(hyper, "nu_so", "nu_soa");
  const int i_nub = detail::require_slot(hyper, "nu_b");
  const int i_b = detail::require_slot(hyper, "b");
  const int i_mur = detail::require_slot(hyper, "mu_r");
  const double b = p.theta[static_cast<std::size_t>(i_b)];
  return model::IndividualParams{b / (1.0 + b), p.theta[static_cast<std::size_t>(i_nu)],
                                 p.theta[static_cast<std::size_t>(i_nub)],
                                 p.theta[static_cast<std::size_t>(i_mur)]};
}

/// Map a drawn participant onto the number-comparison rule; shared-parameter
/// corpora reuse nu_soa as nu_ab and mu_r as mu_rp.
inline model::NumberParams number_params(const hier::HyperParams& hyper,
                                         const hier::Participant& p) {
  const int i_nu = hyper.slot_index("nu_ab") >= 0 ? hyper.slot_index("nu_ab")
                                                  : detail::require_slot(hyper, "nu_soa", "nu_so");
  const int i_mur = hyper.slot_index("mu_rp") >= 0 ? hyper.slot_index("mu_rp")
                                                   : detail::require_slot(hyper, "mu_r");
  return model::NumberParams{p.theta[static_cast<std::size_t>(i_nu)],
                             p.theta[static_cast<std::size_t>(i_mur)]};
}

struct SimulatedDataset {
  ChoiceDataset records;
  hier::Population participants;
  hier::HyperParams hyper;
  std::uint64_t seed = 0;
};

struct DesignBundle {
  std::vector<design::TrialSpec> altruism;
  std::vector<design::TrialSpec> number;
};

/// Full synthetic corpus: draw a population from the hierarchy, then Bernoulli
/// choices for every trial in the design. Output record order is canonical
/// (participants in id order, trials in round order) and byte-stable in the seed.
inline SimulatedDataset simulate_dataset(const hier::HyperParams& hyper,
                                         const DesignBundle& bundle, std::size_t n_baseline,
                                         std::size_t n_treatment, std::uint64_t seed,
                                         TaskMode mode = TaskMode::altruism) {
  if (n_baseline + n_treatment == 0) throw config_error("simulate: no participants requested");
  if (mode != TaskMode::number && bundle.altruism.empty()) {
    throw config_error("simulate: altruism trials required for this task mode");
  }
  if (mode != TaskMode::altruism && bundle.number.empty()) {
    throw config_error("simulate: number trials required for this task mode");
  }
  const rng::Stream root(seed);
  SimulatedDataset out;
  out.hyper = hyper;
  out.seed = seed;
  auto base = hier::draw_participants(hyper, n_baseline, hier::kGroupBaseline, root, 0);
  auto treat = hier::draw_participants(hyper, n_treatment, hier::kGroupTreatment, root, n_baseline);
  out.participants = std::move(base);
  out.participants.insert(out.participants.end(), std::make_move_iterator(treat.begin()),
                          std::make_move_iterator(treat.end()));
  for (const auto& p : out.participants) {
    const rng::Stream ps = root.derive("sim.participant", rng::hash_str(p.id));
    if (mode == TaskMode::altruism || mode == TaskMode::combined) {
      const auto params = altruism_params(hyper, p);
      detail::simulate_task(
          [&](const design::TrialSpec& t) {
            return model::prob_self(params, t.self_cents, t.other_cents);
          },
          bundle.altruism, ps, p.id, p.group, out.records);
    }
    if (mode == TaskMode::number || mode == TaskMode::combined) {
      const auto params = number_params(hyper, p);
      detail::simulate_task(
          [&](const design::TrialSpec& t) {
            return model::prob_A(params, t.self_cents, t.other_cents);
          },
          bundle.number, ps, p.id, p.group, out.records);
    }
  }
  return out;
}

}  // namespace cognoise::sim
