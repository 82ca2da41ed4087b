#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cognoise/rng.hpp"

namespace cognoise::design {

enum class Task : std::uint8_t { altruism, number };

/// A single binary-choice stimulus in integer cents. For the number task,
/// self_cents is amount A and other_cents is amount B.
struct TrialSpec {
  Task task = Task::altruism;
  int game_id = 0;
  int repetition = 0;
  int round = 0;
  std::int64_t self_cents = 0;
  std::int64_t other_cents = 0;

  friend bool operator==(const TrialSpec&, const TrialSpec&) = default;
};

/// A payment split into two addends per side: self1+self2 = self and
/// other1+other2 = other, with self1 > other1 by construction whenever both
/// payments are positive. display_order records per-sum component swaps.
struct SumDecomposition {
  std::int64_t self1 = 0;
  std::int64_t self2 = 0;
  std::int64_t other1 = 0;
  std::int64_t other2 = 0;
  bool self_swapped = false;
  bool other_swapped = false;

  friend bool operator==(const SumDecomposition&, const SumDecomposition&) = default;
};

inline constexpr std::array<std::int64_t, 4> kOtherCents = {655, 926, 1310, 1852};
inline constexpr int kBetaGridSize = 12;  // beta = k/20 for k = 0..11

/// self at the indifference point for beta = k/20: other * (k/20)/(1 - k/20)
/// = other*k/(20-k), floored to the cent. Integer division keeps this exact.
inline std::int64_t indifference_self_cents(std::int64_t other_cents, int k) {
  if (k < 0 || k >= kBetaGridSize) throw std::invalid_argument("beta index out of range");
  return other_cents * k / (20 - k);
}

/// The 48 unique altruism (self, other) pairs: 4 other values x 12 beta steps.
inline std::vector<TrialSpec> altruism_grid() {
  std::vector<TrialSpec> out;
  out.reserve(kOtherCents.size() * kBetaGridSize);
  int game = 0;
  for (std::int64_t other : kOtherCents) {
    for (int k = 0; k < kBetaGridSize; ++k) {
      out.push_back({Task::altruism, game, 0, game,
                     indifference_self_cents(other, k), other});
      ++game;
    }
  }
  return out;
}

/// The 40 unique number-comparison pairs: the altruism grid without the
/// A = 0 and A > B rows (beta indices 0 and 11).
inline std::vector<TrialSpec> number_grid() {
  std::vector<TrialSpec> out;
  out.reserve(kOtherCents.size() * (kBetaGridSize - 2));
  int game = 0;
  for (std::int64_t other : kOtherCents) {
    for (int k = 1; k < kBetaGridSize - 1; ++k) {
      out.push_back({Task::number, game, 0, game,
                     indifference_self_cents(other, k), other});
      ++game;
    }
  }
  return out;
}

/// The 12 practice trials: other fixed at 10.00 EUR, self over the beta grid.
inline std::vector<TrialSpec> practice_trials() {
  std::vector<TrialSpec> out;
  out.reserve(kBetaGridSize);
  for (int k = 0; k < kBetaGridSize; ++k) {
    out.push_back({Task::altruism, k, 0, k, indifference_self_cents(1000, k), 1000});
  }
  return out;
}

/// Repeat each pair `repetitions` times and Fisher-Yates shuffle the result
/// deterministically from the seed. Round indices follow the final order.
inline std::vector<TrialSpec> expand_and_shuffle(const std::vector<TrialSpec>& pairs,
                                                 int repetitions, std::uint64_t seed) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  std::vector<TrialSpec> out;
  out.reserve(pairs.size() * static_cast<std::size_t>(repetitions));
  for (const auto& p : pairs) {
    for (int rep = 0; rep < repetitions; ++rep) {
      TrialSpec t = p;
      t.repetition = rep;
      out.push_back(t);
    }
  }
  rng::Stream stream = rng::Stream(seed).derive("design.shuffle");
  for (std::size_t i = out.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(stream.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(out[i - 1], out[j]);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].round = static_cast<int>(i);
  return out;
}

/// Split (self, other) into to-be-calculated sums. self1 is drawn uniformly
/// from [2, min(self, other)] (a draw of 1 is redrawn so that other1 < self1
/// stays feasible), then other1 uniformly from [1, self1 - 1]. A self = 0
/// trial has zero self components and a uniform positive split of other.
template <typename Rng>
SumDecomposition decompose_sum(std::int64_t self_cents, std::int64_t other_cents,
                               Rng& rng) {
  if (other_cents <= 0) throw std::invalid_argument("decompose_sum: other must be > 0");
  if (self_cents < 0) throw std::invalid_argument("decompose_sum: self must be >= 0");
  SumDecomposition d;
  if (self_cents == 0) {
    if (other_cents < 2) throw std::invalid_argument("decompose_sum: other too small to split");
    d.other1 = rng.uniform_int(1, other_cents - 1);
    d.other2 = other_cents - d.other1;
    return d;
  }
  const std::int64_t upper = std::min(self_cents, other_cents);
  if (upper < 2) throw std::invalid_argument("decompose_sum: min(self, other) too small to split");
  std::int64_t s1 = rng.uniform_int(1, upper);
  while (s1 < 2) s1 = rng.uniform_int(1, upper);
  const std::int64_t o1 = rng.uniform_int(1, s1 - 1);
  d.self1 = s1;
  d.self2 = self_cents - s1;
  d.other1 = o1;
  d.other2 = other_cents - o1;
  return d;
}

/// Per-participant display order of the two components within each sum. The
/// underlying sums never change; only the component positions do.
inline SumDecomposition shuffle_positions(SumDecomposition d,
                                          std::uint64_t participant_seed,
                                          std::uint64_t trial_index = 0) {
  rng::Stream s = rng::Stream(participant_seed).derive("design.positions", trial_index);
  d.self_swapped = s.uniform() < 0.5;
  d.other_swapped = s.uniform() < 0.5;
  return d;
}

}  // namespace cognoise::design
