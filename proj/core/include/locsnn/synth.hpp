#pragma once

#include <cstdint>
#include <utility>

#include "locsnn/spike_tensor.hpp"

namespace locsnn {

/// Parameters of the deterministic synthetic event-tactile generator.
/// Each class owns a disjoint taxel block and a disjoint time band; inside
/// the block the motif is a diagonal stripe whose direction alternates by
/// class, so classes are separable both by which taxels fire (time-branch
/// learnable) and by when they fire (location-branch learnable).
struct SynthSpec {
  int classes = 4;
  int taxels = 16;
  int steps = 50;
  int samples_per_class = 50;
  double base_rate = 0.01;        ///< background spike probability per cell
  double pattern_strength = 0.9;  ///< per-motif-cell spike probability
  int jitter = 1;                 ///< whole-motif temporal displacement, +/- steps
  std::uint64_t seed = 7;

  void validate() const;
};

/// Generates the dataset. Deterministic for a given spec: every sample draws
/// from its own seed derived from (seed, class, index), so generation order
/// does not matter. Sample ids are "c<class>-s<index>". Throws
/// ValidationError when K motifs cannot be packed disjointly into N x T.
Dataset generate(const SynthSpec& spec);

/// Stratified split: per class, round(frac * count) samples go to the train
/// side (clamped so both sides stay nonempty), selected by a seeded shuffle.
/// Both halves keep the original sample order. Requires 0 < frac < 1 and at
/// least 2 samples per class.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double frac,
                                  std::uint64_t seed);

}  // namespace locsnn
