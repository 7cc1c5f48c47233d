#include "locsnn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "locsnn/errors.hpp"

namespace locsnn {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct MotifCell {
  int taxel;
  int step;
};

// Nominal motif of one class: a stripe through the class's taxel block,
// ascending in time for even classes and descending for odd ones, three
// steps thick where the band allows it.
std::vector<MotifCell> class_motif(const SynthSpec& spec, int cls) {
  const int block = spec.taxels / spec.classes;
  const int band = spec.steps / spec.classes;
  const int taxel0 = cls * block;
  const int band0 = cls * band;
  const int thickness = std::min(3, band);

  std::vector<MotifCell> cells;
  for (int i = 0; i < block; ++i) {
    const int span = band - thickness;
    int offset = block > 1 ? (span * i) / (block - 1) : 0;
    if (cls % 2 == 1) offset = span - offset;  // descending stripe
    for (int d = 0; d < thickness; ++d) {
      cells.push_back({taxel0 + i, band0 + offset + d});
    }
  }
  return cells;
}

}  // namespace

void SynthSpec::validate() const {
  if (classes < 1 || taxels < 1 || steps < 1 || samples_per_class < 1) {
    throw ValidationError("synth: classes, taxels, steps, samples_per_class must be >= 1");
  }
  if (classes * samples_per_class < 10) {
    throw ValidationError("synth: need at least 10 samples overall");
  }
  if (!(base_rate >= 0.0 && base_rate < pattern_strength && pattern_strength <= 1.0)) {
    throw ValidationError("synth: require 0 <= base_rate < pattern_strength <= 1");
  }
  if (jitter < 0) throw ValidationError("synth: jitter must be >= 0");
  if (taxels / classes < 1 || steps / classes < 1) {
    throw ValidationError("synth: cannot pack " + std::to_string(classes) +
                          " disjoint motifs into a " + std::to_string(taxels) + "x" +
                          std::to_string(steps) + " grid");
  }
}

Dataset generate(const SynthSpec& spec) {
  spec.validate();

  Dataset dataset;
  dataset.channels = spec.taxels;
  dataset.steps = spec.steps;
  dataset.classes = spec.classes;

  std::vector<std::vector<MotifCell>> motifs(spec.classes);
  for (int c = 0; c < spec.classes; ++c) motifs[c] = class_motif(spec, c);

  for (int c = 0; c < spec.classes; ++c) {
    for (int i = 0; i < spec.samples_per_class; ++i) {
      const std::uint64_t sample_seed =
          splitmix64(spec.seed ^ splitmix64((static_cast<std::uint64_t>(c) << 32) |
                                            static_cast<std::uint64_t>(i)));
      std::mt19937_64 rng(sample_seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);

      SpikeTensor tensor(spec.taxels, spec.steps);
      if (spec.base_rate > 0.0) {
        for (int r = 0; r < spec.taxels; ++r) {
          for (int t = 0; t < spec.steps; ++t) {
            if (unit(rng) < spec.base_rate) tensor.set(r, t, true);
          }
        }
      }
      int shift = 0;
      if (spec.jitter > 0) {
        std::uniform_int_distribution<int> jit(-spec.jitter, spec.jitter);
        shift = jit(rng);
      }
      for (const MotifCell& cell : motifs[c]) {
        if (spec.pattern_strength < 1.0 && unit(rng) >= spec.pattern_strength) continue;
        const int t = std::clamp(cell.step + shift, 0, spec.steps - 1);
        tensor.set(cell.taxel, t, true);
      }

      LabeledSample sample;
      sample.tensor = std::move(tensor);
      sample.meta.label = c;
      sample.meta.sample_id = "c" + std::to_string(c) + "-s" + std::to_string(i);
      dataset.samples.push_back(std::move(sample));
    }
  }
  return dataset;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, double frac,
                                  std::uint64_t seed) {
  if (!(frac > 0.0 && frac < 1.0)) {
    throw ValidationError("split: frac must be strictly between 0 and 1");
  }
  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < static_cast<int>(dataset.samples.size()); ++i) {
    by_class[dataset.samples[i].meta.label].push_back(i);
  }
  for (const auto& [label, indices] : by_class) {
    if (indices.size() < 2) {
      throw ValidationError("split: class " + std::to_string(label) +
                            " has fewer than 2 samples");
    }
  }

  std::vector<char> goes_to_train(dataset.samples.size(), 0);
  std::mt19937_64 rng(seed);
  for (auto& [label, indices] : by_class) {
    const int n = static_cast<int>(indices.size());
    int n_train = static_cast<int>(std::lround(frac * n));
    n_train = std::clamp(n_train, 1, n - 1);
    std::vector<int> shuffled = indices;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (int j = 0; j < n_train; ++j) goes_to_train[shuffled[j]] = 1;
  }

  Dataset train, test;
  train.channels = test.channels = dataset.channels;
  train.steps = test.steps = dataset.steps;
  train.classes = test.classes = dataset.classes;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    (goes_to_train[i] ? train : test).samples.push_back(dataset.samples[i]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace locsnn
