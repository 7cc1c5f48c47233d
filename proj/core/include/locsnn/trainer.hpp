#pragma once

#include <cstdint>
#include <vector>

#include "locsnn/model.hpp"
#include "locsnn/spike_tensor.hpp"

namespace locsnn {

struct TrainConfig {
  double lr = 0.01;
  double l2 = 0.0;
  int epochs = 100;
  int batch_size = 8;
  double lambda = 1.0;      ///< location-count balance in the weighted loss
  double r_true = 0.5;      ///< desired spike rate for the correct class
  double r_false = 0.05;    ///< desired spike rate for the other classes
  std::uint64_t seed = 1;   ///< shuffling seed
  double split_frac = 0.8;
  double rms_decay = 0.9;
  double rms_epsilon = 1e-8;
  int jobs = 1;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;          ///< 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> curves;
  bool diverged = false;
  int divergence_epoch = 0;  ///< 1-based epoch that failed; 0 when clean
};

/// Loss of one sample under the model's own kind: weighted count loss for
/// the hybrid, plain count loss for the time-only model, location count
/// loss for the location-only model.
double sample_loss(const Model& model, const SpikeTensor& x, int label,
                   const TrainConfig& cfg);

/// Trains in place on `train_set`, reporting loss/accuracy per epoch and the
/// test accuracy after each epoch. Deterministic for a fixed seed and any
/// job count. On divergence (non-finite loss or gradient) the weights roll
/// back to the end of the last completed epoch and the result is flagged.
TrainResult train_on_split(Model& model, const Dataset& train_set,
                           const Dataset& test_set, const TrainConfig& cfg);

/// Splits `dataset` with the config's stratified 80/20 split (seeded by
/// cfg.seed) and trains on the training side.
TrainResult train(Model& model, const Dataset& dataset, const TrainConfig& cfg);

}  // namespace locsnn
