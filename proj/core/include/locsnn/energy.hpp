#pragma once

#include <string>
#include <vector>

#include "locsnn/model.hpp"
#include "locsnn/spike_tensor.hpp"

namespace locsnn {

/// Synaptic-operation tally of one spiking layer over a dataset: every
/// presynaptic spike triggers one accumulate per postsynaptic neuron, so
/// ops = input_spikes * fan_out. Kernel-table arithmetic and refractory
/// feedback additions are excluded from the tally by convention.
struct LayerOps {
  std::string name;            ///< e.g. "time.layer0"
  long long input_spikes = 0;  ///< spikes arriving at the layer, summed over samples
  int fan_out = 0;
  long long accumulate_ops = 0;
};

struct OpReport {
  std::vector<LayerOps> per_layer;
  long long snn_accumulate_ops = 0;
  long long snn_multiply_ops = 0;  ///< always 0 on pure spiking paths
  long long ann_mac_ops = 0;       ///< 0 until a dense baseline is attached
  double compression_ratio = 0.0;  ///< ann / snn; +inf when snn is 0
};

/// Counts accumulate operations from actual forward traces over the whole
/// dataset (hidden-layer spike counts are data-dependent). Deterministic
/// for any job count.
OpReport count_snn_ops(const Model& model, const Dataset& dataset, int jobs = 1);

/// Analytic MAC count of a dense feed-forward net with the given layer
/// widths evaluated at every one of `steps` frames:
/// sum over consecutive (in, out) pairs of in * out * steps.
long long count_ann_dense_ops(const std::vector<int>& layer_dims, int steps);

/// MAC count of the dense equivalent of `model`: one dense stack per branch,
/// each evaluated along its own recurrence axis.
long long dense_equivalent_ops(const Model& model, int hidden);

/// ann_ops / snn_ops; +infinity when snn_ops is 0.
double compression(long long snn_ops, long long ann_ops);

}  // namespace locsnn
