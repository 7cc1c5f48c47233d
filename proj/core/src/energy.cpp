#include "locsnn/energy.hpp"

#include <limits>

#include "locsnn/errors.hpp"
#include "locsnn/parallel.hpp"

namespace locsnn {

namespace {

struct BranchSpikes {
  long long at_layer0 = 0;
  long long at_layer1 = 0;
};

BranchSpikes branch_input_spikes(const SpikeTensor& x, const BranchNet& branch) {
  BranchTraces traces = forward_branch(x, branch);
  BranchSpikes spikes;
  // The location view is a bijection, so layer-0 arrivals equal the raw
  // event count either way.
  spikes.at_layer0 = x.total_spikes();
  spikes.at_layer1 = traces.trace0.spikes.total_spikes();
  return spikes;
}

}  // namespace

OpReport count_snn_ops(const Model& model, const Dataset& dataset, int jobs) {
  if (dataset.samples.empty()) throw ValidationError("count_snn_ops: empty dataset");

  const int n = static_cast<int>(dataset.samples.size());
  std::vector<BranchSpikes> time_spikes(n), loc_spikes(n);
  parallel_for_indexed(n, jobs, [&](int i) {
    const SpikeTensor& x = dataset.samples[i].tensor;
    if (model.time_branch) time_spikes[i] = branch_input_spikes(x, *model.time_branch);
    if (model.location_branch) {
      loc_spikes[i] = branch_input_spikes(x, *model.location_branch);
    }
  });

  OpReport report;
  auto add_branch = [&](const std::string& prefix, const BranchNet& branch,
                        const std::vector<BranchSpikes>& spikes) {
    LayerOps l0{prefix + ".layer0", 0, branch.layer0.out_channels(), 0};
    LayerOps l1{prefix + ".layer1", 0, branch.layer1.out_channels(), 0};
    for (const BranchSpikes& s : spikes) {
      l0.input_spikes += s.at_layer0;
      l1.input_spikes += s.at_layer1;
    }
    l0.accumulate_ops = l0.input_spikes * l0.fan_out;
    l1.accumulate_ops = l1.input_spikes * l1.fan_out;
    report.snn_accumulate_ops += l0.accumulate_ops + l1.accumulate_ops;
    report.per_layer.push_back(std::move(l0));
    report.per_layer.push_back(std::move(l1));
  };
  if (model.time_branch) add_branch("time", *model.time_branch, time_spikes);
  if (model.location_branch) add_branch("location", *model.location_branch, loc_spikes);

  report.snn_multiply_ops = 0;  // binary spikes only accumulate, never multiply
  return report;
}

long long count_ann_dense_ops(const std::vector<int>& layer_dims, int steps) {
  if (layer_dims.empty()) throw ValidationError("count_ann_dense_ops: empty dims");
  if (steps < 0) throw ValidationError("count_ann_dense_ops: negative steps");
  long long macs_per_frame = 0;
  for (std::size_t i = 0; i + 1 < layer_dims.size(); ++i) {
    macs_per_frame += static_cast<long long>(layer_dims[i]) * layer_dims[i + 1];
  }
  return macs_per_frame * steps;
}

long long dense_equivalent_ops(const Model& model, int hidden) {
  long long total = 0;
  if (model.time_branch) {
    total += count_ann_dense_ops({model.taxels, hidden, model.classes}, model.steps);
  }
  if (model.location_branch) {
    total += count_ann_dense_ops({model.steps, hidden, model.classes}, model.taxels);
  }
  return total;
}

double compression(long long snn_ops, long long ann_ops) {
  if (snn_ops < 0 || ann_ops < 0) throw ValidationError("compression: negative counts");
  if (snn_ops == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(ann_ops) / static_cast<double>(snn_ops);
}

}  // namespace locsnn
