#include "locsnn/model.hpp"

#include <cmath>
#include <string>

#include "locsnn/errors.hpp"

namespace locsnn {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kTsrm: return "tsrm";
    case ModelKind::kLsrm: return "lsrm";
    case ModelKind::kHybrid: return "hybrid";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "tsrm") return ModelKind::kTsrm;
  if (name == "lsrm") return ModelKind::kLsrm;
  if (name == "hybrid") return ModelKind::kHybrid;
  throw ValidationError("unknown model kind '" + name +
                        "' (expected tsrm, lsrm, or hybrid)");
}

namespace {

LocationOrder resolve_order(const std::string& name, int taxels, int* sensors_out) {
  if (taxels % kTaxelsPerSensor == 0) {
    *sensors_out = taxels / kTaxelsPerSensor;
    return builtin_order(name);
  }
  // Non-standard taxel layouts only support the identity traversal.
  if (name != "loop") {
    throw ValidationError("order '" + name + "' requires taxel counts that are " +
                          "multiples of " + std::to_string(kTaxelsPerSensor) + ", got " +
                          std::to_string(taxels));
  }
  *sensors_out = 1;
  return LocationOrder::identity(taxels);
}

BranchNet make_branch(RecurrenceAxis axis, int in_channels, int axis_len, int hidden,
                      int classes, const KernelConfig& kernel, double gain,
                      std::uint64_t seed, std::optional<LocationOrder> order,
                      int sensors) {
  const KernelConfig cfg = resolve_kernel_len(kernel, axis_len);
  return BranchNet{
      axis,
      DenseSpikingLayer(init_weights(in_channels, hidden, seed, gain), cfg),
      DenseSpikingLayer(init_weights(hidden, classes, seed + 1, gain), cfg),
      std::move(order),
      sensors,
  };
}

}  // namespace

Model build_model(const ModelSpec& spec, int classes, int taxels, int steps) {
  if (classes < 1 || taxels < 1 || steps < 1) {
    throw ValidationError("build_model: classes, taxels, and steps must be positive");
  }
  if (spec.hidden < 1) throw ValidationError("build_model: hidden width must be >= 1");

  Model model;
  model.kind = spec.kind;
  model.classes = classes;
  model.taxels = taxels;
  model.steps = steps;

  const double time_gain =
      spec.init_gain > 0.0 ? spec.init_gain : 10.0 * spec.time_kernel.theta;
  const double loc_gain =
      spec.init_gain > 0.0 ? spec.init_gain : 10.0 * spec.location_kernel.theta;

  if (spec.kind != ModelKind::kLsrm) {
    model.time_branch =
        make_branch(RecurrenceAxis::kTime, taxels, steps, spec.hidden, classes,
                    spec.time_kernel, time_gain, spec.seed, std::nullopt, 1);
  }
  if (spec.kind != ModelKind::kTsrm) {
    int sensors = 1;
    LocationOrder order = resolve_order(spec.order_name, taxels, &sensors);
    model.location_branch =
        make_branch(RecurrenceAxis::kLocation, steps, taxels, spec.hidden, classes,
                    spec.location_kernel, loc_gain, spec.seed + 2, std::move(order),
                    sensors);
  }
  return model;
}

BranchTraces forward_branch_view(const SpikeTensor& view, const BranchNet& branch) {
  BranchTraces traces;
  traces.trace0 = forward_scan(view, branch.layer0);
  traces.trace1 = forward_scan(traces.trace0.spikes, branch.layer1);
  return traces;
}

BranchTraces forward_branch(const SpikeTensor& x, const BranchNet& branch) {
  if (branch.axis == RecurrenceAxis::kTime) {
    return forward_branch_view(x, branch);
  }
  return forward_branch_view(location_view(x, *branch.order, branch.sensors), branch);
}

namespace {

const BranchNet& require_branch(const std::optional<BranchNet>& branch,
                                const char* which) {
  if (!branch) {
    throw ValidationError(std::string("model has no ") + which + " branch");
  }
  return *branch;
}

}  // namespace

SpikeTensor forward_tsrm(const SpikeTensor& x, const Model& model) {
  return forward_branch(x, require_branch(model.time_branch, "time")).trace1.spikes;
}

SpikeTensor forward_lsrm(const SpikeTensor& x, const Model& model) {
  return forward_branch(x, require_branch(model.location_branch, "location"))
      .trace1.spikes;
}

SpikeTensor forward_hybrid(const SpikeTensor& x, const Model& model) {
  return concat_steps(forward_tsrm(x, model), forward_lsrm(x, model));
}

std::vector<long long> spike_counts(const SpikeTensor& output) {
  std::vector<long long> counts(output.channels());
  for (int k = 0; k < output.channels(); ++k) {
    counts[k] = output.channel_spikes(k);
  }
  return counts;
}

int predict(const SpikeTensor& output) {
  int best = 0;
  long long best_count = output.channel_spikes(0);
  for (int k = 1; k < output.channels(); ++k) {
    const long long count = output.channel_spikes(k);
    if (count > best_count) {
      best = k;
      best_count = count;
    }
  }
  return best;
}

namespace {

SpikeTensor padded_location_view(const SpikeTensor& prefix, const BranchNet& branch,
                                 int full_steps) {
  return pad_suffix(location_view(prefix, *branch.order, branch.sensors), full_steps);
}

SpikeTensor branch_output(const SpikeTensor& oriented, const BranchNet& branch) {
  return forward_branch_view(oriented, branch).trace1.spikes;
}

}  // namespace

TimestepOutput timestep_inference(const SpikeTensor& x, const Model& model, int t) {
  if (t < 1 || t > x.steps()) {
    throw ValidationError("timestep_inference: t=" + std::to_string(t) +
                          " outside [1, " + std::to_string(x.steps()) + "]");
  }
  const BranchNet& time_branch = require_branch(model.time_branch, "time");
  const BranchNet& loc_branch = require_branch(model.location_branch, "location");

  const SpikeTensor prefix = prefix_steps(x, t);
  TimestepOutput out;
  out.o1 = branch_output(prefix, time_branch);
  out.o2 = branch_output(padded_location_view(prefix, loc_branch, x.steps()), loc_branch);
  out.o = concat_steps(out.o1, out.o2);
  out.prediction = predict(out.o);
  return out;
}

StreamingSession::StreamingSession(const Model& model, const SpikeTensor& x)
    : model_(&model), input_(x) {
  const BranchNet& time_branch = require_branch(model.time_branch, "time");
  require_branch(model.location_branch, "location");
  if (x.channels() != model.taxels || x.steps() != model.steps) {
    throw ValidationError("streaming session: sample shape does not match model");
  }
  time_state0_.emplace(time_branch.layer0);
  time_state1_.emplace(time_branch.layer1);
}

TimestepOutput StreamingSession::advance() {
  if (step_ >= input_.steps()) {
    throw ValidationError("streaming session already consumed all " +
                          std::to_string(input_.steps()) + " steps");
  }
  const BranchNet& loc_branch = *model_->location_branch;

  // Time branch: one incremental scan step through both layers.
  Eigen::VectorXd column(input_.channels());
  for (int j = 0; j < input_.channels(); ++j) {
    column[j] = static_cast<double>(input_.at(j, step_));
  }
  ScanState::StepResult hidden = time_state0_->step(column);
  ScanState::StepResult out_col = time_state1_->step(hidden.output);

  SpikeTensor o1_next(model_->classes, step_ + 1);
  for (int i = 0; i < model_->classes; ++i) {
    for (int s = 0; s < step_; ++s) {
      if (o1_accum_.at(i, s)) o1_next.set(i, s, true);
    }
    if (out_col.output[i] != 0.0) o1_next.set(i, step_, true);
  }
  o1_accum_ = std::move(o1_next);
  ++step_;

  // Location branch: channel axis is the time prefix, so re-simulate.
  const SpikeTensor prefix = prefix_steps(input_, step_);
  TimestepOutput out;
  out.o1 = o1_accum_;
  out.o2 = branch_output(padded_location_view(prefix, loc_branch, input_.steps()),
                         loc_branch);
  out.o = concat_steps(out.o1, out.o2);
  out.prediction = predict(out.o);
  return out;
}

double time_weight_omega(double psi, int t, int total_steps) {
  const double ratio = static_cast<double>(t) / static_cast<double>(total_steps);
  return 1.0 / (1.0 + std::exp(-psi * (ratio - 1.0)));
}

TimeWeightedOutput time_weighted_output(const SpikeTensor& o1, const SpikeTensor& o2,
                                        double psi, int t, int total_steps) {
  if (o1.channels() != o2.channels()) {
    throw ValidationError("time_weighted_output: class counts differ");
  }
  if (t < 1 || t > total_steps) {
    throw ValidationError("time_weighted_output: t outside [1, T]");
  }
  const int classes = o1.channels();
  TimeWeightedOutput out;
  out.omega = time_weight_omega(psi, t, total_steps);
  out.weighted.resize(classes, o1.steps() + o2.steps());
  out.class_scores = Eigen::VectorXd::Zero(classes);
  for (int k = 0; k < classes; ++k) {
    for (int s = 0; s < o1.steps(); ++s) {
      out.weighted(k, s) = (1.0 - out.omega) * o1.at(k, s);
    }
    for (int s = 0; s < o2.steps(); ++s) {
      out.weighted(k, o1.steps() + s) = out.omega * o2.at(k, s);
    }
    out.class_scores[k] = out.weighted.row(k).sum();
  }
  out.prediction = 0;
  for (int k = 1; k < classes; ++k) {
    if (out.class_scores[k] > out.class_scores[out.prediction]) out.prediction = k;
  }
  return out;
}

}  // namespace locsnn
