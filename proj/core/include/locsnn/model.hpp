#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locsnn/layer.hpp"
#include "locsnn/location_order.hpp"

namespace locsnn {

enum class RecurrenceAxis { kTime, kLocation };

enum class ModelKind { kTsrm, kLsrm, kHybrid };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// One two-layer spiking branch scanned along a single recurrence axis.
/// The time branch consumes the raw N x T grid; the location branch
/// consumes its location_view (T x N), walking taxels in `order`.
struct BranchNet {
  RecurrenceAxis axis;
  DenseSpikingLayer layer0;
  DenseSpikingLayer layer1;
  std::optional<LocationOrder> order;  ///< set iff axis == kLocation
  int sensors = 1;
};

/// The classifier: one or both branches plus the dataset shape counts.
/// kind selects which branches exist (kHybrid carries both).
struct Model {
  ModelKind kind = ModelKind::kHybrid;
  int classes = 0;  ///< K
  int taxels = 0;   ///< N
  int steps = 0;    ///< T
  std::optional<BranchNet> time_branch;
  std::optional<BranchNet> location_branch;
};

/// Model construction parameters not fixed by the dataset shape.
struct ModelSpec {
  ModelKind kind = ModelKind::kHybrid;
  int hidden = 32;
  std::string order_name = "loop";
  KernelConfig time_kernel;      // kernel_len 0 resolves against T
  KernelConfig location_kernel;  // kernel_len 0 resolves against N
  double init_gain = 0.0;        // 0 = 10 * theta
  std::uint64_t seed = 1;
};

/// Builds a freshly initialized model for a K-class, N-taxel, T-step task.
/// For the location branch, `order_name` selects a builtin 39-taxel order
/// when N is a multiple of 39; "loop" degenerates to the identity traversal
/// of all N taxels otherwise (arch/whorl require the 39-taxel layout).
Model build_model(const ModelSpec& spec, int classes, int taxels, int steps);

/// Both layers' traces from one branch forward; trace1.spikes is the branch
/// output (K x T for the time branch, K x N for the location branch).
struct BranchTraces {
  ScanTrace trace0;
  ScanTrace trace1;
};

/// Runs a branch on an already-oriented input (step axis = recurrence axis).
BranchTraces forward_branch_view(const SpikeTensor& view, const BranchNet& branch);

/// Runs a branch on the raw N x T grid, orienting it internally.
BranchTraces forward_branch(const SpikeTensor& x, const BranchNet& branch);

/// Time-branch output O1 (K x T).
SpikeTensor forward_tsrm(const SpikeTensor& x, const Model& model);

/// Location-branch output O2 (K x N).
SpikeTensor forward_lsrm(const SpikeTensor& x, const Model& model);

/// Hybrid output O = [O1 | O2], K x (T + N).
SpikeTensor forward_hybrid(const SpikeTensor& x, const Model& model);

/// Per-class spike counts of an output train.
std::vector<long long> spike_counts(const SpikeTensor& output);

/// Argmax of per-class spike counts; ties break to the lowest class index.
int predict(const SpikeTensor& output);

/// Outputs of one timestep-wise inference step at prefix length t.
struct TimestepOutput {
  SpikeTensor o1;  ///< K x t
  SpikeTensor o2;  ///< K x N
  SpikeTensor o;   ///< K x (t + N)
  int prediction = 0;
};

/// Reference timestep-wise inference: re-simulates both branches on the
/// length-t event prefix (the location branch on the zero-padded view).
/// Requires 1 <= t <= T. At t = T this reproduces forward_hybrid exactly.
TimestepOutput timestep_inference(const SpikeTensor& x, const Model& model, int t);

/// Incremental timestep-wise inference over one sample. The time branch
/// advances one scan step per call; the location branch is re-simulated per
/// step because its channel axis is the growing time prefix. Outputs are
/// bit-identical to timestep_inference at every t.
class StreamingSession {
 public:
  StreamingSession(const Model& model, const SpikeTensor& x);

  /// Processes the next time bin; returns outputs for prefix length
  /// current_step() after the call.
  TimestepOutput advance();

  int current_step() const { return step_; }
  int total_steps() const { return input_.steps(); }

 private:
  const Model* model_;
  SpikeTensor input_;
  std::optional<ScanState> time_state0_;
  std::optional<ScanState> time_state1_;
  SpikeTensor o1_accum_;  // K x step_, grown per advance
  int step_ = 0;
};

/// Balance weight of Eq-style time-weighted readout at prefix t of T:
/// omega = 1 / (1 + exp(-psi * (t/T - 1))); exactly 0.5 at t = T.
double time_weight_omega(double psi, int t, int total_steps);

/// Time-weighted hybrid readout: O1 scaled by (1 - omega), O2 by omega,
/// classes scored by their weighted spike sums.
struct TimeWeightedOutput {
  Eigen::MatrixXd weighted;       ///< K x (t + N), real-valued
  Eigen::VectorXd class_scores;   ///< weighted per-class sums
  double omega = 0.0;
  int prediction = 0;
};

TimeWeightedOutput time_weighted_output(const SpikeTensor& o1, const SpikeTensor& o2,
                                        double psi, int t, int total_steps);

}  // namespace locsnn
