#pragma once

#include <cstdint>
#include <Eigen/Dense>

#include "locsnn/kernel.hpp"
#include "locsnn/spike_tensor.hpp"

namespace locsnn {

/// Deterministic uniform init on [-c, c] with c = gain / sqrt(in_channels).
Eigen::MatrixXd init_weights(int in_channels, int out_channels, std::uint64_t seed,
                             double gain);

/// A fully-connected spiking layer: weight matrix (out x in) plus the kernel
/// parameterization. The same layer is simulated along whichever recurrence
/// axis the caller oriented the input on, time for one branch and location
/// for the other; the scan itself is axis-agnostic.
class DenseSpikingLayer {
 public:
  DenseSpikingLayer(Eigen::MatrixXd weights, const KernelConfig& cfg);

  int in_channels() const { return static_cast<int>(weights_.cols()); }
  int out_channels() const { return static_cast<int>(weights_.rows()); }

  const Eigen::MatrixXd& weights() const { return weights_; }

  /// Replaces the weights; rejects non-finite entries or shape changes.
  void set_weights(Eigen::MatrixXd weights);

  const KernelConfig& config() const { return cfg_; }
  const KernelTables& tables() const { return tables_; }

 private:
  Eigen::MatrixXd weights_;
  KernelConfig cfg_;
  KernelTables tables_;
};

/// Everything the forward scan produced: membrane potentials, the
/// pre-refractory synaptic drive, and the emitted spikes, all out x steps.
/// Invariant: spikes(i,k) = 1 exactly when membrane(i,k) > theta.
struct ScanTrace {
  Eigen::MatrixXd membrane;
  Eigen::MatrixXd synaptic;
  SpikeTensor spikes;
};

/// Trace of the relaxed (smooth-spike) forward used for gradient checks;
/// outputs are real values in [0, 2*surr_alpha/surr_beta).
struct RelaxedTrace {
  Eigen::MatrixXd membrane;
  Eigen::MatrixXd synaptic;
  Eigen::MatrixXd outputs;
};

/// Incremental scan engine: feed one input column per step, get that step's
/// membrane/spike column back. forward_scan is a loop over step(); a
/// streaming caller drives the same code one event-frame at a time, so both
/// paths are bit-identical by construction. State is one ring buffer of
/// recent input columns and one of recent output columns, each kernel_len
/// deep.
class ScanState {
 public:
  enum class Mode { kHard, kRelaxed };

  explicit ScanState(const DenseSpikingLayer& layer, Mode mode = Mode::kHard);

  struct StepResult {
    Eigen::VectorXd synaptic;
    Eigen::VectorXd membrane;
    Eigen::VectorXd output;  ///< 0/1 in hard mode, relaxed_spike(u) otherwise
  };

  /// Advances one step. `input_column` holds the in_channels values for this
  /// step ({0,1} on the hard path).
  StepResult step(const Eigen::VectorXd& input_column);

  long steps_taken() const { return steps_; }

 private:
  const DenseSpikingLayer* layer_;
  Mode mode_;
  Eigen::MatrixXd in_ring_;   // in x L, column k % L holds step k's input
  Eigen::MatrixXd out_ring_;  // out x L
  long steps_ = 0;
};

/// Simulates the layer over all steps of `input` (channel count must match
/// in_channels). Pure: identical inputs give bit-identical traces.
ScanTrace forward_scan(const SpikeTensor& input, const DenseSpikingLayer& layer);

/// Relaxed forward over real-valued inputs: spikes are replaced by the
/// smooth relaxed_spike everywhere, making the whole scan differentiable.
RelaxedTrace forward_scan_relaxed(const Eigen::MatrixXd& input,
                                  const DenseSpikingLayer& layer);

/// Gradients produced by one backward sweep.
struct LayerGradients {
  Eigen::MatrixXd weights;  ///< dLoss/dW, out x in
  Eigen::MatrixXd input;    ///< dLoss/d(input values), in x steps
};

/// Backpropagates `grad_out` (dLoss/d output spikes, out x steps) through the
/// scan, substituting the surrogate derivative for the spike nonlinearity and
/// chaining through the incoming-kernel convolution and the refractory
/// feedback. `input` must be the tensor the trace was produced from.
LayerGradients backward_scan(const ScanTrace& trace, const SpikeTensor& input,
                             const Eigen::MatrixXd& grad_out,
                             const DenseSpikingLayer& layer);

/// Same sweep over a relaxed trace; computes the exact gradient of the
/// relaxed forward (the surrogate derivative is the true Jacobian there).
LayerGradients backward_scan(const RelaxedTrace& trace, const Eigen::MatrixXd& input,
                             const Eigen::MatrixXd& grad_out,
                             const DenseSpikingLayer& layer);

}  // namespace locsnn
