#pragma once

#include <vector>

namespace locsnn {

/// Full neuron parameterization: response kernels, threshold, and the
/// surrogate used for backpropagation. Time constants are in units of scan
/// steps; the same config drives time-axis and location-axis layers.
struct KernelConfig {
  double tau_s = 1.0;      ///< incoming-kernel time constant
  double tau_r = 1.0;      ///< refractory time constant
  double theta = 10.0;     ///< firing threshold
  int kernel_len = 0;      ///< truncation length L; 0 = resolve from axis length
  double surr_alpha = 1.0; ///< surrogate-gradient scale
  double surr_beta = 1.0;  ///< surrogate-gradient sharpness
  int delay = 0;           ///< transmission delay folded into the incoming kernel

  /// Throws ValidationError on non-positive constants or negative delay.
  void validate() const;
};

/// Incoming spike response at offset `s` steps after a presynaptic spike:
/// alpha kernel (s'/tau_s) * exp(1 - s'/tau_s) with s' = s - delay, peaking
/// at 1 after tau_s steps; exactly 0 for s' < 0 (causality).
double eval_epsilon(double s, const KernelConfig& cfg);

/// Refractory response at offset `s` steps after the neuron's own spike:
/// -2 * theta * (s/tau_r) * exp(1 - s/tau_r); exactly 0 for s < 0, never
/// positive, decays to 0 as s grows.
double eval_eta(double s, const KernelConfig& cfg);

/// SLAYER-style spike-derivative estimate at membrane potential `u`:
/// surr_alpha * exp(-surr_beta * |u - theta|). Strictly positive, maximal at
/// u = theta, symmetric around it.
double surrogate_derivative(double u, const KernelConfig& cfg);

/// Smooth spike stand-in whose exact derivative is surrogate_derivative:
/// rises from 0 to 2*surr_alpha/surr_beta around theta. Drives the relaxed
/// forward pass used for gradient verification.
double relaxed_spike(double u, const KernelConfig& cfg);

/// Kernels discretized onto unit steps: table[k] = eval at offset k.
struct KernelTables {
  std::vector<double> eps;
  std::vector<double> eta;
};

/// Samples both kernels at integer offsets [0, kernel_len). Requires a
/// resolved (positive) kernel_len.
KernelTables sample_kernels(const KernelConfig& cfg);

/// Default truncation: min(axis_len, ceil(8 * max(tau_s, tau_r)) + delay),
/// past which the alpha kernels are negligible.
int default_kernel_len(int axis_len, const KernelConfig& cfg);

/// Copy of cfg with kernel_len resolved against `axis_len` if it was 0.
KernelConfig resolve_kernel_len(const KernelConfig& cfg, int axis_len);

}  // namespace locsnn
