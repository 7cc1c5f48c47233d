#include "locsnn/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "locsnn/errors.hpp"

namespace locsnn {

void KernelConfig::validate() const {
  if (!(tau_s > 0.0)) throw ValidationError("kernel: tau_s must be > 0");
  if (!(tau_r > 0.0)) throw ValidationError("kernel: tau_r must be > 0");
  if (!(theta > 0.0)) throw ValidationError("kernel: theta must be > 0");
  if (kernel_len < 0) throw ValidationError("kernel: kernel_len must be >= 0");
  if (!(surr_alpha > 0.0)) throw ValidationError("kernel: surr_alpha must be > 0");
  if (!(surr_beta > 0.0)) throw ValidationError("kernel: surr_beta must be > 0");
  if (delay < 0) throw ValidationError("kernel: delay must be >= 0");
}

double eval_epsilon(double s, const KernelConfig& cfg) {
  const double shifted = s - cfg.delay;
  if (shifted < 0.0) return 0.0;
  const double r = shifted / cfg.tau_s;
  return r * std::exp(1.0 - r);
}

double eval_eta(double s, const KernelConfig& cfg) {
  if (s < 0.0) return 0.0;
  const double r = s / cfg.tau_r;
  return -2.0 * cfg.theta * r * std::exp(1.0 - r);
}

double surrogate_derivative(double u, const KernelConfig& cfg) {
  return cfg.surr_alpha * std::exp(-cfg.surr_beta * std::abs(u - cfg.theta));
}

double relaxed_spike(double u, const KernelConfig& cfg) {
  const double scale = cfg.surr_alpha / cfg.surr_beta;
  if (u <= cfg.theta) {
    return scale * std::exp(cfg.surr_beta * (u - cfg.theta));
  }
  return scale * (2.0 - std::exp(-cfg.surr_beta * (u - cfg.theta)));
}

KernelTables sample_kernels(const KernelConfig& cfg) {
  cfg.validate();
  if (cfg.kernel_len < 1) {
    throw ValidationError("sample_kernels: kernel_len is unresolved (" +
                          std::to_string(cfg.kernel_len) + ")");
  }
  KernelTables tables;
  tables.eps.resize(cfg.kernel_len);
  tables.eta.resize(cfg.kernel_len);
  for (int k = 0; k < cfg.kernel_len; ++k) {
    tables.eps[k] = eval_epsilon(static_cast<double>(k), cfg);
    tables.eta[k] = eval_eta(static_cast<double>(k), cfg);
  }
  return tables;
}

int default_kernel_len(int axis_len, const KernelConfig& cfg) {
  const int reach =
      static_cast<int>(std::ceil(8.0 * std::max(cfg.tau_s, cfg.tau_r))) + cfg.delay;
  return std::max(1, std::min(axis_len, reach));
}

KernelConfig resolve_kernel_len(const KernelConfig& cfg, int axis_len) {
  KernelConfig out = cfg;
  if (out.kernel_len == 0) out.kernel_len = default_kernel_len(axis_len, cfg);
  return out;
}

}  // namespace locsnn
