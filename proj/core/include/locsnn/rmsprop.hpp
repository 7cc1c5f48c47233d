#pragma once

#include <Eigen/Dense>

namespace locsnn {

struct RmsPropConfig {
  double lr = 0.01;
  double decay = 0.9;      ///< running squared-gradient decay rho
  double epsilon = 1e-8;
  double l2 = 0.0;         ///< weight-decay coefficient added to the gradient

  void validate() const;
};

/// One RMSProp update. `state` holds the running squared-gradient average
/// (same shape as the weights, zero before the first step). The gradient is
/// augmented with l2 * weights before accumulation. Throws DivergenceError
/// on non-finite gradients, naming the offending shape.
void rmsprop_step(Eigen::MatrixXd& weights, const Eigen::MatrixXd& grads,
                  Eigen::MatrixXd& state, const RmsPropConfig& cfg);

}  // namespace locsnn
