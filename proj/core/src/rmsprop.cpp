#include "locsnn/rmsprop.hpp"

#include <string>

#include "locsnn/errors.hpp"

namespace locsnn {

void RmsPropConfig::validate() const {
  if (!(lr > 0.0)) throw ValidationError("rmsprop: lr must be > 0");
  if (decay < 0.0 || decay >= 1.0) throw ValidationError("rmsprop: decay in [0, 1)");
  if (!(epsilon > 0.0)) throw ValidationError("rmsprop: epsilon must be > 0");
  if (l2 < 0.0) throw ValidationError("rmsprop: l2 must be >= 0");
}

void rmsprop_step(Eigen::MatrixXd& weights, const Eigen::MatrixXd& grads,
                  Eigen::MatrixXd& state, const RmsPropConfig& cfg) {
  if (grads.rows() != weights.rows() || grads.cols() != weights.cols()) {
    throw ValidationError("rmsprop_step: gradient shape mismatch");
  }
  if (!grads.allFinite()) {
    throw DivergenceError("non-finite gradient for a " + std::to_string(weights.rows()) +
                          "x" + std::to_string(weights.cols()) + " weight matrix");
  }
  if (state.rows() != weights.rows() || state.cols() != weights.cols()) {
    state = Eigen::MatrixXd::Zero(weights.rows(), weights.cols());
  }
  const Eigen::MatrixXd effective = grads + cfg.l2 * weights;
  state = cfg.decay * state + (1.0 - cfg.decay) * effective.cwiseProduct(effective);
  weights -= cfg.lr *
             effective.cwiseQuotient((state.cwiseSqrt().array() + cfg.epsilon).matrix());
}

}  // namespace locsnn
