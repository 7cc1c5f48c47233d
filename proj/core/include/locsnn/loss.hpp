#pragma once

#include <Eigen/Dense>

#include "locsnn/spike_tensor.hpp"

namespace locsnn {

/// Desired per-class spike counts: rate * duration for the true class,
/// rate * duration for all others. Rates are fractions of the output
/// duration, so the same pair serves T-, N-, and (T+N)-length outputs.
Eigen::VectorXd desired_counts(int classes, int label, int duration, double r_true,
                               double r_false);

/// Squared spike-count loss over the time-branch output (K x T):
/// 1/2 * sum_k (count_k - desired_k)^2.
double loss_count(const SpikeTensor& output, int label, double r_true, double r_false);

/// Squared spike-count loss over the location-branch output (K x N); counts
/// run over locations instead of time bins.
double loss_location(const SpikeTensor& o2, int label, double r_true, double r_false);

/// Weighted spike-count loss for the hybrid model: the location count is
/// scaled by lambda before the two branch counts are balanced against a
/// desired count over the concatenated duration T + N:
/// 1/2 * sum_k (count1_k + lambda * count2_k - desired_k)^2.
double loss_weighted(const SpikeTensor& o1, const SpikeTensor& o2, int label,
                     double lambda, double r_true, double r_false);

/// Per-class count error e_k = count1_k + lambda * count2_k - desired_k.
/// The loss is 1/2 ||e||^2; dLoss/dO1(k,t) = e_k and dLoss/dO2(k,l) =
/// lambda * e_k, constant across the duration.
Eigen::VectorXd weighted_count_errors(const SpikeTensor& o1, const SpikeTensor& o2,
                                      int label, double lambda, double r_true,
                                      double r_false);

/// Per-class count error for a single output train against desired counts
/// scaled by its own duration.
Eigen::VectorXd count_errors(const SpikeTensor& output, int label, double r_true,
                             double r_false);

}  // namespace locsnn
