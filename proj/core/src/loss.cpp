#include "locsnn/loss.hpp"

#include <string>

#include "locsnn/errors.hpp"

namespace locsnn {

namespace {

void check_label(int label, int classes) {
  if (label < 0 || label >= classes) {
    throw ValidationError("label " + std::to_string(label) + " outside [0, " +
                          std::to_string(classes) + ")");
  }
}

Eigen::VectorXd counts_vector(const SpikeTensor& output) {
  Eigen::VectorXd counts(output.channels());
  for (int k = 0; k < output.channels(); ++k) {
    counts[k] = static_cast<double>(output.channel_spikes(k));
  }
  return counts;
}

}  // namespace

Eigen::VectorXd desired_counts(int classes, int label, int duration, double r_true,
                               double r_false) {
  check_label(label, classes);
  Eigen::VectorXd desired =
      Eigen::VectorXd::Constant(classes, r_false * static_cast<double>(duration));
  desired[label] = r_true * static_cast<double>(duration);
  return desired;
}

Eigen::VectorXd count_errors(const SpikeTensor& output, int label, double r_true,
                             double r_false) {
  return counts_vector(output) -
         desired_counts(output.channels(), label, output.steps(), r_true, r_false);
}

double loss_count(const SpikeTensor& output, int label, double r_true, double r_false) {
  return 0.5 * count_errors(output, label, r_true, r_false).squaredNorm();
}

double loss_location(const SpikeTensor& o2, int label, double r_true, double r_false) {
  return 0.5 * count_errors(o2, label, r_true, r_false).squaredNorm();
}

Eigen::VectorXd weighted_count_errors(const SpikeTensor& o1, const SpikeTensor& o2,
                                      int label, double lambda, double r_true,
                                      double r_false) {
  if (o1.channels() != o2.channels()) {
    throw ValidationError("weighted loss: branch outputs disagree on class count");
  }
  const int duration = o1.steps() + o2.steps();
  return counts_vector(o1) + lambda * counts_vector(o2) -
         desired_counts(o1.channels(), label, duration, r_true, r_false);
}

double loss_weighted(const SpikeTensor& o1, const SpikeTensor& o2, int label,
                     double lambda, double r_true, double r_false) {
  return 0.5 *
         weighted_count_errors(o1, o2, label, lambda, r_true, r_false).squaredNorm();
}

}  // namespace locsnn
