#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "locsnn/model.hpp"
#include "locsnn/spike_tensor.hpp"

namespace locsnn {

/// Evaluation summary. Confusion rows are true classes, columns predicted;
/// row sums equal per-class sample counts and accuracy = trace / total.
struct Metrics {
  double accuracy = 0.0;
  Eigen::MatrixXi confusion;
  std::vector<double> precision;  ///< per predicted class; 0 when never predicted
  std::vector<double> recall;     ///< per true class; 0 when class absent
};

/// Builds metrics from (true, predicted) label pairs.
Metrics metrics_from_predictions(const std::vector<int>& labels,
                                 const std::vector<int>& predictions, int classes);

/// Runs the model on every sample and aggregates metrics. Deterministic for
/// any job count (predictions are gathered in sample order).
Metrics evaluate(const Model& model, const Dataset& dataset, int jobs = 1);

/// Model prediction for one raw sample, honoring the model kind.
int predict_sample(const Model& model, const SpikeTensor& x);

/// Writes the confusion matrix as CSV with a header row of predicted-class
/// columns.
void write_confusion_csv(const std::filesystem::path& path,
                         const Eigen::MatrixXi& confusion);

}  // namespace locsnn
