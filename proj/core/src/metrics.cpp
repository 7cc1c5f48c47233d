#include "locsnn/metrics.hpp"

#include <fstream>
#include <string>

#include "locsnn/errors.hpp"
#include "locsnn/parallel.hpp"

namespace locsnn {

Metrics metrics_from_predictions(const std::vector<int>& labels,
                                 const std::vector<int>& predictions, int classes) {
  if (labels.size() != predictions.size() || labels.empty()) {
    throw ValidationError("metrics: need matching, nonempty label/prediction lists");
  }
  Metrics m;
  m.confusion = Eigen::MatrixXi::Zero(classes, classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    m.confusion(labels[i], predictions[i]) += 1;
  }
  long correct = 0;
  for (int k = 0; k < classes; ++k) correct += m.confusion(k, k);
  m.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());

  m.precision.assign(classes, 0.0);
  m.recall.assign(classes, 0.0);
  for (int k = 0; k < classes; ++k) {
    const int predicted = m.confusion.col(k).sum();
    const int actual = m.confusion.row(k).sum();
    if (predicted > 0) m.precision[k] = static_cast<double>(m.confusion(k, k)) / predicted;
    if (actual > 0) m.recall[k] = static_cast<double>(m.confusion(k, k)) / actual;
  }
  return m;
}

int predict_sample(const Model& model, const SpikeTensor& x) {
  switch (model.kind) {
    case ModelKind::kTsrm: return predict(forward_tsrm(x, model));
    case ModelKind::kLsrm: return predict(forward_lsrm(x, model));
    case ModelKind::kHybrid: return predict(forward_hybrid(x, model));
  }
  throw ValidationError("predict_sample: unknown model kind");
}

Metrics evaluate(const Model& model, const Dataset& dataset, int jobs) {
  if (dataset.samples.empty()) throw ValidationError("evaluate: empty dataset");
  const int n = static_cast<int>(dataset.samples.size());
  std::vector<int> labels(n), predictions(n);
  parallel_for_indexed(n, jobs, [&](int i) {
    labels[i] = dataset.samples[i].meta.label;
    predictions[i] = predict_sample(model, dataset.samples[i].tensor);
  });
  return metrics_from_predictions(labels, predictions, dataset.classes);
}

void write_confusion_csv(const std::filesystem::path& path,
                         const Eigen::MatrixXi& confusion) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "true\\predicted";
  for (int k = 0; k < confusion.cols(); ++k) out << "," << k;
  out << "\n";
  for (int r = 0; r < confusion.rows(); ++r) {
    out << r;
    for (int c = 0; c < confusion.cols(); ++c) out << "," << confusion(r, c);
    out << "\n";
  }
}

}  // namespace locsnn
