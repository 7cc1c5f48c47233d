#include "locsnn/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include "locsnn/errors.hpp"
#include "locsnn/loss.hpp"
#include "locsnn/metrics.hpp"
#include "locsnn/parallel.hpp"
#include "locsnn/rmsprop.hpp"
#include "locsnn/synth.hpp"

namespace locsnn {

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ValidationError("train: lr must be > 0");
  if (l2 < 0.0) throw ValidationError("train: l2 must be >= 0");
  if (epochs < 1) throw ValidationError("train: epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("train: batch_size must be >= 1");
  if (lambda < 0.0) throw ValidationError("train: lambda must be >= 0");
  if (!(r_false >= 0.0 && r_false < r_true && r_true <= 1.0)) {
    throw ValidationError("train: require 0 <= r_false < r_true <= 1");
  }
  if (!(split_frac > 0.0 && split_frac < 1.0)) {
    throw ValidationError("train: split_frac must be strictly between 0 and 1");
  }
  if (jobs < 1) throw ValidationError("train: jobs must be >= 1");
}

namespace {

// Spread a per-class count error across every step of the branch output.
Eigen::MatrixXd broadcast_errors(const Eigen::VectorXd& errors, int steps,
                                 double scale) {
  return (scale * errors) * Eigen::RowVectorXd::Ones(steps);
}

struct BranchGrads {
  Eigen::MatrixXd layer0;
  Eigen::MatrixXd layer1;
};

struct SampleGrads {
  double loss = 0.0;
  int prediction = 0;
  std::optional<BranchGrads> time;
  std::optional<BranchGrads> location;
};

BranchGrads backward_branch(const BranchTraces& traces, const SpikeTensor& oriented,
                            const Eigen::MatrixXd& grad_out, const BranchNet& branch) {
  LayerGradients g1 =
      backward_scan(traces.trace1, traces.trace0.spikes, grad_out, branch.layer1);
  LayerGradients g0 =
      backward_scan(traces.trace0, oriented, g1.input, branch.layer0);
  return BranchGrads{std::move(g0.weights), std::move(g1.weights)};
}

SampleGrads compute_sample_grads(const Model& model, const SpikeTensor& x, int label,
                                 const TrainConfig& cfg) {
  SampleGrads out;

  std::optional<BranchTraces> time_traces;
  std::optional<BranchTraces> loc_traces;
  SpikeTensor loc_view;
  if (model.time_branch) {
    time_traces = forward_branch_view(x, *model.time_branch);
  }
  if (model.location_branch) {
    loc_view = location_view(x, *model.location_branch->order,
                             model.location_branch->sensors);
    loc_traces = forward_branch_view(loc_view, *model.location_branch);
  }

  switch (model.kind) {
    case ModelKind::kHybrid: {
      const SpikeTensor& o1 = time_traces->trace1.spikes;
      const SpikeTensor& o2 = loc_traces->trace1.spikes;
      const Eigen::VectorXd errors =
          weighted_count_errors(o1, o2, label, cfg.lambda, cfg.r_true, cfg.r_false);
      out.loss = 0.5 * errors.squaredNorm();
      out.prediction = predict(concat_steps(o1, o2));
      out.time = backward_branch(*time_traces, x,
                                 broadcast_errors(errors, o1.steps(), 1.0),
                                 *model.time_branch);
      out.location = backward_branch(*loc_traces, loc_view,
                                     broadcast_errors(errors, o2.steps(), cfg.lambda),
                                     *model.location_branch);
      break;
    }
    case ModelKind::kTsrm: {
      const SpikeTensor& o1 = time_traces->trace1.spikes;
      const Eigen::VectorXd errors = count_errors(o1, label, cfg.r_true, cfg.r_false);
      out.loss = 0.5 * errors.squaredNorm();
      out.prediction = predict(o1);
      out.time = backward_branch(*time_traces, x,
                                 broadcast_errors(errors, o1.steps(), 1.0),
                                 *model.time_branch);
      break;
    }
    case ModelKind::kLsrm: {
      const SpikeTensor& o2 = loc_traces->trace1.spikes;
      const Eigen::VectorXd errors = count_errors(o2, label, cfg.r_true, cfg.r_false);
      out.loss = 0.5 * errors.squaredNorm();
      out.prediction = predict(o2);
      out.location = backward_branch(*loc_traces, loc_view,
                                     broadcast_errors(errors, o2.steps(), 1.0),
                                     *model.location_branch);
      break;
    }
  }
  return out;
}

struct WeightSnapshot {
  std::optional<std::array<Eigen::MatrixXd, 2>> time;
  std::optional<std::array<Eigen::MatrixXd, 2>> location;
};

WeightSnapshot snapshot(const Model& model) {
  WeightSnapshot s;
  if (model.time_branch) {
    s.time = {{model.time_branch->layer0.weights(), model.time_branch->layer1.weights()}};
  }
  if (model.location_branch) {
    s.location = {{model.location_branch->layer0.weights(),
                   model.location_branch->layer1.weights()}};
  }
  return s;
}

void restore(Model& model, const WeightSnapshot& s) {
  if (s.time) {
    model.time_branch->layer0.set_weights((*s.time)[0]);
    model.time_branch->layer1.set_weights((*s.time)[1]);
  }
  if (s.location) {
    model.location_branch->layer0.set_weights((*s.location)[0]);
    model.location_branch->layer1.set_weights((*s.location)[1]);
  }
}

}  // namespace

double sample_loss(const Model& model, const SpikeTensor& x, int label,
                   const TrainConfig& cfg) {
  switch (model.kind) {
    case ModelKind::kHybrid:
      return loss_weighted(forward_tsrm(x, model), forward_lsrm(x, model), label,
                           cfg.lambda, cfg.r_true, cfg.r_false);
    case ModelKind::kTsrm:
      return loss_count(forward_tsrm(x, model), label, cfg.r_true, cfg.r_false);
    case ModelKind::kLsrm:
      return loss_location(forward_lsrm(x, model), label, cfg.r_true, cfg.r_false);
  }
  throw ValidationError("sample_loss: unknown model kind");
}

TrainResult train_on_split(Model& model, const Dataset& train_set,
                           const Dataset& test_set, const TrainConfig& cfg) {
  cfg.validate();
  if (train_set.samples.empty() || test_set.samples.empty()) {
    throw ValidationError("train: both splits must be nonempty");
  }

  RmsPropConfig rms{cfg.lr, cfg.rms_decay, cfg.rms_epsilon, cfg.l2};
  rms.validate();
  Eigen::MatrixXd state_t0, state_t1, state_l0, state_l1;

  std::mt19937_64 rng(cfg.seed);
  std::vector<int> order(train_set.samples.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  WeightSnapshot last_good = snapshot(model);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);

    double loss_sum = 0.0;
    long correct = 0;
    bool finite = true;

    for (std::size_t start = 0; start < order.size() && finite;
         start += cfg.batch_size) {
      const int batch =
          static_cast<int>(std::min<std::size_t>(cfg.batch_size, order.size() - start));
      std::vector<SampleGrads> grads(batch);
      parallel_for_indexed(batch, cfg.jobs, [&](int b) {
        const LabeledSample& sample = train_set.samples[order[start + b]];
        grads[b] = compute_sample_grads(model, sample.tensor, sample.meta.label, cfg);
      });

      double batch_loss = 0.0;
      for (int b = 0; b < batch; ++b) {
        batch_loss += grads[b].loss;
        const LabeledSample& sample = train_set.samples[order[start + b]];
        if (grads[b].prediction == sample.meta.label) ++correct;
      }
      loss_sum += batch_loss;
      if (!std::isfinite(batch_loss)) {
        finite = false;
        break;
      }

      // Reduce gradients in batch order, then average.
      SampleGrads& total = grads[0];
      for (int b = 1; b < batch; ++b) {
        if (total.time) {
          total.time->layer0 += grads[b].time->layer0;
          total.time->layer1 += grads[b].time->layer1;
        }
        if (total.location) {
          total.location->layer0 += grads[b].location->layer0;
          total.location->layer1 += grads[b].location->layer1;
        }
      }
      const double inv = 1.0 / batch;
      try {
        if (total.time) {
          Eigen::MatrixXd w0 = model.time_branch->layer0.weights();
          rmsprop_step(w0, (inv * total.time->layer0).eval(), state_t0, rms);
          model.time_branch->layer0.set_weights(std::move(w0));
          Eigen::MatrixXd w1 = model.time_branch->layer1.weights();
          rmsprop_step(w1, (inv * total.time->layer1).eval(), state_t1, rms);
          model.time_branch->layer1.set_weights(std::move(w1));
        }
        if (total.location) {
          Eigen::MatrixXd w0 = model.location_branch->layer0.weights();
          rmsprop_step(w0, (inv * total.location->layer0).eval(), state_l0, rms);
          model.location_branch->layer0.set_weights(std::move(w0));
          Eigen::MatrixXd w1 = model.location_branch->layer1.weights();
          rmsprop_step(w1, (inv * total.location->layer1).eval(), state_l1, rms);
          model.location_branch->layer1.set_weights(std::move(w1));
        }
      } catch (const DivergenceError&) {
        finite = false;
      }
    }

    if (!finite) {
      restore(model, last_good);
      result.diverged = true;
      result.divergence_epoch = epoch;
      return result;
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(train_set.samples.size());
    record.train_accuracy =
        static_cast<double>(correct) / static_cast<double>(train_set.samples.size());
    record.test_accuracy = evaluate(model, test_set, cfg.jobs).accuracy;
    result.curves.push_back(record);
    last_good = snapshot(model);
  }
  return result;
}

TrainResult train(Model& model, const Dataset& dataset, const TrainConfig& cfg) {
  cfg.validate();
  auto [train_set, test_set] = split(dataset, cfg.split_frac, cfg.seed);
  return train_on_split(model, train_set, test_set, cfg);
}

}  // namespace locsnn
