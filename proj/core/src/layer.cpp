#include "locsnn/layer.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "locsnn/errors.hpp"

namespace locsnn {

Eigen::MatrixXd init_weights(int in_channels, int out_channels, std::uint64_t seed,
                             double gain) {
  if (in_channels < 1 || out_channels < 1) {
    throw ValidationError("init_weights: layer shape must be at least 1x1");
  }
  if (!(gain > 0.0)) throw ValidationError("init_weights: gain must be > 0");
  const double bound = gain / std::sqrt(static_cast<double>(in_channels));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-bound, bound);
  Eigen::MatrixXd weights(out_channels, in_channels);
  // Row-major fill order so the draw sequence is part of the format.
  for (int i = 0; i < out_channels; ++i) {
    for (int j = 0; j < in_channels; ++j) {
      weights(i, j) = dist(rng);
    }
  }
  return weights;
}

DenseSpikingLayer::DenseSpikingLayer(Eigen::MatrixXd weights, const KernelConfig& cfg)
    : weights_(std::move(weights)), cfg_(cfg) {
  cfg_.validate();
  if (weights_.rows() < 1 || weights_.cols() < 1) {
    throw ValidationError("layer weights must be at least 1x1");
  }
  if (!weights_.allFinite()) {
    throw ValidationError("layer weights contain non-finite entries");
  }
  tables_ = sample_kernels(cfg_);
}

void DenseSpikingLayer::set_weights(Eigen::MatrixXd weights) {
  if (weights.rows() != weights_.rows() || weights.cols() != weights_.cols()) {
    throw ValidationError("set_weights: shape change from " +
                          std::to_string(weights_.rows()) + "x" +
                          std::to_string(weights_.cols()));
  }
  if (!weights.allFinite()) {
    throw ValidationError("set_weights: non-finite entries");
  }
  weights_ = std::move(weights);
}

ScanState::ScanState(const DenseSpikingLayer& layer, Mode mode)
    : layer_(&layer), mode_(mode) {
  const int len = layer.config().kernel_len;
  in_ring_ = Eigen::MatrixXd::Zero(layer.in_channels(), len);
  out_ring_ = Eigen::MatrixXd::Zero(layer.out_channels(), len);
}

ScanState::StepResult ScanState::step(const Eigen::VectorXd& input_column) {
  const DenseSpikingLayer& layer = *layer_;
  if (input_column.size() != layer.in_channels()) {
    throw ValidationError("scan step: expected " + std::to_string(layer.in_channels()) +
                          " input channels, got " + std::to_string(input_column.size()));
  }
  const KernelTables& tables = layer.tables();
  const int len = static_cast<int>(tables.eps.size());
  const long k = steps_;

  in_ring_.col(k % len) = input_column;

  // Incoming response per input channel: c_j = sum_d eps[d] * x_j(k - d).
  const int reach = static_cast<int>(std::min<long>(k, len - 1));
  Eigen::VectorXd drive = Eigen::VectorXd::Zero(layer.in_channels());
  for (int d = 0; d <= reach; ++d) {
    drive.noalias() += tables.eps[d] * in_ring_.col((k - d) % len);
  }

  StepResult result;
  result.synaptic.noalias() = layer.weights() * drive;

  // Refractory feedback from this neuron's own past outputs (strictly past).
  Eigen::VectorXd refractory = Eigen::VectorXd::Zero(layer.out_channels());
  for (int d = 1; d <= reach; ++d) {
    refractory.noalias() += tables.eta[d] * out_ring_.col((k - d) % len);
  }
  result.membrane = result.synaptic + refractory;

  const double theta = layer.config().theta;
  if (mode_ == Mode::kHard) {
    result.output = (result.membrane.array() > theta).cast<double>();
  } else {
    result.output = result.membrane.unaryExpr(
        [&](double u) { return relaxed_spike(u, layer.config()); });
  }
  out_ring_.col(k % len) = result.output;
  ++steps_;
  return result;
}

ScanTrace forward_scan(const SpikeTensor& input, const DenseSpikingLayer& layer) {
  if (input.channels() != layer.in_channels()) {
    throw ValidationError("forward_scan: input has " + std::to_string(input.channels()) +
                          " channels, layer expects " +
                          std::to_string(layer.in_channels()));
  }
  const int steps = input.steps();
  ScanTrace trace;
  trace.membrane.resize(layer.out_channels(), steps);
  trace.synaptic.resize(layer.out_channels(), steps);
  trace.spikes = SpikeTensor(layer.out_channels(), steps);

  ScanState state(layer, ScanState::Mode::kHard);
  Eigen::VectorXd column(layer.in_channels());
  for (int k = 0; k < steps; ++k) {
    for (int j = 0; j < input.channels(); ++j) {
      column[j] = static_cast<double>(input.at(j, k));
    }
    ScanState::StepResult result = state.step(column);
    trace.membrane.col(k) = result.membrane;
    trace.synaptic.col(k) = result.synaptic;
    for (int i = 0; i < layer.out_channels(); ++i) {
      if (result.output[i] != 0.0) trace.spikes.set(i, k, true);
    }
  }
  return trace;
}

RelaxedTrace forward_scan_relaxed(const Eigen::MatrixXd& input,
                                  const DenseSpikingLayer& layer) {
  if (input.rows() != layer.in_channels()) {
    throw ValidationError("forward_scan_relaxed: input channel mismatch");
  }
  const int steps = static_cast<int>(input.cols());
  RelaxedTrace trace;
  trace.membrane.resize(layer.out_channels(), steps);
  trace.synaptic.resize(layer.out_channels(), steps);
  trace.outputs.resize(layer.out_channels(), steps);

  ScanState state(layer, ScanState::Mode::kRelaxed);
  for (int k = 0; k < steps; ++k) {
    ScanState::StepResult result = state.step(input.col(k));
    trace.membrane.col(k) = result.membrane;
    trace.synaptic.col(k) = result.synaptic;
    trace.outputs.col(k) = result.output;
  }
  return trace;
}

namespace {

// Shared backward sweep. The output values themselves never appear: the
// refractory feedback is linear in them (coefficient eta[d]) and the spike
// nonlinearity contributes through the surrogate derivative of the membrane.
LayerGradients backward_impl(const Eigen::MatrixXd& membrane,
                             const Eigen::MatrixXd& input_values,
                             const Eigen::MatrixXd& grad_out,
                             const DenseSpikingLayer& layer) {
  const int out = layer.out_channels();
  const int in = layer.in_channels();
  const int steps = static_cast<int>(membrane.cols());
  if (membrane.rows() != out || grad_out.rows() != out || grad_out.cols() != steps ||
      input_values.rows() != in || input_values.cols() != steps) {
    throw ValidationError("backward_scan: trace/input/grad shapes do not match layer");
  }
  const KernelTables& tables = layer.tables();
  const int len = static_cast<int>(tables.eps.size());
  const KernelConfig& cfg = layer.config();

  // delta(i,k) = dLoss/d membrane(i,k), swept backwards so the refractory
  // feedback of later steps is already folded in.
  Eigen::MatrixXd delta(out, steps);
  for (int k = steps - 1; k >= 0; --k) {
    const int reach = std::min(len - 1, steps - 1 - k);
    Eigen::VectorXd total = grad_out.col(k);
    for (int d = 1; d <= reach; ++d) {
      total.noalias() += tables.eta[d] * delta.col(k + d);
    }
    for (int i = 0; i < out; ++i) {
      delta(i, k) = total[i] * surrogate_derivative(membrane(i, k), cfg);
    }
  }

  // Incoming response of every input channel, a_j(k) = (eps * input_j)(k).
  Eigen::MatrixXd response = Eigen::MatrixXd::Zero(in, steps);
  for (int k = 0; k < steps; ++k) {
    const int reach = std::min(k, len - 1);
    for (int d = 0; d <= reach; ++d) {
      response.col(k).noalias() += tables.eps[d] * input_values.col(k - d);
    }
  }

  LayerGradients grads;
  grads.weights.noalias() = delta * response.transpose();

  // dLoss/d input_j(k) correlates the back-projected delta with eps.
  Eigen::MatrixXd back = layer.weights().transpose() * delta;  // in x steps
  grads.input = Eigen::MatrixXd::Zero(in, steps);
  for (int k = 0; k < steps; ++k) {
    const int reach = std::min(len - 1, steps - 1 - k);
    for (int d = 0; d <= reach; ++d) {
      grads.input.col(k).noalias() += tables.eps[d] * back.col(k + d);
    }
  }
  return grads;
}

Eigen::MatrixXd to_real(const SpikeTensor& x) {
  Eigen::MatrixXd out(x.channels(), x.steps());
  for (int c = 0; c < x.channels(); ++c) {
    for (int s = 0; s < x.steps(); ++s) {
      out(c, s) = static_cast<double>(x.at(c, s));
    }
  }
  return out;
}

}  // namespace

LayerGradients backward_scan(const ScanTrace& trace, const SpikeTensor& input,
                             const Eigen::MatrixXd& grad_out,
                             const DenseSpikingLayer& layer) {
  if (input.channels() != layer.in_channels() ||
      input.steps() != static_cast<int>(trace.membrane.cols()) ||
      trace.spikes.channels() != layer.out_channels()) {
    throw ValidationError("backward_scan: trace does not match input/layer");
  }
  return backward_impl(trace.membrane, to_real(input), grad_out, layer);
}

LayerGradients backward_scan(const RelaxedTrace& trace, const Eigen::MatrixXd& input,
                             const Eigen::MatrixXd& grad_out,
                             const DenseSpikingLayer& layer) {
  return backward_impl(trace.membrane, input, grad_out, layer);
}

}  // namespace locsnn
