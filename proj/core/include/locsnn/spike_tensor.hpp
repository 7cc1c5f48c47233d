#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace locsnn {

/// A single event: taxel `taxel` fired at time bin `step`.
struct SpikeEvent {
  int taxel = 0;
  int step = 0;
};

/// Dense binary event grid, channels x steps. The universal carrier for
/// network inputs, layer outputs and targets. Entries are strictly 0 or 1.
///
/// Storage is channel-major: entry (c, s) lives at data()[c * steps + s].
/// Instances are immutable by convention once fully built; all transforms
/// below return fresh tensors.
class SpikeTensor {
 public:
  SpikeTensor() = default;

  /// Zero-filled tensor. Zero-sized shapes are allowed as boundary values;
  /// loaded datasets always carry at least 1x1.
  SpikeTensor(int channels, int steps);

  int channels() const { return channels_; }
  int steps() const { return steps_; }

  std::uint8_t at(int channel, int step) const {
    return data_[static_cast<std::size_t>(channel) * steps_ + step];
  }
  void set(int channel, int step, bool value) {
    data_[static_cast<std::size_t>(channel) * steps_ + step] = value ? 1 : 0;
  }

  /// Pointer to the `steps` contiguous entries of one channel.
  const std::uint8_t* channel_data(int channel) const {
    return data_.data() + static_cast<std::size_t>(channel) * steps_;
  }

  /// Number of 1-entries over the whole grid.
  long long total_spikes() const;

  /// Number of 1-entries in one channel row.
  long long channel_spikes(int channel) const;

  bool operator==(const SpikeTensor& other) const = default;

 private:
  int channels_ = 0;
  int steps_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Per-sample metadata carried beside the event grid.
struct SampleMeta {
  int label = 0;
  std::string sample_id;
};

struct LabeledSample {
  SpikeTensor tensor;
  SampleMeta meta;
};

/// A loaded dataset: declared shape plus the samples conforming to it.
struct Dataset {
  int channels = 0;  ///< taxels per sample (N)
  int steps = 0;     ///< time bins per sample (T)
  int classes = 0;   ///< number of labels (K)
  std::vector<LabeledSample> samples;
};

/// Materializes a sparse event list into a dense binary grid. Duplicate
/// events collapse to a single 1. Throws ValidationError naming the first
/// out-of-range event.
SpikeTensor from_events(const std::vector<SpikeEvent>& events, int channels, int steps);

/// Plain transpose: output(s, c) = x(c, s).
SpikeTensor transpose(const SpikeTensor& x);

/// First `t` step-columns of x. Requires 0 <= t <= x.steps().
SpikeTensor prefix_steps(const SpikeTensor& x, int t);

/// Pads the channel axis with zero rows: rows [0, x.channels) equal x,
/// rows [x.channels, full_channels) are zero. Used to extend a transposed
/// event prefix (t x N) to the full location-branch input (T x N).
/// Throws ValidationError if x.channels() > full_channels.
SpikeTensor pad_suffix(const SpikeTensor& x, int full_channels);

/// Concatenates along the step axis. Requires equal channel counts.
SpikeTensor concat_steps(const SpikeTensor& a, const SpikeTensor& b);

}  // namespace locsnn
