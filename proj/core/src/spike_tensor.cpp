#include "locsnn/spike_tensor.hpp"

#include <numeric>
#include <string>

#include "locsnn/errors.hpp"

namespace locsnn {

SpikeTensor::SpikeTensor(int channels, int steps)
    : channels_(channels), steps_(steps) {
  // Zero-sized shapes are legal boundary values (an empty prefix padded up to
  // a full grid); datasets enforce >= 1x1 at the manifest level.
  if (channels < 0 || steps < 0) {
    throw ValidationError("SpikeTensor shape must be nonnegative, got " +
                          std::to_string(channels) + "x" + std::to_string(steps));
  }
  data_.assign(static_cast<std::size_t>(channels) * steps, 0);
}

long long SpikeTensor::total_spikes() const {
  return std::accumulate(data_.begin(), data_.end(), 0LL);
}

long long SpikeTensor::channel_spikes(int channel) const {
  const std::uint8_t* row = channel_data(channel);
  return std::accumulate(row, row + steps_, 0LL);
}

SpikeTensor from_events(const std::vector<SpikeEvent>& events, int channels, int steps) {
  SpikeTensor out(channels, steps);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const SpikeEvent& e = events[i];
    if (e.taxel < 0 || e.taxel >= channels || e.step < 0 || e.step >= steps) {
      throw ValidationError("event " + std::to_string(i) + " (taxel=" +
                            std::to_string(e.taxel) + ", step=" + std::to_string(e.step) +
                            ") outside grid " + std::to_string(channels) + "x" +
                            std::to_string(steps));
    }
    out.set(e.taxel, e.step, true);
  }
  return out;
}

SpikeTensor transpose(const SpikeTensor& x) {
  SpikeTensor out(x.steps(), x.channels());
  for (int c = 0; c < x.channels(); ++c) {
    for (int s = 0; s < x.steps(); ++s) {
      if (x.at(c, s)) out.set(s, c, true);
    }
  }
  return out;
}

SpikeTensor prefix_steps(const SpikeTensor& x, int t) {
  if (t < 1 || t > x.steps()) {
    throw ValidationError("prefix length " + std::to_string(t) + " outside [1, " +
                          std::to_string(x.steps()) + "]");
  }
  SpikeTensor out(x.channels(), t);
  for (int c = 0; c < x.channels(); ++c) {
    for (int s = 0; s < t; ++s) {
      if (x.at(c, s)) out.set(c, s, true);
    }
  }
  return out;
}

SpikeTensor pad_suffix(const SpikeTensor& x, int full_channels) {
  if (x.channels() > full_channels) {
    throw ValidationError("pad_suffix: input has " + std::to_string(x.channels()) +
                          " channels, more than the requested " +
                          std::to_string(full_channels));
  }
  SpikeTensor out(full_channels, x.steps());
  for (int c = 0; c < x.channels(); ++c) {
    for (int s = 0; s < x.steps(); ++s) {
      if (x.at(c, s)) out.set(c, s, true);
    }
  }
  return out;
}

SpikeTensor concat_steps(const SpikeTensor& a, const SpikeTensor& b) {
  if (a.channels() != b.channels()) {
    throw ValidationError("concat_steps: channel counts differ (" +
                          std::to_string(a.channels()) + " vs " +
                          std::to_string(b.channels()) + ")");
  }
  SpikeTensor out(a.channels(), a.steps() + b.steps());
  for (int c = 0; c < a.channels(); ++c) {
    for (int s = 0; s < a.steps(); ++s) {
      if (a.at(c, s)) out.set(c, s, true);
    }
    for (int s = 0; s < b.steps(); ++s) {
      if (b.at(c, s)) out.set(c, a.steps() + s, true);
    }
  }
  return out;
}

}  // namespace locsnn
