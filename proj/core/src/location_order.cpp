#include "locsnn/location_order.hpp"

#include <algorithm>
#include <numeric>

#include "locsnn/errors.hpp"

namespace locsnn {

namespace {

std::vector<int> to_zero_based(std::initializer_list<int> one_based) {
  std::vector<int> out;
  out.reserve(one_based.size());
  for (int v : one_based) out.push_back(v - 1);
  return out;
}

}  // namespace

LocationOrder::LocationOrder(std::vector<int> order) : order_(std::move(order)) {
  if (order_.empty()) {
    throw ValidationError("location order must not be empty");
  }
  const int n = static_cast<int>(order_.size());
  inverse_.assign(n, -1);
  for (int pos = 0; pos < n; ++pos) {
    const int taxel = order_[pos];
    if (taxel < 0 || taxel >= n) {
      throw ValidationError("location order entry " + std::to_string(taxel) +
                            " outside [0, " + std::to_string(n) + ")");
    }
    if (inverse_[taxel] != -1) {
      throw ValidationError("location order repeats taxel " + std::to_string(taxel));
    }
    inverse_[taxel] = pos;
  }
}

LocationOrder LocationOrder::identity(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return LocationOrder(std::move(order));
}

const std::map<std::string, LocationOrder>& builtin_orders() {
  // Taxel listings are 1-based on the sensor layout diagrams; stored 0-based.
  static const std::map<std::string, LocationOrder> orders = {
      {"arch", LocationOrder(to_zero_based(
                   {11, 25, 35, 4, 18, 30, 7, 2, 20, 37, 29, 12, 9, 33, 23, 16, 1, 6, 15,
                    21, 27, 34, 39, 24, 17, 10, 31, 38, 28, 14, 3, 22, 32, 8, 19, 36, 5,
                    13, 26}))},
      {"whorl", LocationOrder(to_zero_based(
                    {21, 15, 16, 23, 27, 24, 17, 6, 9, 12, 20, 29, 33, 34, 31, 28, 22, 14,
                     10, 1, 2, 7, 18, 30, 37, 39, 38, 32, 19, 8, 3, 4, 11, 25, 35, 36, 26,
                     13, 5}))},
      {"loop", LocationOrder::identity(kTaxelsPerSensor)},
  };
  return orders;
}

const LocationOrder& builtin_order(const std::string& name) {
  const auto& orders = builtin_orders();
  auto it = orders.find(name);
  if (it == orders.end()) {
    throw ValidationError("unknown location order '" + name +
                          "' (expected arch, whorl, or loop)");
  }
  return it->second;
}

SpikeTensor location_view(const SpikeTensor& x, const LocationOrder& order, int sensors) {
  const int per_sensor = order.size();
  if (sensors < 1 || x.channels() != sensors * per_sensor) {
    throw ValidationError("location_view: " + std::to_string(x.channels()) +
                          " channels cannot be split into " + std::to_string(sensors) +
                          " sensors of " + std::to_string(per_sensor) + " taxels");
  }
  SpikeTensor out(x.steps(), x.channels());
  for (int j = 0; j < x.channels(); ++j) {
    const int taxel = (j / per_sensor) * per_sensor + order.taxel_at(j % per_sensor);
    for (int t = 0; t < x.steps(); ++t) {
      if (x.at(taxel, t)) out.set(t, j, true);
    }
  }
  return out;
}

SpikeTensor location_view_inverse(const SpikeTensor& viewed, const LocationOrder& order,
                                  int sensors) {
  const int per_sensor = order.size();
  if (sensors < 1 || viewed.steps() != sensors * per_sensor) {
    throw ValidationError("location_view_inverse: " + std::to_string(viewed.steps()) +
                          " view positions cannot be split into " +
                          std::to_string(sensors) + " sensors of " +
                          std::to_string(per_sensor) + " taxels");
  }
  SpikeTensor out(viewed.steps(), viewed.channels());
  for (int j = 0; j < viewed.steps(); ++j) {
    const int taxel = (j / per_sensor) * per_sensor + order.taxel_at(j % per_sensor);
    for (int t = 0; t < viewed.channels(); ++t) {
      if (viewed.at(t, j)) out.set(taxel, t, true);
    }
  }
  return out;
}

}  // namespace locsnn
