#pragma once

#include <map>
#include <string>
#include <vector>

#include "locsnn/spike_tensor.hpp"

namespace locsnn {

/// Taxels per fingertip sensor on the tactile hardware the builtin orders
/// were drawn for.
inline constexpr int kTaxelsPerSensor = 39;

/// A permutation of per-sensor taxel indices defining the traversal order of
/// the spatial recurrence axis: position p is visited before position p+1.
/// Indices are 0-based internally; command-line listings print them 1-based.
class LocationOrder {
 public:
  /// Validates that `order` is a permutation of [0, order.size()).
  explicit LocationOrder(std::vector<int> order);

  /// Identity traversal 0, 1, ..., n-1.
  static LocationOrder identity(int n);

  int size() const { return static_cast<int>(order_.size()); }

  /// Physical taxel visited at traversal position `position`.
  int taxel_at(int position) const { return order_[position]; }

  const std::vector<int>& indices() const { return order_; }

  /// Traversal position of physical taxel `taxel`.
  int position_of(int taxel) const { return inverse_[taxel]; }

  bool operator==(const LocationOrder& other) const { return order_ == other.order_; }

 private:
  std::vector<int> order_;
  std::vector<int> inverse_;
};

/// The three fingerprint-motif traversals (arch, whorl, loop) over one
/// 39-taxel sensor, keyed by name. "loop" is the identity traversal.
const std::map<std::string, LocationOrder>& builtin_orders();

/// Looks up a builtin order by name; throws ValidationError for unknown names.
const LocationOrder& builtin_order(const std::string& name);

/// Reorients an N x T event grid into the location-branch view: a T x N grid
/// whose step axis walks taxels in traversal order, blockwise per sensor
/// (sensor 0's taxels first, then sensor 1's, ...).
///
///   output(t, j) = x(sensor(j) * order.size() + order[j % order.size()], t)
///
/// Requires x.channels() == sensors * order.size(). Spike totals are
/// preserved; location_view_inverse undoes the transform exactly.
SpikeTensor location_view(const SpikeTensor& x, const LocationOrder& order, int sensors);

/// Inverse of location_view: recovers the N x T grid from its T x N view.
SpikeTensor location_view_inverse(const SpikeTensor& viewed, const LocationOrder& order,
                                  int sensors);

}  // namespace locsnn
