#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entanglemeter {

/// A named bound value with its certification status and the inputs that produced it.
struct BoundReport {
  std::string name;
  double value = 0.0;
  /// True when `value` is a proven lower bound on the named measure.
  bool certified = false;
  /// True when the raw formula came out <= 0 and was clamped to 0.
  bool vacuous = false;
  std::vector<std::pair<std::string, double>> inputs;

  double input(std::string_view key) const {
    for (const auto& [k, v] : inputs)
      if (k == key) return v;
    throw std::out_of_range("BoundReport: no input named '" + std::string(key) + "'");
  }
};

}  // namespace entanglemeter
