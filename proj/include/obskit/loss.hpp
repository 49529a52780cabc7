#pragma once

// Shared loss-value carrier: a nonnegative total that is exactly the sum of
// named nonnegative terms.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "obskit/matrix.hpp"

namespace obskit {

struct LossValue {
  double total = 0.0;
  std::vector<std::pair<std::string, double>> terms;

  void add_term(const std::string& name, double value) {
    if (!(value >= 0.0) || !std::isfinite(value))
      raise(Errc::NonFinite, "loss term must be finite and nonnegative");
    terms.emplace_back(name, value);
    total += value;
  }

  double term(const std::string& name) const {
    double acc = 0.0;
    for (const auto& [k, v] : terms)
      if (k == name) acc += v;
    return acc;
  }
};

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace obskit
