#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "obskit/loss.hpp"
#include "obskit/matrix.hpp"

namespace obskit {

// Flat real learnable vector with a named-slice manifest so losses can pull
// their matrices back out. Complex learnables are stored as re/im pairs.
struct SliceSpec {
  std::string name;
  std::size_t offset = 0;
  std::size_t count = 0;
};

struct ParamVector {
  std::vector<double> values;
  std::vector<SliceSpec> manifest;

  std::size_t append_real(const std::string& name,
                          const std::vector<double>& vals);
  std::size_t append_complex(const std::string& name,
                             const std::vector<cplx>& vals);
  const SliceSpec& slice(const std::string& name) const;
  std::vector<double> real_slice(const std::string& name) const;
  std::vector<cplx> complex_slice(const std::string& name) const;
  void set_real(const std::string& name, const std::vector<double>& vals);
  void set_complex(const std::string& name, const std::vector<cplx>& vals);

  // Manifest must tile the value vector exactly, no gaps or overlaps.
  void validate() const;
};

struct GdConfig {
  double learning_rate = 0.05;
  std::size_t steps = 1000;
  double fd_step = 1e-6;
  std::uint64_t seed = 0;
  std::optional<double> clip;

  void validate() const;
};

using LossFn = std::function<double(const std::vector<double>&)>;

// Central differences with per-coordinate h_i = h_rel * (1 + |x_i|). A hinge
// kink under the stencil (one-sided slopes disagreeing by more than 1e3 * h)
// falls back to the flatter one-sided estimate.
std::vector<double> fd_gradient(const LossFn& loss,
                                const std::vector<double>& x, double h_rel);

struct GdTracePoint {
  std::size_t step = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
};

struct GdResult {
  std::vector<double> x;
  std::vector<GdTracePoint> trace;
  bool reached_zero = false;
};

// Fixed-rate descent with optional gradient clipping. Stops early the moment
// the loss evaluates to exactly zero (attainable for hinge losses).
GdResult gd_minimize(const LossFn& loss, const std::vector<double>& x0,
                     const GdConfig& cfg);

double vector_norm(const std::vector<double>& xs);

}  // namespace obskit
