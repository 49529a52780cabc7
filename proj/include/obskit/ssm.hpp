#pragma once

// State-space system types, bilinear and zero-order-hold discretizations,
// the ZOH inverse, and convolution-kernel evaluation.

#include <cstddef>
#include <vector>

#include "obskit/matrix.hpp"

namespace obskit {

struct ContinuousSystem {
  ComplexMatrix a;  // n x n
  ComplexMatrix b;  // n x m
  ComplexMatrix c;  // m x n
  std::size_t n() const { return a.rows(); }
  std::size_t m() const { return c.rows(); }
  void validate() const;  // shape consistency, n >= m >= 1
};

enum class Scheme { Bilinear, ZOH };

struct DiscreteSystem {
  ComplexMatrix a_bar;
  ComplexMatrix b_bar;
  ComplexMatrix c;
  double delta = 0.0;
  Scheme scheme = Scheme::Bilinear;
  std::size_t n() const { return a_bar.rows(); }
  std::size_t m() const { return c.rows(); }
  void validate() const;
};

struct ConvKernel {
  std::vector<ComplexMatrix> blocks;  // blocks[k] = C A_bar^k B_bar
  std::size_t big_l = 0;
};

// phi1(z) = (e^z - 1)/z, continued through z = 0 by a degree-10 Taylor
// series for |z| < 1e-4.
cplx phi1(const cplx& z);

// A_bar = (I - delta/2 A)^-1 (I + delta/2 A); SingularResolvent when the
// Cayley factor is singular (sigma_min <= 1e-12 sigma_max).
DiscreteSystem bilinear_discretize(const ContinuousSystem& sys, double delta);

// A_bar = exp(delta A), B_bar = phi1(delta A) delta B.  Singular A is fine;
// the phi1 limit handles it.
DiscreteSystem zoh_discretize(const ContinuousSystem& sys, double delta);

// A = (1/delta) log A_bar, B = (A_bar - I)^-1 A B_bar.  Propagates mat_log
// errors; SingularFactor when (A_bar - I) is singular.
ContinuousSystem zoh_invert(const DiscreteSystem& disc);

ConvKernel conv_kernel(const DiscreteSystem& disc, std::size_t big_l);

// Causal block convolution: y_t = sum_{i<=t} blocks[i] x_{t-i}.  xs are
// column vectors of the kernel's input width; at most big_l of them.
std::vector<ComplexMatrix> apply_kernel(const ConvKernel& k,
                                        const std::vector<ComplexMatrix>& xs);

}  // namespace obskit
