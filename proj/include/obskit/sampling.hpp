#pragma once

// Deterministic random sampling.  A SplitMix64 core keeps every stream
// reproducible across platforms; trial-level streams are derived as
// seed ^ f(index) so parallel trials stay order-independent.

#include <cstdint>
#include <vector>

#include "obskit/matrix.hpp"

namespace obskit {

std::uint64_t splitmix64(std::uint64_t& state);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent stream for trial `index` under the same master seed.
  static Rng for_trial(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  double uniform01();                       // [0, 1)
  double uniform(double lo, double hi);
  double normal();                          // Box-Muller, cached pair
  cplx normal_complex();                    // re and im each N(0, 1)
  std::size_t uniform_index(std::size_t n); // {0, ..., n-1}

  ComplexMatrix gaussian_real(std::size_t rows, std::size_t cols);
  ComplexMatrix gaussian_complex(std::size_t rows, std::size_t cols);

  // Haar-like orthogonal/unitary factors via QR with positive R diagonal.
  ComplexMatrix random_orthogonal(std::size_t n);
  ComplexMatrix random_unitary(std::size_t n);

  std::vector<std::size_t> random_permutation(std::size_t n);
  std::vector<std::size_t> random_n_cycle(std::size_t n);

  // Distinct eigenvalues with log-uniform modulus in [mod_lo, mod_hi] and
  // uniform argument; min pairwise gap enforced by resampling.
  std::vector<cplx> distinct_lambdas(std::size_t n, double mod_lo,
                                     double mod_hi, double min_gap);

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

ComplexMatrix permutation_matrix(const std::vector<std::size_t>& sigma);

}  // namespace obskit
