#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "obskit/matrix.hpp"

namespace obskit {

// Shared parameterization A = (Q (x) I_p)^H (U (x) I_p)^H diag(lambda)
// (U (x) I_p)(Q (x) I_p) and B = f(diag(lambda))^{1/2} (U (x) I_p) S, where S
// selects columns sel[0..m) of the Kronecker factor.
struct CoupledParams {
  ComplexMatrix q;                // m x m, unitary within 1e-8
  ComplexMatrix u;                // m x m, unitary within 1e-8
  std::vector<cplx> lambdas;      // length n = p * m
  std::vector<std::size_t> sel;   // m distinct indices in [0, n)
  std::size_t p = 1;

  std::size_t m() const { return q.rows(); }
  std::size_t n() const { return lambdas.size(); }
  void validate(bool require_orthogonal = true) const;
};

enum class FMode { AbsValue, Identity };

ComplexMatrix build_a(const CoupledParams& params,
                      bool check_orthogonality = true);
ComplexMatrix build_b(const CoupledParams& params,
                      FMode f_mode = FMode::AbsValue,
                      bool check_orthogonality = true);

// Polar factor P (P^H P)^{-1/2}; unitary within 1e-10 and a fixed point on
// already-unitary input.
ComplexMatrix orthogonalize(const ComplexMatrix& p_raw);

// A^k through the diagonalized form (W (x) I)^H diag(lambda^k) (W (x) I) with
// W = U Q: one m x m pass per entry block instead of k dense multiplies.
ComplexMatrix coupled_power(const CoupledParams& params, std::size_t k);

// Iterated dense multiply, the baseline coupled_power is benchmarked against.
ComplexMatrix dense_power(const ComplexMatrix& a, std::size_t k);

using CoupledLossFn = std::function<double(const CoupledParams&)>;

struct CheckpointPolicy {
  std::size_t every = 0;    // 0 = never
  bool reselect_s = false;  // greedy per-column re-selection of sel
};

// Parameter motion of prescribed decay, used for step-size diagnostics: unit
// directions are fixed per run and phases/eigenvalues move by c/k^q (Q, U)
// and c/k^{2q} (lambda). Diagonal phase motion leaves the built A invariant,
// so the A-trace decays like the lambda motion and the B-trace like the
// U-phase motion.
struct SyntheticDecay {
  double c_q = 0.1;
  double c_b = 0.1;
  double c_a = 0.1;
};

struct TrainConfig {
  std::size_t steps = 100;
  double lr = 0.05;
  double fd_step = 1e-6;
  double q_exponent = 0.75;    // q in [1/2, 1]
  bool literal_update = true;  // additive rule; false = convex blend
  FMode f_mode = FMode::AbsValue;
  CheckpointPolicy checkpoint;
  std::optional<SyntheticDecay> synthetic;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainRecord {
  std::size_t step = 0;
  double loss = 0.0;
  double da_norm = 0.0;       // ||A_built(k) - A_built(k-1)||_F
  double db_norm = 0.0;
  double step_a = 0.0;        // da_norm^{1/2q} (coupled) or 1 (vanilla)
  double step_b = 0.0;        // db_norm^{1/q} (coupled) or 1 (vanilla)
  double grad_q_norm = 0.0;
  double grad_u_norm = 0.0;
};

struct TrainTrace {
  std::vector<TrainRecord> records;
  std::vector<double> expansion_ratios;  // vanilla probe; empty for coupled
  ComplexMatrix a_final;
  ComplexMatrix b_final;
  CoupledParams params_final;
};

// One slow iterate per step: A_{k+1} = A_k + ||dA||^{1/2q} A_built(k) (the
// literal rule) or the convex blend behind literal_update = false. Q and U
// stay exactly unitary through a fixed-frame phase parameterization refreshed
// only at checkpoints; S changes only at checkpoints.
TrainTrace train_coupled(const CoupledParams& params0,
                         const CoupledLossFn& loss_fn, const TrainConfig& cfg);

// Unconstrained Q, U as raw learnables with direct reassignment each step.
// Every step also probes the parameter-to-map expansion ratio
// ||(dA, dB)||_F / ||(dQ, dU)||_F under a small random perturbation.
TrainTrace train_vanilla(const CoupledParams& params0,
                         const CoupledLossFn& loss_fn, const TrainConfig& cfg);

struct SeriesDiag {
  double exponent = 1.0;        // power applied to the step norms
  double partial_sum = 0.0;     // S_N
  double tail_window100 = 0.0;  // S_N - S_{N-100}
  double increment10 = 0.0;     // S_N - S_{N-10}
  double lnfit_slope = 0.0;     // b in S_n ~ a + b ln n over the last 3/4
  double lnfit_r2 = 0.0;
  std::string classification;   // divergent-like / convergent-like / inconclusive
};

// Finite-N growth classification of sum(x^e) for e in {1/2q, 1/q, 2/q}:
// convergent-like when the 10-term tail falls below 1e-6, divergent-like on a
// clean logarithmic fit (R^2 >= 0.99, positive slope) or a 10-term tail still
// above 1e-3, inconclusive otherwise. A statistical reading, not a proof.
std::vector<SeriesDiag> robbins_monro_diagnostic(
    const std::vector<double>& step_norms, double q_exponent);

struct SymmetricEig {
  ComplexMatrix q;              // real orthogonal columns, sign-gauged
  std::vector<double> lambdas;  // ascending
};

// Eigenvectors of a real symmetric matrix with the largest-magnitude
// component of each column made positive, so derivative checks against finite
// differences see one consistent branch.
SymmetricEig sym_eig_gauged(const ComplexMatrix& b);

struct Jacobian4 {
  std::size_t n = 0;
  std::vector<double> data;  // [i][j][k][l] row-major

  double& at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data[((i * n + j) * n + k) * n + l];
  }
  double at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data[((i * n + j) * n + k) * n + l];
  }
  double frobenius_norm() const;
};

// dA_ij / dB_kl for the map B -> Q sqrt(Lambda) on real symmetric positive
// definite B with simple spectrum.
Jacobian4 eig_jacobian(const ComplexMatrix& b);

// sqrt((n-1) sum(lambda) / gap_max^2) - sqrt(sum 1/(4 lambda)): a lower bound
// on the Frobenius norm of the eig_jacobian derivative.
double lipschitz_lower_bound(const std::vector<double>& lambdas);

}  // namespace obskit
