#pragma once

// Diagonalized Fourier spectra of the impulse response and the discretized
// convolution kernel, the associated three-term losses, the systematic
// kernel-vector construction, and the kernel-distinctness / rowspace-rank
// experiments.

#include <cstddef>
#include <vector>

#include "obskit/loss.hpp"
#include "obskit/matrix.hpp"

namespace obskit {

enum class SpectrumKind { PhiImpulse, PsiConv };

struct DiagSpectrum {
  SpectrumKind kind = SpectrumKind::PhiImpulse;
  std::size_t j = 0;
  std::vector<cplx> entries;
  double delta = 0.0;
  std::size_t big_l = 0;
};

struct FourierMargins {
  double m1 = 0.05;  // eigen/entry min-gap margin
  double m2 = 0.05;  // cross-index entry-gap margin
  double m3 = 0.05;  // angular dispersion cap
};

// Entry k: (1 - e^{lambda_k L delta}) / (1 - e^{lambda_k delta - 2 pi i j/L}).
// PoleHit when a denominator modulus drops below 1e-12.
DiagSpectrum phi_diag(std::size_t j, const std::vector<cplx>& lambdas,
                      double delta, std::size_t big_l);

// Entry k: (1 - abar^L) / (1 - abar e^{-2 pi i j/L}) with the Cayley ratio
// abar = (1 + delta lambda_k/2)/(1 - delta lambda_k/2); equal to the L-term
// geometric sum of abar^k e^{-2 pi i jk/L}.
DiagSpectrum psi_diag(std::size_t j, const std::vector<cplx>& lambdas,
                      double delta, std::size_t big_l);

// term1: relu(m1 - min eigenvalue gap); term2: cross-j entry gaps over
// j in 1..L-1; term3: relu(|mean_k e^{i arg lambda_k}| - m3).
LossValue loss_thm3(const std::vector<cplx>& lambdas, double delta,
                    std::size_t big_l, const FourierMargins& margins);

// Same shape with Psi entries: term1 sums the per-j min-gap hinge and term2
// penalizes squared moduli of cross-j entry gaps.
LossValue loss_thm4(const std::vector<cplx>& lambdas, double delta,
                    std::size_t big_l, const FourierMargins& margins);

enum class KernelVariant { Thm3, Thm4 };

struct KernelVector {
  std::size_t j1 = 0;
  std::vector<cplx> psi_tilde;  // tail entries fixed to 1
  double residual = 0.0;        // ||C V diag(spectrum(j1)) psi_tilde||_2
};

// Solves the head coefficients so C V diag(d(j1)) psi_tilde = 0, where d is
// the per-eigenvalue resolvent 1/(1 - e^{lambda delta - 2 pi i j/L}) for
// Thm3 and the psi_diag entries for Thm4.  SingularQ when the leading m x m
// block is singular at 1e-10 relative.
KernelVector kernel_vector(KernelVariant variant, std::size_t j1,
                           const ComplexMatrix& c, const ComplexMatrix& v,
                           const std::vector<cplx>& lambdas, double delta,
                           std::size_t big_l);

struct KernelDistinctLoss {
  LossValue loss;
  std::vector<std::size_t> skipped_j1;  // SingularQ construction indices
};

// Sum over j1 != j2 of relu(margin - ||C V d(j1) psi~(j1) -
// C V d(j2) psi~(j1)||^2): the j1-built coefficients re-evaluated at the j2
// denominators must leave the kernel.
KernelDistinctLoss loss_kernel_distinct(const ComplexMatrix& c,
                                        const ComplexMatrix& v,
                                        const std::vector<cplx>& lambdas,
                                        double delta, std::size_t big_l,
                                        double margin,
                                        KernelVariant variant = KernelVariant::Thm3);

enum class DistinctMode { PsiJ, LambdaPow };

struct EigSamplerConfig {
  double mod_lo = 0.1;
  double mod_hi = 1.0;
  double min_gap = 1e-6;
};

// Fig-9-style regime: eigenvalue moduli a few orders below the kernel
// length's reach, so high powers die and kernels collapse.
EigSamplerConfig decaying_lambda_preset();

struct DistinctTrial {
  std::size_t trial = 0;
  std::size_t distinct_pairs = 0;
};

// Per trial: sample (C, V, lambda), build the L-1 maps C V D_j V^-1 with
// D_j = Psi^j (PsiJ) or Lambda^j (LambdaPow), and count index pairs whose
// null spaces differ (mutual containment of SVD null bases at 1e-8 relative,
// with maps of operator norm <= 1e-8 treated as the zero map).
std::vector<DistinctTrial> experiment_kernel_distinctness(
    std::size_t n, std::size_t m, std::size_t trials, DistinctMode mode,
    const EigSamplerConfig& sampler, double delta, std::size_t big_l,
    std::uint64_t seed);

struct RankTrial {
  std::size_t trial = 0;
  std::size_t rank = 0;
};

// Rank of the (L m) x n stack of all C V Psi^j V^-1 at the given tolerance.
std::vector<RankTrial> experiment_rowspace_rank(std::size_t n, std::size_t m,
                                                std::size_t trials,
                                                double eig_scale, double tol,
                                                double delta, std::size_t big_l,
                                                std::uint64_t seed);

std::size_t max_index_pairs(std::size_t big_l);  // C(L-1, 2)

// Checks |1 - e^{lambda L delta}| > tol for every eigenvalue: the impulse
// full-rank hypothesis behind the Phi construction.
bool phi_hypothesis_holds(const std::vector<cplx>& lambdas, double delta,
                          std::size_t big_l, double tol);

}  // namespace obskit
