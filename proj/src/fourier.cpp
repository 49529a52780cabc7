#include "obskit/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "obskit/matcore.hpp"
#include "obskit/parallel.hpp"
#include "obskit/sampling.hpp"

namespace obskit {

namespace {

constexpr double kPoleFloor = 1e-12;
constexpr double kDeadFloor = 1e-8;   // operator norm below which a map is 0
constexpr double kNullTol = 1e-8;     // relative null-space tolerance

cplx unit_root(std::size_t j, std::size_t big_l) {
  return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) /
                             static_cast<double>(big_l));
}

void check_fourier_args(const std::vector<cplx>& lambdas, double delta,
                        std::size_t big_l) {
  if (lambdas.empty()) raise(Errc::ShapeMismatch, "empty spectrum");
  if (!(delta > 0.0)) raise(Errc::PreconditionViolated, "delta must be > 0");
  if (big_l < 2) raise(Errc::PreconditionViolated, "L must be >= 2");
}

cplx cayley_ratio(const cplx& lambda, double delta) {
  const cplx denom = cplx(1.0, 0.0) - cplx(delta / 2.0, 0.0) * lambda;
  if (std::abs(denom) < kPoleFloor)
    raise(Errc::PoleHit, "Cayley pole: delta lambda/2 = 1");
  return (cplx(1.0, 0.0) + cplx(delta / 2.0, 0.0) * lambda) / denom;
}

std::vector<cplx> resolvent_entries(std::size_t j,
                                    const std::vector<cplx>& lambdas,
                                    double delta, std::size_t big_l) {
  const cplx w = unit_root(j, big_l);
  std::vector<cplx> d(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const cplx denom = cplx(1.0, 0.0) - std::exp(lambdas[k] * delta) * w;
    if (std::abs(denom) < kPoleFloor)
      raise(Errc::PoleHit, "e^{lambda delta} meets a root of unity");
    d[k] = cplx(1.0, 0.0) / denom;
  }
  return d;
}

double min_pairwise_gap(const std::vector<cplx>& xs) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = i + 1; k < xs.size(); ++k)
      gap = std::min(gap, std::abs(xs[i] - xs[k]));
  return gap;
}

double angular_dispersion(const std::vector<cplx>& lambdas) {
  cplx mean(0.0, 0.0);
  for (const auto& l : lambdas) mean += std::polar(1.0, std::arg(l));
  return std::abs(mean) / static_cast<double>(lambdas.size());
}

}  // namespace

DiagSpectrum phi_diag(std::size_t j, const std::vector<cplx>& lambdas,
                      double delta, std::size_t big_l) {
  check_fourier_args(lambdas, delta, big_l);
  if (j >= big_l) raise(Errc::PreconditionViolated, "index j must be < L");
  DiagSpectrum s;
  s.kind = SpectrumKind::PhiImpulse;
  s.j = j;
  s.delta = delta;
  s.big_l = big_l;
  const cplx w = unit_root(j, big_l);
  const double dl = delta * static_cast<double>(big_l);
  s.entries.resize(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const cplx denom = cplx(1.0, 0.0) - std::exp(lambdas[k] * delta) * w;
    if (std::abs(denom) < kPoleFloor)
      raise(Errc::PoleHit, "e^{lambda delta} meets a root of unity");
    s.entries[k] = (cplx(1.0, 0.0) - std::exp(lambdas[k] * dl)) / denom;
  }
  return s;
}

DiagSpectrum psi_diag(std::size_t j, const std::vector<cplx>& lambdas,
                      double delta, std::size_t big_l) {
  check_fourier_args(lambdas, delta, big_l);
  if (j >= big_l) raise(Errc::PreconditionViolated, "index j must be < L");
  DiagSpectrum s;
  s.kind = SpectrumKind::PsiConv;
  s.j = j;
  s.delta = delta;
  s.big_l = big_l;
  const cplx w = unit_root(j, big_l);
  s.entries.resize(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const cplx abar = cayley_ratio(lambdas[k], delta);
    const cplx denom = cplx(1.0, 0.0) - abar * w;
    if (std::abs(denom) < kPoleFloor)
      raise(Errc::PoleHit, "Cayley ratio meets a root of unity");
    s.entries[k] =
        (cplx(1.0, 0.0) - std::pow(abar, static_cast<double>(big_l))) / denom;
  }
  return s;
}

LossValue loss_thm3(const std::vector<cplx>& lambdas, double delta,
                    std::size_t big_l, const FourierMargins& margins) {
  check_fourier_args(lambdas, delta, big_l);
  if (!(margins.m1 > 0.0 && margins.m2 > 0.0 && margins.m3 > 0.0))
    raise(Errc::InvalidArgument, "margins must be > 0");
  LossValue loss;
  const double gap = min_pairwise_gap(lambdas);
  loss.add_term("eig_gap",
                std::isfinite(gap) ? relu(margins.m1 - gap) : 0.0);

  std::vector<DiagSpectrum> phis;
  phis.reserve(big_l - 1);
  for (std::size_t j = 1; j < big_l; ++j)
    phis.push_back(phi_diag(j, lambdas, delta, big_l));
  double cross = 0.0;
  for (std::size_t a = 0; a < phis.size(); ++a)
    for (std::size_t b = 0; b < phis.size(); ++b) {
      if (a == b) continue;
      for (std::size_t k = 0; k < lambdas.size(); ++k)
        cross += relu(margins.m2 -
                      std::abs(phis[a].entries[k] - phis[b].entries[k]));
    }
  loss.add_term("cross_index", cross);
  loss.add_term("angular", relu(angular_dispersion(lambdas) - margins.m3));
  return loss;
}

LossValue loss_thm4(const std::vector<cplx>& lambdas, double delta,
                    std::size_t big_l, const FourierMargins& margins) {
  check_fourier_args(lambdas, delta, big_l);
  if (!(margins.m1 > 0.0 && margins.m2 > 0.0 && margins.m3 > 0.0))
    raise(Errc::InvalidArgument, "margins must be > 0");
  LossValue loss;

  std::vector<DiagSpectrum> psis;
  psis.reserve(big_l - 1);
  for (std::size_t j = 1; j < big_l; ++j)
    psis.push_back(psi_diag(j, lambdas, delta, big_l));

  double per_j_gap = 0.0;
  for (const auto& s : psis) {
    const double gap = min_pairwise_gap(s.entries);
    if (std::isfinite(gap)) per_j_gap += relu(margins.m1 - gap);
  }
  loss.add_term("entry_gap", per_j_gap);

  double cross = 0.0;
  for (std::size_t a = 0; a < psis.size(); ++a)
    for (std::size_t b = 0; b < psis.size(); ++b) {
      if (a == b) continue;
      for (std::size_t k = 0; k < lambdas.size(); ++k)
        cross += relu(margins.m2 -
                      std::norm(psis[a].entries[k] - psis[b].entries[k]));
    }
  loss.add_term("cross_index", cross);
  loss.add_term("angular", relu(angular_dispersion(lambdas) - margins.m3));
  return loss;
}

namespace {

std::vector<cplx> variant_entries(KernelVariant variant, std::size_t j,
                                  const std::vector<cplx>& lambdas,
                                  double delta, std::size_t big_l) {
  if (variant == KernelVariant::Thm3)
    return resolvent_entries(j, lambdas, delta, big_l);
  return psi_diag(j, lambdas, delta, big_l).entries;
}

}  // namespace

KernelVector kernel_vector(KernelVariant variant, std::size_t j1,
                           const ComplexMatrix& c, const ComplexMatrix& v,
                           const std::vector<cplx>& lambdas, double delta,
                           std::size_t big_l) {
  check_fourier_args(lambdas, delta, big_l);
  const std::size_t n = lambdas.size(), m = c.rows();
  if (v.rows() != n || v.cols() != n || c.cols() != n)
    raise(Errc::ShapeMismatch, "C must be m x n, V must be n x n");
  if (m > n) raise(Errc::PreconditionViolated, "requires n >= m");

  const std::vector<cplx> d = variant_entries(variant, j1, lambdas, delta, big_l);
  const ComplexMatrix cv = c * v;

  KernelVector out;
  out.j1 = j1;
  out.psi_tilde.assign(n, cplx(0.0, 0.0));
  if (n == m) {
    // Trivial kernel: only the zero extension satisfies the construction.
    out.residual = 0.0;
    return out;
  }

  ComplexMatrix q(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) q(i, k) = cv(i, k) * d[k];
  const SvdRank qr = rank_with_tol(q, 1e-10);
  if (qr.rank < m)
    raise(Errc::SingularQ, "leading m x m block is singular");

  ComplexMatrix tail(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = m; k < n; ++k) acc += cv(i, k) * d[k];
    tail(i, 0) = acc;
  }
  const ComplexMatrix head = solve(q, cplx(-1.0, 0.0) * tail);
  for (std::size_t k = 0; k < m; ++k) out.psi_tilde[k] = head(k, 0);
  for (std::size_t k = m; k < n; ++k) out.psi_tilde[k] = cplx(1.0, 0.0);

  ComplexMatrix scaled(n, 1);
  for (std::size_t k = 0; k < n; ++k) scaled(k, 0) = d[k] * out.psi_tilde[k];
  out.residual = (cv * scaled).frobenius_norm();

  double psi_norm = 0.0;
  for (const auto& z : out.psi_tilde) psi_norm += std::norm(z);
  psi_norm = std::sqrt(psi_norm);
  if (out.residual > 1e-8 * cv.frobenius_norm() * psi_norm)
    raise(Errc::SingularQ, "construction residual above tolerance");
  return out;
}

KernelDistinctLoss loss_kernel_distinct(const ComplexMatrix& c,
                                        const ComplexMatrix& v,
                                        const std::vector<cplx>& lambdas,
                                        double delta, std::size_t big_l,
                                        double margin, KernelVariant variant) {
  if (!(margin > 0.0)) raise(Errc::InvalidArgument, "margin must be > 0");
  check_fourier_args(lambdas, delta, big_l);
  const std::size_t n = lambdas.size();
  const ComplexMatrix cv = c * v;

  KernelDistinctLoss out;
  double total = 0.0;
  for (std::size_t j1 = 1; j1 < big_l; ++j1) {
    KernelVector kv;
    try {
      kv = kernel_vector(variant, j1, c, v, lambdas, delta, big_l);
    } catch (const Error& err) {
      if (err.code() == Errc::SingularQ) {
        out.skipped_j1.push_back(j1);
        continue;
      }
      throw;
    }
    const auto image_at = [&](std::size_t j) {
      const std::vector<cplx> d =
          variant_entries(variant, j, lambdas, delta, big_l);
      ComplexMatrix scaled(n, 1);
      for (std::size_t k = 0; k < n; ++k) scaled(k, 0) = d[k] * kv.psi_tilde[k];
      return cv * scaled;
    };
    const ComplexMatrix base = image_at(j1);
    for (std::size_t j2 = 1; j2 < big_l; ++j2) {
      if (j2 == j1) continue;
      const double dist = (base - image_at(j2)).frobenius_norm();
      total += relu(margin - dist * dist);
    }
  }
  out.loss.add_term("pair_margin", total);
  return out;
}

EigSamplerConfig decaying_lambda_preset() { return {1e-7, 1e-6, 1e-9}; }

std::size_t max_index_pairs(std::size_t big_l) {
  const std::size_t count = big_l - 1;
  return count * (count - 1) / 2;
}

bool phi_hypothesis_holds(const std::vector<cplx>& lambdas, double delta,
                          std::size_t big_l, double tol) {
  const double dl = delta * static_cast<double>(big_l);
  for (const auto& l : lambdas)
    if (std::abs(cplx(1.0, 0.0) - std::exp(l * dl)) <= tol) return false;
  return true;
}

namespace {

struct NullBasis {
  bool dead = false;       // operator norm at the dead floor: kernel = all
  ComplexMatrix basis;     // orthonormal columns
  double sigma_max = 0.0;
};

NullBasis null_basis_of(const ComplexMatrix& m) {
  NullBasis nb;
  nb.sigma_max = operator_norm(m);
  if (nb.sigma_max <= kDeadFloor) {
    nb.dead = true;
    nb.basis = ComplexMatrix::identity(m.cols());
    return nb;
  }
  nb.basis = null_space_basis(m, kNullTol, kDeadFloor);
  return nb;
}

// ker(map_a) contains ker(map_b)'s basis when map_a annihilates it.
bool contains(const ComplexMatrix& map_a, double sigma_max_a, bool dead_a,
              const NullBasis& b) {
  if (dead_a) return true;  // zero map annihilates everything
  if (b.basis.cols() == 0) return true;
  const double image = operator_norm(map_a * b.basis);
  return image <= kNullTol * sigma_max_a;
}

bool kernels_equal(const ComplexMatrix& ma, const NullBasis& na,
                   const ComplexMatrix& mb, const NullBasis& nb) {
  return contains(ma, na.sigma_max, na.dead, nb) &&
         contains(mb, nb.sigma_max, nb.dead, na);
}

}  // namespace

std::vector<DistinctTrial> experiment_kernel_distinctness(
    std::size_t n, std::size_t m, std::size_t trials, DistinctMode mode,
    const EigSamplerConfig& sampler, double delta, std::size_t big_l,
    std::uint64_t seed) {
  if (trials < 1) raise(Errc::PreconditionViolated, "trials must be >= 1");
  if (m > n) raise(Errc::PreconditionViolated, "requires n >= m");
  std::vector<DistinctTrial> out(trials);
  parallel_for(trials, [&](std::size_t t) {
    Rng rng = Rng::for_trial(seed, t);
    const std::vector<cplx> lambdas =
        rng.distinct_lambdas(n, sampler.mod_lo, sampler.mod_hi,
                             sampler.min_gap);
    const ComplexMatrix c = rng.gaussian_complex(m, n);
    ComplexMatrix v = rng.gaussian_complex(n, n);
    for (int attempt = 0; attempt < 100; ++attempt) {
      const SvdRank r = rank_with_tol(v, 0.0);
      if (r.sigma_min > 0.0 && r.sigma_max / r.sigma_min <= 200.0) break;
      v = rng.gaussian_complex(n, n);
    }
    const ComplexMatrix v_inv = inverse(v);
    const ComplexMatrix cv = c * v;

    std::vector<ComplexMatrix> maps;
    std::vector<NullBasis> bases;
    maps.reserve(big_l - 1);
    for (std::size_t j = 1; j < big_l; ++j) {
      std::vector<cplx> d(n);
      if (mode == DistinctMode::PsiJ) {
        d = psi_diag(j, lambdas, delta, big_l).entries;
      } else {
        for (std::size_t k = 0; k < n; ++k)
          d[k] = std::pow(lambdas[k], static_cast<double>(j));
      }
      ComplexMatrix scaled = cv;
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t k = 0; k < n; ++k) scaled(r, k) = cv(r, k) * d[k];
      maps.push_back(scaled * v_inv);
      bases.push_back(null_basis_of(maps.back()));
    }

    std::size_t distinct = 0;
    for (std::size_t a = 0; a < maps.size(); ++a)
      for (std::size_t b = a + 1; b < maps.size(); ++b)
        if (!kernels_equal(maps[a], bases[a], maps[b], bases[b])) ++distinct;
    out[t] = {t, distinct};
  });
  return out;
}

std::vector<RankTrial> experiment_rowspace_rank(std::size_t n, std::size_t m,
                                                std::size_t trials,
                                                double eig_scale, double tol,
                                                double delta, std::size_t big_l,
                                                std::uint64_t seed) {
  if (trials < 1) raise(Errc::PreconditionViolated, "trials must be >= 1");
  if (m > n) raise(Errc::PreconditionViolated, "requires n >= m");
  std::vector<RankTrial> out(trials);
  parallel_for(trials, [&](std::size_t t) {
    Rng rng = Rng::for_trial(seed, t);
    const std::vector<cplx> lambdas =
        rng.distinct_lambdas(n, eig_scale * 0.5, eig_scale * 2.0, 1e-8);
    const ComplexMatrix c = rng.gaussian_complex(m, n);
    ComplexMatrix v = rng.gaussian_complex(n, n);
    for (int attempt = 0; attempt < 100; ++attempt) {
      const SvdRank r = rank_with_tol(v, 0.0);
      if (r.sigma_min > 0.0 && r.sigma_max / r.sigma_min <= 200.0) break;
      v = rng.gaussian_complex(n, n);
    }
    const ComplexMatrix v_inv = inverse(v);
    const ComplexMatrix cv = c * v;

    ComplexMatrix stack(big_l * m, n);
    for (std::size_t j = 0; j < big_l; ++j) {
      const DiagSpectrum s = psi_diag(j, lambdas, delta, big_l);
      ComplexMatrix scaled = cv;
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t k = 0; k < n; ++k)
          scaled(r, k) = cv(r, k) * s.entries[k];
      stack.set_block(j * m, 0, scaled * v_inv);
    }
    out[t] = {t, rank_with_tol(stack, tol).rank};
  });
  return out;
}

}  // namespace obskit
