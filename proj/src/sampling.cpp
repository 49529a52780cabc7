#include "obskit/sampling.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "obskit/matcore.hpp"

namespace obskit {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t mix = seed;
  (void)splitmix64(mix);
  std::uint64_t salted = mix ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return Rng(splitmix64(salted));
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(t);
  has_cached_ = true;
  return r * std::cos(t);
}

cplx Rng::normal_complex() {
  const double re = normal();
  return cplx(re, normal());
}

std::size_t Rng::uniform_index(std::size_t n) {
  return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
}

ComplexMatrix Rng::gaussian_real(std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = cplx(normal(), 0.0);
  return m;
}

ComplexMatrix Rng::gaussian_complex(std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal_complex();
  return m;
}

namespace {

// Gram-Schmidt with positive projection onto the replaced pivot keeps the
// factor unique, so seeded runs are bit-stable.
ComplexMatrix orthonormalize_columns(const ComplexMatrix& g) {
  const std::size_t n = g.rows();
  ComplexMatrix q = g;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      cplx dot(0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) raise(Errc::DecompositionFailed, "degenerate QR sample");
    // Fix the phase so the entry of largest modulus is positive real.
    std::size_t pivot = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(q(i, j));
      if (a > best) { best = a; pivot = i; }
    }
    const cplx phase = q(pivot, j) / std::abs(q(pivot, j));
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm * phase;
  }
  return q;
}

}  // namespace

ComplexMatrix Rng::random_orthogonal(std::size_t n) {
  return orthonormalize_columns(gaussian_real(n, n));
}

ComplexMatrix Rng::random_unitary(std::size_t n) {
  return orthonormalize_columns(gaussian_complex(n, n));
}

std::vector<std::size_t> Rng::random_permutation(std::size_t n) {
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = uniform_index(i);
    std::swap(sigma[i - 1], sigma[j]);
  }
  return sigma;
}

std::vector<std::size_t> Rng::random_n_cycle(std::size_t n) {
  // Random cycle order, then sigma maps each element to its successor.
  const std::vector<std::size_t> order = random_permutation(n);
  std::vector<std::size_t> sigma(n);
  for (std::size_t i = 0; i < n; ++i) sigma[order[i]] = order[(i + 1) % n];
  return sigma;
}

std::vector<cplx> Rng::distinct_lambdas(std::size_t n, double mod_lo,
                                        double mod_hi, double min_gap) {
  const double llo = std::log(mod_lo), lhi = std::log(mod_hi);
  std::vector<cplx> out;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    out.clear();
    for (std::size_t k = 0; k < n; ++k) {
      const double mod = std::exp(uniform(llo, lhi));
      const double ang = uniform(-std::numbers::pi, std::numbers::pi);
      out.push_back(std::polar(mod, ang));
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (std::abs(out[i] - out[j]) < min_gap) { ok = false; break; }
    if (ok) {
      sort_spectrum(out);
      return out;
    }
  }
  raise(Errc::PreconditionViolated, "could not sample a separated spectrum");
}

ComplexMatrix permutation_matrix(const std::vector<std::size_t>& sigma) {
  const std::size_t n = sigma.size();
  ComplexMatrix p(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (sigma[j] >= n) raise(Errc::InvalidArgument, "permutation image out of range");
    p(sigma[j], j) = cplx(1.0, 0.0);
  }
  return p;
}

}  // namespace obskit
