#include "obskit/ssm.hpp"

#include <cmath>

#include "obskit/matcore.hpp"

namespace obskit {

void ContinuousSystem::validate() const {
  if (!a.is_square() || a.rows() == 0)
    raise(Errc::ShapeMismatch, "A must be square and non-empty");
  if (b.rows() != a.rows()) raise(Errc::ShapeMismatch, "B row count != n");
  if (c.cols() != a.rows()) raise(Errc::ShapeMismatch, "C column count != n");
  if (c.rows() < 1) raise(Errc::ShapeMismatch, "C needs at least one row");
  if (a.rows() < c.rows())
    raise(Errc::PreconditionViolated, "system requires n >= m");
}

void DiscreteSystem::validate() const {
  if (!a_bar.is_square() || a_bar.rows() == 0)
    raise(Errc::ShapeMismatch, "A_bar must be square and non-empty");
  if (b_bar.rows() != a_bar.rows())
    raise(Errc::ShapeMismatch, "B_bar row count != n");
  if (c.cols() != a_bar.rows())
    raise(Errc::ShapeMismatch, "C column count != n");
  if (!(delta > 0.0)) raise(Errc::PreconditionViolated, "delta must be > 0");
}

cplx phi1(const cplx& z) {
  if (std::abs(z) < 1e-4) {
    // Taylor: sum_{k=0}^{10} z^k / (k+1)!
    cplx acc(0.0, 0.0), pow(1.0, 0.0);
    double fact = 1.0;
    for (int k = 0; k <= 10; ++k) {
      fact *= static_cast<double>(k + 1);
      acc += pow / fact;
      pow *= z;
    }
    return acc;
  }
  return (std::exp(z) - cplx(1.0, 0.0)) / z;
}

DiscreteSystem bilinear_discretize(const ContinuousSystem& sys, double delta) {
  sys.validate();
  if (!(delta > 0.0)) raise(Errc::PreconditionViolated, "delta must be > 0");
  const std::size_t n = sys.n();
  const ComplexMatrix eye = ComplexMatrix::identity(n);
  const cplx half(delta / 2.0, 0.0);
  const ComplexMatrix minus = eye - half * sys.a;
  const ComplexMatrix plus = eye + half * sys.a;
  const SvdRank r = rank_with_tol(minus, 1e-12);
  if (r.rank < n)
    raise(Errc::SingularResolvent, "2/delta is an eigenvalue of A");
  DiscreteSystem d;
  d.a_bar = solve(minus, plus);
  d.b_bar = solve(minus, cplx(delta, 0.0) * sys.b);
  d.c = sys.c;
  d.delta = delta;
  d.scheme = Scheme::Bilinear;
  return d;
}

namespace {

// phi1(M) N from the block identity exp([[M, N], [0, 0]]) = [[e^M, phi1(M)N],
// [0, I]]; used when M is defective.
ComplexMatrix phi1_times_block(const ComplexMatrix& m, const ComplexMatrix& n) {
  const std::size_t rows = m.rows(), cols = n.cols();
  ComplexMatrix aug(rows + cols, rows + cols);
  aug.set_block(0, 0, m);
  aug.set_block(0, rows, n);
  return mat_exp(aug).block(0, rows, rows, cols);
}

}  // namespace

DiscreteSystem zoh_discretize(const ContinuousSystem& sys, double delta) {
  sys.validate();
  if (!(delta > 0.0)) raise(Errc::PreconditionViolated, "delta must be > 0");
  const ComplexMatrix da = cplx(delta, 0.0) * sys.a;
  DiscreteSystem d;
  d.a_bar = mat_exp(da);
  const ComplexMatrix db = cplx(delta, 0.0) * sys.b;
  try {
    const Eigendecomposition e = eig(da);
    std::vector<cplx> fv(e.lambdas.size());
    for (std::size_t i = 0; i < fv.size(); ++i) fv[i] = phi1(e.lambdas[i]);
    d.b_bar = e.v * ComplexMatrix::diag(fv) * e.v_inv * db;
  } catch (const Error& err) {
    if (err.code() != Errc::DecompositionFailed) throw;
    d.b_bar = phi1_times_block(da, db);
  }
  d.c = sys.c;
  d.delta = delta;
  d.scheme = Scheme::ZOH;
  return d;
}

ContinuousSystem zoh_invert(const DiscreteSystem& disc) {
  disc.validate();
  if (disc.scheme != Scheme::ZOH)
    raise(Errc::PreconditionViolated, "zoh_invert expects a ZOH system");
  const std::size_t n = disc.n();
  ContinuousSystem sys;
  sys.a = (cplx(1.0 / disc.delta, 0.0)) * mat_log(disc.a_bar);
  const ComplexMatrix factor = disc.a_bar - ComplexMatrix::identity(n);
  const SvdRank r = rank_with_tol(factor, 1e-12);
  if (r.rank < n)
    raise(Errc::SingularFactor, "exp(delta A) - I is singular");
  sys.b = solve(factor, sys.a * disc.b_bar);
  sys.c = disc.c;
  return sys;
}

ConvKernel conv_kernel(const DiscreteSystem& disc, std::size_t big_l) {
  disc.validate();
  if (big_l < 1) raise(Errc::PreconditionViolated, "kernel length must be >= 1");
  ConvKernel k;
  k.big_l = big_l;
  k.blocks.reserve(big_l);
  ComplexMatrix x = disc.b_bar;
  for (std::size_t i = 0; i < big_l; ++i) {
    k.blocks.push_back(disc.c * x);
    if (i + 1 < big_l) x = disc.a_bar * x;
  }
  return k;
}

std::vector<ComplexMatrix> apply_kernel(const ConvKernel& k,
                                        const std::vector<ComplexMatrix>& xs) {
  if (k.blocks.empty()) raise(Errc::ShapeMismatch, "empty kernel");
  if (xs.size() > k.big_l)
    raise(Errc::ShapeMismatch, "input longer than kernel length");
  const std::size_t width = k.blocks[0].cols();
  for (const auto& x : xs)
    if (x.rows() != width || x.cols() != 1)
      raise(Errc::ShapeMismatch, "inputs must be kernel-width column vectors");
  std::vector<ComplexMatrix> ys;
  ys.reserve(xs.size());
  for (std::size_t t = 0; t < xs.size(); ++t) {
    ComplexMatrix y(k.blocks[0].rows(), 1);
    for (std::size_t i = 0; i <= t; ++i) y = y + k.blocks[i] * xs[t - i];
    ys.push_back(std::move(y));
  }
  return ys;
}

}  // namespace obskit
