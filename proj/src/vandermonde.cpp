#include "obskit/vandermonde.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "obskit/matcore.hpp"

namespace obskit {

ComplexMatrix c_tilde(const ComplexMatrix& c, const ComplexMatrix& v) {
  if (c.cols() != v.rows()) raise(Errc::ShapeMismatch, "C cols must equal V rows");
  return c * v;
}

GammaMatrix gamma_matrix(const std::vector<cplx>& c_row,
                         const std::vector<cplx>& lambdas, double delta,
                         GammaKind kind) {
  const std::size_t n = lambdas.size();
  if (c_row.size() != n) raise(Errc::ShapeMismatch, "row length must match spectrum");
  GammaMatrix g;
  g.kind = kind;
  g.c_row = c_row;
  g.lambdas = lambdas;
  g.delta = delta;
  g.entries = ComplexMatrix::zeros(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx node = kind == GammaKind::Exp
                          ? std::exp(cplx(delta, 0.0) * lambdas[j])
                          : lambdas[j];
    cplx pw(1.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      g.entries(k, j) = c_row[j] * pw;
      pw *= node;
    }
  }
  return g;
}

LossValue loss_thm5(const std::vector<cplx>& lambdas,
                    const ComplexMatrix& c_tilde, const Thm5Margins& margins,
                    std::optional<std::size_t> row) {
  if (lambdas.empty()) raise(Errc::ShapeMismatch, "empty spectrum");
  if (c_tilde.cols() != lambdas.size())
    raise(Errc::ShapeMismatch, "c_tilde width must match spectrum");
  if (!(margins.m1 > 0.0 && margins.m2 > 0.0))
    raise(Errc::InvalidArgument, "margins must be > 0");
  if (row && *row >= c_tilde.rows())
    raise(Errc::InvalidArgument, "row index out of range");

  LossValue loss;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    for (std::size_t k = i + 1; k < lambdas.size(); ++k)
      gap = std::min(gap, std::abs(lambdas[i] - lambdas[k]));
  loss.add_term("eig_gap", std::isfinite(gap) ? relu(margins.m1 - gap) : 0.0);

  const std::size_t lo = row ? *row : 0;
  const std::size_t hi = row ? *row + 1 : c_tilde.rows();
  double entries = 0.0;
  for (std::size_t i = lo; i < hi; ++i)
    for (std::size_t j = 0; j < c_tilde.cols(); ++j)
      entries += relu(margins.m2 - std::abs(c_tilde(i, j)));
  loss.add_term("row_entries", entries);
  return loss;
}

bool kron_independence_check(const ComplexMatrix& vs, const ComplexMatrix& cs,
                             double tol) {
  const std::size_t n = vs.cols(), m = cs.rows();
  if (vs.rows() != n || cs.cols() != n)
    raise(Errc::ShapeMismatch, "need n columns of n-vectors and of m-vectors");
  if (!(tol > 0.0)) raise(Errc::InvalidArgument, "tol must be > 0");
  for (std::size_t i = 0; i < n; ++i) {
    double nrm = 0.0;
    for (std::size_t r = 0; r < m; ++r) nrm += std::norm(cs(r, i));
    if (nrm == 0.0) raise(Errc::PreconditionViolated, "zero c vector");
  }
  ComplexMatrix stacked(n * m, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t r = 0; r < m; ++r)
        stacked(k * m + r, i) = vs(k, i) * cs(r, i);
  return rank_with_tol(stacked, tol).rank == n;
}

}  // namespace obskit
