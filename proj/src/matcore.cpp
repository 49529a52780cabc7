#include "obskit/matcore.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace obskit {

namespace {

using EMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

EMat to_eigen(const ComplexMatrix& m) {
  EMat e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return e;
}

ComplexMatrix from_eigen(const EMat& e) {
  ComplexMatrix m(static_cast<std::size_t>(e.rows()),
                  static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j)
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
  return m;
}

void require_square(const ComplexMatrix& m, const char* op) {
  if (!m.is_square()) raise(Errc::ShapeMismatch, std::string(op) + " needs a square matrix");
  if (m.rows() == 0) raise(Errc::ShapeMismatch, std::string(op) + " needs a non-empty matrix");
}

}  // namespace

namespace {

// Integer modulus keys keep the comparison a strict weak ordering even with
// the relative tie tolerance folded in.
long long modulus_key(const cplx& v, double quantum) {
  return std::llround(std::abs(v) / quantum);
}

double modulus_quantum(const std::vector<cplx>& lambdas) {
  double scale = 0.0;
  for (const cplx& l : lambdas) scale = std::max(scale, std::abs(l));
  return scale > 0.0 ? scale * 1e-10 : 1.0;
}

bool spectrum_less(const cplx& a, const cplx& b, double quantum) {
  const long long ka = modulus_key(a, quantum), kb = modulus_key(b, quantum);
  if (ka != kb) return ka > kb;
  return std::arg(a) > std::arg(b);
}

}  // namespace

void sort_spectrum(std::vector<cplx>& lambdas) {
  const double quantum = modulus_quantum(lambdas);
  std::stable_sort(lambdas.begin(), lambdas.end(),
                   [quantum](const cplx& a, const cplx& b) {
                     return spectrum_less(a, b, quantum);
                   });
}

Eigendecomposition eig(const ComplexMatrix& m) {
  require_square(m, "eig");
  m.check_finite("eig input");
  const EMat a = to_eigen(m);
  Eigen::ComplexEigenSolver<EMat> solver(a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    raise(Errc::DecompositionFailed, "eigensolver did not converge");

  const std::size_t n = m.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& raw = solver.eigenvalues();
  const std::vector<cplx> raw_vec(raw.data(), raw.data() + raw.size());
  const double quantum = modulus_quantum(raw_vec);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return spectrum_less(raw_vec[i], raw_vec[j], quantum);
  });

  EMat v(n, n);
  std::vector<cplx> lambdas(n);
  for (std::size_t c = 0; c < n; ++c) {
    lambdas[c] = raw(static_cast<Eigen::Index>(order[c]));
    v.col(static_cast<Eigen::Index>(c)) =
        solver.eigenvectors().col(static_cast<Eigen::Index>(order[c]));
  }

  Eigen::FullPivLU<EMat> lu(v);
  if (!lu.isInvertible())
    raise(Errc::DecompositionFailed, "eigenvector matrix is singular");
  const EMat v_inv = lu.inverse();

  EMat recon = v;
  for (std::size_t c = 0; c < n; ++c)
    recon.col(static_cast<Eigen::Index>(c)) *= lambdas[c];
  recon *= v_inv;
  const double norm_m = a.norm();
  const double residual =
      norm_m > 0.0 ? (recon - a).norm() / norm_m : (recon - a).norm();
  if (residual > 1e-8)
    raise(Errc::DecompositionFailed, "eigendecomposition residual above 1e-8");

  Eigendecomposition out;
  out.v = from_eigen(v);
  out.lambdas = std::move(lambdas);
  out.v_inv = from_eigen(v_inv);
  out.residual = residual;
  return out;
}

SvdRank rank_with_tol(const ComplexMatrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0)
    raise(Errc::ShapeMismatch, "rank of an empty matrix");
  if (!(tol >= 0.0)) raise(Errc::InvalidArgument, "rank tolerance must be >= 0");
  m.check_finite("rank input");
  Eigen::JacobiSVD<EMat> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  SvdRank out;
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  out.sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  out.sigma_min = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
  out.tol_used = tol;
  out.rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * out.sigma_max) ++out.rank;
  if (out.sigma_max == 0.0) out.rank = 0;
  return out;
}

double smallest_singular_value(const ComplexMatrix& m) {
  return rank_with_tol(m, 0.0).sigma_min;
}

double operator_norm(const ComplexMatrix& m) {
  return rank_with_tol(m, 0.0).sigma_max;
}

ComplexMatrix mat_exp(const ComplexMatrix& m) {
  require_square(m, "mat_exp");
  m.check_finite("mat_exp input");
  const EMat e = to_eigen(m).exp();
  ComplexMatrix out = from_eigen(e);
  out.check_finite("mat_exp result");
  return out;
}

ComplexMatrix mat_log(const ComplexMatrix& m) {
  require_square(m, "mat_log");
  m.check_finite("mat_log input");
  const std::vector<cplx> lambdas = eigenvalues_only(m);
  double max_mod = 0.0;
  for (const auto& l : lambdas) max_mod = std::max(max_mod, std::abs(l));
  for (const auto& l : lambdas) {
    if (std::abs(l) <= 1e-14 * std::max(max_mod, 1.0))
      raise(Errc::SingularInput, "mat_log of a singular matrix");
    if (l.real() < 0.0 && std::abs(l.imag()) <= 1e-14 * std::abs(l.real()))
      raise(Errc::BranchCut, "eigenvalue on the negative real axis");
  }
  const EMat e = to_eigen(m).log();
  ComplexMatrix out = from_eigen(e);
  out.check_finite("mat_log result");
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

std::vector<ComplexMatrix> dft_sequence(const std::vector<ComplexMatrix>& ks,
                                        std::size_t big_l) {
  if (big_l == 0) raise(Errc::ShapeMismatch, "dft of an empty sequence");
  if (ks.size() != big_l)
    raise(Errc::ShapeMismatch, "dft sequence must hold exactly L entries");
  const std::size_t r = ks[0].rows(), c = ks[0].cols();
  for (const auto& k : ks)
    if (k.rows() != r || k.cols() != c)
      raise(Errc::ShapeMismatch, "dft sequence entries must share one shape");

  std::vector<ComplexMatrix> out(big_l, ComplexMatrix(r, c));
  const double step = -2.0 * std::numbers::pi / static_cast<double>(big_l);
  for (std::size_t j = 0; j < big_l; ++j) {
    ComplexMatrix acc(r, c);
    for (std::size_t k = 0; k < big_l; ++k) {
      const cplx w = std::polar(1.0, step * static_cast<double>(j * k % big_l));
      for (std::size_t t = 0; t < acc.size(); ++t)
        acc.mutable_data()[t] += w * ks[k].data()[t];
    }
    out[j] = std::move(acc);
  }
  return out;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "solve");
  if (b.rows() != a.rows()) raise(Errc::ShapeMismatch, "solve rhs row count");
  Eigen::FullPivLU<EMat> lu(to_eigen(a));
  if (!lu.isInvertible()) raise(Errc::SingularInput, "solve with singular matrix");
  return from_eigen(lu.solve(to_eigen(b)));
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  return solve(a, ComplexMatrix::identity(a.rows()));
}

std::vector<cplx> eigenvalues_only(const ComplexMatrix& m) {
  require_square(m, "eigenvalues");
  m.check_finite("eigenvalues input");
  Eigen::ComplexEigenSolver<EMat> solver(to_eigen(m), false);
  if (solver.info() != Eigen::Success)
    raise(Errc::DecompositionFailed, "eigensolver did not converge");
  std::vector<cplx> lambdas(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + m.rows());
  sort_spectrum(lambdas);
  return lambdas;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!m.is_square() || m.rows() == 0)
    raise(Errc::ShapeMismatch, "hermitian_eigenvalues needs a square matrix");
  Eigen::SelfAdjointEigenSolver<EMat> solver(to_eigen(m),
                                             Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    raise(Errc::DecompositionFailed, "Hermitian eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

HermitianEig hermitian_eig(const ComplexMatrix& m) {
  if (!m.is_square() || m.rows() == 0)
    raise(Errc::ShapeMismatch, "hermitian_eig needs a square matrix");
  Eigen::SelfAdjointEigenSolver<EMat> solver(to_eigen(m));
  if (solver.info() != Eigen::Success)
    raise(Errc::DecompositionFailed, "Hermitian eigensolver did not converge");
  HermitianEig out;
  out.q = from_eigen(solver.eigenvectors());
  const auto& ev = solver.eigenvalues();
  out.lambdas.assign(ev.data(), ev.data() + ev.size());
  return out;
}

SvdFactors svd_decompose(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    raise(Errc::ShapeMismatch, "svd needs a non-empty matrix");
  Eigen::JacobiSVD<EMat> svd(to_eigen(m),
                             Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors out;
  out.u = from_eigen(svd.matrixU());
  out.v = from_eigen(svd.matrixV());
  const auto& sv = svd.singularValues();
  out.sigma.assign(sv.data(), sv.data() + sv.size());
  return out;
}

double gram_logdet(const ComplexMatrix& m) {
  if (m.rows() < m.cols()) return -std::numeric_limits<double>::infinity();
  const SvdRank r = rank_with_tol(m, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < m.cols(); ++i) {
    const double s = r.singular_values[i];
    if (s <= 0.0) return -std::numeric_limits<double>::infinity();
    acc += 2.0 * std::log(s);
  }
  return acc;
}

ComplexMatrix null_space_basis(const ComplexMatrix& m, double tol_rel,
                               double dead_floor) {
  const std::size_t n = m.cols();
  Eigen::JacobiSVD<EMat> svd(to_eigen(m), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  if (smax <= dead_floor) return ComplexMatrix::identity(n);

  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol_rel * smax) ++rank;
  const std::size_t nullity = n - std::min(rank, n);
  ComplexMatrix basis(n, nullity);
  const EMat v = svd.matrixV();
  for (std::size_t c = 0; c < nullity; ++c)
    for (std::size_t i = 0; i < n; ++i)
      basis(i, c) = v(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(rank + c));
  return basis;
}

}  // namespace obskit
