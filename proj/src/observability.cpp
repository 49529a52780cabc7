#include "obskit/observability.hpp"

#include <cmath>
#include <limits>

#include "obskit/matcore.hpp"

namespace obskit {

ComplexMatrix obs_matrix(const ComplexMatrix& c, const ComplexMatrix& a) {
  if (!a.is_square() || a.rows() == 0)
    raise(Errc::ShapeMismatch, "A must be square and non-empty");
  if (c.cols() != a.rows())
    raise(Errc::ShapeMismatch, "C column count must equal A size");
  const std::size_t n = a.rows(), m = c.rows();
  ComplexMatrix out(n * m, n);
  ComplexMatrix block = c;
  for (std::size_t k = 0; k < n; ++k) {
    out.set_block(k * m, 0, block);
    if (k + 1 < n) block = block * a;
  }
  return out;
}

ObservabilityReport obs_report(const ComplexMatrix& c, const ComplexMatrix& a,
                               double tol) {
  if (!(tol > 0.0)) raise(Errc::InvalidArgument, "tolerance must be > 0");
  const ComplexMatrix o = obs_matrix(c, a);
  const SvdRank r = rank_with_tol(o, tol);
  ObservabilityReport rep;
  rep.rank = r.rank;
  rep.n = a.rows();
  rep.sigma_min = r.sigma_min;
  rep.gram_logdet = gram_logdet(o);
  rep.observable = (r.rank == rep.n);
  rep.tol = tol;
  return rep;
}

LossValue loss_obs_det(const ComplexMatrix& c, const ComplexMatrix& a,
                       double margin) {
  if (!(margin > 0.0)) raise(Errc::InvalidArgument, "margin must be > 0");
  const double logdet = gram_logdet(obs_matrix(c, a));
  const double det = std::isfinite(logdet) ? std::exp(logdet) : 0.0;
  LossValue loss;
  loss.add_term("det_margin", relu(margin - det));
  return loss;
}

LossValue loss_hautus_pencil(const ComplexMatrix& c, const ComplexMatrix& a,
                             double margin) {
  if (!(margin > 0.0)) raise(Errc::InvalidArgument, "margin must be > 0");
  if (c.cols() != a.rows())
    raise(Errc::ShapeMismatch, "C column count must equal A size");
  const Eigendecomposition e = eig(a);
  const std::size_t n = a.rows();
  const ComplexMatrix chc = c.adjoint() * c;
  LossValue loss;
  for (std::size_t j = 0; j < n; ++j) {
    const ComplexMatrix pencil = a - e.lambdas[j] * ComplexMatrix::identity(n);
    const ComplexMatrix gram = pencil.adjoint() * pencil + chc;
    double logdet = 0.0;
    bool singular = false;
    for (const double ev : hermitian_eigenvalues(gram)) {
      if (ev <= 0.0) {
        singular = true;
        break;
      }
      logdet += std::log(ev);
    }
    const double det = singular ? 0.0 : std::exp(logdet);
    loss.add_term("pencil_" + std::to_string(j), relu(margin - det));
  }
  return loss;
}

LossValue loss_hautus_eigvec(const ComplexMatrix& c, const ComplexMatrix& v,
                             double margin) {
  if (!(margin > 0.0)) raise(Errc::InvalidArgument, "margin must be > 0");
  if (c.cols() != v.rows())
    raise(Errc::ShapeMismatch, "C column count must equal eigenvector length");
  LossValue loss;
  for (std::size_t j = 0; j < v.cols(); ++j) {
    ComplexMatrix col = v.col(j);
    const double nrm = col.frobenius_norm();
    if (nrm == 0.0)
      raise(Errc::PreconditionViolated, "zero eigenvector column");
    col = cplx(1.0 / nrm, 0.0) * col;
    const double image = (c * col).frobenius_norm();
    loss.add_term("eigvec_" + std::to_string(j), relu(margin - image * image));
  }
  return loss;
}

}  // namespace obskit
