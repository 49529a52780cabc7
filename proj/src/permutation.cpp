#include "obskit/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "obskit/assignment.hpp"
#include "obskit/matcore.hpp"

namespace obskit {

namespace {

std::vector<cplx> unity_targets(std::size_t n, bool unit_modulus) {
  const double scale = unit_modulus ? 1.0 : 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<cplx> t(n);
  for (std::size_t k = 0; k < n; ++k)
    t[k] = scale * std::polar(1.0, -2.0 * std::numbers::pi *
                                       static_cast<double>(k + 1) /
                                       static_cast<double>(n));
  return t;
}

// Sum of squared moduli of matched differences under min-cost assignment.
double matched_sq_distance(const std::vector<cplx>& xs,
                           const std::vector<cplx>& ys) {
  const std::size_t n = xs.size();
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = std::norm(xs[i] - ys[j]);
  const auto sigma = min_cost_assignment(cost);
  return assignment_cost(cost, sigma);
}

bool entries_real(const ComplexMatrix& m, double tol) {
  for (const auto& z : m.data())
    if (std::abs(z.imag()) > tol) return false;
  return true;
}

}  // namespace

LossValue loss_permutation(const ComplexMatrix& a, bool unit_modulus) {
  if (!a.is_square() || a.rows() == 0)
    raise(Errc::ShapeMismatch, "loss_permutation needs a square matrix");
  const std::size_t n = a.rows();
  const Eigendecomposition e = eig(a);
  LossValue loss;
  loss.add_term("eig_match",
                matched_sq_distance(e.lambdas, unity_targets(n, unit_modulus)));
  double rows = 0.0, cols = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx rs(0.0, 0.0), cs(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      rs += a(i, j);
      cs += a(j, i);
    }
    rows += std::abs(rs - cplx(1.0, 0.0));
    cols += std::abs(cs - cplx(1.0, 0.0));
  }
  loss.add_term("row_sums", rows);
  loss.add_term("col_sums", cols);
  return loss;
}

PermutationCertificate certify_permutation(const ComplexMatrix& q, double tol) {
  if (!q.is_square() || q.rows() == 0)
    raise(Errc::ShapeMismatch, "certify_permutation needs a square matrix");
  if (!(tol > 0.0)) raise(Errc::InvalidArgument, "tolerance must be > 0");
  const std::size_t n = q.rows();
  PermutationCertificate cert;

  double row_res = 0.0, col_res = 0.0, min_entry = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx rs(0.0, 0.0), cs(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      rs += q(i, j);
      cs += q(j, i);
      min_entry = std::min(min_entry, q(i, j).real());
    }
    row_res = std::max(row_res, std::abs(rs - cplx(1.0, 0.0)));
    col_res = std::max(col_res, std::abs(cs - cplx(1.0, 0.0)));
  }
  cert.row_sum_residual = row_res;
  cert.col_sum_residual = col_res;

  const std::vector<cplx> lambdas = eigenvalues_only(q);
  cert.eig_match_residual =
      std::sqrt(matched_sq_distance(lambdas, unity_targets(n, true)));

  bool rounds_to_permutation = entries_real(q, tol);
  std::vector<bool> row_hit(n, false), col_hit(n, false);
  for (std::size_t i = 0; i < n && rounds_to_permutation; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double re = q(i, j).real();
      if (std::abs(re) <= tol) continue;
      if (std::abs(re - 1.0) <= tol && !row_hit[i] && !col_hit[j]) {
        row_hit[i] = true;
        col_hit[j] = true;
      } else {
        rounds_to_permutation = false;
        break;
      }
    }
  }
  if (rounds_to_permutation)
    rounds_to_permutation = std::all_of(row_hit.begin(), row_hit.end(),
                                        [](bool b) { return b; });

  cert.is_permutation = rounds_to_permutation && row_res <= tol &&
                        col_res <= tol && min_entry >= -tol;
  return cert;
}

PermutationCertificate nearest_permutation(const ComplexMatrix& p, double tol) {
  if (p.rows() == 0 || p.rows() != p.cols())
    raise(Errc::NoAssignment, "nearest_permutation needs a square matrix");
  const std::size_t n = p.rows();
  PermutationCertificate cert = certify_permutation(p, tol);

  // Maximum weight on |entries| as a min-cost problem.
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = -std::abs(p(i, j));
  const auto sigma = min_cost_assignment(cost);

  ComplexMatrix nearest(n, n);
  for (std::size_t i = 0; i < n; ++i) nearest(i, sigma[i]) = cplx(1.0, 0.0);
  cert.has_nearest_perm = true;
  cert.xi_norm = (p - nearest).frobenius_norm();
  cert.eps_sum =
      matched_sq_distance(eigenvalues_only(p), eigenvalues_only(nearest));
  cert.nearest_perm = std::move(nearest);
  return cert;
}

bool check_c_nonconstant(const ComplexMatrix& c, double tol) {
  if (c.rows() == 0 || c.cols() == 0)
    raise(Errc::ShapeMismatch, "empty matrix");
  if (!(tol > 0.0)) raise(Errc::InvalidArgument, "tolerance must be > 0");
  const std::size_t m = c.rows(), n = c.cols();

  const auto column = [&](std::size_t j) {
    std::vector<cplx> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = c(i, j);
    return v;
  };
  const auto norm_of = [&](const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
  };

  for (std::size_t k = 0; k < n; ++k) {
    const std::vector<cplx> psi = column(k);
    const double psi_norm = norm_of(psi);
    if (psi_norm <= tol) continue;  // zero columns cannot witness constancy

    // Greedy maximal linearly independent subset of the other columns, by
    // Gram-Schmidt rejection at tol.
    std::vector<std::vector<cplx>> basis;
    std::vector<cplx> s(m, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      std::vector<cplx> v = column(j);
      if (norm_of(v) <= tol) continue;
      std::vector<cplx> r = v;
      for (const auto& b : basis) {
        cplx dot(0.0, 0.0);
        for (std::size_t i = 0; i < m; ++i) dot += std::conj(b[i]) * r[i];
        for (std::size_t i = 0; i < m; ++i) r[i] -= dot * b[i];
      }
      const double rn = norm_of(r);
      if (rn > tol * std::max(1.0, norm_of(v))) {
        for (auto& z : r) z /= rn;
        basis.push_back(std::move(r));
        for (std::size_t i = 0; i < m; ++i) s[i] += v[i];
      }
    }

    const double s_norm = norm_of(s);
    if (s_norm <= tol) continue;  // nothing to be parallel to
    // Normalized rejection of psi from span(s).
    cplx dot(0.0, 0.0);
    for (std::size_t i = 0; i < m; ++i) dot += std::conj(s[i]) * psi[i];
    double rej = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      rej += std::norm(psi[i] - dot / cplx(s_norm * s_norm, 0.0) * s[i]);
    if (std::sqrt(rej) / psi_norm <= tol) return false;
  }
  return true;
}

Theorem2Report theorem2_check(const ComplexMatrix& c, const ComplexMatrix& p,
                              const Theorem2Margins& margins, double tol) {
  if (c.cols() != p.rows())
    raise(Errc::ShapeMismatch, "C column count must equal P size");
  if (!check_c_nonconstant(c, 1e-8))
    raise(Errc::HypothesisFailed, "C fails the column admissibility check");

  const PermutationCertificate cert = nearest_permutation(p, tol);
  if (cert.xi_norm > margins.xi)
    raise(Errc::HypothesisFailed, "P is not close to any permutation");
  const PermutationCertificate target = certify_permutation(cert.nearest_perm, tol);
  if (target.eig_match_residual > margins.spectral)
    raise(Errc::HypothesisFailed,
          "nearest permutation lacks the full root-of-unity spectrum");

  Theorem2Report out;
  out.report = obs_report(c, p, tol);
  out.xi_norm = cert.xi_norm;

  const ComplexMatrix op = obs_matrix(c, p);
  const ComplexMatrix oq = obs_matrix(c, cert.nearest_perm);
  out.gram_dev = (op.adjoint() * op - oq.adjoint() * oq).frobenius_norm();

  const ComplexMatrix chc = c.adjoint() * c;
  const std::size_t n = p.rows();
  ComplexMatrix pi = ComplexMatrix::identity(n);
  ComplexMatrix qi = ComplexMatrix::identity(n);
  double premise = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    premise +=
        (pi.adjoint() * chc * pi - qi.adjoint() * chc * qi).frobenius_norm();
    if (i + 1 < n) {
      pi = pi * p;
      qi = qi * cert.nearest_perm;
    }
  }
  out.premise_sum = premise;
  return out;
}

}  // namespace obskit
