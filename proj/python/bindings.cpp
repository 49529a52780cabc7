// Python bindings for the curated surface: observability reports,
// discretization maps, spectrum losses, and permutation certificates.
// Matrices cross the boundary as nested lists of complex numbers.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "obskit/coupling.hpp"
#include "obskit/fourier.hpp"
#include "obskit/matrix.hpp"
#include "obskit/observability.hpp"
#include "obskit/permutation.hpp"
#include "obskit/ssm.hpp"
#include "obskit/vandermonde.hpp"

namespace py = pybind11;

namespace {

using obskit::ComplexMatrix;
using obskit::cplx;

using PyMat = std::vector<std::vector<cplx>>;

ComplexMatrix to_mat(const PyMat& rows) {
  if (rows.empty() || rows[0].empty())
    throw std::invalid_argument("matrix must have at least one row and column");
  const std::size_t c = rows[0].size();
  ComplexMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c)
      throw std::invalid_argument("rows must all have the same length");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

PyMat from_mat(const ComplexMatrix& m) {
  PyMat rows(m.rows(), std::vector<cplx>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

py::dict loss_dict(const obskit::LossValue& lv) {
  std::map<std::string, double> folded;
  for (const auto& [name, value] : lv.terms) folded[name] += value;
  py::dict terms;
  for (const auto& [name, value] : folded) terms[py::str(name)] = value;
  py::dict out;
  out["total"] = lv.total;
  out["terms"] = terms;
  return out;
}

py::dict report_dict(const obskit::ObservabilityReport& r) {
  py::dict out;
  out["rank"] = r.rank;
  out["n"] = r.n;
  out["sigma_min"] = r.sigma_min;
  out["gram_logdet"] = r.gram_logdet;
  out["observable"] = r.observable;
  out["tol"] = r.tol;
  return out;
}

py::dict system_dict(const obskit::DiscreteSystem& d) {
  py::dict out;
  out["a_bar"] = from_mat(d.a_bar);
  out["b_bar"] = from_mat(d.b_bar);
  out["c"] = from_mat(d.c);
  out["delta"] = d.delta;
  out["scheme"] = d.scheme == obskit::Scheme::Bilinear ? "bilinear" : "zoh";
  return out;
}

obskit::ContinuousSystem make_sys(const PyMat& a, const PyMat& b,
                                  const PyMat& c) {
  obskit::ContinuousSystem sys;
  sys.a = to_mat(a);
  sys.b = to_mat(b);
  sys.c = to_mat(c);
  sys.validate();
  return sys;
}

}  // namespace

PYBIND11_MODULE(_obskit, m) {
  m.doc() = "observability toolkit for state-space models";

  m.def(
      "obs_matrix",
      [](const PyMat& c, const PyMat& a) {
        return from_mat(obskit::obs_matrix(to_mat(c), to_mat(a)));
      },
      py::arg("c"), py::arg("a"),
      "Stack c, c a, ..., c a^(n-1) into one matrix.");

  m.def(
      "obs_report",
      [](const PyMat& c, const PyMat& a, double tol) {
        return report_dict(obskit::obs_report(to_mat(c), to_mat(a), tol));
      },
      py::arg("c"), py::arg("a"), py::arg("tol") = 1e-8,
      "Rank, smallest singular value, Gram log-determinant, and the "
      "observability verdict for the pair (c, a).");

  m.def(
      "bilinear_discretize",
      [](const PyMat& a, const PyMat& b, const PyMat& c, double delta) {
        return system_dict(obskit::bilinear_discretize(make_sys(a, b, c),
                                                       delta));
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("delta"));

  m.def(
      "zoh_discretize",
      [](const PyMat& a, const PyMat& b, const PyMat& c, double delta) {
        return system_dict(obskit::zoh_discretize(make_sys(a, b, c), delta));
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("delta"));

  m.def(
      "conv_kernel",
      [](const PyMat& a_bar, const PyMat& b_bar, const PyMat& c, double delta,
         const std::string& scheme, std::size_t big_l) {
        obskit::DiscreteSystem d;
        d.a_bar = to_mat(a_bar);
        d.b_bar = to_mat(b_bar);
        d.c = to_mat(c);
        d.delta = delta;
        if (scheme == "bilinear")
          d.scheme = obskit::Scheme::Bilinear;
        else if (scheme == "zoh")
          d.scheme = obskit::Scheme::ZOH;
        else
          throw std::invalid_argument("scheme must be 'bilinear' or 'zoh'");
        d.validate();
        const obskit::ConvKernel k = obskit::conv_kernel(d, big_l);
        std::vector<PyMat> blocks;
        blocks.reserve(k.blocks.size());
        for (const auto& blk : k.blocks) blocks.push_back(from_mat(blk));
        return blocks;
      },
      py::arg("a_bar"), py::arg("b_bar"), py::arg("c"), py::arg("delta"),
      py::arg("scheme"), py::arg("length"),
      "Blocks c a_bar^k b_bar for k = 0..length-1.");

  m.def(
      "loss_thm3",
      [](const std::vector<cplx>& lambdas, double delta, std::size_t big_l) {
        return loss_dict(
            obskit::loss_thm3(lambdas, delta, big_l, obskit::FourierMargins{}));
      },
      py::arg("lambdas"), py::arg("delta"), py::arg("length"));

  m.def(
      "loss_thm4",
      [](const std::vector<cplx>& lambdas, double delta, std::size_t big_l) {
        return loss_dict(
            obskit::loss_thm4(lambdas, delta, big_l, obskit::FourierMargins{}));
      },
      py::arg("lambdas"), py::arg("delta"), py::arg("length"));

  m.def(
      "loss_thm5",
      [](const std::vector<cplx>& lambdas, const PyMat& c_tilde) {
        return loss_dict(obskit::loss_thm5(lambdas, to_mat(c_tilde)));
      },
      py::arg("lambdas"), py::arg("c_tilde"));

  m.def(
      "loss_permutation",
      [](const PyMat& a, bool unit_modulus) {
        return loss_dict(obskit::loss_permutation(to_mat(a), unit_modulus));
      },
      py::arg("a"), py::arg("unit_modulus") = true);

  m.def(
      "certify_permutation",
      [](const PyMat& q, double tol) {
        const obskit::PermutationCertificate cert =
            obskit::certify_permutation(to_mat(q), tol);
        py::dict out;
        out["is_permutation"] = cert.is_permutation;
        out["row_sum_residual"] = cert.row_sum_residual;
        out["col_sum_residual"] = cert.col_sum_residual;
        out["eig_match_residual"] = cert.eig_match_residual;
        return out;
      },
      py::arg("q"), py::arg("tol") = 1e-8);

  m.def(
      "nearest_permutation",
      [](const PyMat& p, double tol) {
        const obskit::PermutationCertificate cert =
            obskit::nearest_permutation(to_mat(p), tol);
        py::dict out;
        out["has_nearest_perm"] = cert.has_nearest_perm;
        out["xi_norm"] = cert.xi_norm;
        out["eps_sum"] = cert.eps_sum;
        if (cert.has_nearest_perm) out["nearest_perm"] = from_mat(cert.nearest_perm);
        return out;
      },
      py::arg("p"), py::arg("tol") = 1e-8);

  m.def("lipschitz_lower_bound", &obskit::lipschitz_lower_bound,
        py::arg("lambdas"),
        "Lower bound on the square-root-factor sensitivity for a real "
        "positive spectrum.");

  m.def(
      "eig_jacobian",
      [](const PyMat& b) {
        const obskit::Jacobian4 jac = obskit::eig_jacobian(to_mat(b));
        py::dict out;
        out["n"] = jac.n;
        out["frobenius_norm"] = jac.frobenius_norm();
        out["data"] = jac.data;
        return out;
      },
      py::arg("b"),
      "Derivative of the scaled-eigenvector factor with respect to the "
      "symmetric input, flattened row-major over (i, j, k, l).");

  m.attr("__version__") = "0.1.0";
}
