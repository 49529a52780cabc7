#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "obskit/loss.hpp"
#include "obskit/matrix.hpp"

namespace obskit {

enum class GammaKind { Exp, Poly };

// Row-scaled Vandermonde matrix: entries(k, j) = c_row[j] * e^{k delta lambda_j}
// for Exp, c_row[j] * lambda_j^k for Poly. Full rank iff the nodes are distinct
// and every c_row entry is nonzero.
struct GammaMatrix {
  ComplexMatrix entries;
  GammaKind kind = GammaKind::Poly;
  std::vector<cplx> c_row;
  std::vector<cplx> lambdas;
  double delta = 0.0;
};

ComplexMatrix c_tilde(const ComplexMatrix& c, const ComplexMatrix& v);

GammaMatrix gamma_matrix(const std::vector<cplx>& c_row,
                         const std::vector<cplx>& lambdas, double delta,
                         GammaKind kind);

struct Thm5Margins {
  double m1 = 0.05;
  double m2 = 0.05;
};

// Eigenvalue-gap hinge plus per-entry magnitude hinges over the selected rows
// of c_tilde (all rows by default, a single row when `row` is set).
LossValue loss_thm5(const std::vector<cplx>& lambdas,
                    const ComplexMatrix& c_tilde,
                    const Thm5Margins& margins = {},
                    std::optional<std::size_t> row = std::nullopt);

// True when the stacked columns v_i (x) c_i form a rank-n (nm) x n matrix.
// Columns of vs are the v_i (n of them, length n); columns of cs are the c_i
// (length m, all nonzero).
bool kron_independence_check(const ComplexMatrix& vs, const ComplexMatrix& cs,
                             double tol);

}  // namespace obskit
