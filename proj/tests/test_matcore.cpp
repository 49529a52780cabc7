#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "obskit/matcore.hpp"
#include "obskit/sampling.hpp"

using namespace obskit;

namespace {

// Truncated series oracle, accurate to ~1e-13 for ||M|| <= 2.
ComplexMatrix exp_taylor(const ComplexMatrix& m, int terms = 30) {
  ComplexMatrix sum = ComplexMatrix::identity(m.rows());
  ComplexMatrix pw = ComplexMatrix::identity(m.rows());
  for (int k = 1; k <= terms; ++k) {
    pw = pw * m;
    sum = sum + cplx(1.0 / std::tgamma(k + 1.0), 0.0) * pw;
  }
  return sum;
}

ComplexMatrix naive_dft(const std::vector<ComplexMatrix>& ks, std::size_t j) {
  const std::size_t big_l = ks.size();
  ComplexMatrix out = ComplexMatrix::zeros(ks[0].rows(), ks[0].cols());
  for (std::size_t k = 0; k < big_l; ++k) {
    const cplx w = std::polar(1.0, -2.0 * std::numbers::pi *
                                       static_cast<double>(j * k) /
                                       static_cast<double>(big_l));
    out = out + w * ks[k];
  }
  return out;
}

}  // namespace

TEST_CASE("matrix exponential matches the truncated series") {
  Rng rng(11);
  for (int t = 0; t < 6; ++t) {
    ComplexMatrix m = rng.gaussian_complex(5, 5);
    m = cplx(0.3, 0.0) * m;
    CHECK(rel_diff(mat_exp(m), exp_taylor(m)) < 1e-12);
  }
}

TEST_CASE("exponential of zero and of a diagonal are exact") {
  CHECK(rel_diff(mat_exp(ComplexMatrix::zeros(4, 4)),
                 ComplexMatrix::identity(4)) == 0.0);
  const ComplexMatrix d = ComplexMatrix::diag({cplx(std::log(2.0), 0.0),
                                               cplx(0.0, std::numbers::pi / 2)});
  const ComplexMatrix e = mat_exp(d);
  CHECK(std::abs(e(0, 0) - cplx(2.0, 0.0)) < 1e-14);
  CHECK(std::abs(e(1, 1) - cplx(0.0, 1.0)) < 1e-14);
  CHECK(std::abs(e(0, 1)) == 0.0);
}

TEST_CASE("log then exp round-trips away from the branch cut") {
  Rng rng(12);
  for (int t = 0; t < 4; ++t) {
    const ComplexMatrix a =
        ComplexMatrix::identity(4) + cplx(0.2, 0.0) * rng.gaussian_complex(4, 4);
    CHECK(rel_diff(mat_exp(mat_log(a)), a) < 1e-9);
  }
}

TEST_CASE("log rejects singular input and the negative real axis") {
  ComplexMatrix z = ComplexMatrix::zeros(2, 2);
  z(0, 0) = cplx(1.0, 0.0);
  CHECK_THROWS_AS(mat_log(z), Error);
  const ComplexMatrix neg = ComplexMatrix::diag({cplx(-1.0, 0.0), cplx(2.0, 0.0)});
  CHECK_THROWS_AS(mat_log(neg), Error);
}

TEST_CASE("canonical spectrum order: modulus descending, then argument") {
  // Planar rotation + fixed axis: moduli all 1, so order is by argument.
  const double th = 0.7;
  ComplexMatrix a = ComplexMatrix::zeros(3, 3);
  a(0, 0) = cplx(std::cos(th), 0.0);
  a(0, 1) = cplx(-std::sin(th), 0.0);
  a(1, 0) = cplx(std::sin(th), 0.0);
  a(1, 1) = cplx(std::cos(th), 0.0);
  a(2, 2) = cplx(1.0, 0.0);
  const Eigendecomposition ed = eig(a);
  REQUIRE(ed.lambdas.size() == 3);
  CHECK(std::abs(ed.lambdas[0] - std::polar(1.0, th)) < 1e-12);
  CHECK(std::abs(ed.lambdas[1] - cplx(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(ed.lambdas[2] - std::polar(1.0, -th)) < 1e-12);
  CHECK(ed.residual < 1e-12);
}

TEST_CASE("eig reconstructs random matrices within the residual gate") {
  Rng rng(13);
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix m = rng.gaussian_complex(6, 6);
    const Eigendecomposition ed = eig(m);
    CHECK(rel_diff(ed.v * ComplexMatrix::diag(ed.lambdas) * ed.v_inv, m) <
          1e-10);
  }
}

TEST_CASE("rank drops exactly when a column direction repeats") {
  Rng rng(14);
  ComplexMatrix m = rng.gaussian_complex(5, 4);
  CHECK(rank_with_tol(m, 1e-10).rank == 4);
  for (std::size_t i = 0; i < 5; ++i) m(i, 3) = cplx(2.0, -1.0) * m(i, 1);
  CHECK(rank_with_tol(m, 1e-10).rank == 3);
}

TEST_CASE("rank never decreases when rows are appended") {
  Rng rng(15);
  const ComplexMatrix top = rng.gaussian_complex(3, 6);
  const ComplexMatrix extra = rng.gaussian_complex(2, 6);
  ComplexMatrix stacked = ComplexMatrix::zeros(5, 6);
  stacked.set_block(0, 0, top);
  stacked.set_block(3, 0, extra);
  CHECK(rank_with_tol(stacked, 1e-10).rank >= rank_with_tol(top, 1e-10).rank);
}

TEST_CASE("kron satisfies the mixed-product identity") {
  Rng rng(16);
  const ComplexMatrix a = rng.gaussian_complex(3, 2);
  const ComplexMatrix c = rng.gaussian_complex(2, 3);
  const ComplexMatrix b = rng.gaussian_complex(2, 4);
  const ComplexMatrix d = rng.gaussian_complex(4, 2);
  CHECK(rel_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-12);
}

TEST_CASE("kron of diagonals is the diagonal of pairwise products") {
  const ComplexMatrix a = ComplexMatrix::diag({cplx(2, 0), cplx(3, 0)});
  const ComplexMatrix b = ComplexMatrix::diag({cplx(5, 0), cplx(7, 0)});
  const ComplexMatrix k = kron(a, b);
  CHECK(k(0, 0) == cplx(10, 0));
  CHECK(k(1, 1) == cplx(14, 0));
  CHECK(k(2, 2) == cplx(15, 0));
  CHECK(k(3, 3) == cplx(21, 0));
}

TEST_CASE("sequence DFT matches the direct sum and inverts") {
  Rng rng(17);
  const std::size_t big_l = 8;
  std::vector<ComplexMatrix> ks;
  for (std::size_t k = 0; k < big_l; ++k)
    ks.push_back(rng.gaussian_complex(2, 3));
  const std::vector<ComplexMatrix> hat = dft_sequence(ks, big_l);
  REQUIRE(hat.size() == big_l);
  for (std::size_t j = 0; j < big_l; ++j)
    CHECK(rel_diff(hat[j], naive_dft(ks, j)) < 1e-12);

  // Inverse transform: (1/L) sum_j hat[j] e^{+2pi i jk/L} recovers entry k.
  for (std::size_t k = 0; k < big_l; ++k) {
    ComplexMatrix back = ComplexMatrix::zeros(2, 3);
    for (std::size_t j = 0; j < big_l; ++j) {
      const cplx w = std::polar(1.0, 2.0 * std::numbers::pi *
                                         static_cast<double>(j * k) /
                                         static_cast<double>(big_l));
      back = back + w * hat[j];
    }
    back = cplx(1.0 / static_cast<double>(big_l), 0.0) * back;
    CHECK(rel_diff(back, ks[k]) < 1e-12);
  }
}

TEST_CASE("solve and inverse agree with a hand elimination") {
  const ComplexMatrix a = {{cplx(2, 0), cplx(1, 0)}, {cplx(1, 0), cplx(3, 0)}};
  const ComplexMatrix b = ComplexMatrix::col_vector({cplx(5, 0), cplx(10, 0)});
  const ComplexMatrix x = solve(a, b);
  CHECK(std::abs(x(0, 0) - cplx(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(x(1, 0) - cplx(3.0, 0.0)) < 1e-14);
  CHECK(rel_diff(a * inverse(a), ComplexMatrix::identity(2)) < 1e-14);
  ComplexMatrix sing = ComplexMatrix::zeros(2, 2);
  sing(0, 0) = cplx(1.0, 0.0);
  sing(1, 0) = cplx(1.0, 0.0);
  CHECK_THROWS_AS(inverse(sing), Error);
}

TEST_CASE("svd factors reconstruct and order descending") {
  Rng rng(18);
  const ComplexMatrix m = rng.gaussian_complex(5, 3);
  const SvdFactors f = svd_decompose(m);
  REQUIRE(f.sigma.size() == 3);
  CHECK(f.sigma[0] >= f.sigma[1]);
  CHECK(f.sigma[1] >= f.sigma[2]);
  std::vector<cplx> sd(f.sigma.begin(), f.sigma.end());
  CHECK(rel_diff(f.u * ComplexMatrix::diag(sd) * f.v.adjoint(), m) < 1e-12);
}

TEST_CASE("hermitian eigensolve returns ascending values and orthonormal Q") {
  Rng rng(19);
  const ComplexMatrix g = rng.gaussian_complex(4, 4);
  const ComplexMatrix h = g * g.adjoint() + ComplexMatrix::identity(4);
  const HermitianEig he = hermitian_eig(h);
  for (std::size_t i = 0; i + 1 < he.lambdas.size(); ++i)
    CHECK(he.lambdas[i] <= he.lambdas[i + 1]);
  CHECK(rel_diff(he.q.adjoint() * he.q, ComplexMatrix::identity(4)) < 1e-12);
  std::vector<cplx> lc(he.lambdas.begin(), he.lambdas.end());
  CHECK(rel_diff(he.q * ComplexMatrix::diag(lc) * he.q.adjoint(), h) < 1e-12);
}

TEST_CASE("gram log-determinant matches known singular values") {
  // diag(3, 2) stacked over zeros: sigma = (3, 2), log det(M^H M) = 2(ln3+ln2).
  ComplexMatrix m = ComplexMatrix::zeros(3, 2);
  m(0, 0) = cplx(3.0, 0.0);
  m(1, 1) = cplx(2.0, 0.0);
  CHECK(gram_logdet(m) == doctest::Approx(2.0 * (std::log(3.0) + std::log(2.0)))
                              .epsilon(1e-12));
  CHECK(gram_logdet(ComplexMatrix::zeros(3, 2)) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("null space basis spans exactly the annihilated directions") {
  // Row (1, 1, 0): kernel = span{(1,-1,0)/sqrt2, (0,0,1)}.
  ComplexMatrix m = ComplexMatrix::zeros(1, 3);
  m(0, 0) = cplx(1.0, 0.0);
  m(0, 1) = cplx(1.0, 0.0);
  const ComplexMatrix nb = null_space_basis(m, 1e-10, 1e-8);
  REQUIRE(nb.cols() == 2);
  CHECK(operator_norm(m * nb) < 1e-12);
  CHECK(rel_diff(nb.adjoint() * nb, ComplexMatrix::identity(2)) < 1e-12);
  // Dead map: everything is kernel.
  const ComplexMatrix dead =
      null_space_basis(cplx(1e-12, 0.0) * ComplexMatrix::identity(3), 1e-10,
                       1e-8);
  CHECK(dead.cols() == 3);
}
