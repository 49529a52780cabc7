#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "obskit/assignment.hpp"
#include "obskit/coupling.hpp"
#include "obskit/matcore.hpp"
#include "obskit/sampling.hpp"

using namespace obskit;

namespace {

CoupledParams random_params(Rng& rng, std::size_t m, std::size_t p) {
  CoupledParams params;
  params.q = rng.random_unitary(m);
  params.u = rng.random_unitary(m);
  params.p = p;
  params.lambdas = rng.distinct_lambdas(m * p, 0.4, 1.0, 1e-3);
  params.sel.resize(m);
  for (std::size_t j = 0; j < m; ++j) params.sel[j] = j * p;
  return params;
}

double spectrum_match_cost(const std::vector<cplx>& got,
                           const std::vector<cplx>& want) {
  const std::size_t n = got.size();
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = std::abs(got[i] - want[j]);
  return assignment_cost(cost, min_cost_assignment(cost));
}

ComplexMatrix selection_matrix(const std::vector<std::size_t>& sel,
                               std::size_t n) {
  ComplexMatrix s = ComplexMatrix::zeros(n, sel.size());
  for (std::size_t j = 0; j < sel.size(); ++j)
    s(sel[j], j) = cplx(1.0, 0.0);
  return s;
}

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t h = xs.size() / 2;
  return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

// Log-log slope of ys against 1..N by least squares.
double loglog_slope(const std::vector<double>& ys, std::size_t from) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t k = from; k < ys.size(); ++k) {
    const double lx = std::log(static_cast<double>(k + 1));
    const double ly = std::log(ys[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  const double c = static_cast<double>(cnt);
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

}  // namespace

TEST_CASE("built state map carries exactly the prescribed spectrum") {
  Rng rng(71);
  const CoupledParams params = random_params(rng, 4, 2);
  const ComplexMatrix a = build_a(params);
  CHECK(spectrum_match_cost(eigenvalues_only(a), params.lambdas) < 1e-8);

  // Identity frames: the construction collapses to the bare diagonal.
  CoupledParams plain = params;
  plain.q = ComplexMatrix::identity(4);
  plain.u = ComplexMatrix::identity(4);
  CHECK(rel_diff(build_a(plain), ComplexMatrix::diag(params.lambdas)) < 1e-12);
}

TEST_CASE("input map matches the explicit factored product") {
  Rng rng(72);
  const CoupledParams params = random_params(rng, 3, 2);
  const std::size_t n = params.n();
  std::vector<cplx> fs(n);
  for (std::size_t i = 0; i < n; ++i)
    fs[i] = cplx(std::sqrt(std::abs(params.lambdas[i])), 0.0);
  const ComplexMatrix expect =
      ComplexMatrix::diag(fs) *
      kron(params.u, ComplexMatrix::identity(params.p)) *
      selection_matrix(params.sel, n);
  CHECK(rel_diff(build_b(params), expect) < 1e-12);
}

TEST_CASE("identity weighting rejects the branch cut") {
  Rng rng(73);
  CoupledParams params = random_params(rng, 2, 1);
  params.lambdas = {cplx(0.5, 0.3), cplx(0.7, -0.2)};
  CHECK_NOTHROW(build_b(params, FMode::Identity));
  params.lambdas = {cplx(-0.5, 0.0), cplx(0.7, -0.2)};
  CHECK_THROWS_AS(build_b(params, FMode::Identity), Error);
  // Magnitude weighting accepts the same spectrum.
  CHECK_NOTHROW(build_b(params, FMode::AbsValue));
}

TEST_CASE("frame unitarity is enforced unless explicitly waived") {
  Rng rng(74);
  CoupledParams params = random_params(rng, 3, 1);
  params.q(0, 0) += cplx(0.01, 0.0);
  CHECK_THROWS_AS(build_a(params), Error);
  CHECK_NOTHROW(build_a(params, false));
}

TEST_CASE("diagonalized powers match iterated dense multiplication") {
  Rng rng(75);
  const CoupledParams params = random_params(rng, 3, 2);
  const ComplexMatrix a = build_a(params);
  CHECK(rel_diff(coupled_power(params, 0), ComplexMatrix::identity(6)) == 0.0);
  CHECK(rel_diff(coupled_power(params, 1), a) < 1e-12);
  CHECK(rel_diff(coupled_power(params, 2), dense_power(a, 2)) < 1e-10);
  CHECK(rel_diff(coupled_power(params, 64), dense_power(a, 64)) < 1e-8);
}

TEST_CASE("polar projection: unitary output, unitary fixed points") {
  Rng rng(76);
  const ComplexMatrix w = rng.random_unitary(4);
  CHECK(rel_diff(orthogonalize(w), w) < 1e-12);

  // W times a positive factor projects back onto W.
  const ComplexMatrix g = rng.gaussian_complex(4, 4);
  const ComplexMatrix h =
      g * g.adjoint() + cplx(4.0, 0.0) * ComplexMatrix::identity(4);
  const ComplexMatrix proj = orthogonalize(w * h);
  CHECK(rel_diff(proj, w) < 1e-10);
  CHECK(rel_diff(proj.adjoint() * proj, ComplexMatrix::identity(4)) < 1e-10);

  ComplexMatrix rank1 = ComplexMatrix::zeros(3, 3);
  rank1(0, 0) = cplx(1.0, 0.0);
  CHECK_THROWS_AS(orthogonalize(rank1), Error);
}

TEST_CASE("frame distance equals the alignment defect for orthogonal pairs") {
  // Rotating all 64 coordinate planes by 0.1 rad keeps the distance inside
  // the window where x/2 <= 1 <= (1 + 1e-3) x holds, i.e. the defect is
  // sandwiched between half the squared distance and its slightly inflated
  // square.
  const std::size_t m = 128;
  Rng rng(77);
  const ComplexMatrix a1 = rng.random_orthogonal(m);
  ComplexMatrix r = ComplexMatrix::zeros(m, m);
  const double th = 0.1;
  for (std::size_t b = 0; b < m / 2; ++b) {
    r(2 * b, 2 * b) = cplx(std::cos(th), 0.0);
    r(2 * b, 2 * b + 1) = cplx(-std::sin(th), 0.0);
    r(2 * b + 1, 2 * b) = cplx(std::sin(th), 0.0);
    r(2 * b + 1, 2 * b + 1) = cplx(std::cos(th), 0.0);
  }
  const ComplexMatrix a2 = a1 * r;
  const double dist = (a1 - a2).frobenius_norm();
  const double defect =
      (a2.adjoint() * a1 - ComplexMatrix::identity(m)).frobenius_norm();
  CHECK(defect == doctest::Approx(dist).epsilon(1e-10));
  CHECK(0.5 * dist * dist <= defect);
  CHECK(defect <= (1.0 + 1e-3) * dist * dist);
}

TEST_CASE("prescribed-decay traces decay at the prescribed rates") {
  Rng rng(78);
  CoupledParams params = random_params(rng, 4, 2);
  params.q = ComplexMatrix::identity(4);
  params.u = ComplexMatrix::identity(4);
  TrainConfig cfg;
  cfg.steps = 400;
  cfg.q_exponent = 0.75;
  cfg.synthetic = SyntheticDecay{};
  cfg.seed = 5;
  const TrainTrace trace =
      train_coupled(params, [](const CoupledParams&) { return 0.0; }, cfg);
  REQUIRE(trace.records.size() == 400);

  std::vector<double> da, db;
  for (const auto& rec : trace.records) {
    da.push_back(rec.da_norm);
    db.push_back(rec.db_norm);
    CHECK(rec.grad_q_norm == 0.0);
    CHECK(rec.grad_u_norm == 0.0);
    CHECK(rec.step_a == doctest::Approx(std::pow(rec.da_norm, 1.0 / 1.5)));
  }
  // State-map motion c/k^{2q}: slope -1.5; input-map motion c/k^q: slope
  // -0.75, measured on the tail where transients are gone.
  CHECK(loglog_slope(da, 100) == doctest::Approx(-1.5).epsilon(0.1));
  CHECK(loglog_slope(db, 100) == doctest::Approx(-0.75).epsilon(0.1));
}

TEST_CASE("growth diagnostic classifies the three powers correctly") {
  Rng rng(79);
  CoupledParams params = random_params(rng, 4, 2);
  params.q = ComplexMatrix::identity(4);
  params.u = ComplexMatrix::identity(4);
  TrainConfig cfg;
  cfg.steps = 1000;
  cfg.q_exponent = 0.75;
  cfg.synthetic = SyntheticDecay{};
  cfg.seed = 6;
  const TrainTrace trace =
      train_coupled(params, [](const CoupledParams&) { return 0.0; }, cfg);
  std::vector<double> da, db;
  for (const auto& rec : trace.records) {
    da.push_back(rec.da_norm);
    db.push_back(rec.db_norm);
  }

  // State motion k^{-2q}: the 1/2q power is harmonic (divergent), both
  // higher powers fall fast enough to settle.
  const std::vector<SeriesDiag> ad = robbins_monro_diagnostic(da, 0.75);
  REQUIRE(ad.size() == 3);
  CHECK(ad[0].classification == "divergent-like");
  CHECK(ad[1].classification == "convergent-like");
  CHECK(ad[2].classification == "convergent-like");

  // Input motion k^{-q}: only the 2/q power settles.
  const std::vector<SeriesDiag> bd = robbins_monro_diagnostic(db, 0.75);
  CHECK(bd[0].classification == "divergent-like");
  CHECK(bd[1].classification == "divergent-like");
  CHECK(bd[2].classification == "convergent-like");
}

TEST_CASE("growth diagnostic input validation") {
  CHECK_THROWS_AS(robbins_monro_diagnostic({1.0, -0.5}, 0.75), Error);
  CHECK_THROWS_AS(robbins_monro_diagnostic({1.0, 0.5}, 0.3), Error);
  CHECK_NOTHROW(robbins_monro_diagnostic({1.0, 0.0, 0.5}, 0.75));
}

TEST_CASE("coupled steps apply far smaller effective gradients than vanilla") {
  Rng rng(80);
  CoupledParams params = random_params(rng, 4, 1);
  CoupledParams target_params = random_params(rng, 4, 1);
  target_params.lambdas = params.lambdas;
  const ComplexMatrix target = build_a(target_params, false);
  const CoupledLossFn loss = [target](const CoupledParams& p) {
    const ComplexMatrix d = build_a(p, false) - target;
    return d.frobenius_norm() * d.frobenius_norm();
  };
  TrainConfig cfg;
  cfg.steps = 40;
  cfg.lr = 0.05;
  cfg.seed = 7;

  const TrainTrace coupled = train_coupled(params, loss, cfg);
  const TrainTrace vanilla = train_vanilla(params, loss, cfg);

  std::vector<double> coupled_applied, vanilla_applied;
  for (const auto& rec : coupled.records)
    coupled_applied.push_back(rec.step_a * rec.grad_q_norm);
  for (const auto& rec : vanilla.records) {
    CHECK(rec.step_a == 1.0);
    CHECK(rec.step_b == 1.0);
    vanilla_applied.push_back(rec.step_a * rec.grad_q_norm);
  }
  CHECK(median_of(coupled_applied) < 0.1 * median_of(vanilla_applied));
}

TEST_CASE("unconstrained probe sees the expansion the bound predicts") {
  CoupledParams params;
  params.q = ComplexMatrix::identity(4);
  params.u = ComplexMatrix::identity(4);
  params.p = 1;
  params.lambdas = {cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(4, 0)};
  params.sel = {0, 1, 2, 3};

  std::vector<double> lam_real = {1.0, 2.0, 3.0, 4.0};
  CHECK(lipschitz_lower_bound(lam_real) ==
        doctest::Approx(1.104).epsilon(1e-2));

  Rng rng(81);
  const ComplexMatrix target =
      build_a(random_params(rng, 4, 1), false);
  const CoupledLossFn loss = [target](const CoupledParams& p) {
    const ComplexMatrix d = build_a(p, false) - target;
    return d.frobenius_norm() * d.frobenius_norm();
  };
  TrainConfig cfg;
  cfg.steps = 30;
  cfg.lr = 0.002;
  cfg.seed = 8;
  const TrainTrace trace = train_vanilla(params, loss, cfg);
  REQUIRE(trace.expansion_ratios.size() == 30);
  for (double r : trace.expansion_ratios) CHECK(r > 1.0);
}

TEST_CASE("zero loss freezes both trainers") {
  Rng rng(82);
  const CoupledParams params = random_params(rng, 3, 2);
  TrainConfig cfg;
  cfg.steps = 10;
  cfg.seed = 9;
  const CoupledLossFn zero = [](const CoupledParams&) { return 0.0; };

  const TrainTrace coupled = train_coupled(params, zero, cfg);
  for (const auto& rec : coupled.records) {
    CHECK(rec.da_norm == 0.0);
    CHECK(rec.step_a == 0.0);
  }
  CHECK(rel_diff(coupled.a_final, build_a(params)) < 1e-12);

  const TrainTrace vanilla = train_vanilla(params, zero, cfg);
  CHECK(rel_diff(vanilla.params_final.q, params.q) == 0.0);
  CHECK(rel_diff(vanilla.params_final.u, params.u) == 0.0);
}

TEST_CASE("checkpoints keep the frames unitary and the run healthy") {
  Rng rng(83);
  CoupledParams params = random_params(rng, 3, 1);
  const ComplexMatrix target = build_a(random_params(rng, 3, 1), false);
  const CoupledLossFn loss = [target](const CoupledParams& p) {
    const ComplexMatrix d = build_a(p, false) - target;
    return d.frobenius_norm() * d.frobenius_norm();
  };
  TrainConfig cfg;
  cfg.steps = 24;
  cfg.checkpoint.every = 6;
  cfg.checkpoint.reselect_s = true;
  cfg.seed = 10;
  const TrainTrace trace = train_coupled(params, loss, cfg);
  REQUIRE(trace.records.size() == 24);
  CHECK_NOTHROW(trace.params_final.validate());
  // The loss never jumps above its starting value on this convex target.
  for (const auto& rec : trace.records)
    CHECK(rec.loss <= trace.records.front().loss * 1.5 + 1e-9);
}

TEST_CASE("spectral factor derivative matches the hand values") {
  const ComplexMatrix b = ComplexMatrix::diag({cplx(1, 0), cplx(4, 0)});
  const Jacobian4 jac = eig_jacobian(b);
  CHECK(jac.at(0, 0, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(jac.at(1, 0, 1, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  // The root's own diagonal derivative at the larger eigenvalue: 1/(2*2).
  CHECK(jac.at(1, 1, 1, 1) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("spectral factor derivative matches symmetric finite differences") {
  Rng rng(84);
  const std::size_t n = 4;
  ComplexMatrix g = rng.gaussian_real(n, n);
  ComplexMatrix b = g * g.transpose() +
                    cplx(static_cast<double>(n), 0.0) *
                        ComplexMatrix::identity(n);
  // Symmetrize exactly against round-off.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) b(j, i) = b(i, j);

  const Jacobian4 jac = eig_jacobian(b);
  const double h = 1e-5;
  const auto root_of = [](const ComplexMatrix& m) {
    const SymmetricEig se = sym_eig_gauged(m);
    std::vector<cplx> rt(se.lambdas.size());
    for (std::size_t i = 0; i < rt.size(); ++i)
      rt[i] = cplx(std::sqrt(se.lambdas[i]), 0.0);
    return se.q * ComplexMatrix::diag(rt);
  };

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k; l < n; ++l) {
      ComplexMatrix bp = b, bm = b;
      bp(k, l) += cplx(h, 0.0);
      bm(k, l) -= cplx(h, 0.0);
      if (k != l) {
        bp(l, k) += cplx(h, 0.0);
        bm(l, k) -= cplx(h, 0.0);
      }
      const ComplexMatrix da =
          cplx(1.0 / (2.0 * h), 0.0) * (root_of(bp) - root_of(bm));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double predicted =
              k == l ? jac.at(i, j, k, k)
                     : jac.at(i, j, k, l) + jac.at(i, j, l, k);
          CHECK(std::abs(da(i, j).real() - predicted) <
                5e-4 * (1.0 + std::abs(predicted)));
        }
    }
  }
}

TEST_CASE("spectral factor derivative rejects unusable spectra") {
  CHECK_THROWS_AS(eig_jacobian(ComplexMatrix::identity(3)), Error);
  CHECK_THROWS_AS(
      eig_jacobian(ComplexMatrix::diag({cplx(-1, 0), cplx(2, 0)})), Error);
}

TEST_CASE("derivative norm dominates its closed-form lower bound") {
  Rng rng(85);
  for (int t = 0; t < 5; ++t) {
    const std::size_t n = 4;
    ComplexMatrix g = rng.gaussian_real(n, n);
    ComplexMatrix b = g * g.transpose() +
                      cplx(static_cast<double>(n), 0.0) *
                          ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) b(j, i) = b(i, j);
    const std::vector<double> lam = hermitian_eigenvalues(b);
    CHECK(eig_jacobian(b).frobenius_norm() >=
          lipschitz_lower_bound(lam) - 1e-9);
  }
}

TEST_CASE("lower bound: hand value, growth, and degeneracy") {
  CHECK(lipschitz_lower_bound({1.0, 2.0}) ==
        doctest::Approx(std::sqrt(3.0) - std::sqrt(0.375)).epsilon(1e-12));
  // Widening ladders of eigenvalues push the bound up.
  double prev = 0.0;
  for (std::size_t n : {std::size_t{4}, std::size_t{8}, std::size_t{16}}) {
    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = static_cast<double>(i + 1);
    const double bound = lipschitz_lower_bound(lam);
    CHECK(bound > prev);
    prev = bound;
  }
  CHECK_THROWS_AS(lipschitz_lower_bound({2.0, 2.0}), Error);
  CHECK_THROWS_AS(lipschitz_lower_bound({2.0}), Error);
}

TEST_CASE("gauged symmetric eigenvectors are finite-difference stable") {
  Rng rng(86);
  const std::size_t n = 3;
  ComplexMatrix g = rng.gaussian_real(n, n);
  ComplexMatrix b = g * g.transpose() +
                    cplx(3.0, 0.0) * ComplexMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) b(j, i) = b(i, j);
  const SymmetricEig se = sym_eig_gauged(b);
  ComplexMatrix bp = b;
  bp(0, 1) += cplx(1e-7, 0.0);
  bp(1, 0) += cplx(1e-7, 0.0);
  const SymmetricEig sep = sym_eig_gauged(bp);
  // Without the sign gauge a column could flip wholesale; with it the motion
  // is O(perturbation / gap).
  CHECK((se.q - sep.q).frobenius_norm() < 1e-4);
  CHECK_THROWS_AS(sym_eig_gauged(rng.gaussian_complex(3, 3)), Error);
}
