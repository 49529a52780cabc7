#include "obskit/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "obskit/matcore.hpp"
#include "obskit/optimize.hpp"
#include "obskit/sampling.hpp"

namespace obskit {

namespace {

constexpr double kOrthTol = 1e-8;

void check_sel(const std::vector<std::size_t>& sel, std::size_t n,
               std::size_t m) {
  if (sel.size() != m) raise(Errc::ShapeMismatch, "sel must have m entries");
  std::vector<bool> seen(n, false);
  for (std::size_t s : sel) {
    if (s >= n) raise(Errc::InvalidArgument, "sel index out of range");
    if (seen[s]) raise(Errc::InvalidArgument, "sel indices must be distinct");
    seen[s] = true;
  }
}

double unitary_deviation(const ComplexMatrix& q) {
  const std::size_t m = q.rows();
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      cplx dot(0.0, 0.0);
      for (std::size_t r = 0; r < m; ++r) dot += std::conj(q(r, i)) * q(r, j);
      if (i == j) dot -= cplx(1.0, 0.0);
      worst = std::max(worst, std::abs(dot));
    }
  return worst;
}

cplx f_sqrt(const cplx& lambda, FMode mode) {
  if (mode == FMode::AbsValue) return cplx(std::sqrt(std::abs(lambda)), 0.0);
  if (lambda.real() < 0.0 &&
      std::abs(lambda.imag()) <= 1e-12 * std::abs(lambda))
    raise(Errc::BadF, "identity f hits the square-root branch cut");
  return std::sqrt(lambda);
}

std::vector<cplx> matrix_to_cvec(const ComplexMatrix& m) {
  std::vector<cplx> out;
  out.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

ComplexMatrix cvec_to_matrix(const std::vector<cplx>& v, std::size_t rows,
                             std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = v[i * cols + j];
  return m;
}

}  // namespace

void CoupledParams::validate(bool require_orthogonal) const {
  if (!q.is_square() || !u.is_square() || q.rows() != u.rows() || q.rows() == 0)
    raise(Errc::ShapeMismatch, "Q and U must be same-size square matrices");
  if (p == 0) raise(Errc::InvalidArgument, "p must be >= 1");
  if (lambdas.size() != p * q.rows())
    raise(Errc::ShapeMismatch, "need n = p * m eigenvalues");
  q.check_finite("Q");
  u.check_finite("U");
  for (const auto& l : lambdas)
    if (!std::isfinite(l.real()) || !std::isfinite(l.imag()))
      raise(Errc::NonFinite, "non-finite eigenvalue");
  check_sel(sel, lambdas.size(), q.rows());
  if (require_orthogonal) {
    if (unitary_deviation(q) > kOrthTol)
      raise(Errc::OrthogonalityViolated, "Q^H Q deviates from identity");
    if (unitary_deviation(u) > kOrthTol)
      raise(Errc::OrthogonalityViolated, "U^H U deviates from identity");
  }
}

ComplexMatrix build_a(const CoupledParams& params, bool check_orthogonality) {
  params.validate(check_orthogonality);
  const std::size_t n = params.n();
  const ComplexMatrix eye_p = ComplexMatrix::identity(params.p);
  const ComplexMatrix kq = kron(params.q, eye_p);
  const ComplexMatrix ku = kron(params.u, eye_p);
  const ComplexMatrix d = ComplexMatrix::diag(params.lambdas);
  ComplexMatrix inner = ku.adjoint() * d * ku;
  (void)n;
  return kq.adjoint() * inner * kq;
}

ComplexMatrix build_b(const CoupledParams& params, FMode f_mode,
                      bool check_orthogonality) {
  params.validate(check_orthogonality);
  const std::size_t n = params.n(), m = params.m(), p = params.p;
  ComplexMatrix b(n, m);
  // Column sel[j] of (U (x) I_p) has entries U[a, sel[j]/p] at rows a*p + d
  // with d = sel[j] mod p.
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t s = params.sel[j];
    const std::size_t bcol = s / p, d = s % p;
    for (std::size_t a = 0; a < m; ++a) {
      const std::size_t row = a * p + d;
      b(row, j) = f_sqrt(params.lambdas[row], f_mode) * params.u(a, bcol);
    }
  }
  return b;
}

ComplexMatrix orthogonalize(const ComplexMatrix& p_raw) {
  if (!p_raw.is_square() || p_raw.rows() == 0)
    raise(Errc::ShapeMismatch, "orthogonalize needs a square matrix");
  p_raw.check_finite("orthogonalize input");
  const SvdFactors f = svd_decompose(p_raw);
  if (f.sigma.back() <= 1e-12 * f.sigma.front())
    raise(Errc::RankDeficient, "polar factor of a rank-deficient matrix");
  return f.u * f.v.adjoint();
}

ComplexMatrix coupled_power(const CoupledParams& params, std::size_t k) {
  params.validate(true);
  const std::size_t n = params.n(), m = params.m(), p = params.p;
  if (k == 0) return ComplexMatrix::identity(n);
  const ComplexMatrix w = params.u * params.q;
  std::vector<cplx> lpow(n);
  for (std::size_t i = 0; i < n; ++i)
    lpow[i] = std::pow(params.lambdas[i], static_cast<double>(k));
  ComplexMatrix out = ComplexMatrix::zeros(n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t c = 0; c < p; ++c) {
        cplx acc(0.0, 0.0);
        for (std::size_t t = 0; t < m; ++t)
          acc += std::conj(w(t, i)) * lpow[t * p + c] * w(t, j);
        out(i * p + c, j * p + c) = acc;
      }
  return out;
}

ComplexMatrix dense_power(const ComplexMatrix& a, std::size_t k) {
  if (!a.is_square()) raise(Errc::ShapeMismatch, "power of a non-square matrix");
  ComplexMatrix out = ComplexMatrix::identity(a.rows());
  for (std::size_t i = 0; i < k; ++i) out = out * a;
  return out;
}

void TrainConfig::validate() const {
  if (!(lr > 0.0)) raise(Errc::InvalidArgument, "lr must be > 0");
  if (!(fd_step > 0.0)) raise(Errc::InvalidArgument, "fd_step must be > 0");
  if (!(q_exponent >= 0.5 && q_exponent <= 1.0))
    raise(Errc::InvalidArgument, "q must lie in [1/2, 1]");
}

namespace {

// Fixed-frame phase parameterization: Q = V diag(d / |d|) V^H stays exactly
// unitary while d roams C^m. V comes from diagonalizing the incoming unitary
// (a normal matrix) and is only rebuilt at checkpoints.
struct PhaseParam {
  ComplexMatrix v;
  std::vector<cplx> d;
};

PhaseParam phase_parameterize(const ComplexMatrix& q) {
  const Eigendecomposition ed = eig(q);
  PhaseParam pp;
  pp.v = orthogonalize(ed.v);
  const ComplexMatrix g = pp.v.adjoint() * q * pp.v;
  double off = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (i != j) off += std::norm(g(i, j));
  if (std::sqrt(off) > 1e-8 * std::max(1.0, q.frobenius_norm()))
    raise(Errc::PreconditionViolated, "matrix does not diagonalize unitarily");
  pp.d.resize(g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i) pp.d[i] = g(i, i);
  return pp;
}

ComplexMatrix phase_rebuild(const ComplexMatrix& v, const std::vector<cplx>& d) {
  std::vector<cplx> unit(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double mod = std::abs(d[i]);
    if (mod < 1e-8)
      raise(Errc::PreconditionViolated, "phase coordinate collapsed to zero");
    unit[i] = d[i] / mod;
  }
  return v * ComplexMatrix::diag(unit) * v.adjoint();
}

double slice_norm(const std::vector<double>& grad, const SliceSpec& s) {
  double acc = 0.0;
  for (std::size_t i = s.offset; i < s.offset + s.count; ++i)
    acc += grad[i] * grad[i];
  return std::sqrt(acc);
}

std::vector<double> unit_direction(Rng& rng, std::size_t count) {
  std::vector<double> w(count);
  double nrm = 0.0;
  for (double& x : w) {
    x = rng.normal();
    nrm += x * x;
  }
  nrm = std::sqrt(nrm);
  if (nrm == 0.0) { w.assign(count, 0.0); if (count) { w[0] = 1.0; } return w; }
  for (double& x : w) x /= nrm;
  return w;
}

std::vector<cplx> unit_direction_complex(Rng& rng, std::size_t count) {
  std::vector<cplx> w(count);
  double nrm = 0.0;
  for (auto& z : w) {
    z = rng.normal_complex();
    nrm += std::norm(z);
  }
  nrm = std::sqrt(nrm);
  for (auto& z : w) z /= nrm;
  return w;
}

TrainTrace train_synthetic(const CoupledParams& params0, const CoupledLossFn& loss_fn,
                           const TrainConfig& cfg) {
  const SyntheticDecay syn = *cfg.synthetic;
  const std::size_t m = params0.m(), n = params0.n();
  const double q = cfg.q_exponent;

  Rng rng(cfg.seed ^ 0x53594e5445435459ull);
  const std::vector<double> w_q = unit_direction(rng, m);
  const std::vector<double> w_b = unit_direction(rng, m);
  const std::vector<cplx> w_a = unit_direction_complex(rng, n);

  std::vector<double> phi(m, 0.0), theta(m, 0.0);
  CoupledParams params = params0;
  params.q = ComplexMatrix::identity(m);
  params.u = ComplexMatrix::identity(m);
  params.validate(true);

  TrainTrace trace;
  ComplexMatrix prev_a = build_a(params, false);
  ComplexMatrix prev_b = build_b(params, cfg.f_mode, false);
  ComplexMatrix a_slow = prev_a, b_slow = prev_b;

  for (std::size_t k = 1; k <= cfg.steps; ++k) {
    const double rq = syn.c_q / std::pow(static_cast<double>(k), q);
    const double rb = syn.c_b / std::pow(static_cast<double>(k), q);
    const double ra = syn.c_a / std::pow(static_cast<double>(k), 2.0 * q);
    for (std::size_t i = 0; i < m; ++i) {
      phi[i] += rq * w_q[i];
      theta[i] += rb * w_b[i];
      params.q(i, i) = std::polar(1.0, phi[i]);
      params.u(i, i) = std::polar(1.0, theta[i]);
    }
    for (std::size_t i = 0; i < n; ++i) params.lambdas[i] += ra * w_a[i];

    const ComplexMatrix fast_a = build_a(params, false);
    const ComplexMatrix fast_b = build_b(params, cfg.f_mode, false);
    const double da = (fast_a - prev_a).frobenius_norm();
    const double db = (fast_b - prev_b).frobenius_norm();
    const double step_a = std::pow(da, 1.0 / (2.0 * q));
    const double step_b = std::pow(db, 1.0 / q);
    if (cfg.literal_update) {
      a_slow = a_slow + step_a * fast_a;
      b_slow = b_slow + step_b * fast_b;
    } else {
      const double sa = std::min(step_a, 1.0), sb = std::min(step_b, 1.0);
      a_slow = (1.0 - sa) * a_slow + sa * fast_a;
      b_slow = (1.0 - sb) * b_slow + sb * fast_b;
    }
    trace.records.push_back({k, loss_fn(params), da, db, step_a, step_b, 0.0, 0.0});
    prev_a = fast_a;
    prev_b = fast_b;
  }
  trace.a_final = a_slow;
  trace.b_final = b_slow;
  trace.params_final = params;
  return trace;
}

}  // namespace

TrainTrace train_coupled(const CoupledParams& params0,
                         const CoupledLossFn& loss_fn, const TrainConfig& cfg) {
  cfg.validate();
  params0.validate(true);
  if (cfg.synthetic) return train_synthetic(params0, loss_fn, cfg);

  const std::size_t m = params0.m();
  const double q = cfg.q_exponent;

  PhaseParam pq = phase_parameterize(params0.q);
  PhaseParam pu = phase_parameterize(params0.u);
  CoupledParams params = params0;

  ParamVector x;
  x.append_complex("dq", pq.d);
  x.append_complex("du", pu.d);
  x.append_complex("lam", params0.lambdas);
  x.validate();

  const auto rebuild = [&](const std::vector<double>& values) {
    ParamVector probe = x;
    probe.values = values;
    CoupledParams out = params;
    out.q = phase_rebuild(pq.v, probe.complex_slice("dq"));
    out.u = phase_rebuild(pu.v, probe.complex_slice("du"));
    out.lambdas = probe.complex_slice("lam");
    return out;
  };
  const LossFn flat_loss = [&](const std::vector<double>& values) {
    return loss_fn(rebuild(values));
  };

  TrainTrace trace;
  // Both sides of every motion measurement go through the same phase
  // reconstruction, so an untouched coordinate vector yields motion 0 exactly.
  params = rebuild(x.values);
  ComplexMatrix prev_a = build_a(params, false);
  ComplexMatrix prev_b = build_b(params, cfg.f_mode, false);
  ComplexMatrix a_slow = prev_a, b_slow = prev_b;
  double initial_loss = -1.0;

  for (std::size_t k = 1; k <= cfg.steps; ++k) {
    const double f = flat_loss(x.values);
    if (!std::isfinite(f)) raise(Errc::NonFinite, "loss not finite");
    if (k == 1) initial_loss = f;
    if (initial_loss > 0.0 && f > 1e6 * initial_loss)
      raise(Errc::DivergenceDetected, "loss exceeded 1e6x initial value");

    const std::vector<double> grad = fd_gradient(flat_loss, x.values, cfg.fd_step);
    const double gq = slice_norm(grad, x.slice("dq"));
    const double gu = slice_norm(grad, x.slice("du"));
    for (std::size_t i = 0; i < x.values.size(); ++i)
      x.values[i] -= cfg.lr * grad[i];

    if (cfg.checkpoint.every > 0 && k % cfg.checkpoint.every == 0) {
      // Refresh the frames: re-diagonalize the current factors so the phase
      // coordinates return to unit modulus.
      pq = phase_parameterize(phase_rebuild(pq.v, x.complex_slice("dq")));
      pu = phase_parameterize(phase_rebuild(pu.v, x.complex_slice("du")));
      x.set_complex("dq", pq.d);
      x.set_complex("du", pu.d);
      if (cfg.checkpoint.reselect_s) {
        CoupledParams cand = rebuild(x.values);
        for (std::size_t j = 0; j < m; ++j) {
          std::size_t best = cand.sel[j];
          double best_loss = loss_fn(cand);
          for (std::size_t c = 0; c < cand.n(); ++c) {
            bool used = false;
            for (std::size_t o = 0; o < m; ++o)
              if (o != j && cand.sel[o] == c) used = true;
            if (used || c == best) continue;
            CoupledParams alt = cand;
            alt.sel[j] = c;
            const double fl = loss_fn(alt);
            if (fl < best_loss) {
              best_loss = fl;
              best = c;
            }
          }
          cand.sel[j] = best;
        }
        params.sel = cand.sel;
      }
    }

    params = rebuild(x.values);
    const ComplexMatrix fast_a = build_a(params, false);
    const ComplexMatrix fast_b = build_b(params, cfg.f_mode, false);
    const double da = (fast_a - prev_a).frobenius_norm();
    const double db = (fast_b - prev_b).frobenius_norm();
    const double step_a = std::pow(da, 1.0 / (2.0 * q));
    const double step_b = std::pow(db, 1.0 / q);
    if (cfg.literal_update) {
      a_slow = a_slow + step_a * fast_a;
      b_slow = b_slow + step_b * fast_b;
    } else {
      const double sa = std::min(step_a, 1.0), sb = std::min(step_b, 1.0);
      a_slow = (1.0 - sa) * a_slow + sa * fast_a;
      b_slow = (1.0 - sb) * b_slow + sb * fast_b;
    }
    trace.records.push_back({k, f, da, db, step_a, step_b, gq, gu});
    prev_a = fast_a;
    prev_b = fast_b;
  }
  trace.a_final = a_slow;
  trace.b_final = b_slow;
  trace.params_final = params;
  return trace;
}

TrainTrace train_vanilla(const CoupledParams& params0,
                         const CoupledLossFn& loss_fn, const TrainConfig& cfg) {
  cfg.validate();
  params0.validate(false);
  const std::size_t m = params0.m();

  ParamVector x;
  x.append_complex("q", matrix_to_cvec(params0.q));
  x.append_complex("u", matrix_to_cvec(params0.u));
  x.append_complex("lam", params0.lambdas);
  x.validate();

  CoupledParams params = params0;
  const auto rebuild = [&](const std::vector<double>& values) {
    ParamVector probe = x;
    probe.values = values;
    CoupledParams out = params;
    out.q = cvec_to_matrix(probe.complex_slice("q"), m, m);
    out.u = cvec_to_matrix(probe.complex_slice("u"), m, m);
    out.lambdas = probe.complex_slice("lam");
    return out;
  };
  const LossFn flat_loss = [&](const std::vector<double>& values) {
    return loss_fn(rebuild(values));
  };

  Rng probe_rng(cfg.seed ^ 0x50524f4245564543ull);
  TrainTrace trace;
  ComplexMatrix prev_a = build_a(params, false);
  ComplexMatrix prev_b = build_b(params, cfg.f_mode, false);
  double initial_loss = -1.0;

  for (std::size_t k = 1; k <= cfg.steps; ++k) {
    const double f = flat_loss(x.values);
    if (!std::isfinite(f)) raise(Errc::NonFinite, "loss not finite");
    if (k == 1) initial_loss = f;
    if (initial_loss > 0.0 && f > 1e6 * initial_loss)
      raise(Errc::DivergenceDetected, "loss exceeded 1e6x initial value");

    const std::vector<double> grad = fd_gradient(flat_loss, x.values, cfg.fd_step);
    const double gq = slice_norm(grad, x.slice("q"));
    const double gu = slice_norm(grad, x.slice("u"));
    for (std::size_t i = 0; i < x.values.size(); ++i)
      x.values[i] -= cfg.lr * grad[i];

    params = rebuild(x.values);
    const ComplexMatrix fast_a = build_a(params, false);
    const ComplexMatrix fast_b = build_b(params, cfg.f_mode, false);
    const double da = (fast_a - prev_a).frobenius_norm();
    const double db = (fast_b - prev_b).frobenius_norm();

    // Expansion probe: a small random (dQ, dU) perturbation with Lambda and
    // sel held fixed, against the induced (dA, dB) motion.
    const double eps =
        1e-6 * (1.0 + std::max(params.q.frobenius_norm(),
                               params.u.frobenius_norm()));
    const ComplexMatrix dq = probe_rng.gaussian_complex(m, m);
    const ComplexMatrix du = probe_rng.gaussian_complex(m, m);
    CoupledParams bumped = params;
    bumped.q = params.q + eps * dq;
    bumped.u = params.u + eps * du;
    const double d_map =
        std::hypot((build_a(bumped, false) - fast_a).frobenius_norm(),
                   (build_b(bumped, cfg.f_mode, false) - fast_b).frobenius_norm());
    const double d_param =
        eps * std::hypot(dq.frobenius_norm(), du.frobenius_norm());
    trace.expansion_ratios.push_back(d_param > 0.0 ? d_map / d_param : 0.0);

    trace.records.push_back({k, f, da, db, 1.0, 1.0, gq, gu});
    prev_a = fast_a;
    prev_b = fast_b;
  }
  trace.a_final = prev_a;
  trace.b_final = prev_b;
  trace.params_final = params;
  return trace;
}

namespace {

SeriesDiag classify_series(const std::vector<double>& xs, double exponent) {
  SeriesDiag diag;
  diag.exponent = exponent;
  const std::size_t n = xs.size();
  std::vector<double> cum(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::pow(xs[i], exponent);
    cum[i] = acc;
  }
  diag.partial_sum = acc;
  const auto window_sum = [&](std::size_t w) {
    if (n == 0) return 0.0;
    if (n <= w) return cum[n - 1];
    return cum[n - 1] - cum[n - 1 - w];
  };
  diag.tail_window100 = window_sum(100);
  diag.increment10 = window_sum(10);

  // Least-squares S_n ~ a + b ln n over the last three quarters.
  const std::size_t start = std::max<std::size_t>(n / 4, 1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (std::size_t i = start; i < n; ++i) {
    const double lx = std::log(static_cast<double>(i + 1));
    sx += lx;
    sy += cum[i];
    sxx += lx * lx;
    sxy += lx * cum[i];
    cnt += 1.0;
  }
  if (cnt >= 3.0) {
    const double denom = cnt * sxx - sx * sx;
    if (std::abs(denom) > 1e-30) {
      diag.lnfit_slope = (cnt * sxy - sx * sy) / denom;
      const double a0 = (sy - diag.lnfit_slope * sx) / cnt;
      double ss_res = 0.0, ss_tot = 0.0;
      const double mean = sy / cnt;
      for (std::size_t i = start; i < n; ++i) {
        const double lx = std::log(static_cast<double>(i + 1));
        const double pred = a0 + diag.lnfit_slope * lx;
        ss_res += (cum[i] - pred) * (cum[i] - pred);
        ss_tot += (cum[i] - mean) * (cum[i] - mean);
      }
      diag.lnfit_r2 = ss_tot > 1e-30 ? 1.0 - ss_res / ss_tot : 1.0;
    }
  }

  if (diag.increment10 <= 1e-6) {
    diag.classification = "convergent-like";
  } else if ((diag.lnfit_r2 >= 0.99 && diag.lnfit_slope > 0.0) ||
             diag.increment10 >= 1e-3) {
    diag.classification = "divergent-like";
  } else {
    diag.classification = "inconclusive";
  }
  return diag;
}

}  // namespace

std::vector<SeriesDiag> robbins_monro_diagnostic(
    const std::vector<double>& step_norms, double q_exponent) {
  if (!(q_exponent >= 0.5 && q_exponent <= 1.0))
    raise(Errc::InvalidArgument, "q must lie in [1/2, 1]");
  for (double x : step_norms)
    if (!std::isfinite(x) || x < 0.0)
      raise(Errc::PreconditionViolated, "step norms must be finite and >= 0");
  return {classify_series(step_norms, 1.0 / (2.0 * q_exponent)),
          classify_series(step_norms, 1.0 / q_exponent),
          classify_series(step_norms, 2.0 / q_exponent)};
}

SymmetricEig sym_eig_gauged(const ComplexMatrix& b) {
  if (!b.is_square() || b.rows() == 0)
    raise(Errc::ShapeMismatch, "needs a square matrix");
  b.check_finite("symmetric eig input");
  const double scale = std::max(1.0, b.max_abs());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      if (std::abs(b(i, j).imag()) > 1e-12 * scale)
        raise(Errc::PreconditionViolated, "matrix must be real");
      if (std::abs(b(i, j) - b(j, i)) > 1e-10 * scale)
        raise(Errc::PreconditionViolated, "matrix must be symmetric");
    }
  const HermitianEig he = hermitian_eig(b);
  SymmetricEig out;
  out.q = he.q;
  out.lambdas = he.lambdas;
  for (std::size_t j = 0; j < out.q.cols(); ++j) {
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < out.q.rows(); ++i) {
      const double a = std::abs(out.q(i, j));
      if (a > best) {
        best = a;
        pivot = i;
      }
    }
    if (out.q(pivot, j).real() < 0.0)
      for (std::size_t i = 0; i < out.q.rows(); ++i)
        out.q(i, j) = -out.q(i, j);
  }
  return out;
}

double Jacobian4::frobenius_norm() const {
  double acc = 0.0;
  for (double v : data) acc += v * v;
  return std::sqrt(acc);
}

Jacobian4 eig_jacobian(const ComplexMatrix& b) {
  const SymmetricEig se = sym_eig_gauged(b);
  const std::size_t n = b.rows();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (se.lambdas[i + 1] - se.lambdas[i] < 1e-8)
      raise(Errc::DegenerateSpectrum, "eigenvalue gap below 1e-8");
  for (double l : se.lambdas)
    if (l <= 0.0) raise(Errc::NonPositiveEigenvalue, "needs positive spectrum");

  const auto qr = [&](std::size_t i, std::size_t j) {
    return se.q(i, j).real();
  };
  Jacobian4 jac;
  jac.n = n;
  jac.data.assign(n * n * n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double sq = std::sqrt(se.lambdas[j]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          double first = 0.0;
          for (std::size_t p = 0; p < n; ++p) {
            if (p == j) continue;
            first += qr(i, p) * qr(k, p) * qr(l, j) /
                     (se.lambdas[j] - se.lambdas[p]);
          }
          jac.at(i, j, k, l) = sq * first +
                               qr(i, j) * qr(k, j) * qr(l, j) / (2.0 * sq);
        }
  }
  return jac;
}

double lipschitz_lower_bound(const std::vector<double>& lambdas) {
  const std::size_t n = lambdas.size();
  if (n < 2) raise(Errc::DegenerateSpectrum, "needs at least two eigenvalues");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0,
         inv = 0.0;
  for (double l : lambdas) {
    if (!(l > 0.0)) raise(Errc::NonPositiveEigenvalue, "needs positive spectrum");
    lo = std::min(lo, l);
    hi = std::max(hi, l);
    sum += l;
    inv += 1.0 / (4.0 * l);
  }
  const double gap = hi - lo;
  if (gap == 0.0) raise(Errc::DegenerateSpectrum, "all eigenvalues equal");
  return std::sqrt(static_cast<double>(n - 1) * sum / (gap * gap)) -
         std::sqrt(inv);
}

}  // namespace obskit
