#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "obskit/coupling.hpp"
#include "obskit/fourier.hpp"
#include "obskit/json_io.hpp"
#include "obskit/matcore.hpp"
#include "obskit/observability.hpp"
#include "obskit/optimize.hpp"
#include "obskit/permutation.hpp"
#include "obskit/sampling.hpp"
#include "obskit/ssm.hpp"
#include "obskit/vandermonde.hpp"

namespace {

using nlohmann::json;
using namespace obskit;

constexpr const char* kVersion = "0.1.0";

struct Opts {
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::vector<double> margins;
  std::size_t n = 6;
  std::size_t m = 3;
  std::size_t big_l = 16;
  double delta = 0.5;
  std::size_t trials = 50;
  std::size_t steps = 500;
  double lr = 0.05;
  double q = 0.75;
  std::string out = ".";

  double margin(std::size_t i) const {
    if (i < margins.size()) return margins[i];
    return kDefaultMargin;
  }
};

void add_common_flags(CLI::App* cmd, Opts& o) {
  cmd->add_option("--seed", o.seed, "master RNG seed");
  cmd->add_option("--tol", o.tol, "rank tolerance");
  cmd->add_option("--margin", o.margins, "loss margin, repeatable per term");
  cmd->add_option("--n", o.n, "state dimension");
  cmd->add_option("--m", o.m, "output dimension");
  cmd->add_option("--L", o.big_l, "sequence length");
  cmd->add_option("--delta", o.delta, "discretization step");
  cmd->add_option("--trials", o.trials, "trial count");
  cmd->add_option("--steps", o.steps, "descent steps");
  cmd->add_option("--lr", o.lr, "learning rate");
  cmd->add_option("--q", o.q, "step-size exponent in [1/2, 1]");
  cmd->add_option("--out", o.out, "output directory");
}

json opts_to_json(const Opts& o) {
  return {{"seed", o.seed},     {"tol", o.tol},     {"margins", o.margins},
          {"n", o.n},           {"m", o.m},         {"L", o.big_l},
          {"delta", o.delta},   {"trials", o.trials}, {"steps", o.steps},
          {"lr", o.lr},         {"q", o.q},         {"out", o.out}};
}

std::string out_path(const Opts& o, const std::string& name) {
  std::filesystem::create_directories(o.out);
  return (std::filesystem::path(o.out) / name).string();
}

void write_manifest(const Opts& o, const std::string& command,
                    const json& config, const std::vector<std::string>& paths,
                    double wall_seconds) {
  const json m = {{"command", command},
                  {"config", config},
                  {"seed", o.seed},
                  {"tool_version", kVersion},
                  {"outputs", paths},
                  {"wall_clock_seconds", wall_seconds}};
  write_text_file(out_path(o, "manifest.json"), m.dump(2) + "\n");
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

int run_check(const std::string& file, const Opts& o) {
  const SystemFile sf = system_from_json(json::parse(read_text_file(file)));
  const ObservabilityReport r = obs_report(sf.sys.c, sf.sys.a, o.tol);
  std::cout << report_to_json(r).dump(2) << "\n";
  return r.observable ? 0 : 2;
}

// One enforce target: flat learnables, the loss over them, and how to read
// the optimized system back out for the post-hoc observability verdict.
struct EnforceSetup {
  std::vector<double> x0;
  LossFn loss;
  std::function<json(const std::vector<double>&)> params_json;
  std::function<ObservabilityReport(const std::vector<double>&)> report;
};

std::vector<cplx> spread_lambdas(const Opts& o, Rng& rng) {
  std::vector<cplx> l(o.n);
  for (std::size_t k = 0; k < o.n; ++k) {
    const double tau = std::numbers::pi *
                       (2.0 * static_cast<double>(k) -
                        static_cast<double>(o.n - 1)) /
                       (2.0 * o.delta * static_cast<double>(o.n));
    l[k] = cplx(-0.2, tau) + 0.01 * rng.normal_complex();
  }
  return l;
}

EnforceSetup make_enforce(const std::string& loss_name, const Opts& o) {
  Rng rng(o.seed);
  EnforceSetup s;
  const FourierMargins fm{o.margin(0), o.margin(1), o.margin(2)};

  if (loss_name == "obs-det" || loss_name == "hautus" ||
      loss_name == "hautus-eigvec") {
    const ComplexMatrix a0 = rng.gaussian_complex(o.n, o.n);
    const ComplexMatrix c0 = rng.gaussian_complex(o.m, o.n);
    ParamVector packed;
    std::vector<cplx> aflat, cflat;
    for (std::size_t i = 0; i < o.n; ++i)
      for (std::size_t j = 0; j < o.n; ++j) aflat.push_back(a0(i, j));
    for (std::size_t i = 0; i < o.m; ++i)
      for (std::size_t j = 0; j < o.n; ++j) cflat.push_back(c0(i, j));
    packed.append_complex("a", aflat);
    packed.append_complex("c", cflat);
    const std::size_t n = o.n, m = o.m;
    const auto unpack = [n, m, packed](const std::vector<double>& x) {
      ParamVector probe = packed;
      probe.values = x;
      const std::vector<cplx> av = probe.complex_slice("a");
      const std::vector<cplx> cv = probe.complex_slice("c");
      ComplexMatrix a(n, n), c(m, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = av[i * n + j];
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = cv[i * n + j];
      return std::pair<ComplexMatrix, ComplexMatrix>(a, c);
    };
    const double margin = o.margin(0);
    s.x0 = packed.values;
    if (loss_name == "obs-det") {
      s.loss = [unpack, margin](const std::vector<double>& x) {
        const auto [a, c] = unpack(x);
        return loss_obs_det(c, a, margin).total;
      };
    } else if (loss_name == "hautus") {
      s.loss = [unpack, margin](const std::vector<double>& x) {
        const auto [a, c] = unpack(x);
        return loss_hautus_pencil(c, a, margin).total;
      };
    } else {
      s.loss = [unpack, margin](const std::vector<double>& x) {
        const auto [a, c] = unpack(x);
        return loss_hautus_eigvec(c, eig(a).v, margin).total;
      };
    }
    s.params_json = [unpack](const std::vector<double>& x) {
      const auto [a, c] = unpack(x);
      return json{{"A", matrix_to_json(a)}, {"C", matrix_to_json(c)}};
    };
    const double tol = o.tol;
    s.report = [unpack, tol](const std::vector<double>& x) {
      const auto [a, c] = unpack(x);
      return obs_report(c, a, tol);
    };
    return s;
  }

  if (loss_name == "permutation") {
    // Admissible fixed C picks the first m coordinates; A is learned toward
    // the doubly-stochastic root-of-unity certificate.
    ComplexMatrix c = ComplexMatrix::zeros(o.m, o.n);
    for (std::size_t i = 0; i < o.m; ++i) c(i, i) = cplx(1.0, 0.0);
    const ComplexMatrix p0 = permutation_matrix(rng.random_n_cycle(o.n));
    ParamVector packed;
    std::vector<cplx> aflat;
    for (std::size_t i = 0; i < o.n; ++i)
      for (std::size_t j = 0; j < o.n; ++j)
        aflat.push_back(p0(i, j) + 0.05 * rng.normal_complex());
    packed.append_complex("a", aflat);
    const std::size_t n = o.n;
    const auto unpack = [n, packed](const std::vector<double>& x) {
      ParamVector probe = packed;
      probe.values = x;
      const std::vector<cplx> av = probe.complex_slice("a");
      ComplexMatrix a(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = av[i * n + j];
      return a;
    };
    s.x0 = packed.values;
    s.loss = [unpack](const std::vector<double>& x) {
      return loss_permutation(unpack(x)).total;
    };
    s.params_json = [unpack](const std::vector<double>& x) {
      return json{{"A", matrix_to_json(unpack(x))}};
    };
    const double tol = o.tol;
    s.report = [unpack, c, tol](const std::vector<double>& x) {
      return obs_report(c, unpack(x), tol);
    };
    return s;
  }

  if (loss_name == "thm3" || loss_name == "thm4" ||
      loss_name == "kernel-distinct") {
    const ComplexMatrix c = rng.gaussian_complex(o.m, o.n);
    const ComplexMatrix v =
        loss_name == "kernel-distinct" ? rng.random_unitary(o.n)
                                       : ComplexMatrix::identity(o.n);
    ParamVector packed;
    packed.append_complex("lam", spread_lambdas(o, rng));
    const auto unpack = [packed](const std::vector<double>& x) {
      ParamVector probe = packed;
      probe.values = x;
      return probe.complex_slice("lam");
    };
    s.x0 = packed.values;
    const Opts oc = o;
    if (loss_name == "thm3") {
      s.loss = [unpack, oc, fm](const std::vector<double>& x) {
        return loss_thm3(unpack(x), oc.delta, oc.big_l, fm).total;
      };
    } else if (loss_name == "thm4") {
      s.loss = [unpack, oc, fm](const std::vector<double>& x) {
        return loss_thm4(unpack(x), oc.delta, oc.big_l, fm).total;
      };
    } else {
      s.loss = [unpack, oc, c, v](const std::vector<double>& x) {
        return loss_kernel_distinct(c, v, unpack(x), oc.delta, oc.big_l,
                                    oc.margin(0))
            .loss.total;
      };
    }
    s.params_json = [unpack, c](const std::vector<double>& x) {
      const std::vector<cplx> lam = unpack(x);
      return json{{"lambdas", matrix_to_json(ComplexMatrix::col_vector(lam))},
                  {"C", matrix_to_json(c)}};
    };
    const double tol = o.tol;
    s.report = [unpack, oc, c, v, loss_name,
                tol](const std::vector<double>& x) {
      const std::vector<cplx> lam = unpack(x);
      ComplexMatrix a_disc(oc.n, oc.n);
      if (loss_name == "thm4") {
        std::vector<cplx> bars(lam.size());
        for (std::size_t i = 0; i < lam.size(); ++i) {
          const cplx half = cplx(oc.delta / 2.0, 0.0) * lam[i];
          bars[i] = (cplx(1.0, 0.0) + half) / (cplx(1.0, 0.0) - half);
        }
        a_disc = ComplexMatrix::diag(bars);
      } else {
        std::vector<cplx> bars(lam.size());
        for (std::size_t i = 0; i < lam.size(); ++i)
          bars[i] = std::exp(cplx(oc.delta, 0.0) * lam[i]);
        a_disc = ComplexMatrix::diag(bars);
      }
      const ComplexMatrix a_sys =
          loss_name == "kernel-distinct" ? v * a_disc * inverse(v) : a_disc;
      return obs_report(c, a_sys, tol);
    };
    return s;
  }

  if (loss_name == "thm5") {
    ParamVector packed;
    packed.append_complex("lam", spread_lambdas(o, rng));
    std::vector<cplx> ct;
    for (std::size_t i = 0; i < o.m * o.n; ++i)
      ct.push_back(rng.normal_complex());
    packed.append_complex("ct", ct);
    const std::size_t n = o.n, m = o.m;
    const auto unpack = [packed, n, m](const std::vector<double>& x) {
      ParamVector probe = packed;
      probe.values = x;
      const std::vector<cplx> cv = probe.complex_slice("ct");
      ComplexMatrix c(m, n);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = cv[i * n + j];
      return std::pair<std::vector<cplx>, ComplexMatrix>(
          probe.complex_slice("lam"), c);
    };
    s.x0 = packed.values;
    const Thm5Margins tm{o.margin(0), o.margin(1)};
    s.loss = [unpack, tm](const std::vector<double>& x) {
      const auto [lam, ct] = unpack(x);
      return loss_thm5(lam, ct, tm).total;
    };
    s.params_json = [unpack](const std::vector<double>& x) {
      const auto [lam, ct] = unpack(x);
      return json{{"lambdas", matrix_to_json(ComplexMatrix::col_vector(lam))},
                  {"C_tilde", matrix_to_json(ct)}};
    };
    const double tol = o.tol;
    s.report = [unpack, tol](const std::vector<double>& x) {
      const auto [lam, ct] = unpack(x);
      return obs_report(ct, ComplexMatrix::diag(lam), tol);
    };
    return s;
  }

  raise(Errc::InvalidArgument, "unknown loss: " + loss_name);
}

int run_enforce(const std::string& loss_name, const Opts& o) {
  Stopwatch watch;
  EnforceSetup setup = make_enforce(loss_name, o);
  GdConfig cfg;
  cfg.learning_rate = o.lr;
  cfg.steps = o.steps;
  cfg.seed = o.seed;
  const GdResult res = gd_minimize(setup.loss, setup.x0, cfg);
  const double final_loss = setup.loss(res.x);
  const ObservabilityReport rep = setup.report(res.x);

  write_text_file(out_path(o, "trace.csv"), gd_trace_csv(res.trace));
  write_text_file(out_path(o, "params.json"),
                  setup.params_json(res.x).dump(2) + "\n");
  const json report = {{"loss", loss_name},
                       {"final_loss", final_loss},
                       {"reached_zero", res.reached_zero},
                       {"observability", report_to_json(rep)},
                       {"zero_coincides_with_observable",
                        res.reached_zero && rep.observable}};
  write_text_file(out_path(o, "report.json"), report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  write_manifest(o, "enforce " + loss_name, opts_to_json(o),
                 {out_path(o, "trace.csv"), out_path(o, "params.json"),
                  out_path(o, "report.json")},
                 watch.seconds());
  return res.reached_zero && rep.observable ? 0 : 2;
}

int run_experiment(const std::string& name, const Opts& o) {
  Stopwatch watch;
  std::vector<std::string> outputs;

  if (name == "kernel-distinct") {
    const EigSamplerConfig wide{0.1, 1.0, 1e-6};
    const auto psij = experiment_kernel_distinctness(
        o.n, o.m, o.trials, DistinctMode::PsiJ, wide, o.delta, o.big_l, o.seed);
    const auto pow = experiment_kernel_distinctness(
        o.n, o.m, o.trials, DistinctMode::LambdaPow, decaying_lambda_preset(),
        o.delta, o.big_l, o.seed);
    outputs.push_back(out_path(o, "kernel_distinct_psij.csv"));
    write_text_file(outputs.back(), distinct_trials_csv(psij));
    outputs.push_back(out_path(o, "kernel_distinct_lambdapow.csv"));
    write_text_file(outputs.back(), distinct_trials_csv(pow));
  } else if (name == "rowspace-rank") {
    const auto trials = experiment_rowspace_rank(o.n, o.m, o.trials, 0.1,
                                                 o.tol, o.delta, o.big_l,
                                                 o.seed);
    outputs.push_back(out_path(o, "rowspace_rank.csv"));
    write_text_file(outputs.back(), rank_trials_csv(trials));
  } else if (name == "eig-trajectory") {
    // Eigenvalue positions along the impulse-spectrum loss descent.
    Rng rng(o.seed);
    ParamVector packed;
    packed.append_complex("lam", spread_lambdas(o, rng));
    const FourierMargins fm{o.margin(0), o.margin(1), o.margin(2)};
    const Opts oc = o;
    const LossFn loss = [&packed, oc, fm](const std::vector<double>& x) {
      ParamVector probe = packed;
      probe.values = x;
      return loss_thm3(probe.complex_slice("lam"), oc.delta, oc.big_l, fm)
          .total;
    };
    std::vector<double> x = packed.values;
    std::ostringstream os;
    os << "step,eig_index,re,im\n";
    for (std::size_t step = 0; step <= o.steps; ++step) {
      ParamVector probe = packed;
      probe.values = x;
      const std::vector<cplx> lam = probe.complex_slice("lam");
      for (std::size_t k = 0; k < lam.size(); ++k)
        os << step << ',' << k << ',' << lam[k].real() << ','
           << lam[k].imag() << '\n';
      if (step == o.steps || loss(x) == 0.0) break;
      const std::vector<double> g = fd_gradient(loss, x, 1e-6);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= o.lr * g[i];
    }
    outputs.push_back(out_path(o, "eig_trajectory.csv"));
    write_text_file(outputs.back(), os.str());
  } else if (name == "psi-vs-power") {
    // Closed-form kernel spectrum against the direct power sum, per index.
    Rng rng(o.seed);
    const std::vector<cplx> lam =
        rng.distinct_lambdas(o.n, 0.2, 0.9, 1e-3);
    std::vector<cplx> abar(o.n);
    for (std::size_t i = 0; i < o.n; ++i) {
      const cplx half = cplx(o.delta / 2.0, 0.0) * lam[i];
      abar[i] = (cplx(1.0, 0.0) + half) / (cplx(1.0, 0.0) - half);
    }
    std::ostringstream os;
    os << "j,max_rel_diff\n";
    for (std::size_t j = 0; j < o.big_l; ++j) {
      const DiagSpectrum s = psi_diag(j, lam, o.delta, o.big_l);
      double worst = 0.0;
      for (std::size_t i = 0; i < o.n; ++i) {
        cplx direct(0.0, 0.0), pw(1.0, 0.0);
        for (std::size_t k = 0; k < o.big_l; ++k) {
          direct += pw * std::polar(1.0, -2.0 * std::numbers::pi *
                                             static_cast<double>(j * k) /
                                             static_cast<double>(o.big_l));
          pw *= abar[i];
        }
        worst = std::max(worst, std::abs(direct - s.entries[i]) /
                                    std::max(1e-30, std::abs(direct)));
      }
      os << j << ',' << worst << '\n';
    }
    outputs.push_back(out_path(o, "psi_vs_power.csv"));
    write_text_file(outputs.back(), os.str());
  } else {
    raise(Errc::InvalidArgument, "unknown experiment: " + name);
  }

  write_manifest(o, "experiment " + name, opts_to_json(o), outputs,
                 watch.seconds());
  return 0;
}

double median_of(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t h = xs.size() / 2;
  return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

int run_train(const std::string& mode, const Opts& o, bool literal) {
  Stopwatch watch;
  if (o.n % o.m != 0)
    raise(Errc::InvalidArgument, "train needs m dividing n");
  CoupledParams params;
  params.p = o.n / o.m;
  params.q = ComplexMatrix::identity(o.m);
  params.u = ComplexMatrix::identity(o.m);
  params.sel.resize(o.m);
  for (std::size_t j = 0; j < o.m; ++j) params.sel[j] = j;

  TrainConfig cfg;
  cfg.steps = o.steps;
  cfg.lr = o.lr;
  cfg.q_exponent = o.q;
  cfg.literal_update = literal;
  cfg.seed = o.seed;

  TrainTrace trace;
  json diagnostic;

  if (mode == "coupled") {
    params.lambdas.resize(o.n);
    for (std::size_t k = 0; k < o.n; ++k)
      params.lambdas[k] =
          std::polar(1.0 + 0.1 * static_cast<double>(k) /
                               static_cast<double>(o.n),
                     2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(o.n));
    cfg.synthetic = SyntheticDecay{};
    trace = train_coupled(params, [](const CoupledParams&) { return 0.0; },
                          cfg);
    std::vector<double> da, db;
    for (const auto& r : trace.records) {
      da.push_back(r.da_norm);
      db.push_back(r.db_norm);
    }
    json a_series = json::array(), b_series = json::array();
    for (const auto& d : robbins_monro_diagnostic(da, o.q))
      a_series.push_back(series_diag_to_json(d));
    for (const auto& d : robbins_monro_diagnostic(db, o.q))
      b_series.push_back(series_diag_to_json(d));
    diagnostic = {{"mode", "coupled"},
                  {"a_series", a_series},
                  {"b_series", b_series}};
  } else if (mode == "vanilla") {
    params.lambdas.resize(o.n);
    for (std::size_t k = 0; k < o.n; ++k)
      params.lambdas[k] = cplx(static_cast<double>(k + 1), 0.0);
    Rng rng(o.seed ^ 0x5441524745540ull);
    CoupledParams target_params = params;
    target_params.q = rng.random_unitary(o.m);
    target_params.u = rng.random_unitary(o.m);
    const ComplexMatrix target = build_a(target_params, false);
    const CoupledLossFn loss = [target](const CoupledParams& p) {
      const ComplexMatrix d = build_a(p, false) - target;
      return d.frobenius_norm() * d.frobenius_norm();
    };
    trace = train_vanilla(params, loss, cfg);
    std::vector<double> lam_real;
    bool real_positive = true;
    for (const auto& l : params.lambdas) {
      if (l.imag() != 0.0 || l.real() <= 0.0) real_positive = false;
      lam_real.push_back(l.real());
    }
    diagnostic = {{"mode", "vanilla"},
                  {"expansion_ratio_median", median_of(trace.expansion_ratios)},
                  {"expansion_ratio_min",
                   trace.expansion_ratios.empty()
                       ? 0.0
                       : *std::min_element(trace.expansion_ratios.begin(),
                                           trace.expansion_ratios.end())}};
    if (real_positive && o.n >= 2) {
      const double bound = lipschitz_lower_bound(lam_real);
      diagnostic["map_lower_bound"] = bound;
      diagnostic["expansion_exceeds_1_when_bound_does"] =
          bound <= 1.0 || median_of(trace.expansion_ratios) > 1.0;
    }
  } else {
    raise(Errc::InvalidArgument, "unknown train mode: " + mode);
  }

  write_text_file(out_path(o, "train_trace.csv"), train_trace_csv(trace));
  write_text_file(out_path(o, "diagnostic.json"), diagnostic.dump(2) + "\n");
  std::cout << diagnostic.dump(2) << "\n";
  write_manifest(o, "train " + mode, opts_to_json(o),
                 {out_path(o, "train_trace.csv"),
                  out_path(o, "diagnostic.json")},
                 watch.seconds());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"observability toolkit for state-space models"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Opts check_opts, enforce_opts, experiment_opts, train_opts;
  std::string system_file, loss_name, experiment_name, train_mode;
  bool normalized_update = false;

  CLI::App* check = app.add_subcommand("check", "observability verdict for a system file");
  check->add_option("system", system_file, "system JSON file")->required();
  add_common_flags(check, check_opts);

  CLI::App* enforce = app.add_subcommand("enforce", "minimize an observability loss");
  enforce
      ->add_option("loss", loss_name,
                   "obs-det | hautus | hautus-eigvec | permutation | thm3 | "
                   "thm4 | thm5 | kernel-distinct")
      ->required();
  add_common_flags(enforce, enforce_opts);

  CLI::App* experiment = app.add_subcommand("experiment", "randomized sweeps to CSV");
  experiment
      ->add_option("name", experiment_name,
                   "kernel-distinct | rowspace-rank | eig-trajectory | "
                   "psi-vs-power")
      ->required();
  add_common_flags(experiment, experiment_opts);

  CLI::App* train = app.add_subcommand("train", "coupled or vanilla trainer");
  train->add_option("mode", train_mode, "coupled | vanilla")->required();
  train->add_flag("--normalized", normalized_update,
                  "convex-blend slow update instead of the additive rule");
  add_common_flags(train, train_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(system_file, check_opts);
    if (enforce->parsed()) return run_enforce(loss_name, enforce_opts);
    if (experiment->parsed())
      return run_experiment(experiment_name, experiment_opts);
    if (train->parsed())
      return run_train(train_mode, train_opts, !normalized_update);
  } catch (const obskit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == obskit::Errc::DivergenceDetected ? 3 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
