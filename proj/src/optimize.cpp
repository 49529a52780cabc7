#include "obskit/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "obskit/parallel.hpp"

namespace obskit {

std::size_t ParamVector::append_real(const std::string& name,
                                     const std::vector<double>& vals) {
  const std::size_t offset = values.size();
  values.insert(values.end(), vals.begin(), vals.end());
  manifest.push_back({name, offset, vals.size()});
  return offset;
}

std::size_t ParamVector::append_complex(const std::string& name,
                                        const std::vector<cplx>& vals) {
  const std::size_t offset = values.size();
  for (const auto& z : vals) {
    values.push_back(z.real());
    values.push_back(z.imag());
  }
  manifest.push_back({name, offset, 2 * vals.size()});
  return offset;
}

const SliceSpec& ParamVector::slice(const std::string& name) const {
  for (const auto& s : manifest)
    if (s.name == name) return s;
  raise(Errc::InvalidArgument, "unknown slice: " + name);
}

std::vector<double> ParamVector::real_slice(const std::string& name) const {
  const SliceSpec& s = slice(name);
  return {values.begin() + static_cast<std::ptrdiff_t>(s.offset),
          values.begin() + static_cast<std::ptrdiff_t>(s.offset + s.count)};
}

std::vector<cplx> ParamVector::complex_slice(const std::string& name) const {
  const SliceSpec& s = slice(name);
  if (s.count % 2 != 0) raise(Errc::InvalidArgument, "odd slice is not complex");
  std::vector<cplx> out(s.count / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = cplx(values[s.offset + 2 * i], values[s.offset + 2 * i + 1]);
  return out;
}

void ParamVector::set_real(const std::string& name,
                           const std::vector<double>& vals) {
  const SliceSpec& s = slice(name);
  if (vals.size() != s.count) raise(Errc::ShapeMismatch, "slice size mismatch");
  std::copy(vals.begin(), vals.end(),
            values.begin() + static_cast<std::ptrdiff_t>(s.offset));
}

void ParamVector::set_complex(const std::string& name,
                              const std::vector<cplx>& vals) {
  const SliceSpec& s = slice(name);
  if (2 * vals.size() != s.count)
    raise(Errc::ShapeMismatch, "slice size mismatch");
  for (std::size_t i = 0; i < vals.size(); ++i) {
    values[s.offset + 2 * i] = vals[i].real();
    values[s.offset + 2 * i + 1] = vals[i].imag();
  }
}

void ParamVector::validate() const {
  std::vector<SliceSpec> sorted = manifest;
  std::sort(sorted.begin(), sorted.end(),
            [](const SliceSpec& a, const SliceSpec& b) {
              return a.offset < b.offset;
            });
  std::size_t cursor = 0;
  for (const auto& s : sorted) {
    if (s.offset != cursor)
      raise(Errc::InvalidArgument, "manifest gap or overlap at " + s.name);
    cursor += s.count;
  }
  if (cursor != values.size())
    raise(Errc::InvalidArgument, "manifest does not cover the vector");
}

void GdConfig::validate() const {
  if (!(learning_rate > 0.0))
    raise(Errc::InvalidArgument, "learning_rate must be > 0");
  if (!(fd_step > 0.0)) raise(Errc::InvalidArgument, "fd_step must be > 0");
  if (clip && !(*clip > 0.0)) raise(Errc::InvalidArgument, "clip must be > 0");
}

std::vector<double> fd_gradient(const LossFn& loss,
                                const std::vector<double>& x, double h_rel) {
  if (!(h_rel > 0.0)) raise(Errc::InvalidArgument, "h_rel must be > 0");
  const double f0 = loss(x);
  if (!std::isfinite(f0)) raise(Errc::NonFinite, "loss not finite at x");
  std::vector<double> grad(x.size(), 0.0);
  parallel_for(x.size(), [&](std::size_t i) {
    const double h = h_rel * (1.0 + std::abs(x[i]));
    std::vector<double> probe = x;
    probe[i] = x[i] + h;
    const double fp = loss(probe);
    probe[i] = x[i] - h;
    const double fm = loss(probe);
    if (!std::isfinite(fp) || !std::isfinite(fm))
      raise(Errc::NonFinite, "loss not finite near x");
    const double g_plus = (fp - f0) / h;
    const double g_minus = (f0 - fm) / h;
    if (std::abs(g_plus - g_minus) > 1e3 * h) {
      grad[i] = std::abs(g_plus) < std::abs(g_minus) ? g_plus : g_minus;
    } else {
      grad[i] = (fp - fm) / (2.0 * h);
    }
  });
  return grad;
}

double vector_norm(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double v : xs) acc += v * v;
  return std::sqrt(acc);
}

GdResult gd_minimize(const LossFn& loss, const std::vector<double>& x0,
                     const GdConfig& cfg) {
  cfg.validate();
  GdResult result;
  result.x = x0;
  double initial = -1.0;
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const double f = loss(result.x);
    if (!std::isfinite(f)) raise(Errc::NonFinite, "loss not finite");
    if (step == 0) initial = f;
    if (f == 0.0) {
      result.trace.push_back({step, 0.0, 0.0});
      result.reached_zero = true;
      return result;
    }
    if (initial > 0.0 && f > 1e6 * initial)
      raise(Errc::DivergenceDetected, "loss exceeded 1e6x initial value");
    std::vector<double> grad = fd_gradient(loss, result.x, cfg.fd_step);
    double gnorm = vector_norm(grad);
    if (cfg.clip && gnorm > *cfg.clip) {
      const double scale = *cfg.clip / gnorm;
      for (double& g : grad) g *= scale;
      gnorm = *cfg.clip;
    }
    result.trace.push_back({step, f, gnorm});
    for (std::size_t i = 0; i < result.x.size(); ++i)
      result.x[i] -= cfg.learning_rate * grad[i];
  }
  return result;
}

}  // namespace obskit
