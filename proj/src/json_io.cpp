#include "obskit/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace obskit {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data"))
    raise(Errc::InvalidArgument, "matrix JSON needs rows, cols, data");
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const json& data = j.at("data");
  if (!data.is_array() || data.size() != rows * cols)
    raise(Errc::InvalidArgument, "matrix data length must be rows*cols");
  ComplexMatrix m(rows, cols);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t jj = 0; jj < cols; ++jj, ++idx) {
      const json& e = data[idx];
      if (e.is_number()) {
        m(i, jj) = cplx(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() &&
                 e[1].is_number()) {
        m(i, jj) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        raise(Errc::InvalidArgument, "matrix entry must be a real or [re, im]");
      }
    }
  m.check_finite("matrix JSON");
  return m;
}

json system_to_json(const SystemFile& f) {
  return {{"A", matrix_to_json(f.sys.a)},
          {"B", matrix_to_json(f.sys.b)},
          {"C", matrix_to_json(f.sys.c)},
          {"delta", f.delta},
          {"scheme", f.scheme == Scheme::ZOH ? "zoh" : "bilinear"}};
}

SystemFile system_from_json(const json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("C"))
    raise(Errc::InvalidArgument, "system JSON needs A and C");
  SystemFile f;
  f.sys.a = matrix_from_json(j.at("A"));
  f.sys.c = matrix_from_json(j.at("C"));
  if (j.contains("B")) {
    f.sys.b = matrix_from_json(j.at("B"));
  } else {
    f.sys.b = ComplexMatrix::zeros(f.sys.a.rows(), f.sys.c.rows());
  }
  if (j.contains("delta")) f.delta = j.at("delta").get<double>();
  if (j.contains("scheme")) {
    const std::string s = j.at("scheme").get<std::string>();
    if (s == "zoh") {
      f.scheme = Scheme::ZOH;
    } else if (s == "bilinear") {
      f.scheme = Scheme::Bilinear;
    } else {
      raise(Errc::InvalidArgument, "scheme must be bilinear or zoh");
    }
  }
  f.sys.validate();
  return f;
}

json report_to_json(const ObservabilityReport& r) {
  json j = {{"rank", r.rank},       {"n", r.n},
            {"sigma_min", r.sigma_min}, {"observable", r.observable},
            {"tol", r.tol}};
  if (std::isfinite(r.gram_logdet)) {
    j["gram_logdet"] = r.gram_logdet;
  } else {
    j["gram_logdet"] = nullptr;
  }
  return j;
}

json loss_to_json(const LossValue& v) {
  json terms = json::object();
  for (const auto& [name, value] : v.terms) {
    if (terms.contains(name)) {
      terms[name] = terms[name].get<double>() + value;
    } else {
      terms[name] = value;
    }
  }
  return {{"total", v.total}, {"terms", std::move(terms)}};
}

json certificate_to_json(const PermutationCertificate& c) {
  json j = {{"is_permutation", c.is_permutation},
            {"row_sum_residual", c.row_sum_residual},
            {"col_sum_residual", c.col_sum_residual},
            {"eig_match_residual", c.eig_match_residual},
            {"xi_norm", c.xi_norm},
            {"eps_sum", c.eps_sum}};
  if (c.has_nearest_perm) j["nearest_perm"] = matrix_to_json(c.nearest_perm);
  return j;
}

json series_diag_to_json(const SeriesDiag& d) {
  return {{"exponent", d.exponent},
          {"partial_sum", d.partial_sum},
          {"tail_window100", d.tail_window100},
          {"increment10", d.increment10},
          {"lnfit_slope", d.lnfit_slope},
          {"lnfit_r2", d.lnfit_r2},
          {"classification", d.classification}};
}

std::string train_trace_csv(const TrainTrace& trace) {
  std::ostringstream os;
  os << "step,loss,dA_norm,dB_norm,stepA,stepB,gradQ_norm,gradU_norm\n";
  for (const auto& r : trace.records)
    os << r.step << ',' << format_double(r.loss) << ','
       << format_double(r.da_norm) << ',' << format_double(r.db_norm) << ','
       << format_double(r.step_a) << ',' << format_double(r.step_b) << ','
       << format_double(r.grad_q_norm) << ',' << format_double(r.grad_u_norm)
       << '\n';
  return os.str();
}

std::string gd_trace_csv(const std::vector<GdTracePoint>& trace) {
  std::ostringstream os;
  os << "step,loss,grad_norm\n";
  for (const auto& p : trace)
    os << p.step << ',' << format_double(p.loss) << ','
       << format_double(p.grad_norm) << '\n';
  return os.str();
}

std::string distinct_trials_csv(const std::vector<DistinctTrial>& trials) {
  std::ostringstream os;
  os << "trial,distinct_pairs\n";
  for (const auto& t : trials) os << t.trial << ',' << t.distinct_pairs << '\n';
  return os.str();
}

std::string rank_trials_csv(const std::vector<RankTrial>& trials) {
  std::ostringstream os;
  os << "trial,rank\n";
  for (const auto& t : trials) os << t.trial << ',' << t.rank << '\n';
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::InvalidArgument, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::InvalidArgument, "cannot write " + path);
  out << content;
  if (!out.good()) raise(Errc::InvalidArgument, "short write to " + path);
}

}  // namespace obskit
