#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "obskit/coupling.hpp"
#include "obskit/fourier.hpp"
#include "obskit/matrix.hpp"
#include "obskit/observability.hpp"
#include "obskit/optimize.hpp"
#include "obskit/permutation.hpp"
#include "obskit/ssm.hpp"

namespace obskit {

// Matrix wire format: {"rows": r, "cols": c, "data": [[re, im], ...]}
// row-major; readers also accept bare reals in data.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

// {"A": matrix, "B": matrix, "C": matrix, "delta": real,
//  "scheme": "bilinear" | "zoh"}; B, delta and scheme are optional on read.
struct SystemFile {
  ContinuousSystem sys;
  double delta = 0.0;
  Scheme scheme = Scheme::Bilinear;
};

nlohmann::json system_to_json(const SystemFile& f);
SystemFile system_from_json(const nlohmann::json& j);

// gram_logdet of a singular stack is -inf, which JSON cannot hold; it is
// encoded as null.
nlohmann::json report_to_json(const ObservabilityReport& r);
nlohmann::json loss_to_json(const LossValue& v);
nlohmann::json certificate_to_json(const PermutationCertificate& c);
nlohmann::json series_diag_to_json(const SeriesDiag& d);

std::string train_trace_csv(const TrainTrace& trace);
std::string gd_trace_csv(const std::vector<GdTracePoint>& trace);
std::string distinct_trials_csv(const std::vector<DistinctTrial>& trials);
std::string rank_trials_csv(const std::vector<RankTrial>& trials);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace obskit
