#include "obskit/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace obskit {

namespace {

bool finite(const cplx& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace

void raise(Errc code, const std::string& what) {
  throw Error(code, std::string(errc_name(code)) + ": " + what);
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NonFinite: return "NonFinite";
    case Errc::DecompositionFailed: return "DecompositionFailed";
    case Errc::SingularInput: return "SingularInput";
    case Errc::BranchCut: return "BranchCut";
    case Errc::SingularResolvent: return "SingularResolvent";
    case Errc::SingularFactor: return "SingularFactor";
    case Errc::PoleHit: return "PoleHit";
    case Errc::SingularQ: return "SingularQ";
    case Errc::NoAssignment: return "NoAssignment";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::OrthogonalityViolated: return "OrthogonalityViolated";
    case Errc::BadF: return "BadF";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::DegenerateSpectrum: return "DegenerateSpectrum";
    case Errc::NonPositiveEigenvalue: return "NonPositiveEigenvalue";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::DivergenceDetected: return "DivergenceDetected";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    raise(Errc::ShapeMismatch, "data length does not match rows*cols");
  check_finite("ComplexMatrix construction");
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<cplx>> rows)
    : rows_(rows.size()), cols_(0) {
  for (const auto& r : rows) {
    if (cols_ == 0) cols_ = r.size();
    if (r.size() != cols_)
      raise(Errc::ShapeMismatch, "ragged initializer rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  check_finite("ComplexMatrix construction");
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = cplx(1.0, 0.0);
  return m;
}

ComplexMatrix ComplexMatrix::diag(const std::vector<cplx>& entries) {
  ComplexMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m.check_finite("diag");
}

ComplexMatrix ComplexMatrix::col_vector(const std::vector<cplx>& entries) {
  return ComplexMatrix(entries.size(), 1, entries);
}

ComplexMatrix ComplexMatrix::row_vector(const std::vector<cplx>& entries) {
  return ComplexMatrix(1, entries.size(), entries);
}

cplx& ComplexMatrix::at(std::size_t i, std::size_t j) {
  if (i >= rows_ || j >= cols_) raise(Errc::ShapeMismatch, "index out of range");
  return data_[i * cols_ + j];
}

const cplx& ComplexMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) raise(Errc::ShapeMismatch, "index out of range");
  return data_[i * cols_ + j];
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k)
    m.data_[k] = std::conj(data_[k]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const { return conjugate().transpose(); }

ComplexMatrix ComplexMatrix::block(std::size_t row0, std::size_t col0,
                                   std::size_t nrows, std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_)
    raise(Errc::ShapeMismatch, "block exceeds matrix bounds");
  ComplexMatrix m(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j)
      m(i, j) = (*this)(row0 + i, col0 + j);
  return m;
}

void ComplexMatrix::set_block(std::size_t row0, std::size_t col0,
                              const ComplexMatrix& m) {
  if (row0 + m.rows() > rows_ || col0 + m.cols() > cols_)
    raise(Errc::ShapeMismatch, "block assignment exceeds matrix bounds");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      (*this)(row0 + i, col0 + j) = m(i, j);
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& z) { return finite(z); });
}

const ComplexMatrix& ComplexMatrix::check_finite(const char* context) const {
  if (!all_finite())
    raise(Errc::NonFinite, std::string("non-finite entry in ") + context);
  return *this;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    raise(Errc::ShapeMismatch, "operator+ shapes differ");
  ComplexMatrix m(a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.data_.size(); ++k)
    m.data_[k] = a.data_[k] + b.data_[k];
  return m;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    raise(Errc::ShapeMismatch, "operator- shapes differ");
  ComplexMatrix m(a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.data_.size(); ++k)
    m.data_[k] = a.data_[k] - b.data_[k];
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_)
    raise(Errc::ShapeMismatch, "operator* inner dimensions differ");
  ComplexMatrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
    }
  }
  return m;
}

ComplexMatrix operator*(const cplx& s, const ComplexMatrix& a) {
  ComplexMatrix m(a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.data_.size(); ++k) m.data_[k] = s * a.data_[k];
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const cplx& s) { return s * a; }

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).max_abs() <= tol;
}

double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double denom = std::max(a.frobenius_norm(), b.frobenius_norm());
  if (denom == 0.0) return 0.0;
  return (a - b).frobenius_norm() / denom;
}

}  // namespace obskit
