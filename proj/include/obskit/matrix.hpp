#pragma once

// Dense row-major complex matrix value type plus the library-wide error
// taxonomy.  Heavy numerics (decompositions, exp/log, SVD) live in
// matcore.hpp; this header keeps only shape/arithmetic plumbing.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace obskit {

using cplx = std::complex<double>;

enum class Errc {
  ShapeMismatch,
  NonFinite,
  DecompositionFailed,
  SingularInput,
  BranchCut,
  SingularResolvent,
  SingularFactor,
  PoleHit,
  SingularQ,
  NoAssignment,
  HypothesisFailed,
  OrthogonalityViolated,
  BadF,
  RankDeficient,
  DegenerateSpectrum,
  NonPositiveEigenvalue,
  PreconditionViolated,
  DivergenceDetected,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& what);
const char* errc_name(Errc code);

// Row-major dense complex matrix.  Public constructors reject non-finite
// entries; shapes are immutable after construction.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diag(const std::vector<cplx>& entries);
  static ComplexMatrix col_vector(const std::vector<cplx>& entries);
  static ComplexMatrix row_vector(const std::vector<cplx>& entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  cplx& at(std::size_t i, std::size_t j);
  const cplx& at(std::size_t i, std::size_t j) const;

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& mutable_data() { return data_; }

  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix adjoint() const;

  ComplexMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows,
                      std::size_t ncols) const;
  ComplexMatrix row(std::size_t i) const { return block(i, 0, 1, cols_); }
  ComplexMatrix col(std::size_t j) const { return block(0, j, rows_, 1); }
  void set_block(std::size_t row0, std::size_t col0, const ComplexMatrix& m);

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  // Throws NonFinite if any entry is NaN/Inf; used after arithmetic that can
  // overflow before handing values back across the public API.
  const ComplexMatrix& check_finite(const char* context) const;

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(const cplx& s, const ComplexMatrix& a);
  friend ComplexMatrix operator*(const ComplexMatrix& a, const cplx& s);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<cplx> data_;
};

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace obskit
