// Copyright 2026 The vicert Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VICERT_NUMERICS_H_
#define VICERT_NUMERICS_H_

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace vicert {

enum class ErrorCode {
  kSingularMatrix,
  kNoConvergence,
  kNotSymmetric,
  kNonFinite,
  kDimensionMismatch,
  kNoAnalyticJacobian,
  kNotAffine,
  kOffTable,
  kBadParameters,
  kPreconditionViolated,
  kNoViolatingPair,
  kLabelMismatch,
  kNotPSD,
  kNoFeasiblePointFound,
  kIoError,
  kParseError,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

using Vec = std::vector<double>;

// Dense row-major matrix.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, double fill = 0.0);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat Identity(int n);
  static Mat Diagonal(const Vec& d);
  static Mat FromRows(const std::vector<Vec>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(int i, int j) { return data_[i * cols_ + j]; }
  double operator()(int i, int j) const { return data_[i * cols_ + j]; }
  const std::vector<double>& data() const { return data_; }

  Vec Row(int i) const;
  Vec Col(int j) const;
  Mat Transpose() const;
  bool AllFinite() const;

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(Mat a, double s);
Mat operator*(double s, Mat a);
Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, const Vec& x);
bool operator==(const Mat& a, const Mat& b);

struct ComplexEig {
  double re = 0.0;
  double im = 0.0;
};

// Vector helpers.
double Dot(const Vec& a, const Vec& b);
double SqNorm(const Vec& a);
double Norm(const Vec& a);
double NormInf(const Vec& a);
Vec Add(const Vec& a, const Vec& b);
Vec Sub(const Vec& a, const Vec& b);
Vec Scale(double s, const Vec& a);
// a + s * b
Vec Axpy(const Vec& a, double s, const Vec& b);
bool AllFinite(const Vec& a);
Vec Concat(const Vec& a, const Vec& b);

// Matrix norms.
double MaxAbs(const Mat& a);
double FrobeniusNorm(const Mat& a);
double InfNorm(const Mat& a);  // max absolute row sum
double SpectralNorm(const Mat& a);
// Singular values in descending order.
Vec SingularValues(const Mat& a);

// Solves A x = b with partial pivoting.
Vec LuSolve(const Mat& a, const Vec& b);
Mat Inverse(const Mat& a);

// Full complex spectrum of a general real matrix.
std::vector<ComplexEig> Eigenvalues(const Mat& a);

struct SymEigResult {
  Vec values;   // ascending
  Mat vectors;  // column j pairs with values[j]
};
SymEigResult SymEigDecompose(const Mat& s);
Vec SymEigs(const Mat& s);

using VecFn = std::function<Vec(const Vec&)>;

// Central differences. A non-positive h selects 1e-6 * (1 + |x|_inf).
Mat FiniteDiffJacobian(const VecFn& f, const Vec& x, double h = 0.0);

// Formats with 17 significant digits.
std::string FormatDouble17(double v);

}  // namespace vicert

#endif  // VICERT_NUMERICS_H_
