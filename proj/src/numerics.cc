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

#include "vicert/numerics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace vicert {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNoAnalyticJacobian: return "NoAnalyticJacobian";
    case ErrorCode::kNotAffine: return "NotAffine";
    case ErrorCode::kOffTable: return "OffTable";
    case ErrorCode::kBadParameters: return "BadParameters";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kNoViolatingPair: return "NoViolatingPair";
    case ErrorCode::kLabelMismatch: return "LabelMismatch";
    case ErrorCode::kNotPSD: return "NotPSD";
    case ErrorCode::kNoFeasiblePointFound: return "NoFeasiblePointFound";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

Mat::Mat(int rows, int cols, double fill)
    : rows_(rows), cols_(cols),
      data_(static_cast<size_t>(rows) * static_cast<size_t>(cols), fill) {
  if (rows < 0 || cols < 0) {
    throw Error(ErrorCode::kDimensionMismatch, "negative matrix shape");
  }
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  data_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Mat Mat::Identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::Diagonal(const Vec& d) {
  const int n = static_cast<int>(d.size());
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return m;
}

Mat Mat::FromRows(const std::vector<Vec>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  Mat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged matrix rows");
    }
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vec Mat::Row(int i) const {
  return Vec(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

Vec Mat::Col(int j) const {
  Vec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Mat Mat::Transpose() const {
  Mat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

bool Mat::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Mat& Mat::operator+=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix sum shapes differ");
  }
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix difference shapes differ");
  }
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(Mat a, double s) { return a *= s; }
Mat operator*(double s, Mat a) { return a *= s; }

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix product shapes differ");
  }
  Mat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vec operator*(const Mat& a, const Vec& x) {
  if (a.cols() != static_cast<int>(x.size())) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix-vector shapes differ");
  }
  Vec y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

bool operator==(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.data() == b.data();
}

namespace {

void CheckSameSize(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "vector sizes differ");
  }
}

void RequireFinite(const Mat& a, const char* what) {
  if (!a.AllFinite()) throw Error(ErrorCode::kNonFinite, what);
}

}  // namespace

double Dot(const Vec& a, const Vec& b) {
  CheckSameSize(a, b);
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double SqNorm(const Vec& a) { return Dot(a, a); }
double Norm(const Vec& a) { return std::sqrt(SqNorm(a)); }

double NormInf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Vec Add(const Vec& a, const Vec& b) {
  CheckSameSize(a, b);
  Vec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Vec Sub(const Vec& a, const Vec& b) {
  CheckSameSize(a, b);
  Vec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

Vec Scale(double s, const Vec& a) {
  Vec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

Vec Axpy(const Vec& a, double s, const Vec& b) {
  CheckSameSize(a, b);
  Vec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + s * b[i];
  return c;
}

bool AllFinite(const Vec& a) {
  return std::all_of(a.begin(), a.end(),
                     [](double v) { return std::isfinite(v); });
}

Vec Concat(const Vec& a, const Vec& b) {
  Vec c(a);
  c.insert(c.end(), b.begin(), b.end());
  return c;
}

double MaxAbs(const Mat& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double FrobeniusNorm(const Mat& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double InfNorm(const Mat& a) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

Vec SingularValues(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  Vec ev = SymEigs(a.Transpose() * a);
  Vec sv(ev.size());
  for (size_t i = 0; i < ev.size(); ++i) {
    sv[ev.size() - 1 - i] = std::sqrt(std::max(0.0, ev[i]));
  }
  return sv;
}

double SpectralNorm(const Mat& a) {
  Vec sv = SingularValues(a);
  return sv.empty() ? 0.0 : sv.front();
}

Vec LuSolve(const Mat& a, const Vec& b) {
  if (!a.square() || a.rows() != static_cast<int>(b.size())) {
    throw Error(ErrorCode::kDimensionMismatch, "LuSolve needs square A matching b");
  }
  RequireFinite(a, "LuSolve matrix has non-finite entries");
  if (!AllFinite(b)) throw Error(ErrorCode::kNonFinite, "LuSolve rhs");
  const int n = a.rows();
  const double threshold = 1e-14 * MaxAbs(a);
  Mat lu = a;
  Vec x = b;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
    }
    const double pivot = std::abs(lu(p, k));
    if (pivot == 0.0 || pivot < threshold) {
      throw Error(ErrorCode::kSingularMatrix,
                  "pivot " + FormatDouble17(pivot) + " in column " +
                      std::to_string(k));
    }
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(lu(p, j), lu(k, j));
      std::swap(x[p], x[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double m = lu(i, k) / lu(k, k);
      if (m == 0.0) continue;
      lu(i, k) = m;
      for (int j = k + 1; j < n; ++j) lu(i, j) -= m * lu(k, j);
      x[i] -= m * x[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
    x[i] = s / lu(i, i);
  }
  return x;
}

Mat Inverse(const Mat& a) {
  const int n = a.rows();
  Mat inv(n, n);
  for (int j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    e[j] = 1.0;
    Vec c = LuSolve(a, e);
    for (int i = 0; i < n; ++i) inv(i, j) = c[i];
  }
  return inv;
}

namespace {

// Householder reduction to upper Hessenberg form, in place.
void ReduceToHessenberg(Mat& a) {
  const int n = a.rows();
  for (int k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (int i = k + 1; i < n; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    const int m = n - k - 1;
    Vec v(m);
    for (int i = 0; i < m; ++i) v[i] = a(k + 1 + i, k);
    v[0] += (v[0] >= 0.0 ? alpha : -alpha);
    const double vv = SqNorm(v);
    if (vv == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += v[i] * a(k + 1 + i, j);
      s = 2.0 * s / vv;
      for (int i = 0; i < m; ++i) a(k + 1 + i, j) -= s * v[i];
    }
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += a(i, k + 1 + j) * v[j];
      s = 2.0 * s / vv;
      for (int j = 0; j < m; ++j) a(i, k + 1 + j) -= s * v[j];
    }
    for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

double CopySign(double magnitude, double sign_of) {
  return sign_of >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

}  // namespace

std::vector<ComplexEig> Eigenvalues(const Mat& input) {
  if (!input.square()) {
    throw Error(ErrorCode::kDimensionMismatch, "Eigenvalues needs a square matrix");
  }
  RequireFinite(input, "Eigenvalues input has non-finite entries");
  const int n = input.rows();
  std::vector<ComplexEig> out(n);
  if (n == 0) return out;
  Mat a = input;
  ReduceToHessenberg(a);

  double anorm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  }
  const long max_sweeps = 100L * n * n;
  long sweeps = 0;
  int nn = n - 1;
  double t = 0.0;
  double p = 0, q = 0, r = 0, s = 0, w = 0, x = 0, y = 0, z = 0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 1; --l) {
        s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) + s == s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      x = a(nn, nn);
      if (l == nn) {
        out[nn] = {x + t, 0.0};
        --nn;
      } else {
        y = a(nn - 1, nn - 1);
        w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          // Closed form for the trailing 2x2 block.
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + CopySign(z, p);
            out[nn - 1] = {x + z, 0.0};
            out[nn] = {z != 0.0 ? x - w / z : x + z, 0.0};
          } else {
            out[nn - 1] = {x + p, z};
            out[nn] = {x + p, -z};
          }
          nn -= 2;
        } else {
          if (++sweeps > max_sweeps) {
            throw Error(ErrorCode::kNoConvergence,
                        "shifted QR exceeded " + std::to_string(max_sweeps) +
                            " sweeps");
          }
          if (its > 0 && its % 10 == 0) {
            // Exceptional shift to break cycles.
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          for (m = nn - 2; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) +
                                            std::abs(z) +
                                            std::abs(a(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = a(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = CopySign(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k != nn - 1) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k != nn - 1) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }
  return out;
}

SymEigResult SymEigDecompose(const Mat& sym) {
  if (!sym.square()) {
    throw Error(ErrorCode::kDimensionMismatch, "SymEigs needs a square matrix");
  }
  RequireFinite(sym, "SymEigs input has non-finite entries");
  const int n = sym.rows();
  double asym = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      asym = std::max(asym, std::abs(sym(i, j) - sym(j, i)));
    }
  }
  if (asym > 1e-10 * (1.0 + MaxAbs(sym))) {
    throw Error(ErrorCode::kNotSymmetric,
                "asymmetry " + FormatDouble17(asym));
  }
  SymEigResult res;
  if (n == 0) return res;

  // Householder tridiagonalization followed by implicit QL.
  Mat v(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) v(i, j) = 0.5 * (sym(i, j) + sym(j, i));
  }
  Vec d(n), e(n, 0.0);
  for (int j = 0; j < n; ++j) d[j] = v(n - 1, j);
  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;
      for (int j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }
  for (int i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (int k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;

  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  double f = 0.0, tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  const long max_iters = 100L * n * n + 100;
  long iters = 0;
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      do {
        if (++iters > max_iters) {
          throw Error(ErrorCode::kNoConvergence, "tridiagonal QL did not converge");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return d[i] < d[j]; });
  res.values.resize(n);
  res.vectors = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    res.values[j] = d[order[j]];
    for (int i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
  }
  return res;
}

Vec SymEigs(const Mat& s) { return SymEigDecompose(s).values; }

Mat FiniteDiffJacobian(const VecFn& f, const Vec& x, double h) {
  if (h <= 0.0) h = 1e-6 * (1.0 + NormInf(x));
  const int n = static_cast<int>(x.size());
  Mat jac;
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const Vec fp = f(xp);
    const Vec fm = f(xm);
    if (j == 0) jac = Mat(static_cast<int>(fp.size()), n);
    for (int i = 0; i < jac.rows(); ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
  }
  return jac;
}

std::string FormatDouble17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace vicert
