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

#ifndef VICERT_OPERATORS_H_
#define VICERT_OPERATORS_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vicert/numerics.h"

namespace vicert {

enum class OperatorKind {
  kAffine,
  kBilinearGame,
  kRotation,
  kLogisticGrad,
  kScaledIdentity,
  kCustomTable,
  kComposite,
};

const char* OperatorKindName(OperatorKind kind);
OperatorKind ParseOperatorKind(const std::string& name);

struct DeclaredConstants {
  std::optional<double> L;       // Lipschitz constant of F
  std::optional<double> Lambda;  // Lipschitz constant of the Jacobian
  std::optional<double> ell;     // cocoercivity constant
};

struct TableEntry {
  Vec x;
  Vec fx;
};

struct EvalPoint {
  Vec x;
  Vec fx;
  std::optional<Mat> jac;
};

using MatFn = std::function<Mat(const Vec&)>;

// An operator F: R^d -> R^d. Values are immutable once built.
class Operator {
 public:
  static Operator Affine(Mat a, Vec b);
  // Block-diagonal 90 degree rotations; dim must be even.
  static Operator Rotation(int dim = 2);
  // F(x, y) = (B y, -B^T x) + offset, the gradient field of x^T B y.
  static Operator BilinearGame(const Mat& coupling, Vec offset = {});
  static Operator ScaledIdentity(int dim, double scale, Vec offset = {});
  static Operator LogisticGrad(double a = 1.0, double delta = 0.01);
  static Operator CustomTable(std::vector<TableEntry> table);
  static Operator Composite(std::string description, int dim, VecFn eval,
                            MatFn jacobian, std::optional<Vec> root);

  OperatorKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_affine() const;
  bool has_jacobian() const;

  // Affine data; valid only when is_affine().
  const Mat& A() const;
  const Vec& b() const;
  double logistic_a() const { return a_; }
  double logistic_delta() const { return delta_; }
  const std::vector<TableEntry>& table() const { return table_; }
  const std::string& description() const { return description_; }

  const DeclaredConstants& constants() const { return constants_; }
  Operator WithConstants(DeclaredConstants c) const;

  // A stored zero of F when one is known.
  const std::optional<Vec>& root() const { return root_; }
  Operator WithRoot(Vec root) const;
  // Re-labels affine data with another affine-family kind.
  Operator WithKind(OperatorKind kind) const;

  Vec Eval(const Vec& x) const;
  Mat Jacobian(const Vec& x) const;
  EvalPoint EvaluateAt(const Vec& x, bool with_jacobian = false) const;

 private:
  Operator() = default;
  void CheckDim(const Vec& x) const;

  OperatorKind kind_ = OperatorKind::kAffine;
  int dim_ = 0;
  Mat a_mat_;
  Vec b_vec_;
  double a_ = 1.0;
  double delta_ = 0.01;
  std::vector<TableEntry> table_;
  std::shared_ptr<const VecFn> eval_fn_;
  std::shared_ptr<const MatFn> jac_fn_;
  std::string description_;
  DeclaredConstants constants_;
  std::optional<Vec> root_;
};

// x -> F(x - gamma F(x)).
Operator MakeEgOperator(const Operator& op, double gamma);
// Optimistic-gradient operator on z = (x, x_prev); affine input only.
Operator MakeOgOperator(const Operator& op, double gamma);
// z = (x, y) -> (F(x - gamma F(y)), (y - x)/gamma + F(y)); affine input only.
Operator MakeEftpOperator(const Operator& op, double gamma);
// x -> F(y) where y = x - gamma F(y).
Operator MakePpOperator(const Operator& op, double gamma);
// x -> grad F(x)^T F(x).
Operator MakeHamiltonianOperator(const Operator& op);

// Solves y + gamma F(y) = x.
Vec PpResolvent(const Operator& op, double gamma, const Vec& x);
// H(x) = |F(x)|^2 / 2.
double HamiltonianValue(const Operator& op, const Vec& x);

// Numerically stable logistic function.
double Sigmoid(double t);

}  // namespace vicert

#endif  // VICERT_OPERATORS_H_
