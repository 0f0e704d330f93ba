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


#ifndef VICERT_PEP_H_
#define VICERT_PEP_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vicert/certify.h"
#include "vicert/numerics.h"
#include "vicert/operators.h"

namespace vicert {

// Ordered, duplicate-free labels of the abstract vectors a Gram matrix is
// built from.
class GramBasis {
 public:
  explicit GramBasis(std::vector<std::string> labels);
  size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  size_t Index(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
};

using GramBasisPtr = std::shared_ptr<const GramBasis>;
GramBasisPtr MakeGramBasis(std::vector<std::string> labels);

// Formal linear combination of basis vectors.
class GramExpr {
 public:
  explicit GramExpr(GramBasisPtr basis);
  static GramExpr Unit(GramBasisPtr basis, const std::string& label);

  const GramBasisPtr& basis() const { return basis_; }
  const Vec& coeffs() const { return coeffs_; }
  double Coeff(const std::string& label) const;

  GramExpr& operator+=(const GramExpr& o);
  GramExpr& operator-=(const GramExpr& o);
  GramExpr& operator*=(double s);

 private:
  void CheckSameBasis(const GramExpr& o) const;
  GramBasisPtr basis_;
  Vec coeffs_;
};

GramExpr operator+(GramExpr a, const GramExpr& b);
GramExpr operator-(GramExpr a, const GramExpr& b);
GramExpr operator*(double s, GramExpr a);
GramExpr operator-(GramExpr a);

// Symmetric M with Tr(M G) = <a, b> whenever G is the Gram matrix of the basis.
Mat InnerMatrix(const GramExpr& a, const GramExpr& b);
Mat SqNormMatrix(const GramExpr& a);

// Sum of entrywise products, i.e. Tr(A B) for symmetric A.
double TraceProduct(const Mat& a, const Mat& b);

struct GramConstraint {
  std::string name;
  Mat m;
  double rhs = 0.0;  // Tr(m G) >= rhs, or == rhs for equalities
};

struct GramProblem {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::string> basis;
  double logdet_delta = 1e-6;  // regularizer of the rank-reduction heuristic
  Mat objective;
  std::vector<GramConstraint> ineqs;
  std::vector<GramConstraint> eqs;

  int n() const { return static_cast<int>(basis.size()); }
  // Throws BadParameters unless every matrix is n x n and symmetric.
  void Validate() const;
  nlohmann::json Metadata() const;
};

// Objective M0, six interpolation rows in the order
// (x, x_tilde), (x, y), (x, y_tilde), (x_tilde, y), (x_tilde, y_tilde),
// (y, y_tilde) and the unit-distance equality, over the basis
// x, y, x_F1, y_F1, x_F2, y_F2.
GramProblem BuildExpansivenessMatrices(double ell, double gamma1, double gamma2);

// Worst-case ||F(x^K)||^2 of extragradient over monotone L-Lipschitz maps.
// With inequality_form the initial distance is bounded by 1 instead of
// pinned to 1.
GramProblem BuildNormPep(double L, double gamma1, double gamma2, int K,
                         bool inequality_form = false);

enum class PepClass { kMonotoneLipschitz, kCocoercive };
enum class DeltaObjective { kOperator, kEgOperator };

// One-step change of ||F||^2 (or of the extragradient operator's norm) for
// the given class.
GramProblem BuildDeltaPep(double L, double gamma1, double gamma2,
                          PepClass cls = PepClass::kMonotoneLipschitz,
                          DeltaObjective objective = DeltaObjective::kOperator,
                          bool inequality_form = false);

// Labelled vectors of a concrete extragradient run, keyed by the basis of
// BuildNormPep / BuildDeltaPep. Assumes F(x_star) = 0.
std::map<std::string, Vec> EgRunVectors(const Operator& op, const Vec& x0, const Vec& x_star,
                                        double gamma1, double gamma2, int K);

// Basis vectors of the expansiveness problem built from the counterexample.
std::map<std::string, Vec> CounterexampleVectors(const CounterexampleInstance& inst);

struct FeasiblePoint {
  Mat G;
  double objective = 0.0;
  Vec ineq_values;   // Tr(M_i G) - rhs_i, should be >= 0
  Vec eq_residuals;  // Tr(M_i G) - rhs_i, should be 0
  double min_eigenvalue = 0.0;
  double max_violation = 0.0;
  int restart = -1;  // which search restart produced it, -1 if not searched

  bool Feasible(double tol) const { return max_violation <= tol && min_eigenvalue >= -tol; }
};

// Evaluates a candidate Gram matrix against every constraint.
FeasiblePoint EvaluateGram(const GramProblem& prob, const Mat& G);

// Gram matrix of the given vectors; labels must match the basis exactly.
FeasiblePoint EmbedPoints(const GramProblem& prob, const std::map<std::string, Vec>& vectors);

// Factors a PSD matrix into n points of dimension rank(G) (at least 1).
std::vector<Vec> GramToPoints(const Mat& G);

struct LowerBoundOptions {
  int rank = 6;
  int restarts = 32;
  int steps = 5000;
  int rounds = 5;
  double penalty_growth = 10.0;
  double initial_penalty = 10.0;
  uint64_t seed = 0;
  double tol = 1e-9;
  bool parallel = true;
};

// Feasible point found by factorized augmented-Lagrangian ascent. The
// problem must have exactly one constraint with a nonzero right-hand side
// (the normalization) and homogeneous inequalities otherwise. The result is
// re-verified, so its objective is a certified lower bound.
FeasiblePoint LowerBoundSearch(const GramProblem& prob, const LowerBoundOptions& opts = {});

nlohmann::json FeasiblePointToJson(const FeasiblePoint& fp);

// SDPA sparse export. Also writes the metadata sidecar at path + ".json".
std::string SdpaToString(const GramProblem& prob);
void ExportSdpa(const GramProblem& prob, const std::string& path);
GramProblem SdpaFromString(const std::string& text, const nlohmann::json* metadata = nullptr);
GramProblem ReadSdpa(const std::string& path);

}  // namespace vicert

#endif  // VICERT_PEP_H_
