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

#ifndef VICERT_CERTIFY_H_
#define VICERT_CERTIFY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vicert/operators.h"

namespace vicert {

enum class ClassKind { kCocoercive, kMonotone, kLipschitz, kMonotoneLipschitz };

struct OperatorClass {
  ClassKind kind = ClassKind::kMonotone;
  double param = 0.0;  // ell for cocoercive, L for the Lipschitz classes

  static OperatorClass Cocoercive(double ell) { return {ClassKind::kCocoercive, ell}; }
  static OperatorClass Monotone() { return {ClassKind::kMonotone, 0.0}; }
  static OperatorClass Lipschitz(double L) { return {ClassKind::kLipschitz, L}; }
  static OperatorClass MonotoneLipschitz(double L) {
    return {ClassKind::kMonotoneLipschitz, L};
  }
  std::string Name() const;
};

struct LabeledPoint {
  std::string label;
  Vec x;
  Vec fx;
};

struct PointSystem {
  std::vector<LabeledPoint> points;
  OperatorClass cls;
};

enum class Verdict { kHolds, kViolated, kInconclusive };
const char* VerdictName(Verdict v);

struct Witness {
  std::string label_a, label_b;
  Vec x_a, x_b, fx_a, fx_b;
};

struct Condition {
  std::string name;
  double slack = 0.0;
};

struct CertificateReport {
  Verdict verdict = Verdict::kInconclusive;
  double worst_slack = 0.0;
  std::optional<Witness> witness;
  std::vector<Condition> conditions;
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, Verdict>> sub_verdicts;

  // Looks up a named entry of `values`.
  double Value(const std::string& name) const;
};

nlohmann::json ReportToJson(const CertificateReport& report);

// LHS minus RHS of the class inequality for one pair; for the combined class
// the smaller of the two slacks.
double PairSlack(const OperatorClass& cls, const Vec& x_a, const Vec& fx_a,
                 const Vec& x_b, const Vec& fx_b);

// Checks the class inequality over every unordered pair of points.
CertificateReport CheckInterpolation(const PointSystem& ps, double tol = 1e-12);

// Two-dimensional points on which F(Id - gamma1 F) fails to be cocoercive.
struct CounterexampleInstance {
  double ell = 0.0;
  double gamma1 = 0.0;
  double scale = 1.0;
  Vec x, y, x_f1, y_f1, x_f2, y_f2;
};

CounterexampleInstance BuildCounterexample(double ell, double gamma1, double scale = 1.0);
// The four interpolation points x, y, x - gamma1 x_f1, y - gamma1 y_f1.
PointSystem CounterexamplePoints(const CounterexampleInstance& inst);
// |x - gamma2 x_f2 - y + gamma2 y_f2|^2.
double CounterexampleExpansion(const CounterexampleInstance& inst, double gamma2);
double CounterexampleExpansionFormula(double ell, double gamma1, double gamma2);
CertificateReport VerifyCounterexample(const CounterexampleInstance& inst, double gamma2);

// PSD test of (ell/2)(A + A^T) - A^T A.
CertificateReport AffineCocoercivityExact(const Mat& a, double ell, double tol = 1e-10);
// Every eigenvalue inside the disk of radius ell/2 centred at ell/2. Only a
// refutation for non-normal A; containment there is reported inconclusive.
CertificateReport SpectralDiskCheck(const Mat& a, double ell, double tol = 1e-9);
std::optional<double> MinCocoercivityEll(const Mat& a);
CertificateReport EgAffineCocoercivityCheck(const Mat& a, double gamma, double L);

enum class OptimisticForm { kOg, kEftp };
CertificateReport OgNoncocoercivityWitness(const Mat& a, double ell, double gamma,
                                           OptimisticForm form);
CertificateReport LinearStarEquivCheck(const Mat& a, double ell, int trials,
                                       uint64_t seed = 0);

struct LogisticConstants {
  double L_bound = 0.0;
  double Lambda_bound = 0.0;
  double max_sampled_jacobian = 0.0;
  double max_sampled_hessian = 0.0;
  bool samples_within_bounds = false;
};
LogisticConstants ComputeLogisticConstants(double a, double delta);

// Closed-form 2 H''(x) for H = F^2 / 2 with F the a = 1, delta = 1/100
// logistic gradient.
double HamiltonianSecondDerivative(double x);
// Finite-difference estimate of 2 H''(x) from evaluations of F.
double HamiltonianSecondDerivativeFd(double x, double h = 1e-4);
CertificateReport HamiltonianNonconvexityCheck(double x = 3.0);

CertificateReport SampledPropertyCheck(const Operator& op, const OperatorClass& cls,
                                       int trials, uint64_t seed, double tol = 1e-12);

}  // namespace vicert

#endif  // VICERT_CERTIFY_H_
