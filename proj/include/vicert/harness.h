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


#ifndef VICERT_HARNESS_H_
#define VICERT_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vicert/operators.h"
#include "vicert/solvers.h"

namespace vicert {

inline constexpr const char* kReportVersion = "1.0";
inline constexpr uint64_t kDefaultSeed = 20240531;

struct BoundRow {
  int k = 0;
  double observed = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - observed
};

enum class Tolerance {
  kRelative,  // margin >= -tol * |bound|
  kMixed,     // margin >= -tol * max(1, |bound|)
};

struct BoundCheck {
  std::string id;
  nlohmann::json params = nlohmann::json::object();
  std::vector<BoundRow> rows;
  double tol = 1e-10;
  Tolerance mode = Tolerance::kRelative;
  // Reported-only curves keep pass = true regardless of their margins.
  bool asserted = true;
  bool pass = true;
  std::string note;

  void Add(int k, double observed, double bound);
  // Recomputes the pass flag from the rows.
  void Finalize();
  // Row with the smallest margin, normalized by the tolerance scale.
  const BoundRow* Worst() const;
  bool RowPasses(const BoundRow& r) const;
};

nlohmann::json BoundCheckToJson(const BoundCheck& c, bool include_rows = false);

// Random- and last-iterate bounds of gradient descent with step gamma <= 1/ell.
std::pair<BoundCheck, BoundCheck> CheckGdBounds(const Operator& op, double ell, double gamma,
                                                int K, const Vec& x_star, const Vec& x0);

// Gradient descent on the resolvent operator with parameter 2/ell: average
// and last-iterate squared norms of that operator.
std::pair<BoundCheck, BoundCheck> CheckPpBound(const Operator& op, double ell, double gamma,
                                               int K, const Vec& x_star, const Vec& x0);

BoundCheck CheckEgRandomBound(const Operator& op, double L, double gamma1, double gamma2, int K,
                              const Vec& x_star, const Vec& x0);

// Last-iterate norm bound, gap surrogate, per-step norm monotonicity,
// per-step distance decrease, and the reported-only 16 L^2 |x0 - x*|^2 / k
// curve, in that order.
std::vector<BoundCheck> CheckEgLastBounds(const Operator& op, double L, double gamma, int K,
                                          const Vec& x_star, const Vec& x0);

// Per-step |F| monotonicity at a step in (1/(sqrt(2) L), 1/L], outside the
// guaranteed range. Reported only; needs gamma <= 1/L.
BoundCheck ReportEgNormRelaxedStep(const Operator& op, double L, double gamma, int K,
                                   const Vec& x_star, const Vec& x0);

BoundCheck CheckEftpBound(const Operator& op, double L, double gamma, int K, const Vec& x_star,
                          const Vec& x0);

// Best-iterate bound and monotone |F| for the Hamiltonian gradient method.
std::pair<BoundCheck, BoundCheck> CheckHgmBounds(const Operator& op, double L, double Lambda,
                                                 double gamma, int K, const Vec& x0);

// Per-step contraction of the Hamiltonian method on F(x) = Ax + b with
// gamma = 1 / sigma_max(A)^2.
BoundCheck CheckHgmAffineContraction(const Mat& a, const Vec& b, int K, const Vec& x0);

// Least-squares solution of Ax + b = 0 closest to x0.
Vec AffineProjectionSolution(const Mat& a, const Vec& b, const Vec& x0);

struct SuiteEntry {
  std::string name;
  Operator op;
  double L = 0.0;
  std::optional<double> ell;     // cocoercivity constant when the operator has one
  std::optional<double> Lambda;  // Jacobian Lipschitz constant
  Vec x_star;
  Vec x0;
};

// Monotone A = M + cI with Gaussian M, c shifting the symmetric part to have
// smallest eigenvalue 0.1; b is Gaussian. Declares L = |A|_2 and the
// smallest cocoercivity constant.
Operator RandomMonotoneAffine(int d, uint64_t seed);

// Rotation, random monotone affine maps in dimensions 2, 10, 50, a 4-d bilinear
// game, the logistic gradient and a scaled identity, each with its declared
// constants.
std::vector<std::pair<std::string, Operator>> StandardOperators(uint64_t seed = kDefaultSeed);
void WriteStandardFixtures(const std::string& dir, uint64_t seed = kDefaultSeed);
std::vector<std::pair<std::string, Operator>> ReadFixtures(const std::string& dir);

// Attaches x* and a start point at unit distance from it.
SuiteEntry MakeSuiteEntry(const std::string& name, const Operator& op, uint64_t seed);
std::vector<SuiteEntry> MakeSuite(const std::vector<std::pair<std::string, Operator>>& ops,
                                  uint64_t seed = kDefaultSeed);

struct SuiteOptions {
  int iters = 1000;
  int eg_last_iters = 10000;
  bool parallel = true;
};

// Every applicable bound check on one suite entry at the stated step sizes.
std::vector<BoundCheck> RunEntryChecks(const SuiteEntry& e, const SuiteOptions& opts);

struct Report {
  uint64_t seed = kDefaultSeed;
  std::vector<BoundCheck> checks;
  nlohmann::json extra;  // optional sections such as the regime search

  bool AllPass() const;
};

Report RunSuiteChecks(const std::vector<SuiteEntry>& suite, const SuiteOptions& opts,
                      uint64_t seed = kDefaultSeed);
nlohmann::json ReportToJson(const Report& r, bool include_rows = false);

struct RegimeParams {
  double L = 1.0, gamma1 = 0.0, gamma2 = 0.0;
};

struct RegimeCell {
  RegimeParams p;
  int ops_tested = 0;
  double max_increase_f = 0.0;     // largest one-step growth of |F|^2 seen on random maps
  double max_increase_feg = 0.0;   // same for the extragradient operator
  std::optional<double> pep_delta_f;
  std::optional<double> pep_delta_feg;
  std::vector<nlohmann::json> witnesses;
};

struct RegimeReport {
  std::vector<RegimeCell> cells;
  nlohmann::json ToJson() const;
};

std::vector<RegimeParams> DefaultRegimeGrid();

// Searches for one-step increases of |F| and |F_EG| under cocoercive maps
// with random affine instances and, when pep_restarts > 0, with the delta
// performance-estimation problems. Nothing is asserted; every witness found
// is re-verified by the interpolation check before it is reported.
RegimeReport CheckEgNormViolationRegimes(const std::vector<RegimeParams>& grid,
                                         int ops_per_cell, uint64_t seed, int pep_restarts);

}  // namespace vicert

#endif  // VICERT_HARNESS_H_
