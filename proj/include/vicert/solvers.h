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

#ifndef VICERT_SOLVERS_H_
#define VICERT_SOLVERS_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vicert/operators.h"

namespace vicert {

enum class Method { kGd, kPp, kPpEll, kEg, kEg2, kOg, kEftp, kHgm };

const char* MethodName(Method m);
Method ParseMethod(const std::string& name);

struct SolverConfig {
  Method method = Method::kGd;
  double gamma = 0.0;
  double gamma1 = 0.0;  // eg2 extrapolation step
  double gamma2 = 0.0;  // eg2 update step
  double ell = 0.0;     // pp_ell only
  int iters = 0;
  Vec x0;
};

struct TraceRow {
  int k = 0;
  Vec x;
  double fx_sq = 0.0;
  std::optional<double> dist_sq;
  Vec x_tilde;                // eg, eg2 and eftp only
  std::vector<double> extras;  // named by Trace::extra_names
};

struct Trace {
  Method method = Method::kGd;
  std::vector<std::string> extra_names;
  std::vector<TraceRow> rows;
  bool diverged = false;

  // Values of a named extra column, one per row.
  std::vector<double> Column(const std::string& name) const;
};

Vec GdStep(const Operator& op, const Vec& x, double gamma);
Vec EgStep(const Operator& op, const Vec& x, double gamma);
Vec Eg2Step(const Operator& op, const Vec& x, double gamma1, double gamma2);
Vec OgStep(const Operator& op, const Vec& x_cur, const Vec& x_prev, double gamma);
// Returns (x_new, x_tilde_new).
std::pair<Vec, Vec> EftpStep(const Operator& op, const Vec& x, const Vec& x_tilde,
                             double gamma);
Vec PpStep(const Operator& op, const Vec& x, double gamma);
Vec PpEllStep(const Operator& op, const Vec& x, double gamma, double ell);
Vec HgmStep(const Operator& op, const Vec& x, double gamma);

// Runs cfg.iters steps; stops early with Trace::diverged once |x| > 1e150.
Trace RunSolver(const Operator& op, const SolverConfig& cfg,
          const std::optional<Vec>& x_star = std::nullopt);

// Mean of |F|^2 over all rows; the x-tilde sequence is used for eftp.
double AverageSqNorm(const Trace& trace);

std::string TraceToCsv(const Trace& trace);
void WriteTraceCsv(const Trace& trace, const std::string& path);

}  // namespace vicert

#endif  // VICERT_SOLVERS_H_
