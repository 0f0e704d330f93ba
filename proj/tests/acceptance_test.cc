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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion;
// `--criterion N` restricts the run to one numbered group.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pep_oracle.h"
#include "test_util.h"
#include "vicert/certify.h"
#include "vicert/harness.h"
#include "vicert/operator_io.h"
#include "vicert/operators.h"
#include "vicert/pep.h"
#include "vicert/solvers.h"

namespace vicert {
namespace {

using testing::RandomMonotoneMat;
using testing::RandomNormalMat;
using testing::RandomVec;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int group;
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

std::string Fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::vector<SuiteEntry> Suite() {
  return MakeSuite(ReadFixtures(VICERT_FIXTURE_DIR), kDefaultSeed);
}

// Collects every failing row across the checks with the given ids.
Outcome AllChecksPass(const std::vector<BoundCheck>& checks, const std::vector<std::string>& ids) {
  Outcome o;
  int n = 0, failed = 0;
  double worst = INFINITY;
  for (const auto& c : checks) {
    if (std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    ++n;
    for (const auto& r : c.rows) {
      if (!c.RowPasses(r)) ++failed;
      const double scale = c.mode == Tolerance::kRelative ? std::abs(r.bound)
                                                           : std::max(1.0, std::abs(r.bound));
      if (std::isfinite(r.bound) && scale > 0.0) worst = std::min(worst, r.margin / scale);
    }
    if (!c.pass) {
      o.pass = false;
      o.detail += c.id + "@" + c.params.value("operator", "?") + " ";
    }
  }
  if (n == 0) o.pass = false;
  o.detail += std::to_string(n) + " checks, " + std::to_string(failed) +
              " failing rows, worst scaled margin " + Fmt(worst);
  return o;
}

// ---- 1: counterexample grid -------------------------------------------------

struct CexCase {
  double ell, g1, g2;
  CertificateReport rep;
};

std::vector<CexCase> CexGrid() {
  std::vector<CexCase> out;
  for (double ell : {0.5, 1.0, 2.0, 5.0}) {
    for (double c : {0.1, 0.25, 0.5, 1.0}) {
      const double g1 = c / ell;
      for (double f : {0.25, 0.5, 1.0}) {
        const double g2 = g1 * f;
        out.push_back({ell, g1, g2, VerifyCounterexample(BuildCounterexample(ell, g1), g2)});
      }
    }
  }
  return out;
}

std::vector<double> InterpolationSlacks(const CertificateReport& r) {
  std::vector<double> s;
  for (const auto& c : r.conditions) {
    if (c.name != "nonexpansive") s.push_back(c.slack);
  }
  return s;
}

Outcome CexNonnegative() {
  Outcome o;
  double worst = INFINITY;
  for (const auto& c : CexGrid()) {
    const auto s = InterpolationSlacks(c.rep);
    if (s.size() != 6) o.pass = false;
    for (double v : s) worst = std::min(worst, v);
  }
  o.pass = o.pass && worst >= -1e-12;
  o.detail = "48 cases, smallest slack " + Fmt(worst);
  return o;
}

Outcome CexFourTight() {
  Outcome o;
  int bad = 0;
  int example_tight = -1;
  for (const auto& c : CexGrid()) {
    int tight = 0;
    for (double v : InterpolationSlacks(c.rep)) tight += std::abs(v) <= 1e-12;
    if (tight != 4) ++bad;
    if (example_tight < 0) example_tight = tight;
  }
  o.pass = bad == 0;
  o.detail = std::to_string(bad) + " of 48 cases without exactly four tight slacks (first case has " +
             std::to_string(example_tight) + ")";
  return o;
}

Outcome CexNamedSlack() {
  Outcome o;
  int bad = 0;
  double max_err = 0.0;
  std::string first;
  for (const auto& c : CexGrid()) {
    // The pair whose operator values are x_F1 and y_F2.
    double s = NAN;
    for (const auto& cond : c.rep.conditions) {
      if (cond.name == "x|y_tilde") s = cond.slack;
    }
    const double want = c.g1 * c.ell / 2.0;
    const double err = std::abs(s - want);
    max_err = std::max(max_err, err);
    if (!(err <= 1e-12)) {
      ++bad;
      if (first.empty()) {
        first = "ell=" + Fmt(c.ell) + " gamma1=" + Fmt(c.g1) + ": slack " + Fmt(s) +
                " vs expected " + Fmt(want);
      }
    }
  }
  o.pass = bad == 0;
  o.detail = std::to_string(bad) + " of 48 cases off, max error " + Fmt(max_err) +
             (first.empty() ? "" : "; e.g. " + first);
  return o;
}

Outcome CexExpansion() {
  Outcome o;
  double max_err = 0.0;
  for (const auto& c : CexGrid()) {
    const double e = c.rep.Value("E");
    const double l2 = c.ell * c.ell;
    max_err = std::max(max_err, std::abs(e - (1.0 + c.g1 * c.g1 * c.g2 * c.g2 * l2 * l2 / 4.0)));
  }
  const double e = VerifyCounterexample(BuildCounterexample(1.0, 0.5), 0.5).Value("E");
  o.pass = max_err <= 1e-12 && std::abs(e - 1.015625) <= 1e-12;
  o.detail = "max |E - formula| " + Fmt(max_err) + ", E(1, 0.5, 0.5) = " + Fmt(e);
  return o;
}

// ---- 2, 3: extragradient last iterate ----------------------------------------

std::vector<BoundCheck> EgLastOnSuite(double fraction, int K) {
  std::vector<BoundCheck> all;
  for (const auto& e : Suite()) {
    for (auto& c : CheckEgLastBounds(e.op, e.L, fraction / (std::sqrt(2.0) * e.L), K, e.x_star,
                                     e.x0)) {
      c.params["operator"] = e.name;
      all.push_back(std::move(c));
    }
  }
  return all;
}

Outcome EgLastBound() { return AllChecksPass(EgLastOnSuite(1.0, 10000), {"eg_last_iterate"}); }

Outcome EgRotationClosedForm() {
  Outcome o;
  const auto suite = Suite();
  const SuiteEntry& rot =
      *std::find_if(suite.begin(), suite.end(), [](const SuiteEntry& e) { return e.name == "rotation"; });
  SolverConfig cfg;
  cfg.method = Method::kEg;
  cfg.gamma = 1.0 / std::sqrt(2.0);
  cfg.iters = 10000;
  cfg.x0 = rot.x0;
  const Trace t = RunSolver(rot.op, cfg, rot.x_star);
  const double r0 = SqNorm(rot.x0);
  double max_rel = 0.0;
  int subnormal = 0;
  for (const auto& row : t.rows) {
    const double want = std::pow(0.75, row.k) * r0;
    const double err = std::abs(row.fx_sq - want);
    // Past the normal range both sides are subnormal and carry no relative precision.
    if (want < std::numeric_limits<double>::min()) {
      ++subnormal;
      if (err > 1e-10) o.pass = false;
      continue;
    }
    if (err > 1e-10 * want) o.pass = false;
    max_rel = std::max(max_rel, err / want);
  }
  o.pass = o.pass && t.rows.size() == 10001;
  o.detail = "max relative deviation " + Fmt(max_rel) + " over " +
             std::to_string(t.rows.size() - subnormal) + " iterates, " +
             std::to_string(subnormal) + " underflowed iterates within 1e-10 absolute";
  return o;
}

Outcome NormMonotone() {
  std::vector<BoundCheck> all = EgLastOnSuite(1.0, 10000);
  for (auto& c : EgLastOnSuite(0.5, 2000)) all.push_back(std::move(c));
  return AllChecksPass(all, {"eg_norm_monotone"});
}

Outcome DistanceDecrease() {
  std::vector<BoundCheck> all = EgLastOnSuite(1.0, 10000);
  for (auto& c : EgLastOnSuite(0.5, 2000)) all.push_back(std::move(c));
  return AllChecksPass(all, {"eg_distance_decrease"});
}

// ---- 4: remaining bounds -----------------------------------------------------

Outcome SuiteBounds() {
  SuiteOptions opts;
  opts.eg_last_iters = 10;
  const Report r = RunSuiteChecks(Suite(), opts);
  return AllChecksPass(r.checks, {"gd_random_iterate", "gd_last_iterate", "pp_random_iterate",
                                  "pp_last_iterate", "eg_random_iterate", "eftp_random_iterate"});
}

Outcome GdEquality() {
  Outcome o;
  auto [avg, last] = CheckGdBounds(Operator::ScaledIdentity(3, 1.0), 1.0, 1.0, 0, {0, 0, 0},
                                   {1.0, -2.0, 0.5});
  const BoundRow& r = avg.rows.at(0);
  o.pass = r.observed == r.bound && last.rows.at(0).margin == 0.0 && avg.pass && last.pass;
  o.detail = "observed " + Fmt(r.observed) + " bound " + Fmt(r.bound);
  return o;
}

// ---- 5: performance-estimation matrices --------------------------------------

Outcome PepSymbolic() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  double max_err = 0.0;
  for (int t = 0; t < 50; ++t) {
    const double ell = u(rng), g1 = u(rng), g2 = u(rng);
    const GramProblem p = BuildExpansivenessMatrices(ell, g1, g2);
    const auto s = testing::ExpandExpansiveness(ell, g1, g2);
    auto diff = [&](const Mat& a, const Mat& b) {
      double m = 0.0;
      for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
      }
      return m;
    };
    max_err = std::max(max_err, diff(p.objective, s.objective));
    for (size_t k = 0; k < s.rows.size(); ++k) max_err = std::max(max_err, diff(p.ineqs[k].m, s.rows[k]));
    max_err = std::max(max_err, diff(p.eqs.at(0).m, s.distance));
  }
  o.pass = max_err <= 1e-14;
  o.detail = "max entry difference " + Fmt(max_err);
  return o;
}

Outcome PepEmbedding() {
  Outcome o;
  double max_resid = 0.0, max_obj = 0.0;
  for (double ell : {0.5, 1.0, 2.0}) {
    for (double c : {0.25, 0.5, 1.0}) {
      const double g1 = c / ell, g2 = g1 / 2.0;
      const GramProblem p = BuildExpansivenessMatrices(ell, g1, g2);
      const FeasiblePoint fp = EmbedPoints(p, CounterexampleVectors(BuildCounterexample(ell, g1)));
      max_resid = std::max(max_resid, fp.max_violation);
      max_obj = std::max(max_obj, std::abs(fp.objective - CounterexampleExpansionFormula(ell, g1, g2)));
      if (!fp.Feasible(1e-12)) o.pass = false;
    }
  }
  o.pass = o.pass && max_resid <= 1e-12 && max_obj <= 1e-12;
  o.detail = "max residual " + Fmt(max_resid) + ", max objective error " + Fmt(max_obj);
  return o;
}

Outcome PepLowerBound() {
  Outcome o;
  for (double g : {0.25, 0.5, 1.0}) {
    const FeasiblePoint fp = LowerBoundSearch(BuildExpansivenessMatrices(1.0, g, g));
    o.detail += "gamma=" + Fmt(g) + ": " + std::to_string(fp.objective) + " ";
    if (!(fp.objective > 1.0 + 1e-6) || !fp.Feasible(1e-9)) o.pass = false;
  }
  return o;
}

// ---- 6: cocoercivity certification -------------------------------------------

Outcome SpectralVsPencil() {
  Outcome o;
  std::mt19937_64 rng(606);
  int compared = 0, disagree = 0;
  for (int t = 0; t < 200; ++t) {
    const Mat a = RandomNormalMat(2 + t % 5, rng);
    for (double ell : {0.5, 1.0, 2.0, 4.0}) {
      const CertificateReport s = SpectralDiskCheck(a, ell);
      if (std::abs(s.worst_slack) <= 1e-9) continue;
      ++compared;
      disagree += s.verdict != AffineCocoercivityExact(a, ell).verdict;
    }
  }
  o.pass = disagree == 0 && compared > 0;
  o.detail = std::to_string(compared) + " comparisons, " + std::to_string(disagree) + " disagreements";
  return o;
}

Outcome RotationRejected() {
  Outcome o;
  const Mat rot{{0, 1}, {-1, 0}};
  for (int p = 0; p <= 9; ++p) {
    if (AffineCocoercivityExact(rot, std::pow(10.0, p)).verdict != Verdict::kViolated) {
      o.pass = false;
      o.detail += "accepted at ell=1e" + std::to_string(p) + " ";
    }
  }
  if (o.pass) o.detail = "rejected for ell = 1 .. 1e9";
  return o;
}

Outcome MinEll() {
  Outcome o;
  const auto v = MinCocoercivityEll(Mat::Diagonal({1, 2}));
  o.pass = v && std::abs(*v - 2.0) <= 1e-8;
  o.detail = v ? "min ell " + std::to_string(*v) : "none";
  return o;
}

Outcome EgAffine() {
  Outcome o;
  std::mt19937_64 rng(607);
  int held = 0;
  for (int t = 0; t < 100; ++t) {
    const Mat a = RandomMonotoneMat(2 + t % 6, rng);
    const double norm = SpectralNorm(a);
    held += EgAffineCocoercivityCheck(a, 1.0 / (2.0 * norm), norm).verdict == Verdict::kHolds;
  }
  o.pass = held == 100;
  o.detail = std::to_string(held) + "/100 confirmed";
  return o;
}

// ---- 7: optimistic methods ---------------------------------------------------

Outcome OptimisticWitness() {
  Outcome o;
  const Mat rot{{0, 1}, {-1, 0}};
  double worst = INFINITY;
  for (double ell : {0.5, 1.0, 2.0}) {
    for (double g : {0.25, 0.5, 1.0}) {
      for (auto form : {OptimisticForm::kOg, OptimisticForm::kEftp}) {
        const double ratio = OgNoncocoercivityWitness(rot, ell, g, form).Value("ratio");
        const double need = 1.0 + 4.0 / (ell * ell * g * g);
        worst = std::min(worst, ratio - need);
        if (ratio < need - 1e-9) o.pass = false;
      }
    }
  }
  o.detail = "smallest ratio excess " + Fmt(worst);
  return o;
}

// ---- 8: Hamiltonian gradient ---------------------------------------------------

Outcome HamiltonianCurvature() {
  Outcome o;
  const double closed = HamiltonianSecondDerivative(3.0);
  const double fd = HamiltonianSecondDerivativeFd(3.0);
  o.pass = closed < 0.0 && std::abs(closed - fd) <= 1e-6 * std::abs(closed);
  o.detail = "closed form " + std::to_string(closed) + ", finite difference " + std::to_string(fd);
  return o;
}

Outcome HgmLogistic() {
  std::vector<BoundCheck> checks;
  for (const auto& e : Suite()) {
    if (e.name != "logistic") continue;
    const double f0 = Norm(e.op.Eval(e.x0));
    auto [best, mono] =
        CheckHgmBounds(e.op, 0.26, 0.25, 1.0 / (0.26 * 0.26 + 0.25 * f0), 1000, e.x0);
    checks = {best, mono};
  }
  return AllChecksPass(checks, {"hgm_best_iterate", "hgm_norm_monotone"});
}

Outcome HgmContraction() {
  const BoundCheck c = CheckHgmAffineContraction(Mat::Diagonal({1, 2}), {0.5, -1}, 200, {3, 4});
  Outcome o = AllChecksPass({c}, {"hgm_affine_contraction"});
  o.pass = o.pass && std::abs(c.params["rho"].get<double>() - 0.6) <= 1e-15;
  o.detail += ", rho " + Fmt(c.params["rho"].get<double>());
  return o;
}

// ---- 9: properties -------------------------------------------------------------

Outcome PpCocoercive() {
  Outcome o;
  std::mt19937_64 rng(909);
  double worst = INFINITY;
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + t % 4;
    const Operator f = Operator::Affine(RandomMonotoneMat(d, rng), RandomVec(d, rng));
    const double gamma = 0.1 + 0.1 * (t % 10);
    const Operator pp = MakePpOperator(f, gamma);
    for (int k = 0; k < 10; ++k) {
      const Vec x = RandomVec(d, rng), y = RandomVec(d, rng);
      // F_PP is (1/gamma)-cocoercive: gamma |F(x) - F(y)|^2 <= <F(x) - F(y), x - y>.
      const Vec df = Sub(pp.Eval(x), pp.Eval(y));
      const double slack = Dot(df, Sub(x, y)) - gamma * SqNorm(df);
      worst = std::min(worst, slack / std::max(1.0, SqNorm(Sub(x, y))));
    }
  }
  o.pass = worst >= -1e-12;
  o.detail = "smallest normalized slack " + Fmt(worst);
  return o;
}

Outcome RootPreservation() {
  Outcome o;
  std::mt19937_64 rng(910);
  double worst = 0.0;
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 6;
    const Operator f = Operator::Affine(RandomMonotoneMat(n, rng, 0.05), RandomVec(n, rng));
    const double g = 0.1 + 0.05 * t;
    const Vec& r = *f.root();
    const Vec lifted = Concat(r, r);
    for (double v : {Norm(MakeEgOperator(f, g).Eval(r)), Norm(MakePpOperator(f, g).Eval(r)),
                     Norm(MakeHamiltonianOperator(f).Eval(r)),
                     Norm(MakeOgOperator(f, g).Eval(lifted)),
                     Norm(MakeEftpOperator(f, g).Eval(lifted))}) {
      worst = std::max(worst, v);
    }
  }
  o.pass = worst <= 1e-12;
  o.detail = "largest residual at the zero " + Fmt(worst);
  return o;
}

Outcome OptimisticEquivalence() {
  Outcome o;
  std::mt19937_64 rng(911);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int d = 1 + t % 5;
    const Mat a = RandomMonotoneMat(d, rng, 0.1);
    const Operator f = Operator::Affine(a, RandomVec(d, rng));
    SolverConfig cfg;
    cfg.gamma = 0.3 / SpectralNorm(a);
    cfg.iters = 100;
    cfg.x0 = RandomVec(d, rng);
    cfg.method = Method::kOg;
    const Trace og = RunSolver(f, cfg);
    cfg.method = Method::kEftp;
    const Trace ef = RunSolver(f, cfg);
    for (size_t k = 0; k < og.rows.size(); ++k) {
      worst = std::max(worst, NormInf(Sub(og.rows[k].x, ef.rows[k].x_tilde)));
    }
  }
  o.pass = worst <= 1e-10;
  o.detail = "max sequence difference " + Fmt(worst);
  return o;
}

Outcome SdpaRoundTrip() {
  Outcome o;
  std::vector<GramProblem> probs = {BuildExpansivenessMatrices(1.0, 0.5, 0.5),
                                    BuildNormPep(1.3, 0.4, 0.3, 2, false),
                                    BuildNormPep(2.0, 0.1, 0.05, 1, true),
                                    BuildDeltaPep(1.0, 0.7, 0.2, PepClass::kCocoercive)};
  // Exact value equality; zeros are not written, so -0.0 comes back as 0.0.
  auto same = [](const Mat& a, const Mat& b) { return a == b; };
  for (const auto& p : probs) {
    const GramProblem back = SdpaFromString(SdpaToString(p));
    bool ok = same(back.objective, p.objective) && back.ineqs.size() == p.ineqs.size() &&
              back.eqs.size() == p.eqs.size();
    for (size_t k = 0; ok && k < p.ineqs.size(); ++k) {
      ok = same(back.ineqs[k].m, p.ineqs[k].m) && back.ineqs[k].rhs == p.ineqs[k].rhs;
    }
    for (size_t k = 0; ok && k < p.eqs.size(); ++k) {
      ok = same(back.eqs[k].m, p.eqs[k].m) && back.eqs[k].rhs == p.eqs[k].rhs;
    }
    if (!ok) {
      o.pass = false;
      o.detail += p.name + " changed ";
    }
  }
  if (o.pass) o.detail = std::to_string(probs.size()) + " problems round-trip with exact values";
  return o;
}

Outcome SeedDeterminism() {
  Outcome o;
  auto expect = [&](bool same, const char* what) {
    if (!same) {
      o.pass = false;
      o.detail += std::string(what) + " differs ";
    }
  };
  expect(OperatorToJson(RandomMonotoneAffine(10, 3)) == OperatorToJson(RandomMonotoneAffine(10, 3)),
         "random operator");
  const Operator f = Operator::LogisticGrad();
  expect(ReportToJson(SampledPropertyCheck(f, OperatorClass::Monotone(), 200, 9)).dump() ==
             ReportToJson(SampledPropertyCheck(f, OperatorClass::Monotone(), 200, 9)).dump(),
         "sampled check");
  const Mat rot{{0, 1}, {-1, 0}};
  expect(ReportToJson(LinearStarEquivCheck(rot, 1.0, 100, 4)).dump() ==
             ReportToJson(LinearStarEquivCheck(rot, 1.0, 100, 4)).dump(),
         "star check");
  LowerBoundOptions lb;
  lb.restarts = 4;
  lb.seed = 12;
  const GramProblem p = BuildExpansivenessMatrices(1.0, 0.5, 0.5);
  const FeasiblePoint a = LowerBoundSearch(p, lb);
  lb.parallel = false;
  expect(FeasiblePointToJson(a).dump() == FeasiblePointToJson(LowerBoundSearch(p, lb)).dump(),
         "lower-bound search");
  SuiteOptions so;
  so.iters = 50;
  so.eg_last_iters = 50;
  const auto suite = Suite();
  const std::string r1 = ReportToJson(RunSuiteChecks(suite, so)).dump();
  so.parallel = false;
  expect(r1 == ReportToJson(RunSuiteChecks(suite, so)).dump(), "suite report");
  expect(CheckEgNormViolationRegimes(DefaultRegimeGrid(), 5, 2, 0).ToJson() ==
             CheckEgNormViolationRegimes(DefaultRegimeGrid(), 5, 2, 0).ToJson(),
         "regime search");
  if (o.pass) o.detail = "six randomized operations repeat exactly";
  return o;
}

std::vector<Criterion> Criteria() {
  return {
      {1, "1a", "counterexample slacks nonnegative", CexNonnegative},
      {1, "1b", "counterexample has exactly four tight slacks", CexFourTight},
      {1, "1c", "(x_F1, y_F2) slack equals gamma1*ell/2", CexNamedSlack},
      {1, "1d", "counterexample expansion formula", CexExpansion},
      {2, "2a", "extragradient last-iterate bound on suite, K <= 1e4", EgLastBound},
      {2, "2b", "rotation trace matches 0.75^K |x0|^2", EgRotationClosedForm},
      {3, "3a", "no per-step increase of |F(x^k)|", NormMonotone},
      {3, "3b", "per-step distance inequality", DistanceDecrease},
      {4, "4a", "GD, PP, EG random-iterate and EFTP bounds on suite", SuiteBounds},
      {4, "4b", "GD identity K=0 equality", GdEquality},
      {5, "5a", "hand-coded matrices match symbolic expansion", PepSymbolic},
      {5, "5b", "counterexample embeds as feasible Gram point", PepEmbedding},
      {5, "5c", "lower-bound search exceeds 1", PepLowerBound},
      {6, "6a", "spectral disk agrees with exact pencil on normal matrices", SpectralVsPencil},
      {6, "6b", "rotation rejected up to ell = 1e9", RotationRejected},
      {6, "6c", "smallest cocoercivity constant of diag(1,2)", MinEll},
      {6, "6d", "extragradient operator of monotone affine maps is cocoercive", EgAffine},
      {7, "7", "optimistic non-cocoercivity ratio on rotation", OptimisticWitness},
      {8, "8a", "Hamiltonian curvature negative at 3", HamiltonianCurvature},
      {8, "8b", "Hamiltonian best-iterate bound and |F| monotone on logistic", HgmLogistic},
      {8, "8c", "affine contraction factor on diag(1,2)", HgmContraction},
      {9, "9a", "proximal operator cocoercivity", PpCocoercive},
      {9, "9b", "derived operators keep the zero", RootPreservation},
      {9, "9c", "optimistic and EFTP sequences coincide", OptimisticEquivalence},
      {9, "9d", "SDPA round trip", SdpaRoundTrip},
      {9, "9e", "seed determinism", SeedDeterminism},
  };
}

int Main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance_test [--criterion N]\n";
      return 2;
    }
  }
  int failures = 0, ran = 0;
  for (const auto& c : Criteria()) {
    if (only != 0 && c.group != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " -- "
              << o.detail << std::endl;
  }
  if (ran == 0) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  std::cout << ran - failures << "/" << ran << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace vicert

int main(int argc, char** argv) { return vicert::Main(argc, argv); }
