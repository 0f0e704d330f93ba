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

#include "vicert/harness.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <limits>
#include <random>

#include "vicert/certify.h"
#include "vicert/operator_io.h"
#include "vicert/pep.h"

namespace vicert {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Slack allowed on step-size preconditions so that values like 1/sqrt(2)
// typed with eight digits are not rejected.
constexpr double kStepSlack = 1e-8;

std::mt19937_64 StreamRng(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

uint64_t NameHash(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Vec Gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vec v(n);
  for (double& x : v) x = nd(rng);
  return v;
}

Mat GaussianMat(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = nd(rng);
  }
  return m;
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kPreconditionViolated, what);
}

void RequirePositive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kBadParameters, std::string(name) + " must be positive and finite");
  }
}

Trace Run(const Operator& op, SolverConfig cfg, const Vec& x0, const Vec& x_star) {
  if (cfg.iters < 0) throw Error(ErrorCode::kBadParameters, "K must be nonnegative");
  cfg.x0 = x0;
  return RunSolver(op, cfg, x_star);
}

double Dist0(const Vec& x0, const Vec& x_star) {
  if (x0.size() != x_star.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "x0 and x* differ in size");
  }
  return SqNorm(Sub(x0, x_star));
}

// Rows for a running mean of `vals` against bound(k).
template <typename BoundFn>
void AddRunningMean(BoundCheck& c, const std::vector<double>& vals, BoundFn bound) {
  double sum = 0.0;
  for (size_t k = 0; k < vals.size(); ++k) {
    sum += vals[k];
    c.Add(static_cast<int>(k), sum / static_cast<double>(k + 1), bound(static_cast<int>(k)));
  }
}

// A diverged or truncated run fails the check explicitly.
void MarkTruncated(BoundCheck& c, const Trace& t, int K) {
  if (t.diverged || static_cast<int>(t.rows.size()) < K + 1) {
    c.Add(K, kInf, c.rows.empty() ? 0.0 : c.rows.back().bound);
    c.note = "iterates diverged";
  }
}

std::vector<double> FxColumn(const Trace& t) {
  std::vector<double> v;
  v.reserve(t.rows.size());
  for (const auto& r : t.rows) v.push_back(r.fx_sq);
  return v;
}

nlohmann::json BaseParams(double gamma, int K) {
  return {{"gamma", gamma}, {"K", K}};
}

nlohmann::json NumberOrNull(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

void BoundCheck::Add(int k, double observed, double bound) {
  rows.push_back({k, observed, bound, bound - observed});
}

bool BoundCheck::RowPasses(const BoundRow& r) const {
  if (std::isnan(r.observed) || std::isnan(r.bound)) return false;
  if (r.bound == kInf) return true;
  if (r.observed == kInf) return false;
  const double scale =
      mode == Tolerance::kRelative ? std::abs(r.bound) : std::max(1.0, std::abs(r.bound));
  return r.margin >= -tol * scale;
}

void BoundCheck::Finalize() {
  if (!asserted) {
    pass = true;
    return;
  }
  pass = std::all_of(rows.begin(), rows.end(), [&](const BoundRow& r) { return RowPasses(r); });
}

const BoundRow* BoundCheck::Worst() const {
  const BoundRow* worst = nullptr;
  double worst_score = kInf;
  for (const auto& r : rows) {
    double score;
    if (!RowPasses(r) && (std::isnan(r.observed) || r.observed == kInf)) {
      score = -kInf;
    } else if (r.bound == kInf) {
      score = kInf;
    } else {
      const double scale =
          mode == Tolerance::kRelative ? std::abs(r.bound) : std::max(1.0, std::abs(r.bound));
      score = scale > 0.0 ? r.margin / scale : (r.margin >= 0.0 ? kInf : -kInf);
      if (r.margin == 0.0) score = 0.0;
    }
    if (worst == nullptr || score < worst_score) {
      worst = &r;
      worst_score = score;
    }
  }
  return worst;
}

nlohmann::json BoundCheckToJson(const BoundCheck& c, bool include_rows) {
  nlohmann::json j;
  j["id"] = c.id;
  j["params"] = c.params;
  if (const BoundRow* w = c.Worst()) {
    j["k"] = w->k;
    j["observed"] = NumberOrNull(w->observed);
    j["bound"] = NumberOrNull(w->bound);
    j["margin"] = NumberOrNull(w->margin);
  } else {
    j["k"] = nullptr;
    j["observed"] = nullptr;
    j["bound"] = nullptr;
    j["margin"] = nullptr;
  }
  j["pass"] = c.pass;
  j["asserted"] = c.asserted;
  j["tolerance"] = c.tol;
  j["tolerance_mode"] = c.mode == Tolerance::kRelative ? "relative" : "mixed";
  j["rows_checked"] = c.rows.size();
  if (!c.note.empty()) j["note"] = c.note;
  if (include_rows) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : c.rows) {
      rows.push_back({{"k", r.k},
                      {"observed", NumberOrNull(r.observed)},
                      {"bound", NumberOrNull(r.bound)},
                      {"margin", NumberOrNull(r.margin)}});
    }
    j["rows"] = rows;
  }
  return j;
}

std::pair<BoundCheck, BoundCheck> CheckGdBounds(const Operator& op, double ell, double gamma,
                                                int K, const Vec& x_star, const Vec& x0) {
  RequirePositive(ell, "ell");
  RequirePositive(gamma, "gamma");
  Require(gamma * ell <= 1.0 + kStepSlack, "gradient descent needs gamma <= 1/ell");
  const double d0 = Dist0(x0, x_star);
  SolverConfig cfg;
  cfg.method = Method::kGd;
  cfg.gamma = gamma;
  cfg.iters = K;
  const Trace t = Run(op, cfg, x0, x_star);
  auto bound = [&](int k) { return ell * d0 / (gamma * (k + 1)); };

  BoundCheck avg, last;
  avg.id = "gd_random_iterate";
  last.id = "gd_last_iterate";
  for (BoundCheck* c : {&avg, &last}) {
    c->params = BaseParams(gamma, K);
    c->params["ell"] = ell;
  }
  const std::vector<double> fx = FxColumn(t);
  AddRunningMean(avg, fx, bound);
  for (size_t k = 0; k < fx.size(); ++k) last.Add(static_cast<int>(k), fx[k], bound(k));
  MarkTruncated(avg, t, K);
  MarkTruncated(last, t, K);
  avg.Finalize();
  last.Finalize();
  return {avg, last};
}

std::pair<BoundCheck, BoundCheck> CheckPpBound(const Operator& op, double ell, double gamma,
                                               int K, const Vec& x_star, const Vec& x0) {
  RequirePositive(ell, "ell");
  RequirePositive(gamma, "gamma");
  Require(gamma * ell <= 1.0 + kStepSlack, "proximal point needs gamma <= 1/ell");
  const double d0 = Dist0(x0, x_star);
  SolverConfig cfg;
  cfg.method = Method::kPpEll;
  cfg.gamma = gamma;
  cfg.ell = ell;
  cfg.iters = K;
  const Trace t = Run(op, cfg, x0, x_star);
  auto bound = [&](int k) { return ell * d0 / (gamma * (k + 1)); };

  BoundCheck avg, last;
  avg.id = "pp_random_iterate";
  last.id = "pp_last_iterate";
  for (BoundCheck* c : {&avg, &last}) {
    c->params = BaseParams(gamma, K);
    c->params["ell"] = ell;
  }
  const std::vector<double> fpp = t.Column("fpp_sq");
  AddRunningMean(avg, fpp, bound);
  for (size_t k = 0; k < fpp.size(); ++k) last.Add(static_cast<int>(k), fpp[k], bound(k));
  MarkTruncated(avg, t, K);
  MarkTruncated(last, t, K);
  avg.Finalize();
  last.Finalize();
  return {avg, last};
}

BoundCheck CheckEgRandomBound(const Operator& op, double L, double gamma1, double gamma2, int K,
                              const Vec& x_star, const Vec& x0) {
  RequirePositive(L, "L");
  RequirePositive(gamma1, "gamma1");
  RequirePositive(gamma2, "gamma2");
  Require(gamma1 * L <= 1.0 + kStepSlack, "extragradient needs gamma1 <= 1/L");
  Require(gamma2 <= gamma1 / 2.0 * (1.0 + kStepSlack), "extragradient needs gamma2 <= gamma1/2");
  const double d0 = Dist0(x0, x_star);
  SolverConfig cfg;
  cfg.method = Method::kEg2;
  cfg.gamma1 = gamma1;
  cfg.gamma2 = gamma2;
  cfg.iters = K;
  const Trace t = Run(op, cfg, x0, x_star);

  BoundCheck c;
  c.id = "eg_random_iterate";
  c.params = {{"L", L}, {"gamma1", gamma1}, {"gamma2", gamma2}, {"K", K}};
  AddRunningMean(c, t.Column("fxt_sq"),
                 [&](int k) { return 2.0 * d0 / (gamma1 * gamma2 * (k + 1)); });
  MarkTruncated(c, t, K);
  c.Finalize();
  return c;
}

namespace {

std::vector<BoundCheck> EgLastRows(const Operator& op, double L, double gamma, int K,
                                   const Vec& x_star, const Vec& x0) {
  const double d0 = Dist0(x0, x_star);
  SolverConfig cfg;
  cfg.method = Method::kEg;
  cfg.gamma = gamma;
  cfg.iters = K;
  const Trace t = Run(op, cfg, x0, x_star);
  const double shrink = 1.0 - L * L * gamma * gamma;
  const std::vector<double> fx = FxColumn(t);

  BoundCheck norm, gap, mono, dist, curve;
  norm.id = "eg_last_iterate";
  gap.id = "eg_gap";
  mono.id = "eg_norm_monotone";
  dist.id = "eg_distance_decrease";
  curve.id = "eg_guessed_curve";
  for (BoundCheck* c : {&norm, &gap, &mono, &dist, &curve}) {
    c->params = BaseParams(gamma, K);
    c->params["L"] = L;
  }
  mono.mode = dist.mode = Tolerance::kMixed;
  mono.tol = dist.tol = 1e-12;
  curve.asserted = false;

  const double r0 = std::sqrt(d0);
  for (size_t i = 0; i < fx.size(); ++i) {
    const int k = static_cast<int>(i);
    norm.Add(k, fx[i], d0 / (gamma * gamma * shrink * (k + 1)));
    gap.Add(k, 2.0 * std::sqrt(fx[i]) * r0,
            2.0 * d0 / (gamma * std::sqrt(shrink) * std::sqrt(k + 1.0)));
    if (k >= 1) {
      mono.Add(k, std::sqrt(fx[i]), std::sqrt(fx[i - 1]));
      curve.Add(k, fx[i], 16.0 * L * L * d0 / k);
    }
    if (i + 1 < t.rows.size()) {
      const double here = *t.rows[i].dist_sq, next = *t.rows[i + 1].dist_sq;
      dist.Add(k, gamma * gamma * shrink * fx[i] + next, here);
    }
  }
  for (BoundCheck* c : {&norm, &gap, &mono, &dist, &curve}) {
    MarkTruncated(*c, t, K);
    c->Finalize();
  }
  return {norm, gap, mono, dist, curve};
}

}  // namespace

std::vector<BoundCheck> CheckEgLastBounds(const Operator& op, double L, double gamma, int K,
                                          const Vec& x_star, const Vec& x0) {
  RequirePositive(L, "L");
  RequirePositive(gamma, "gamma");
  Require(gamma * L * std::sqrt(2.0) <= 1.0 + kStepSlack,
          "last-iterate extragradient needs gamma <= 1/(sqrt(2) L)");
  return EgLastRows(op, L, gamma, K, x_star, x0);
}

BoundCheck ReportEgNormRelaxedStep(const Operator& op, double L, double gamma, int K,
                                   const Vec& x_star, const Vec& x0) {
  RequirePositive(L, "L");
  RequirePositive(gamma, "gamma");
  Require(gamma * L <= 1.0 + kStepSlack, "relaxed extragradient step needs gamma <= 1/L");
  BoundCheck c = EgLastRows(op, L, gamma, K, x_star, x0)[2];
  c.id = "eg_norm_monotone_relaxed_step";
  c.asserted = false;
  c.Finalize();
  return c;
}

BoundCheck CheckEftpBound(const Operator& op, double L, double gamma, int K, const Vec& x_star,
                          const Vec& x0) {
  RequirePositive(L, "L");
  RequirePositive(gamma, "gamma");
  Require(gamma * gamma * L * L * 10.0 < 1.0, "EFTP needs gamma < 1/(sqrt(10) L)");
  const double d0 = Dist0(x0, x_star);
  SolverConfig cfg;
  cfg.method = Method::kEftp;
  cfg.gamma = gamma;
  cfg.iters = K;
  const Trace t = Run(op, cfg, x0, x_star);
  const double denom = gamma * gamma * (1.0 - 10.0 * gamma * gamma * L * L);

  BoundCheck c;
  c.id = "eftp_random_iterate";
  c.params = BaseParams(gamma, K);
  c.params["L"] = L;
  AddRunningMean(c, t.Column("fxt_sq"), [&](int k) { return d0 / (denom * (k + 1)); });
  MarkTruncated(c, t, K);
  c.Finalize();
  return c;
}

std::pair<BoundCheck, BoundCheck> CheckHgmBounds(const Operator& op, double L, double Lambda,
                                                 double gamma, int K, const Vec& x0) {
  if (!op.has_jacobian()) {
    throw Error(ErrorCode::kNoAnalyticJacobian, "Hamiltonian bounds need an analytic Jacobian");
  }
  RequirePositive(L, "L");
  RequirePositive(gamma, "gamma");
  if (!(Lambda >= 0.0) || !std::isfinite(Lambda)) {
    throw Error(ErrorCode::kBadParameters, "Lambda must be nonnegative and finite");
  }
  const double f0 = Norm(op.Eval(x0));
  const double curv = L * L + Lambda * f0;
  Require(gamma * curv <= 2.0 * (1.0 + kStepSlack),
          "Hamiltonian gradient needs gamma <= 2/(L^2 + Lambda |F(x0)|)");
  SolverConfig cfg;
  cfg.method = Method::kHgm;
  cfg.gamma = gamma;
  cfg.iters = K;
  cfg.x0 = x0;
  const Trace t = RunSolver(op, cfg);
  const double denom = gamma * (2.0 - gamma * curv);

  BoundCheck best, mono;
  best.id = "hgm_best_iterate";
  mono.id = "hgm_norm_monotone";
  for (BoundCheck* c : {&best, &mono}) {
    c->params = BaseParams(gamma, K);
    c->params["L"] = L;
    c->params["Lambda"] = Lambda;
  }
  mono.mode = Tolerance::kMixed;
  mono.tol = 1e-12;
  const std::vector<double> fh = t.Column("fh_sq");
  const std::vector<double> fx = FxColumn(t);
  double running_min = kInf;
  for (size_t i = 0; i < fh.size(); ++i) {
    const int k = static_cast<int>(i);
    running_min = std::min(running_min, fh[i]);
    best.Add(k, running_min, denom > 0.0 ? f0 * f0 / (denom * (k + 1)) : kInf);
    if (k >= 1) mono.Add(k, std::sqrt(fx[i]), std::sqrt(fx[i - 1]));
  }
  MarkTruncated(best, t, K);
  MarkTruncated(mono, t, K);
  best.Finalize();
  mono.Finalize();
  return {best, mono};
}

Vec AffineProjectionSolution(const Mat& a, const Vec& b, const Vec& x0) {
  if (!a.square() || a.rows() != static_cast<int>(b.size()) ||
      a.rows() != static_cast<int>(x0.size())) {
    throw Error(ErrorCode::kDimensionMismatch, "affine projection sizes differ");
  }
  const Mat at = a.Transpose();
  const SymEigResult eig = SymEigDecompose(at * a);
  const double top = eig.values.empty() ? 0.0 : eig.values.back();
  const Vec g = at * Add(a * x0, b);
  Vec x = x0;
  for (int j = 0; j < static_cast<int>(eig.values.size()); ++j) {
    const double lam = eig.values[j];
    if (lam <= 1e-12 * top || lam <= 0.0) continue;
    const Vec q = eig.vectors.Col(j);
    x = Axpy(x, -Dot(q, g) / lam, q);
  }
  return x;
}

BoundCheck CheckHgmAffineContraction(const Mat& a, const Vec& b, int K, const Vec& x0) {
  if (K < 0) throw Error(ErrorCode::kBadParameters, "K must be nonnegative");
  const Vec sq = SymEigs(a.Transpose() * a);
  const double smax = sq.empty() ? 0.0 : sq.back();
  if (!(smax > 0.0)) throw Error(ErrorCode::kBadParameters, "A must be nonzero");
  double smin = smax;
  for (double s : sq) {
    if (s > 1e-12 * smax) smin = std::min(smin, s);
  }
  const double kappa = smin / smax;
  const double rho = (1.0 - kappa) / (1.0 + kappa);
  const double gamma = 1.0 / smax;
  const Vec x_star = AffineProjectionSolution(a, b, x0);

  SolverConfig cfg;
  cfg.method = Method::kHgm;
  cfg.gamma = gamma;
  cfg.iters = K;
  const Trace t = Run(Operator::Affine(a, b), cfg, x0, x_star);

  BoundCheck c;
  c.id = "hgm_affine_contraction";
  c.params = BaseParams(gamma, K);
  c.params["rho"] = rho;
  c.params["kappa"] = kappa;
  c.mode = Tolerance::kMixed;
  c.tol = 1e-12;
  for (size_t i = 1; i < t.rows.size(); ++i) {
    c.Add(static_cast<int>(i), *t.rows[i].dist_sq, rho * *t.rows[i - 1].dist_sq);
  }
  MarkTruncated(c, t, K);
  c.Finalize();
  return c;
}

Operator RandomMonotoneAffine(int d, uint64_t seed) {
  if (d <= 0) throw Error(ErrorCode::kBadParameters, "dimension must be positive");
  std::mt19937_64 rng = StreamRng(seed, static_cast<uint64_t>(d));
  Mat m = GaussianMat(d, d, rng);
  const Vec b = Gaussian(d, rng);
  const double low = SymEigs(0.5 * (m + m.Transpose())).front();
  const double shift = 0.1 - low;
  for (int i = 0; i < d; ++i) m(i, i) += shift;
  DeclaredConstants c;
  c.L = SpectralNorm(m) * (1.0 + 1e-12);
  if (auto ell = MinCocoercivityEll(m)) c.ell = *ell * (1.0 + 1e-6);
  return Operator::Affine(std::move(m), b).WithConstants(c);
}

std::vector<std::pair<std::string, Operator>> StandardOperators(uint64_t seed) {
  std::vector<std::pair<std::string, Operator>> ops;
  ops.emplace_back("rotation", Operator::Rotation(2));
  for (int d : {2, 10, 50}) {
    ops.emplace_back("affine_d" + std::to_string(d), RandomMonotoneAffine(d, seed));
  }
  std::mt19937_64 rng = StreamRng(seed, NameHash("bilinear"));
  const Mat coupling = GaussianMat(2, 2, rng);
  Operator game = Operator::BilinearGame(coupling, Gaussian(4, rng));
  DeclaredConstants gc = game.constants();
  gc.L = *gc.L * (1.0 + 1e-12);
  ops.emplace_back("bilinear", game.WithConstants(gc));
  ops.emplace_back("logistic", Operator::LogisticGrad(1.0, 0.01));
  ops.emplace_back("scaled_identity", Operator::ScaledIdentity(3, 2.0, {1.0, -1.0, 0.5}));
  return ops;
}

void WriteStandardFixtures(const std::string& dir, uint64_t seed) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, op] : StandardOperators(seed)) {
    WriteOperatorFile(op, (std::filesystem::path(dir) / (name + ".json")).string());
  }
}

std::vector<std::pair<std::string, Operator>> ReadFixtures(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::kIoError, "cannot list " + dir);
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, Operator>> ops;
  for (const auto& f : files) ops.emplace_back(f.stem().string(), ReadOperatorFile(f.string()));
  return ops;
}

SuiteEntry MakeSuiteEntry(const std::string& name, const Operator& op, uint64_t seed) {
  if (!op.root()) throw Error(ErrorCode::kBadParameters, name + " has no known zero");
  if (!op.constants().L) throw Error(ErrorCode::kBadParameters, name + " declares no L");
  SuiteEntry e{name, op, *op.constants().L, op.constants().ell, op.constants().Lambda,
               *op.root(), {}};
  std::mt19937_64 rng = StreamRng(seed, NameHash(name));
  Vec u = Gaussian(op.dim(), rng);
  e.x0 = Axpy(e.x_star, 1.0 / Norm(u), u);
  return e;
}

std::vector<SuiteEntry> MakeSuite(const std::vector<std::pair<std::string, Operator>>& ops,
                                  uint64_t seed) {
  std::vector<SuiteEntry> suite;
  for (const auto& [name, op] : ops) suite.push_back(MakeSuiteEntry(name, op, seed));
  return suite;
}

std::vector<BoundCheck> RunEntryChecks(const SuiteEntry& e, const SuiteOptions& opts) {
  std::vector<BoundCheck> out;
  auto push = [&](BoundCheck c) {
    c.params["operator"] = e.name;
    out.push_back(std::move(c));
  };
  const double L = e.L;
  if (e.ell) {
    auto [avg, last] = CheckGdBounds(e.op, *e.ell, 1.0 / *e.ell, opts.iters, e.x_star, e.x0);
    push(avg);
    push(last);
  }
  {
    auto [avg, last] = CheckPpBound(e.op, L, 1.0 / L, opts.iters, e.x_star, e.x0);
    push(avg);
    push(last);
  }
  push(CheckEgRandomBound(e.op, L, 1.0 / L, 0.5 / L, opts.iters, e.x_star, e.x0));
  for (auto& c : CheckEgLastBounds(e.op, L, 1.0 / (std::sqrt(2.0) * L), opts.eg_last_iters,
                                   e.x_star, e.x0)) {
    push(c);
  }
  push(ReportEgNormRelaxedStep(e.op, L, 0.95 / L, opts.iters, e.x_star, e.x0));
  push(CheckEftpBound(e.op, L, 0.9 / (std::sqrt(10.0) * L), opts.iters, e.x_star, e.x0));
  if (e.op.has_jacobian() && (e.Lambda || e.op.is_affine())) {
    const double Lambda = e.Lambda.value_or(0.0);
    const double f0 = Norm(e.op.Eval(e.x0));
    auto [best, mono] =
        CheckHgmBounds(e.op, L, Lambda, 1.0 / (L * L + Lambda * f0), opts.iters, e.x0);
    push(best);
    push(mono);
  }
  if (e.op.is_affine()) {
    push(CheckHgmAffineContraction(e.op.A(), e.op.b(), opts.iters, e.x0));
  }
  return out;
}

bool Report::AllPass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
}

Report RunSuiteChecks(const std::vector<SuiteEntry>& suite, const SuiteOptions& opts,
                      uint64_t seed) {
  Report r;
  r.seed = seed;
  std::vector<std::vector<BoundCheck>> per_entry(suite.size());
  if (opts.parallel && suite.size() > 1) {
    std::vector<std::future<std::vector<BoundCheck>>> jobs;
    for (const auto& e : suite) {
      jobs.push_back(std::async(std::launch::async, [&e, &opts] { return RunEntryChecks(e, opts); }));
    }
    for (size_t i = 0; i < jobs.size(); ++i) per_entry[i] = jobs[i].get();
  } else {
    for (size_t i = 0; i < suite.size(); ++i) per_entry[i] = RunEntryChecks(suite[i], opts);
  }
  for (auto& v : per_entry) {
    for (auto& c : v) r.checks.push_back(std::move(c));
  }
  return r;
}

nlohmann::json ReportToJson(const Report& r, bool include_rows) {
  nlohmann::json j;
  j["version"] = kReportVersion;
  j["seed"] = r.seed;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(BoundCheckToJson(c, include_rows));
  j["checks"] = checks;
  j["all_pass"] = r.AllPass();
  if (!r.extra.is_null()) {
    for (const auto& [k, v] : r.extra.items()) j[k] = v;
  }
  return j;
}

std::vector<RegimeParams> DefaultRegimeGrid() {
  std::vector<RegimeParams> grid;
  for (double g1 : {0.25, 0.5, 1.0}) {
    for (double frac : {0.25, 0.5, 1.0}) grid.push_back({1.0, g1, g1 * frac});
  }
  return grid;
}

namespace {

struct EgStepPoints {
  Vec x0, xt0, x1, xt1;
  Vec f0, ft0, f1, ft1;
};

EgStepPoints OneEgStep(const std::function<Vec(const Vec&)>& f, const Vec& x0, double g1,
                       double g2) {
  EgStepPoints s;
  s.x0 = x0;
  s.f0 = f(x0);
  s.xt0 = Axpy(x0, -g1, s.f0);
  s.ft0 = f(s.xt0);
  s.x1 = Axpy(x0, -g2, s.ft0);
  s.f1 = f(s.x1);
  s.xt1 = Axpy(s.x1, -g1, s.f1);
  s.ft1 = f(s.xt1);
  return s;
}

double RelIncrease(const Vec& before, const Vec& after) {
  const double b = SqNorm(before);
  return b > 0.0 ? (SqNorm(after) - b) / b : 0.0;
}

// Points recovered from a delta-problem Gram matrix, re-checked against the
// cocoercivity interpolation conditions.
std::optional<nlohmann::json> PepWitness(const FeasiblePoint& fp, const RegimeParams& p,
                                         bool eg_objective) {
  const std::vector<Vec> v = GramToPoints(fp.G);
  // Basis order: x0-x*, F(x0), F(x1), F(xt0), F(xt1).
  const Vec& x0 = v[0];
  const Vec zero(x0.size(), 0.0);
  const Vec xt0 = Axpy(x0, -p.gamma1, v[1]);
  const Vec x1 = Axpy(x0, -p.gamma2, v[3]);
  const Vec xt1 = Axpy(x1, -p.gamma1, v[2]);
  PointSystem ps;
  ps.cls = OperatorClass::Cocoercive(p.L);
  ps.points = {{"x*", zero, zero}, {"x0", x0, v[1]}, {"xt0", xt0, v[3]},
               {"x1", x1, v[2]},   {"xt1", xt1, v[4]}};
  const CertificateReport cert = CheckInterpolation(ps, 1e-8);
  if (cert.verdict != Verdict::kHolds) return std::nullopt;
  const double increase =
      eg_objective ? SqNorm(v[4]) - SqNorm(v[3]) : SqNorm(v[2]) - SqNorm(v[1]);
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& lp : ps.points) pts.push_back({{"label", lp.label}, {"x", lp.x}, {"fx", lp.fx}});
  return nlohmann::json{{"source", "pep"},
                        {"objective", eg_objective ? "F_EG" : "F"},
                        {"increase", increase},
                        {"interpolation_worst_slack", cert.worst_slack},
                        {"points", pts}};
}

RegimeCell RunRegimeCell(const RegimeParams& p, size_t index, int ops_per_cell, uint64_t seed,
                         int pep_restarts) {
  RegimeCell cell;
  cell.p = p;
  std::mt19937_64 rng = StreamRng(seed, 0x5eed0000ULL + index);
  double best_f = -kInf, best_feg = -kInf;
  nlohmann::json best_f_wit, best_feg_wit;
  for (int i = 0; i < ops_per_cell; ++i) {
    const int d = 2 + i % 3;
    Mat m = GaussianMat(d, d, rng);
    const double low = SymEigs(0.5 * (m + m.Transpose())).front();
    for (int r = 0; r < d; ++r) m(r, r) += 0.05 - low;
    const auto ell_min = MinCocoercivityEll(m);
    if (!ell_min) continue;
    const Mat a = (p.L / (*ell_min * (1.0 + 1e-6))) * m;
    const Vec x0 = Gaussian(d, rng);
    const EgStepPoints s = OneEgStep([&](const Vec& x) { return a * x; }, x0, p.gamma1, p.gamma2);
    ++cell.ops_tested;
    const double inc_f = RelIncrease(s.f0, s.f1), inc_feg = RelIncrease(s.ft0, s.ft1);
    auto witness = [&](const char* which, double inc) {
      nlohmann::json rows = nlohmann::json::array();
      for (int r = 0; r < d; ++r) rows.push_back(a.Row(r));
      return nlohmann::json{{"source", "random_affine"}, {"objective", which},
                            {"relative_increase", inc}, {"A", rows}, {"x0", x0}};
    };
    if (inc_f > best_f) {
      best_f = inc_f;
      best_f_wit = witness("F", inc_f);
    }
    if (inc_feg > best_feg) {
      best_feg = inc_feg;
      best_feg_wit = witness("F_EG", inc_feg);
    }
  }
  cell.max_increase_f = cell.ops_tested > 0 ? best_f : 0.0;
  cell.max_increase_feg = cell.ops_tested > 0 ? best_feg : 0.0;
  // Increases below this are treated as rounding.
  constexpr double kFloor = 1e-9;
  if (best_f > kFloor) cell.witnesses.push_back(best_f_wit);
  if (best_feg > kFloor) cell.witnesses.push_back(best_feg_wit);

  if (pep_restarts > 0) {
    for (bool eg_obj : {false, true}) {
      LowerBoundOptions o;
      o.restarts = pep_restarts;
      o.seed = seed + index;
      o.parallel = false;
      const GramProblem prob =
          BuildDeltaPep(p.L, p.gamma1, p.gamma2, PepClass::kCocoercive,
                        eg_obj ? DeltaObjective::kEgOperator : DeltaObjective::kOperator);
      try {
        const FeasiblePoint fp = LowerBoundSearch(prob, o);
        (eg_obj ? cell.pep_delta_feg : cell.pep_delta_f) = fp.objective;
        if (fp.objective > 1e-7) {
          if (auto w = PepWitness(fp, p, eg_obj)) cell.witnesses.push_back(*w);
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoFeasiblePointFound) throw;
      }
    }
  }
  return cell;
}

}  // namespace

RegimeReport CheckEgNormViolationRegimes(const std::vector<RegimeParams>& grid,
                                         int ops_per_cell, uint64_t seed, int pep_restarts) {
  RegimeReport rep;
  std::vector<std::future<RegimeCell>> jobs;
  for (size_t i = 0; i < grid.size(); ++i) {
    const RegimeParams& p = grid[i];
    RequirePositive(p.L, "L");
    RequirePositive(p.gamma1, "gamma1");
    if (!(p.gamma2 >= 0.0)) throw Error(ErrorCode::kBadParameters, "gamma2 must be nonnegative");
    jobs.push_back(std::async(std::launch::async, RunRegimeCell, p, i, ops_per_cell, seed,
                              pep_restarts));
  }
  for (auto& j : jobs) rep.cells.push_back(j.get());
  return rep;
}

nlohmann::json RegimeReport::ToJson() const {
  nlohmann::json cells_json = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json j{{"L", c.p.L},
                     {"gamma1", c.p.gamma1},
                     {"gamma2", c.p.gamma2},
                     {"ops_tested", c.ops_tested},
                     {"max_relative_increase_f", c.max_increase_f},
                     {"max_relative_increase_feg", c.max_increase_feg}};
    j["pep_delta_f"] = c.pep_delta_f ? nlohmann::json(*c.pep_delta_f) : nlohmann::json(nullptr);
    j["pep_delta_feg"] =
        c.pep_delta_feg ? nlohmann::json(*c.pep_delta_feg) : nlohmann::json(nullptr);
    j["witnesses"] = c.witnesses;
    cells_json.push_back(j);
  }
  return {{"cells", cells_json}};
}

}  // namespace vicert
