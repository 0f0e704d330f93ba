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

#include "vicert/certify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace vicert {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double WorstSlack(const std::vector<Condition>& conds) {
  double w = kInf;
  for (const auto& c : conds) w = std::min(w, c.slack);
  return w;
}

Mat SymmetricPart(const Mat& a) { return 0.5 * (a + a.Transpose()); }

Mat CocoercivityPencil(const Mat& a, double ell) {
  Mat p = (0.5 * ell) * (a + a.Transpose()) - a.Transpose() * a;
  return SymmetricPart(p);
}

bool IsNormal(const Mat& a) {
  const Mat comm = a * a.Transpose() - a.Transpose() * a;
  const double s = MaxAbs(a);
  return MaxAbs(comm) <= 1e-9 * (1.0 + s * s);
}

}  // namespace

std::string OperatorClass::Name() const {
  switch (kind) {
    case ClassKind::kCocoercive: return "cocoercive(" + FormatDouble17(param) + ")";
    case ClassKind::kMonotone: return "monotone";
    case ClassKind::kLipschitz: return "lipschitz(" + FormatDouble17(param) + ")";
    case ClassKind::kMonotoneLipschitz:
      return "monotone+lipschitz(" + FormatDouble17(param) + ")";
  }
  return "unknown";
}

const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "holds";
    case Verdict::kViolated: return "violated";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

double CertificateReport::Value(const std::string& name) const {
  for (const auto& [k, v] : values) {
    if (k == name) return v;
  }
  throw Error(ErrorCode::kBadParameters, "report has no value named " + name);
}

json ReportToJson(const CertificateReport& r) {
  json j;
  j["verdict"] = VerdictName(r.verdict);
  j["worst_slack"] = r.worst_slack;
  if (r.witness) {
    const Witness& w = *r.witness;
    j["witness"] = {{"label_a", w.label_a}, {"label_b", w.label_b}, {"x_a", w.x_a},
                    {"x_b", w.x_b},         {"fx_a", w.fx_a},       {"fx_b", w.fx_b}};
  } else {
    j["witness"] = nullptr;
  }
  json conds = json::array();
  for (const auto& c : r.conditions) conds.push_back({{"name", c.name}, {"slack", c.slack}});
  j["conditions"] = conds;
  json values = json::object();
  for (const auto& [k, v] : r.values) values[k] = v;
  j["values"] = values;
  json subs = json::object();
  for (const auto& [k, v] : r.sub_verdicts) subs[k] = VerdictName(v);
  j["sub_verdicts"] = subs;
  return j;
}

double PairSlack(const OperatorClass& cls, const Vec& x_a, const Vec& fx_a,
                 const Vec& x_b, const Vec& fx_b) {
  const Vec dx = Sub(x_a, x_b);
  const Vec df = Sub(fx_a, fx_b);
  switch (cls.kind) {
    case ClassKind::kCocoercive:
      return cls.param * Dot(df, dx) - SqNorm(df);
    case ClassKind::kMonotone:
      return Dot(df, dx);
    case ClassKind::kLipschitz:
      return cls.param * cls.param * SqNorm(dx) - SqNorm(df);
    case ClassKind::kMonotoneLipschitz:
      return std::min(Dot(df, dx), cls.param * cls.param * SqNorm(dx) - SqNorm(df));
  }
  return 0.0;
}

CertificateReport CheckInterpolation(const PointSystem& ps, double tol) {
  if (ps.points.size() < 2) {
    throw Error(ErrorCode::kBadParameters, "interpolation check needs two points");
  }
  std::set<std::string> labels;
  const size_t d = ps.points.front().x.size();
  for (const auto& p : ps.points) {
    if (p.x.size() != d || p.fx.size() != d) {
      throw Error(ErrorCode::kDimensionMismatch, "point " + p.label + " has wrong size");
    }
    if (!labels.insert(p.label).second) {
      throw Error(ErrorCode::kBadParameters, "duplicate label " + p.label);
    }
  }
  CertificateReport r;
  size_t worst_i = 0, worst_j = 1;
  double worst = kInf;
  for (size_t i = 0; i < ps.points.size(); ++i) {
    for (size_t j = i + 1; j < ps.points.size(); ++j) {
      const auto& a = ps.points[i];
      const auto& b = ps.points[j];
      const double s = PairSlack(ps.cls, a.x, a.fx, b.x, b.fx);
      r.conditions.push_back({a.label + "|" + b.label, s});
      if (s < worst) {
        worst = s;
        worst_i = i;
        worst_j = j;
      }
    }
  }
  r.worst_slack = worst;
  r.verdict = worst >= -tol ? Verdict::kHolds : Verdict::kViolated;
  if (r.verdict == Verdict::kViolated) {
    const auto& a = ps.points[worst_i];
    const auto& b = ps.points[worst_j];
    r.witness = Witness{a.label, b.label, a.x, b.x, a.fx, b.fx};
  }
  return r;
}

CounterexampleInstance BuildCounterexample(double ell, double gamma1, double scale) {
  if (!(ell > 0.0) || !(gamma1 > 0.0) || !(scale > 0.0) || !std::isfinite(ell * gamma1 * scale)) {
    throw Error(ErrorCode::kBadParameters, "ell, gamma1 and scale must be positive");
  }
  if (gamma1 * ell > 1.0 + 1e-12) {
    throw Error(ErrorCode::kBadParameters, "gamma1 * ell must not exceed 1");
  }
  const double g = gamma1, l = ell, h = 1.0 / (2.0 * g);
  CounterexampleInstance inst;
  inst.ell = ell;
  inst.gamma1 = gamma1;
  inst.scale = scale;
  inst.x = {-0.5, 0.0};
  inst.y = {0.5, 0.0};
  inst.x_f1 = {-h, h};
  inst.y_f1 = {-(1.0 - g * l) * h, (1.0 + g * l) * h};
  inst.x_f2 = {-(1.0 - g * l) * h, h};
  inst.y_f2 = {-(1.0 - g * l) * h, (1.0 - g * g * l * l) * h};
  for (Vec* v : {&inst.x, &inst.y, &inst.x_f1, &inst.y_f1, &inst.x_f2, &inst.y_f2}) {
    *v = Scale(scale, *v);
  }
  return inst;
}

PointSystem CounterexamplePoints(const CounterexampleInstance& inst) {
  PointSystem ps;
  ps.cls = OperatorClass::Cocoercive(inst.ell);
  ps.points = {
      {"x", inst.x, inst.x_f1},
      {"y", inst.y, inst.y_f1},
      {"x_tilde", Axpy(inst.x, -inst.gamma1, inst.x_f1), inst.x_f2},
      {"y_tilde", Axpy(inst.y, -inst.gamma1, inst.y_f1), inst.y_f2},
  };
  return ps;
}

double CounterexampleExpansion(const CounterexampleInstance& inst, double gamma2) {
  const Vec a = Axpy(inst.x, -gamma2, inst.x_f2);
  const Vec b = Axpy(inst.y, -gamma2, inst.y_f2);
  return SqNorm(Sub(a, b));
}

double CounterexampleExpansionFormula(double ell, double gamma1, double gamma2) {
  const double l2 = ell * ell;
  return 1.0 + gamma1 * gamma1 * gamma2 * gamma2 * l2 * l2 / 4.0;
}

CertificateReport VerifyCounterexample(const CounterexampleInstance& inst, double gamma2) {
  if (!(gamma2 > 0.0)) throw Error(ErrorCode::kBadParameters, "gamma2 must be positive");
  CertificateReport interp = CheckInterpolation(CounterexamplePoints(inst));
  const double dist_sq = SqNorm(Sub(inst.x, inst.y));
  const double e = CounterexampleExpansion(inst, gamma2);
  const double formula =
      inst.scale * inst.scale * CounterexampleExpansionFormula(inst.ell, inst.gamma1, gamma2);
  const double formula_error = std::abs(e - formula);

  CertificateReport r;
  r.conditions = interp.conditions;
  r.conditions.push_back({"nonexpansive", dist_sq - e});
  r.worst_slack = WorstSlack(r.conditions);
  r.values = {{"E", e},
              {"E_formula", formula},
              {"E_abs_error", formula_error},
              {"dist_sq", dist_sq},
              {"interpolation_worst_slack", interp.worst_slack}};
  r.sub_verdicts = {{"interpolation", interp.verdict}};
  const bool valid = interp.verdict == Verdict::kHolds &&
                     formula_error <= 1e-12 * std::max(1.0, inst.scale * inst.scale);
  if (!valid) {
    r.verdict = Verdict::kInconclusive;
  } else if (e > dist_sq) {
    r.verdict = Verdict::kViolated;
    r.witness = Witness{"x", "y", inst.x, inst.y, Axpy(inst.x, -gamma2, inst.x_f2),
                        Axpy(inst.y, -gamma2, inst.y_f2)};
  } else {
    r.verdict = Verdict::kHolds;
  }
  return r;
}

CertificateReport AffineCocoercivityExact(const Mat& a, double ell, double tol) {
  if (!a.square()) throw Error(ErrorCode::kDimensionMismatch, "square matrix required");
  if (!(ell > 0.0)) throw Error(ErrorCode::kBadParameters, "ell must be positive");
  const Mat pencil = CocoercivityPencil(a, ell);
  const SymEigResult eig = SymEigDecompose(pencil);
  const double lam = eig.values.front();
  const double threshold = -tol * std::max(1.0, MaxAbs(pencil));
  CertificateReport r;
  r.conditions = {{"pencil_min_eigenvalue", lam}};
  r.worst_slack = lam;
  r.values = {{"min_eigenvalue", lam}, {"threshold", threshold}};
  if (lam >= threshold) {
    r.verdict = Verdict::kHolds;
  } else {
    r.verdict = Verdict::kViolated;
    const Vec u = eig.vectors.Col(0);
    const int n = a.rows();
    r.witness = Witness{"u", "0", u, Vec(n, 0.0), a * u, Vec(n, 0.0)};
  }
  return r;
}

CertificateReport SpectralDiskCheck(const Mat& a, double ell, double tol) {
  if (!a.square()) throw Error(ErrorCode::kDimensionMismatch, "square matrix required");
  if (!(ell > 0.0)) throw Error(ErrorCode::kBadParameters, "ell must be positive");
  CertificateReport r;
  const auto ev = Eigenvalues(a);
  for (size_t i = 0; i < ev.size(); ++i) {
    const double dist = std::hypot(ev[i].re - 0.5 * ell, ev[i].im);
    r.conditions.push_back({"eigenvalue_" + std::to_string(i), 0.5 * ell - dist});
  }
  r.worst_slack = WorstSlack(r.conditions);
  const bool normal = IsNormal(a);
  r.values = {{"normal", normal ? 1.0 : 0.0}};
  if (r.worst_slack < -tol) {
    r.verdict = Verdict::kViolated;
    // A spectrum outside the disk forces a negative direction of the pencil.
    CertificateReport exact = AffineCocoercivityExact(a, ell);
    r.witness = exact.witness;
  } else {
    r.verdict = normal ? Verdict::kHolds : Verdict::kInconclusive;
  }
  return r;
}

std::optional<double> MinCocoercivityEll(const Mat& a) {
  auto holds = [&](double ell) {
    return AffineCocoercivityExact(a, ell).verdict == Verdict::kHolds;
  };
  double lo = 1e-9, hi = 1e9;
  if (!holds(hi)) return std::nullopt;
  if (holds(lo)) return lo;
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return hi;
}

CertificateReport EgAffineCocoercivityCheck(const Mat& a, double gamma, double L) {
  if (!a.square()) throw Error(ErrorCode::kDimensionMismatch, "square matrix required");
  if (!(L > 0.0) || !(gamma > 0.0) || gamma * L > 1.0 + 1e-12) {
    throw Error(ErrorCode::kPreconditionViolated, "need 0 < gamma <= 1/L");
  }
  const double sym_min = SymEigs(SymmetricPart(a)).front();
  if (sym_min < -1e-10 * std::max(1.0, MaxAbs(a))) {
    throw Error(ErrorCode::kPreconditionViolated,
                "A is not monotone (symmetric part eigenvalue " + FormatDouble17(sym_min) + ")");
  }
  const double norm = SpectralNorm(a);
  if (norm > L + 1e-9 * std::max(1.0, L)) {
    throw Error(ErrorCode::kPreconditionViolated,
                "|A|_2 = " + FormatDouble17(norm) + " exceeds L");
  }
  const int n = a.rows();
  const Mat eg = a * (Mat::Identity(n) - gamma * a);
  const double ell = 2.0 / gamma;
  CertificateReport spectral = SpectralDiskCheck(eg, ell);
  CertificateReport exact = AffineCocoercivityExact(eg, ell);

  CertificateReport r;
  for (const auto& c : spectral.conditions) r.conditions.push_back({"spectral:" + c.name, c.slack});
  for (const auto& c : exact.conditions) r.conditions.push_back({"exact:" + c.name, c.slack});
  r.worst_slack = exact.worst_slack;
  r.values = {{"spectral_worst_slack", spectral.worst_slack},
              {"exact_min_eigenvalue", exact.worst_slack},
              {"norm_A", norm}};
  r.sub_verdicts = {{"spectral", spectral.verdict}, {"exact", exact.verdict}};
  r.verdict = exact.verdict;
  r.witness = exact.witness;
  if (exact.verdict == Verdict::kHolds && spectral.verdict == Verdict::kViolated) {
    r.verdict = Verdict::kInconclusive;
  }
  return r;
}

CertificateReport OgNoncocoercivityWitness(const Mat& a, double ell, double gamma,
                                           OptimisticForm form) {
  if (!(ell > 0.0) || !(gamma > 0.0)) {
    throw Error(ErrorCode::kBadParameters, "ell and gamma must be positive");
  }
  const bool og = form == OptimisticForm::kOg;
  const double base_ell = og ? 0.5 * ell : ell;
  CertificateReport pencil = AffineCocoercivityExact(a, base_ell);
  if (pencil.verdict != Verdict::kViolated) {
    throw Error(ErrorCode::kNoViolatingPair,
                "A is " + FormatDouble17(base_ell) + "-cocoercive");
  }
  const int n = a.rows();
  const Vec u = pencil.witness->x_a;
  const Vec zero(n, 0.0);
  Operator f = Operator::Affine(a, {});
  Operator composite = og ? MakeOgOperator(f, gamma) : MakeEftpOperator(f, gamma);
  const Vec z = Concat(u, zero), z2 = Concat(zero, zero);
  const Vec zh = Axpy(z, -2.0 / ell, composite.Eval(z));
  const Vec zh2 = Axpy(z2, -2.0 / ell, composite.Eval(z2));
  const double ratio = SqNorm(Sub(zh, zh2)) / SqNorm(Sub(z, z2));

  const Vec au = a * u;
  const double uu = SqNorm(u);
  const double lower = 1.0 + 4.0 / (ell * ell * gamma * gamma);
  const double excess = og ? 16.0 / (ell * ell) * (SqNorm(au) - 0.5 * ell * Dot(u, au)) / uu
                           : 4.0 / (ell * ell) * (SqNorm(au) - ell * Dot(u, au)) / uu;

  CertificateReport r;
  r.conditions = {{"nonexpansive", 1.0 - ratio}, {"ratio_minus_lower_bound", ratio - lower}};
  r.worst_slack = 1.0 - ratio;
  r.values = {{"ratio", ratio},
              {"lower_bound", lower},
              {"predicted_ratio", lower + excess},
              {"pencil_min_eigenvalue", pencil.worst_slack}};
  if (ratio > 1.0 + 1e-12) {
    r.verdict = Verdict::kViolated;
    r.witness = Witness{"z", "z_prime", z, z2, zh, zh2};
  } else {
    r.verdict = Verdict::kHolds;
  }
  return r;
}

CertificateReport LinearStarEquivCheck(const Mat& a, double ell, int trials, uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::kBadParameters, "trials must be >= 1");
  CertificateReport exact = AffineCocoercivityExact(a, ell);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const int n = a.rows();
  double min_star = kInf;
  Vec worst_x;
  for (int t = 0; t < trials; ++t) {
    Vec x(n);
    for (double& v : x) v = g(rng);
    const Vec ax = a * x;
    // Star-cocoercivity anchored at the root 0, normalised by |x|^2.
    const double s = (ell * Dot(ax, x) - SqNorm(ax)) / SqNorm(x);
    if (s < min_star) {
      min_star = s;
      worst_x = x;
    }
  }
  const bool star_holds = min_star >= -1e-10 * std::max(1.0, MaxAbs(CocoercivityPencil(a, ell)));
  const bool exact_holds = exact.verdict == Verdict::kHolds;
  CertificateReport r;
  r.conditions = {{"exact_pencil", exact.worst_slack}, {"sampled_star", min_star}};
  r.worst_slack = std::min(exact.worst_slack, min_star);
  r.sub_verdicts = {{"exact", exact.verdict},
                    {"sampled_star", star_holds ? Verdict::kHolds : Verdict::kViolated}};
  r.values = {{"counterevidence", (star_holds && !exact_holds) ? 1.0 : 0.0}};
  if (star_holds == exact_holds) {
    r.verdict = Verdict::kHolds;
  } else if (star_holds) {
    // Sampling missed the violating direction.
    r.verdict = Verdict::kInconclusive;
  } else {
    r.verdict = Verdict::kViolated;
    r.witness = Witness{"x", "x_star", worst_x, Vec(n, 0.0), a * worst_x, Vec(n, 0.0)};
  }
  return r;
}

LogisticConstants ComputeLogisticConstants(double a, double delta) {
  if (a == 0.0 || !std::isfinite(a) || !(delta >= 0.0)) {
    throw Error(ErrorCode::kBadParameters, "need a != 0 and delta >= 0");
  }
  LogisticConstants c;
  c.L_bound = a * a / 4.0 + delta;
  c.Lambda_bound = std::abs(a * a * a) / 4.0;
  const int samples = 4001;
  const double half_width = 20.0 / std::abs(a);
  for (int i = 0; i < samples; ++i) {
    const double x = -half_width + 2.0 * half_width * i / (samples - 1);
    const double s = Sigmoid(a * x);
    c.max_sampled_jacobian = std::max(c.max_sampled_jacobian, std::abs(a * a * s * (1 - s) + delta));
    c.max_sampled_hessian =
        std::max(c.max_sampled_hessian, std::abs(a * a * a * s * (1 - s) * (1 - 2 * s)));
  }
  c.samples_within_bounds = c.max_sampled_jacobian <= c.L_bound + 1e-9 &&
                            c.max_sampled_hessian <= c.Lambda_bound + 1e-9;
  return c;
}

double HamiltonianSecondDerivative(double x) {
  const double e = std::exp(x);
  const double p = 1.0 + e;
  return 2.0 * e * e * (2.0 - e) / std::pow(p, 4) +
         e * (x + 2.0 + e * (2.0 - x)) / (50.0 * p * p * p) + 1.0 / 5000.0;
}

double HamiltonianSecondDerivativeFd(double x, double h) {
  const Operator f = Operator::LogisticGrad(1.0, 0.01);
  auto hval = [&](double t) { return HamiltonianValue(f, {t}); };
  return 2.0 * (hval(x + h) - 2.0 * hval(x) + hval(x - h)) / (h * h);
}

CertificateReport HamiltonianNonconvexityCheck(double x) {
  const double closed = HamiltonianSecondDerivative(x);
  const double fd = HamiltonianSecondDerivativeFd(x);
  const double rel = std::abs(closed - fd) / std::max(std::abs(closed), 1e-300);
  CertificateReport r;
  r.conditions = {{"closed_form_2H''", closed}, {"finite_difference_2H''", fd}};
  r.worst_slack = std::min(closed, fd);
  r.values = {{"x", x}, {"closed_form", closed}, {"finite_difference", fd},
              {"relative_error", rel}};
  const bool agree = rel <= 1e-6;
  if (agree && closed < 0.0 && fd < 0.0) {
    r.verdict = Verdict::kViolated;
    const Operator f = Operator::LogisticGrad(1.0, 0.01);
    const Operator fh = MakeHamiltonianOperator(f);
    const double h = 1e-2;
    r.witness = Witness{"x-h", "x+h", {x - h}, {x + h}, fh.Eval({x - h}), fh.Eval({x + h})};
  } else if (agree && closed >= 0.0 && fd >= 0.0) {
    r.verdict = Verdict::kHolds;
  } else {
    r.verdict = Verdict::kInconclusive;
  }
  return r;
}

CertificateReport SampledPropertyCheck(const Operator& op, const OperatorClass& cls,
                                       int trials, uint64_t seed, double tol) {
  if (trials < 1) throw Error(ErrorCode::kBadParameters, "trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const int n = op.dim();
  CertificateReport r;
  r.worst_slack = kInf;
  for (int t = 0; t < trials; ++t) {
    Vec x(n), y(n);
    for (double& v : x) v = g(rng);
    for (double& v : y) v = g(rng);
    const Vec fx = op.Eval(x), fy = op.Eval(y);
    const double s = PairSlack(cls, x, fx, y, fy);
    if (s < r.worst_slack) {
      r.worst_slack = s;
      r.witness = Witness{"sample_" + std::to_string(t) + "_a",
                          "sample_" + std::to_string(t) + "_b", x, y, fx, fy};
    }
  }
  r.conditions = {{"min_sampled_slack", r.worst_slack}};
  r.values = {{"trials", static_cast<double>(trials)}};
  if (r.worst_slack < -tol) {
    r.verdict = Verdict::kViolated;
  } else {
    r.verdict = Verdict::kInconclusive;
    r.witness.reset();
  }
  return r;
}

}  // namespace vicert
