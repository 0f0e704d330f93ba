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

// Command-line front end: runs solvers, bound checks, certificates and the
// performance-estimation tools, writing CSV or JSON.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vicert/certify.h"
#include "vicert/harness.h"
#include "vicert/operator_io.h"
#include "vicert/pep.h"
#include "vicert/solvers.h"

namespace {

using namespace vicert;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  f << text;
  if (!f) throw Error(ErrorCode::kIoError, "failed writing " + out);
}

// Builtin names are accepted in place of a JSON file.
Operator LoadOperator(const std::string& spec) {
  if (spec.empty()) throw UsageError("--op is required");
  if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") return ReadOperatorFile(spec);
  for (const auto& [name, op] : StandardOperators()) {
    if (name == spec) return op;
  }
  throw UsageError("unknown operator " + spec);
}

Vec StartPoint(const Operator& op, const std::vector<double>& given, uint64_t seed) {
  if (!given.empty()) {
    if (static_cast<int>(given.size()) != op.dim()) throw UsageError("--x0 has wrong length");
    return given;
  }
  if (!op.root()) throw UsageError("--x0 is required for operators without a known zero");
  return MakeSuiteEntry("cli", op.constants().L ? op : op.WithConstants({1.0, {}, {}}), seed).x0;
}

struct CommonFlags {
  std::string op, out;
  std::vector<double> x0;
  double gamma = 0.0, gamma1 = 0.0, gamma2 = 0.0, ell = 0.0, L = 0.0, Lambda = -1.0;
  int iters = 100;
  uint64_t seed = kDefaultSeed;
};

int CmdRun(const CommonFlags& f, const std::string& method) {
  const Operator op = LoadOperator(f.op);
  SolverConfig cfg;
  cfg.method = ParseMethod(method);
  cfg.gamma = f.gamma;
  cfg.gamma1 = f.gamma1;
  cfg.gamma2 = f.gamma2;
  cfg.ell = f.ell;
  cfg.iters = f.iters;
  cfg.x0 = StartPoint(op, f.x0, f.seed);
  Emit(TraceToCsv(RunSolver(op, cfg, op.root())), f.out);
  return kExitOk;
}

double DeclaredOr(double given, const std::optional<double>& declared, const char* name) {
  if (given > 0.0) return given;
  if (declared) return *declared;
  throw UsageError(std::string("--") + name + " is required for this operator");
}

int CmdCheck(const CommonFlags& f, const std::string& theorem, bool rows) {
  const Operator op = LoadOperator(f.op);
  const Vec x0 = StartPoint(op, f.x0, f.seed);
  const Vec x_star = op.root() ? *op.root() : Vec{};
  auto need_root = [&] {
    if (!op.root()) throw UsageError("operator has no known zero");
  };
  std::vector<BoundCheck> checks;
  if (theorem == "gd" || theorem == "pp") {
    need_root();
    const double ell = DeclaredOr(f.ell, op.constants().ell, "ell");
    const double gamma = f.gamma > 0.0 ? f.gamma : 1.0 / ell;
    auto [a, b] = theorem == "gd" ? CheckGdBounds(op, ell, gamma, f.iters, x_star, x0)
                                  : CheckPpBound(op, ell, gamma, f.iters, x_star, x0);
    checks = {a, b};
  } else if (theorem == "eg-random") {
    need_root();
    const double L = DeclaredOr(f.L, op.constants().L, "L");
    const double g1 = f.gamma1 > 0.0 ? f.gamma1 : 1.0 / L;
    const double g2 = f.gamma2 > 0.0 ? f.gamma2 : g1 / 2.0;
    checks = {CheckEgRandomBound(op, L, g1, g2, f.iters, x_star, x0)};
  } else if (theorem == "eg-last") {
    need_root();
    const double L = DeclaredOr(f.L, op.constants().L, "L");
    const double g = f.gamma > 0.0 ? f.gamma : 1.0 / (std::sqrt(2.0) * L);
    checks = CheckEgLastBounds(op, L, g, f.iters, x_star, x0);
  } else if (theorem == "eftp") {
    need_root();
    const double L = DeclaredOr(f.L, op.constants().L, "L");
    const double g = f.gamma > 0.0 ? f.gamma : 0.9 / (std::sqrt(10.0) * L);
    checks = {CheckEftpBound(op, L, g, f.iters, x_star, x0)};
  } else if (theorem == "hgm") {
    const double L = DeclaredOr(f.L, op.constants().L, "L");
    double Lambda = f.Lambda;
    if (Lambda < 0.0) Lambda = op.constants().Lambda.value_or(op.is_affine() ? 0.0 : -1.0);
    if (Lambda < 0.0) throw UsageError("--Lambda is required for this operator");
    const double g =
        f.gamma > 0.0 ? f.gamma : 1.0 / (L * L + Lambda * Norm(op.Eval(x0)));
    auto [a, b] = CheckHgmBounds(op, L, Lambda, g, f.iters, x0);
    checks = {a, b};
  } else if (theorem == "hgm-contraction") {
    if (!op.is_affine()) throw Error(ErrorCode::kNotAffine, "contraction check needs affine F");
    checks = {CheckHgmAffineContraction(op.A(), op.b(), f.iters, x0)};
  } else {
    throw UsageError("unknown theorem " + theorem);
  }
  Report r;
  r.seed = f.seed;
  r.checks = checks;
  Emit(ReportToJson(r, rows).dump(2) + "\n", f.out);
  return r.AllPass() ? kExitOk : kExitFailed;
}

OperatorClass ParseClass(const std::string& name, double param) {
  if (name == "cocoercive") return OperatorClass::Cocoercive(param);
  if (name == "monotone") return OperatorClass::Monotone();
  if (name == "lipschitz") return OperatorClass::Lipschitz(param);
  if (name == "monotone-lipschitz") return OperatorClass::MonotoneLipschitz(param);
  throw UsageError("unknown class " + name);
}

int CmdCertify(const CommonFlags& f, const std::string& cls_name, double param, int trials) {
  const Operator op = LoadOperator(f.op);
  const OperatorClass cls = ParseClass(cls_name, param);
  CertificateReport r;
  if (op.is_affine() && cls.kind == ClassKind::kCocoercive) {
    r = AffineCocoercivityExact(op.A(), param);
  } else {
    r = SampledPropertyCheck(op, cls, trials, f.seed);
  }
  Emit(ReportToJson(r).dump(2) + "\n", f.out);
  return r.verdict == Verdict::kViolated ? kExitFailed : kExitOk;
}

int CmdCounterexample(const CommonFlags& f, double scale) {
  const CounterexampleInstance inst = BuildCounterexample(f.ell, f.gamma1, scale);
  const CertificateReport r = VerifyCounterexample(inst, f.gamma2);
  json j = ReportToJson(r);
  j["E"] = r.Value("E");
  json slacks = json::object();
  for (const auto& c : r.conditions) {
    if (c.name != "nonexpansive") slacks[c.name] = c.slack;
  }
  j["slacks"] = slacks;
  j["params"] = {{"ell", f.ell}, {"gamma1", f.gamma1}, {"gamma2", f.gamma2}, {"scale", scale}};
  Emit(j.dump(2) + "\n", f.out);
  return kExitOk;
}

GramProblem BuildProblem(const std::string& problem, const CommonFlags& f, int K,
                         bool inequality_form, bool cocoercive, bool eg_objective) {
  if (problem == "expansiveness") return BuildExpansivenessMatrices(f.ell, f.gamma1, f.gamma2);
  if (problem == "norm") return BuildNormPep(f.L, f.gamma1, f.gamma2, K, inequality_form);
  if (problem == "delta") {
    return BuildDeltaPep(f.L, f.gamma1, f.gamma2,
                         cocoercive ? PepClass::kCocoercive : PepClass::kMonotoneLipschitz,
                         eg_objective ? DeltaObjective::kEgOperator : DeltaObjective::kOperator,
                         inequality_form);
  }
  throw UsageError("unknown problem " + problem);
}

int Main(int argc, char** argv) {
  CLI::App app{"Extragradient and operator-class verification tools"};
  app.require_subcommand(1);
  CommonFlags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", f.out, "Output path (default: stdout)");
    sub->add_option("--seed", f.seed, "Random seed");
  };
  auto add_op = [&](CLI::App* sub) {
    sub->add_option("--op", f.op, "Operator JSON file or builtin suite name");
    sub->add_option("--x0", f.x0, "Start point, comma separated")->delimiter(',');
    sub->add_option("--iters", f.iters, "Number of iterations");
  };
  auto add_steps = [&](CLI::App* sub) {
    sub->add_option("--gamma", f.gamma, "Step size");
    sub->add_option("--gamma1", f.gamma1, "Extrapolation step");
    sub->add_option("--gamma2", f.gamma2, "Update step");
    sub->add_option("--ell", f.ell, "Cocoercivity constant");
    sub->add_option("--L", f.L, "Lipschitz constant");
  };

  std::string method = "gd";
  CLI::App* run = app.add_subcommand("run", "Run a solver and write its trace as CSV");
  add_common(run);
  add_op(run);
  add_steps(run);
  run->add_option("--method", method, "gd, pp, pp_ell, eg, eg2, og, eftp or hgm");

  std::string theorem;
  bool rows = false;
  CLI::App* check = app.add_subcommand("check", "Evaluate a convergence bound along a run");
  add_common(check);
  add_op(check);
  add_steps(check);
  check->add_option("--theorem", theorem,
                    "gd, pp, eg-random, eg-last, eftp, hgm or hgm-contraction")
      ->required();
  check->add_option("--Lambda", f.Lambda, "Jacobian Lipschitz constant");
  check->add_flag("--rows", rows, "Include every per-iteration row");

  std::string cls_name = "cocoercive";
  double cls_param = 1.0;
  int trials = 1000;
  CLI::App* certify = app.add_subcommand("certify", "Certify an operator-class property");
  add_common(certify);
  certify->add_option("--op", f.op, "Operator JSON file or builtin suite name")->required();
  certify->add_option("--class", cls_name, "cocoercive, monotone, lipschitz, monotone-lipschitz");
  certify->add_option("--param", cls_param, "ell or L of the class");
  certify->add_option("--trials", trials, "Samples for non-affine operators");

  double scale = 1.0;
  CLI::App* cex = app.add_subcommand("counterexample", "Verify the expansive EG counterexample");
  add_common(cex);
  cex->add_option("--ell", f.ell, "Cocoercivity constant")->required();
  cex->add_option("--gamma1", f.gamma1, "Extrapolation step")->required();
  cex->add_option("--gamma2", f.gamma2, "Update step")->required();
  cex->add_option("--scale", scale, "Uniform scaling of the points");

  std::string problem = "expansiveness";
  int K = 1;
  bool ineq = false, cocoercive = false, eg_obj = false;
  auto add_problem = [&](CLI::App* sub) {
    add_common(sub);
    add_steps(sub);
    sub->add_option("--problem", problem, "expansiveness, norm or delta");
    sub->add_option("--K", K, "Iterations unrolled in the norm problem");
    sub->add_flag("--inequality", ineq, "Bound the initial distance instead of fixing it");
    sub->add_flag("--cocoercive", cocoercive, "Delta problem over cocoercive maps");
    sub->add_flag("--eg-objective", eg_obj, "Delta problem on the extragradient operator");
  };
  CLI::App* pexp = app.add_subcommand("pep-export", "Write a Gram problem in SDPA format");
  add_problem(pexp);
  LowerBoundOptions lb;
  CLI::App* pbound = app.add_subcommand("pep-bound", "Certified lower bound by factor search");
  add_problem(pbound);
  pbound->add_option("--restarts", lb.restarts, "Random restarts");
  pbound->add_option("--rank", lb.rank, "Factor rank");

  std::string fixtures, write_fixtures;
  SuiteOptions sopts;
  int regime_ops = 0, regime_restarts = 0;
  CLI::App* report = app.add_subcommand("report", "Run every bound check on the operator suite");
  add_common(report);
  report->add_option("--fixtures", fixtures, "Directory of operator JSON files");
  report->add_option("--write-fixtures", write_fixtures, "Write the generated suite and exit");
  report->add_option("--iters", sopts.iters, "Iterations per check");
  report->add_option("--eg-last-iters", sopts.eg_last_iters, "Iterations of the last-iterate run");
  report->add_option("--regimes", regime_ops, "Random maps per regime cell (0 disables)");
  report->add_option("--regime-restarts", regime_restarts, "Factor-search restarts per cell");
  report->add_flag("--rows", rows, "Include every per-iteration row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (run->parsed()) return CmdRun(f, method);
  if (check->parsed()) return CmdCheck(f, theorem, rows);
  if (certify->parsed()) return CmdCertify(f, cls_name, cls_param, trials);
  if (cex->parsed()) return CmdCounterexample(f, scale);
  if (pexp->parsed()) {
    if (f.out.empty()) throw UsageError("pep-export needs --out");
    ExportSdpa(BuildProblem(problem, f, K, ineq, cocoercive, eg_obj), f.out);
    return kExitOk;
  }
  if (pbound->parsed()) {
    lb.seed = f.seed;
    const FeasiblePoint fp = LowerBoundSearch(BuildProblem(problem, f, K, ineq, cocoercive, eg_obj), lb);
    Emit(FeasiblePointToJson(fp).dump(2) + "\n", f.out);
    return kExitOk;
  }
  if (report->parsed()) {
    if (!write_fixtures.empty()) {
      WriteStandardFixtures(write_fixtures, f.seed);
      return kExitOk;
    }
    const auto ops = fixtures.empty() ? StandardOperators(f.seed) : ReadFixtures(fixtures);
    Report r = RunSuiteChecks(MakeSuite(ops, f.seed), sopts, f.seed);
    if (regime_ops > 0) {
      r.extra["regimes"] =
          CheckEgNormViolationRegimes(DefaultRegimeGrid(), regime_ops, f.seed, regime_restarts)
              .ToJson();
    }
    Emit(ReportToJson(r, rows).dump(2) + "\n", f.out);
    return r.AllPass() ? kExitOk : kExitFailed;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Main(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const vicert::Error& e) {
    std::cerr << e.what() << "\n";
    if (e.code() == vicert::ErrorCode::kBadParameters) return kExitUsage;
    return kExitFailed;
  }
}
