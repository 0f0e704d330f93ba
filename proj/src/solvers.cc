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

#include "vicert/solvers.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace vicert {

namespace {

constexpr double kDivergenceNorm = 1e150;

void RequirePositive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kBadParameters, std::string(what) + " must be positive");
  }
}

}  // namespace

const char* MethodName(Method m) {
  switch (m) {
    case Method::kGd: return "gd";
    case Method::kPp: return "pp";
    case Method::kPpEll: return "pp_ell";
    case Method::kEg: return "eg";
    case Method::kEg2: return "eg2";
    case Method::kOg: return "og";
    case Method::kEftp: return "eftp";
    case Method::kHgm: return "hgm";
  }
  return "unknown";
}

Method ParseMethod(const std::string& name) {
  for (Method m : {Method::kGd, Method::kPp, Method::kPpEll, Method::kEg,
                   Method::kEg2, Method::kOg, Method::kEftp, Method::kHgm}) {
    if (name == MethodName(m)) return m;
  }
  throw Error(ErrorCode::kParseError, "unknown method '" + name + "'");
}

std::vector<double> Trace::Column(const std::string& name) const {
  for (size_t c = 0; c < extra_names.size(); ++c) {
    if (extra_names[c] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.extras[c]);
    return out;
  }
  throw Error(ErrorCode::kBadParameters,
              std::string("trace of ") + MethodName(method) + " has no column " + name);
}

Vec GdStep(const Operator& op, const Vec& x, double gamma) {
  return Axpy(x, -gamma, op.Eval(x));
}

Vec EgStep(const Operator& op, const Vec& x, double gamma) {
  return Eg2Step(op, x, gamma, gamma);
}

Vec Eg2Step(const Operator& op, const Vec& x, double gamma1, double gamma2) {
  const Vec x_tilde = Axpy(x, -gamma1, op.Eval(x));
  return Axpy(x, -gamma2, op.Eval(x_tilde));
}

Vec OgStep(const Operator& op, const Vec& x_cur, const Vec& x_prev, double gamma) {
  return Axpy(Axpy(x_cur, -2.0 * gamma, op.Eval(x_cur)), gamma, op.Eval(x_prev));
}

std::pair<Vec, Vec> EftpStep(const Operator& op, const Vec& x, const Vec& x_tilde,
                             double gamma) {
  Vec x_tilde_new = Axpy(x, -gamma, op.Eval(x_tilde));
  Vec x_new = Axpy(x, -gamma, op.Eval(x_tilde_new));
  return {std::move(x_new), std::move(x_tilde_new)};
}

Vec PpStep(const Operator& op, const Vec& x, double gamma) {
  return PpResolvent(op, gamma, x);
}

Vec PpEllStep(const Operator& op, const Vec& x, double gamma, double ell) {
  RequirePositive(ell, "ell");
  const Vec y = PpResolvent(op, 2.0 / ell, x);
  return Axpy(x, -gamma, op.Eval(y));
}

Vec HgmStep(const Operator& op, const Vec& x, double gamma) {
  return Axpy(x, -gamma, op.Jacobian(x).Transpose() * op.Eval(x));
}

Trace RunSolver(const Operator& op, const SolverConfig& cfg, const std::optional<Vec>& x_star) {
  if (cfg.iters < 0) throw Error(ErrorCode::kBadParameters, "iters must be >= 0");
  if (static_cast<int>(cfg.x0.size()) != op.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "x0 does not match operator dimension");
  }
  if (!AllFinite(cfg.x0)) throw Error(ErrorCode::kNonFinite, "x0");
  if (x_star && static_cast<int>(x_star->size()) != op.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "x* does not match operator dimension");
  }
  double g1 = cfg.gamma, g2 = cfg.gamma;
  if (cfg.method == Method::kEg2) {
    g1 = cfg.gamma1;
    g2 = cfg.gamma2;
    RequirePositive(g1, "gamma1");
    RequirePositive(g2, "gamma2");
  } else {
    RequirePositive(cfg.gamma, "gamma");
  }
  if (cfg.method == Method::kPpEll) RequirePositive(cfg.ell, "ell");

  Trace trace;
  trace.method = cfg.method;
  switch (cfg.method) {
    case Method::kEg:
    case Method::kEg2:
    case Method::kEftp:
      trace.extra_names = {"fxt_sq"};
      break;
    case Method::kHgm:
      trace.extra_names = {"hamiltonian", "fh_sq"};
      break;
    case Method::kPpEll:
      trace.extra_names = {"fpp_sq"};
      break;
    default:
      break;
  }
  trace.rows.reserve(static_cast<size_t>(cfg.iters) + 1);

  Vec x = cfg.x0;
  Vec x_tilde = cfg.x0;  // eftp memory
  Vec fx_prev;  // og memory
  for (int k = 0;; ++k) {
    TraceRow row;
    row.k = k;
    row.x = x;
    const Vec fx = op.Eval(x);
    row.fx_sq = SqNorm(fx);
    if (x_star) row.dist_sq = SqNorm(Sub(x, *x_star));

    const bool blown = !AllFinite(x) || !std::isfinite(row.fx_sq) || Norm(x) > kDivergenceNorm;
    if (blown) {
      if (!std::isfinite(row.fx_sq)) row.fx_sq = std::numeric_limits<double>::infinity();
      row.extras.assign(trace.extra_names.size(), std::numeric_limits<double>::quiet_NaN());
      trace.rows.push_back(std::move(row));
      trace.diverged = true;
      break;
    }

    // Per-row extras and the next iterate.
    Vec next;
    switch (cfg.method) {
      case Method::kGd:
        next = Axpy(x, -cfg.gamma, fx);
        break;
      case Method::kPp:
        next = PpResolvent(op, cfg.gamma, x);
        break;
      case Method::kPpEll: {
        const Vec fpp = op.Eval(PpResolvent(op, 2.0 / cfg.ell, x));
        row.extras = {SqNorm(fpp)};
        next = Axpy(x, -cfg.gamma, fpp);
        break;
      }
      case Method::kEg:
      case Method::kEg2: {
        row.x_tilde = Axpy(x, -g1, fx);
        const Vec ft = op.Eval(row.x_tilde);
        row.extras = {SqNorm(ft)};
        next = Axpy(x, -g2, ft);
        break;
      }
      case Method::kOg: {
        const Vec fp = k == 0 ? fx : fx_prev;
        next = Axpy(Axpy(x, -2.0 * cfg.gamma, fx), cfg.gamma, fp);
        fx_prev = fx;
        break;
      }
      case Method::kEftp: {
        row.x_tilde = x_tilde;
        row.extras = {SqNorm(op.Eval(x_tilde))};
        auto [xn, xtn] = EftpStep(op, x, x_tilde, cfg.gamma);
        next = std::move(xn);
        x_tilde = std::move(xtn);
        break;
      }
      case Method::kHgm: {
        const Vec fh = op.Jacobian(x).Transpose() * fx;
        row.extras = {0.5 * row.fx_sq, SqNorm(fh)};
        next = Axpy(x, -cfg.gamma, fh);
        break;
      }
    }
    trace.rows.push_back(std::move(row));
    if (k == cfg.iters) break;
    x = std::move(next);
  }
  return trace;
}

double AverageSqNorm(const Trace& trace) {
  if (trace.rows.empty()) throw Error(ErrorCode::kBadParameters, "empty trace");
  double sum = 0.0;
  if (trace.method == Method::kEftp) {
    for (double v : trace.Column("fxt_sq")) sum += v;
  } else {
    for (const auto& r : trace.rows) sum += r.fx_sq;
  }
  return sum / static_cast<double>(trace.rows.size());
}

std::string TraceToCsv(const Trace& trace) {
  std::ostringstream out;
  out << "k,fx_sq,dist_sq";
  for (const auto& n : trace.extra_names) out << "," << n;
  out << "\n";
  for (const auto& r : trace.rows) {
    out << r.k << "," << FormatDouble17(r.fx_sq) << ",";
    if (r.dist_sq) out << FormatDouble17(*r.dist_sq);
    for (double v : r.extras) out << "," << FormatDouble17(v);
    out << "\n";
  }
  return out.str();
}

void WriteTraceCsv(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << TraceToCsv(trace);
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path);
}

}  // namespace vicert
