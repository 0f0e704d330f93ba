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

#include "vicert/operators.h"

#include <cmath>
#include <utility>

namespace vicert {

namespace {

constexpr double kPpResidualTol = 1e-12;
constexpr int kPpMaxIterations = 100000;

std::optional<Vec> AffineRoot(const Mat& a, const Vec& b) {
  try {
    return LuSolve(a, Scale(-1.0, b));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingularMatrix) throw;
  }
  if (NormInf(b) == 0.0) return Vec(b.size(), 0.0);
  return std::nullopt;
}

std::optional<Vec> LogisticRoot(double a, double delta) {
  auto f = [&](double x) { return a * Sigmoid(a * x) + delta * x; };
  double lo = -1.0, hi = 1.0;
  while (f(lo) > 0.0 || f(hi) < 0.0) {
    lo *= 2.0;
    hi *= 2.0;
    if (hi > 1e300) return std::nullopt;
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return Vec{std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi};
}

Vec Lift(const std::optional<Vec>& root) {
  return root ? Concat(*root, *root) : Vec{};
}

}  // namespace

double Sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

const char* OperatorKindName(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kAffine: return "affine";
    case OperatorKind::kBilinearGame: return "bilinear-game";
    case OperatorKind::kRotation: return "rotation";
    case OperatorKind::kLogisticGrad: return "logistic-grad";
    case OperatorKind::kScaledIdentity: return "scaled-identity";
    case OperatorKind::kCustomTable: return "custom-table";
    case OperatorKind::kComposite: return "composite";
  }
  return "unknown";
}

OperatorKind ParseOperatorKind(const std::string& name) {
  for (OperatorKind k :
       {OperatorKind::kAffine, OperatorKind::kBilinearGame,
        OperatorKind::kRotation, OperatorKind::kLogisticGrad,
        OperatorKind::kScaledIdentity, OperatorKind::kCustomTable,
        OperatorKind::kComposite}) {
    if (name == OperatorKindName(k)) return k;
  }
  throw Error(ErrorCode::kParseError, "unknown operator kind '" + name + "'");
}

Operator Operator::Affine(Mat a, Vec b) {
  if (!a.square() || a.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "affine operator needs square A");
  }
  if (b.empty()) b.assign(a.rows(), 0.0);
  if (static_cast<int>(b.size()) != a.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "affine offset size differs from A");
  }
  if (!a.AllFinite() || !AllFinite(b)) {
    throw Error(ErrorCode::kNonFinite, "affine operator data");
  }
  Operator op;
  op.kind_ = OperatorKind::kAffine;
  op.dim_ = a.rows();
  op.root_ = AffineRoot(a, b);
  op.a_mat_ = std::move(a);
  op.b_vec_ = std::move(b);
  return op;
}

Operator Operator::Rotation(int dim) {
  if (dim <= 0 || dim % 2 != 0) {
    throw Error(ErrorCode::kBadParameters, "rotation needs a positive even dimension");
  }
  Mat a(dim, dim);
  for (int i = 0; i < dim; i += 2) {
    a(i, i + 1) = 1.0;
    a(i + 1, i) = -1.0;
  }
  Operator op = Affine(std::move(a), {});
  op.kind_ = OperatorKind::kRotation;
  op.constants_.L = 1.0;
  return op;
}

Operator Operator::BilinearGame(const Mat& coupling, Vec offset) {
  const int n = coupling.rows(), m = coupling.cols();
  Mat a(n + m, n + m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      a(i, n + j) = coupling(i, j);
      a(n + j, i) = -coupling(i, j);
    }
  }
  Operator op = Affine(std::move(a), std::move(offset));
  op.kind_ = OperatorKind::kBilinearGame;
  op.constants_.L = SpectralNorm(coupling);
  return op;
}

Operator Operator::ScaledIdentity(int dim, double scale, Vec offset) {
  Operator op = Affine(Mat::Identity(dim) * scale, std::move(offset));
  op.kind_ = OperatorKind::kScaledIdentity;
  op.constants_.L = std::abs(scale);
  if (scale > 0.0) op.constants_.ell = scale;
  return op;
}

Operator Operator::LogisticGrad(double a, double delta) {
  if (!std::isfinite(a) || !std::isfinite(delta) || a == 0.0) {
    throw Error(ErrorCode::kBadParameters, "logistic-grad needs finite nonzero a");
  }
  Operator op;
  op.kind_ = OperatorKind::kLogisticGrad;
  op.dim_ = 1;
  op.a_ = a;
  op.delta_ = delta;
  op.root_ = LogisticRoot(a, delta);
  op.constants_.L = a * a / 4.0 + std::abs(delta);
  op.constants_.Lambda = std::abs(a * a * a) / 4.0;
  if (delta >= 0.0) op.constants_.ell = a * a / 4.0 + delta;
  return op;
}

Operator Operator::CustomTable(std::vector<TableEntry> table) {
  if (table.empty()) {
    throw Error(ErrorCode::kBadParameters, "custom table is empty");
  }
  const size_t d = table.front().x.size();
  for (const auto& e : table) {
    if (e.x.size() != d || e.fx.size() != d) {
      throw Error(ErrorCode::kDimensionMismatch, "custom table entries differ in size");
    }
    if (!AllFinite(e.x) || !AllFinite(e.fx)) {
      throw Error(ErrorCode::kNonFinite, "custom table data");
    }
  }
  Operator op;
  op.kind_ = OperatorKind::kCustomTable;
  op.dim_ = static_cast<int>(d);
  for (const auto& e : table) {
    if (NormInf(e.fx) == 0.0) {
      op.root_ = e.x;
      break;
    }
  }
  op.table_ = std::move(table);
  return op;
}

Operator Operator::Composite(std::string description, int dim, VecFn eval,
                             MatFn jacobian, std::optional<Vec> root) {
  Operator op;
  op.kind_ = OperatorKind::kComposite;
  op.dim_ = dim;
  op.description_ = std::move(description);
  op.eval_fn_ = std::make_shared<const VecFn>(std::move(eval));
  if (jacobian) op.jac_fn_ = std::make_shared<const MatFn>(std::move(jacobian));
  if (root && static_cast<int>(root->size()) == dim) op.root_ = std::move(root);
  return op;
}

bool Operator::is_affine() const {
  switch (kind_) {
    case OperatorKind::kAffine:
    case OperatorKind::kBilinearGame:
    case OperatorKind::kRotation:
    case OperatorKind::kScaledIdentity:
      return true;
    default:
      return false;
  }
}

bool Operator::has_jacobian() const {
  if (is_affine() || kind_ == OperatorKind::kLogisticGrad) return true;
  return jac_fn_ != nullptr;
}

const Mat& Operator::A() const {
  if (!is_affine()) throw Error(ErrorCode::kNotAffine, OperatorKindName(kind_));
  return a_mat_;
}

const Vec& Operator::b() const {
  if (!is_affine()) throw Error(ErrorCode::kNotAffine, OperatorKindName(kind_));
  return b_vec_;
}

Operator Operator::WithConstants(DeclaredConstants c) const {
  for (const auto& v : {c.L, c.Lambda, c.ell}) {
    if (v && (!std::isfinite(*v) || *v < 0.0)) {
      throw Error(ErrorCode::kBadParameters, "declared constants must be finite and >= 0");
    }
  }
  if (c.L && *c.L <= 0.0) {
    throw Error(ErrorCode::kBadParameters, "declared L must be positive");
  }
  Operator op = *this;
  op.constants_ = c;
  return op;
}

Operator Operator::WithRoot(Vec root) const {
  CheckDim(root);
  Operator op = *this;
  op.root_ = std::move(root);
  return op;
}

Operator Operator::WithKind(OperatorKind kind) const {
  Operator op = *this;
  op.kind_ = kind;
  if (!is_affine() || !op.is_affine()) {
    throw Error(ErrorCode::kNotAffine, "only affine-family kinds can be re-labelled");
  }
  return op;
}

void Operator::CheckDim(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "operator of dimension " + std::to_string(dim_) +
                    " applied to a vector of size " + std::to_string(x.size()));
  }
}

Vec Operator::Eval(const Vec& x) const {
  CheckDim(x);
  switch (kind_) {
    case OperatorKind::kLogisticGrad:
      return {a_ * Sigmoid(a_ * x[0]) + delta_ * x[0]};
    case OperatorKind::kCustomTable:
      for (const auto& e : table_) {
        if (e.x == x) return e.fx;
      }
      throw Error(ErrorCode::kOffTable, "point is not in the custom table");
    case OperatorKind::kComposite:
      return (*eval_fn_)(x);
    default:
      return Add(a_mat_ * x, b_vec_);
  }
}

Mat Operator::Jacobian(const Vec& x) const {
  CheckDim(x);
  if (is_affine()) return a_mat_;
  if (kind_ == OperatorKind::kLogisticGrad) {
    const double s = Sigmoid(a_ * x[0]);
    return Mat{{a_ * a_ * s * (1.0 - s) + delta_}};
  }
  if (jac_fn_) return (*jac_fn_)(x);
  throw Error(ErrorCode::kNoAnalyticJacobian, OperatorKindName(kind_));
}

EvalPoint Operator::EvaluateAt(const Vec& x, bool with_jacobian) const {
  EvalPoint p{x, Eval(x), std::nullopt};
  if (with_jacobian) p.jac = Jacobian(x);
  return p;
}

Operator MakeEgOperator(const Operator& op, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::kBadParameters, "gamma must be positive");
  if (op.is_affine()) {
    const Mat& a = op.A();
    const int n = op.dim();
    Operator eg = Operator::Affine(a * (Mat::Identity(n) - gamma * a),
                                   Add(a * Scale(-gamma, op.b()), op.b()));
    return op.root() ? eg.WithRoot(*op.root()) : eg;
  }
  MatFn jac;
  if (op.has_jacobian()) {
    jac = [op, gamma](const Vec& x) {
      const Mat jx = op.Jacobian(x);
      const Vec inner = Axpy(x, -gamma, op.Eval(x));
      return op.Jacobian(inner) * (Mat::Identity(op.dim()) - gamma * jx);
    };
  }
  return Operator::Composite(
      "eg", op.dim(),
      [op, gamma](const Vec& x) { return op.Eval(Axpy(x, -gamma, op.Eval(x))); },
      jac, op.root());
}

Operator MakeOgOperator(const Operator& op, double gamma) {
  if (!op.is_affine()) throw Error(ErrorCode::kNotAffine, "OG operator needs affine F");
  if (!(gamma > 0.0)) throw Error(ErrorCode::kBadParameters, "gamma must be positive");
  const int n = op.dim();
  const Mat& a = op.A();
  Mat m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = 2.0 * a(i, j);
      m(i, n + j) = -a(i, j);
    }
    m(n + i, i) = -1.0 / gamma;
    m(n + i, n + i) = 1.0 / gamma;
  }
  Operator og = Operator::Affine(std::move(m), Concat(op.b(), Vec(n, 0.0)));
  return op.root() ? og.WithRoot(Lift(op.root())) : og;
}

Operator MakeEftpOperator(const Operator& op, double gamma) {
  if (!op.is_affine()) throw Error(ErrorCode::kNotAffine, "EFTP operator needs affine F");
  if (!(gamma > 0.0)) throw Error(ErrorCode::kBadParameters, "gamma must be positive");
  const int n = op.dim();
  const Mat& a = op.A();
  const Mat a2 = a * a;
  Mat m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = a(i, j);
      m(i, n + j) = -gamma * a2(i, j);
      m(n + i, n + j) = a(i, j);
    }
    m(n + i, i) = -1.0 / gamma;
    m(n + i, n + i) += 1.0 / gamma;
  }
  const Vec top = Axpy(op.b(), -gamma, a * op.b());
  Operator eftp = Operator::Affine(std::move(m), Concat(top, op.b()));
  return op.root() ? eftp.WithRoot(Lift(op.root())) : eftp;
}

Vec PpResolvent(const Operator& op, double gamma, const Vec& x) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::kBadParameters, "gamma must be positive");
  if (op.is_affine()) {
    const int n = op.dim();
    return LuSolve(Mat::Identity(n) + gamma * op.A(), Axpy(x, -gamma, op.b()));
  }
  auto residual = [&](const Vec& y) { return Sub(Axpy(y, gamma, op.Eval(y)), x); };
  const bool newton = op.has_jacobian();
  double theta = 1.0;
  if (op.constants().L && gamma * *op.constants().L >= 1.0) {
    const double s = 1.0 + gamma * *op.constants().L;
    theta = 1.0 / (s * s);
  }
  Vec y = x;
  Vec g = residual(y);
  double r = Norm(g);
  for (int it = 0; it < kPpMaxIterations; ++it) {
    if (r <= kPpResidualTol) return y;
    Vec dir = g;
    double t = theta;
    if (newton) {
      dir = LuSolve(Mat::Identity(op.dim()) + gamma * op.Jacobian(y), g);
      t = 1.0;
    }
    bool improved = false;
    for (int halving = 0; halving < 60; ++halving) {
      Vec cand = Axpy(y, -t, dir);
      Vec gc = residual(cand);
      const double rc = Norm(gc);
      if (rc < r) {
        y = std::move(cand);
        g = std::move(gc);
        r = rc;
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;
  }
  if (r <= kPpResidualTol) return y;
  throw Error(ErrorCode::kNoConvergence,
              "proximal fixed point stalled at residual " + FormatDouble17(r));
}

Operator MakePpOperator(const Operator& op, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::kBadParameters, "gamma must be positive");
  if (op.is_affine()) {
    const int n = op.dim();
    const Mat resolvent = Inverse(Mat::Identity(n) + gamma * op.A());
    const Mat a = op.A() * resolvent;
    Operator pp = Operator::Affine(a, Axpy(op.b(), -gamma, a * op.b()));
    return op.root() ? pp.WithRoot(*op.root()) : pp;
  }
  MatFn jac;
  if (op.has_jacobian()) {
    jac = [op, gamma](const Vec& x) {
      const Vec y = PpResolvent(op, gamma, x);
      const Mat jy = op.Jacobian(y);
      return jy * Inverse(Mat::Identity(op.dim()) + gamma * jy);
    };
  }
  return Operator::Composite(
      "pp", op.dim(),
      [op, gamma](const Vec& x) { return op.Eval(PpResolvent(op, gamma, x)); },
      jac, op.root());
}

Operator MakeHamiltonianOperator(const Operator& op) {
  if (!op.has_jacobian()) {
    throw Error(ErrorCode::kNoAnalyticJacobian, OperatorKindName(op.kind()));
  }
  if (op.is_affine()) {
    const Mat at = op.A().Transpose();
    Operator h = Operator::Affine(at * op.A(), at * op.b());
    return op.root() ? h.WithRoot(*op.root()) : h;
  }
  return Operator::Composite(
      "hamiltonian", op.dim(),
      [op](const Vec& x) { return op.Jacobian(x).Transpose() * op.Eval(x); },
      nullptr, op.root());
}

double HamiltonianValue(const Operator& op, const Vec& x) {
  return 0.5 * SqNorm(op.Eval(x));
}

}  // namespace vicert
