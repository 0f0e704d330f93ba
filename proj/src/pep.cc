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


#include "vicert/pep.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace vicert {

GramBasis::GramBasis(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw Error(ErrorCode::kBadParameters, "duplicate basis label " + l);
    }
  }
}

size_t GramBasis::Index(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error(ErrorCode::kLabelMismatch, "unknown basis label " + label);
  return static_cast<size_t>(it - labels_.begin());
}

GramBasisPtr MakeGramBasis(std::vector<std::string> labels) {
  return std::make_shared<const GramBasis>(std::move(labels));
}

GramExpr::GramExpr(GramBasisPtr basis) : basis_(std::move(basis)), coeffs_(basis_->size(), 0.0) {}

GramExpr GramExpr::Unit(GramBasisPtr basis, const std::string& label) {
  GramExpr e(basis);
  e.coeffs_[basis->Index(label)] = 1.0;
  return e;
}

double GramExpr::Coeff(const std::string& label) const { return coeffs_[basis_->Index(label)]; }

void GramExpr::CheckSameBasis(const GramExpr& o) const {
  if (basis_ != o.basis_ && basis_->labels() != o.basis_->labels()) {
    throw Error(ErrorCode::kLabelMismatch, "expressions over different bases");
  }
}

GramExpr& GramExpr::operator+=(const GramExpr& o) {
  CheckSameBasis(o);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

GramExpr& GramExpr::operator-=(const GramExpr& o) {
  CheckSameBasis(o);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

GramExpr& GramExpr::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

GramExpr operator+(GramExpr a, const GramExpr& b) { return a += b; }
GramExpr operator-(GramExpr a, const GramExpr& b) { return a -= b; }
GramExpr operator*(double s, GramExpr a) { return a *= s; }
GramExpr operator-(GramExpr a) { return a *= -1.0; }

Mat InnerMatrix(const GramExpr& a, const GramExpr& b) {
  if (a.basis()->labels() != b.basis()->labels()) {
    throw Error(ErrorCode::kLabelMismatch, "expressions over different bases");
  }
  const size_t n = a.coeffs().size();
  Mat m(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      m(i, j) = 0.5 * (a.coeffs()[i] * b.coeffs()[j] + b.coeffs()[i] * a.coeffs()[j]);
    }
  }
  return m;
}

Mat SqNormMatrix(const GramExpr& a) { return InnerMatrix(a, a); }

double TraceProduct(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "trace product of mismatched matrices");
  }
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * b(i, j);
  }
  return s;
}

namespace {

void CheckSymmetric(const Mat& m, int n, const std::string& what) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::kBadParameters, what + " has wrong size");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-14 * std::max(1.0, std::abs(m(i, j)))) {
        throw Error(ErrorCode::kBadParameters, what + " is not symmetric");
      }
    }
  }
}

}  // namespace

void GramProblem::Validate() const {
  const size_t dim = n();
  CheckSymmetric(objective, dim, "objective");
  for (const auto& c : ineqs) CheckSymmetric(c.m, dim, c.name);
  for (const auto& c : eqs) CheckSymmetric(c.m, dim, c.name);
}

nlohmann::json GramProblem::Metadata() const {
  nlohmann::json j;
  j["name"] = name;
  j["params"] = nlohmann::json::object();
  for (const auto& [k, v] : params) j["params"][k] = v;
  j["basis"] = basis;
  j["logdet_delta"] = logdet_delta;
  j["n"] = n();
  j["inequalities"] = nlohmann::json::array();
  for (const auto& c : ineqs) j["inequalities"].push_back(c.name);
  j["equalities"] = nlohmann::json::array();
  for (const auto& c : eqs) j["equalities"].push_back(c.name);
  return j;
}

GramProblem BuildExpansivenessMatrices(double ell, double gamma1, double gamma2) {
  if (!(ell > 0) || !(gamma1 > 0) || !(gamma2 >= 0)) {
    throw Error(ErrorCode::kBadParameters, "need ell, gamma1 > 0 and gamma2 >= 0");
  }
  const double h = ell / 2.0;
  const double hg = ell * gamma1 / 2.0;
  const double g2 = gamma2, g22 = gamma2 * gamma2;
  const double d = ell * gamma1 - 1.0;
  const double o = 1.0 - ell * gamma1 / 2.0;

  GramProblem p;
  p.name = "eg_expansiveness";
  p.params = {{"ell", ell}, {"gamma1", gamma1}, {"gamma2", gamma2}};
  p.basis = {"x", "y", "x_F1", "y_F1", "x_F2", "y_F2"};
  p.objective = Mat{{1, -1, 0, 0, -g2, g2},
                    {-1, 1, 0, 0, g2, -g2},
                    {0, 0, 0, 0, 0, 0},
                    {0, 0, 0, 0, 0, 0},
                    {-g2, g2, 0, 0, g22, -g22},
                    {g2, -g2, 0, 0, -g22, g22}};
  p.ineqs.push_back({"cocoercive(x,x_tilde)",
                     Mat{{0, 0, 0, 0, 0, 0},
                         {0, 0, 0, 0, 0, 0},
                         {0, 0, d, 0, o, 0},
                         {0, 0, 0, 0, 0, 0},
                         {0, 0, o, 0, -1, 0},
                         {0, 0, 0, 0, 0, 0}},
                     0.0});
  p.ineqs.push_back({"cocoercive(x,y)",
                     Mat{{0, 0, h, -h, 0, 0},
                         {0, 0, -h, h, 0, 0},
                         {h, -h, -1, 1, 0, 0},
                         {-h, h, 1, -1, 0, 0},
                         {0, 0, 0, 0, 0, 0},
                         {0, 0, 0, 0, 0, 0}},
                     0.0});
  p.ineqs.push_back({"cocoercive(x,y_tilde)",
                     Mat{{0, 0, h, 0, 0, -h},
                         {0, 0, -h, 0, 0, h},
                         {h, -h, -1, hg, 0, 1},
                         {0, 0, hg, 0, 0, -hg},
                         {0, 0, 0, 0, 0, 0},
                         {-h, h, 1, -hg, 0, -1}},
                     0.0});
  p.ineqs.push_back({"cocoercive(x_tilde,y)",
                     Mat{{0, 0, 0, -h, h, 0},
                         {0, 0, 0, h, -h, 0},
                         {0, 0, 0, hg, -hg, 0},
                         {-h, h, hg, -1, 1, 0},
                         {h, -h, -hg, 1, -1, 0},
                         {0, 0, 0, 0, 0, 0}},
                     0.0});
  p.ineqs.push_back({"cocoercive(x_tilde,y_tilde)",
                     Mat{{0, 0, 0, 0, h, -h},
                         {0, 0, 0, 0, -h, h},
                         {0, 0, 0, 0, -hg, hg},
                         {0, 0, 0, 0, hg, -hg},
                         {h, -h, -hg, hg, -1, 1},
                         {-h, h, hg, -hg, 1, -1}},
                     0.0});
  p.ineqs.push_back({"cocoercive(y,y_tilde)",
                     Mat{{0, 0, 0, 0, 0, 0},
                         {0, 0, 0, 0, 0, 0},
                         {0, 0, 0, 0, 0, 0},
                         {0, 0, 0, d, 0, o},
                         {0, 0, 0, 0, 0, 0},
                         {0, 0, 0, o, 0, -1}},
                     0.0});
  p.eqs.push_back({"unit_distance",
                   Mat{{1, -1, 0, 0, 0, 0},
                       {-1, 1, 0, 0, 0, 0},
                       {0, 0, 0, 0, 0, 0},
                       {0, 0, 0, 0, 0, 0},
                       {0, 0, 0, 0, 0, 0},
                       {0, 0, 0, 0, 0, 0}},
                   1.0});
  return p;
}

namespace {

struct EgPoint {
  std::string name;
  GramExpr pos;  // position relative to the solution
  GramExpr f;
};

std::vector<std::string> EgBasisLabels(int K) {
  std::vector<std::string> labels = {"x0-x*"};
  for (int k = 0; k <= K; ++k) labels.push_back("F(x" + std::to_string(k) + ")");
  for (int k = 0; k <= K; ++k) labels.push_back("F(xt" + std::to_string(k) + ")");
  return labels;
}

// Points x*, x^0..x^K, xt^0..xt^K with positions unrolled through the
// extragradient recursion.
std::vector<EgPoint> EgPoints(const GramBasisPtr& basis, double gamma1, double gamma2, int K) {
  std::vector<EgPoint> xs, xts;
  GramExpr zero(basis);
  GramExpr pos = GramExpr::Unit(basis, "x0-x*");
  for (int k = 0; k <= K; ++k) {
    const std::string ks = std::to_string(k);
    GramExpr fx = GramExpr::Unit(basis, "F(x" + ks + ")");
    GramExpr pos_t = pos - gamma1 * fx;
    GramExpr ft = GramExpr::Unit(basis, "F(xt" + ks + ")");
    xs.push_back({"x" + ks, pos, fx});
    xts.push_back({"xt" + ks, pos_t, ft});
    pos = pos - gamma2 * ft;
  }
  std::vector<EgPoint> all = {{"x*", zero, zero}};
  all.insert(all.end(), xs.begin(), xs.end());
  all.insert(all.end(), xts.begin(), xts.end());
  return all;
}

GramProblem BuildEgPep(const std::string& name, double L, double gamma1, double gamma2, int K,
                       PepClass cls, bool inequality_form) {
  if (!(L > 0) || !(gamma1 >= 0) || !(gamma2 >= 0) || !std::isfinite(L)) {
    throw Error(ErrorCode::kBadParameters, "need L > 0 and nonnegative step sizes");
  }
  if (K < 1) throw Error(ErrorCode::kBadParameters, "K must be at least 1");
  GramBasisPtr basis = MakeGramBasis(EgBasisLabels(K));
  std::vector<EgPoint> pts = EgPoints(basis, gamma1, gamma2, K);

  GramProblem p;
  p.name = name;
  p.params = {{"L", L}, {"gamma1", gamma1}, {"gamma2", gamma2}, {"K", static_cast<double>(K)}};
  p.basis = basis->labels();
  p.objective = SqNormMatrix(pts[1 + K].f);
  for (size_t a = 0; a < pts.size(); ++a) {
    for (size_t b = a + 1; b < pts.size(); ++b) {
      const GramExpr dx = pts[a].pos - pts[b].pos;
      const GramExpr df = pts[a].f - pts[b].f;
      const std::string pair = "(" + pts[a].name + "," + pts[b].name + ")";
      if (cls == PepClass::kMonotoneLipschitz) {
        p.ineqs.push_back({"monotone" + pair, InnerMatrix(df, dx), 0.0});
        p.ineqs.push_back(
            {"lipschitz" + pair, L * L * SqNormMatrix(dx) - SqNormMatrix(df), 0.0});
      } else {
        p.ineqs.push_back(
            {"cocoercive" + pair, L * InnerMatrix(df, dx) - SqNormMatrix(df), 0.0});
      }
    }
  }
  const Mat dist = SqNormMatrix(GramExpr::Unit(basis, "x0-x*"));
  if (inequality_form) {
    p.ineqs.push_back({"initial_distance", -1.0 * dist, -1.0});
  } else {
    p.eqs.push_back({"initial_distance", dist, 1.0});
  }
  return p;
}

}  // namespace

GramProblem BuildNormPep(double L, double gamma1, double gamma2, int K, bool inequality_form) {
  return BuildEgPep("eg_norm", L, gamma1, gamma2, K, PepClass::kMonotoneLipschitz,
                    inequality_form);
}

GramProblem BuildDeltaPep(double L, double gamma1, double gamma2, PepClass cls,
                          DeltaObjective objective, bool inequality_form) {
  GramProblem p = BuildEgPep("eg_delta", L, gamma1, gamma2, 1, cls, inequality_form);
  GramBasisPtr basis = MakeGramBasis(p.basis);
  const char* now = objective == DeltaObjective::kOperator ? "F(x1)" : "F(xt1)";
  const char* before = objective == DeltaObjective::kOperator ? "F(x0)" : "F(xt0)";
  p.objective = SqNormMatrix(GramExpr::Unit(basis, now)) -
                SqNormMatrix(GramExpr::Unit(basis, before));
  p.params.emplace_back("cocoercive_class", cls == PepClass::kCocoercive ? 1.0 : 0.0);
  p.params.emplace_back("eg_operator_objective",
                        objective == DeltaObjective::kEgOperator ? 1.0 : 0.0);
  return p;
}

std::map<std::string, Vec> EgRunVectors(const Operator& op, const Vec& x0, const Vec& x_star,
                                        double gamma1, double gamma2, int K) {
  std::map<std::string, Vec> out;
  out["x0-x*"] = Sub(x0, x_star);
  Vec x = x0;
  for (int k = 0; k <= K; ++k) {
    const std::string ks = std::to_string(k);
    const Vec fx = op.Eval(x);
    const Vec xt = Axpy(x, -gamma1, fx);
    const Vec ft = op.Eval(xt);
    out["F(x" + ks + ")"] = fx;
    out["F(xt" + ks + ")"] = ft;
    x = Axpy(x, -gamma2, ft);
  }
  return out;
}

std::map<std::string, Vec> CounterexampleVectors(const CounterexampleInstance& inst) {
  return {{"x", inst.x},       {"y", inst.y},       {"x_F1", inst.x_f1},
          {"y_F1", inst.y_f1}, {"x_F2", inst.x_f2}, {"y_F2", inst.y_f2}};
}

FeasiblePoint EvaluateGram(const GramProblem& prob, const Mat& G) {
  if (G.rows() != prob.n() || G.cols() != prob.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "Gram matrix size does not match problem");
  }
  FeasiblePoint fp;
  fp.G = G;
  fp.objective = TraceProduct(prob.objective, G);
  double worst = 0.0;
  for (const auto& c : prob.ineqs) {
    const double v = TraceProduct(c.m, G) - c.rhs;
    fp.ineq_values.push_back(v);
    worst = std::max(worst, -v);
  }
  for (const auto& c : prob.eqs) {
    const double v = TraceProduct(c.m, G) - c.rhs;
    fp.eq_residuals.push_back(v);
    worst = std::max(worst, std::abs(v));
  }
  fp.max_violation = worst;
  fp.min_eigenvalue = prob.n() == 0 ? 0.0 : SymEigs(G).front();
  return fp;
}

FeasiblePoint EmbedPoints(const GramProblem& prob, const std::map<std::string, Vec>& vectors) {
  if (vectors.size() != prob.basis.size()) {
    throw Error(ErrorCode::kLabelMismatch, "vector labels do not match the problem basis");
  }
  std::vector<const Vec*> cols;
  for (const auto& label : prob.basis) {
    auto it = vectors.find(label);
    if (it == vectors.end()) throw Error(ErrorCode::kLabelMismatch, "missing vector " + label);
    cols.push_back(&it->second);
  }
  const size_t dim = cols.empty() ? 0 : cols.front()->size();
  for (const Vec* c : cols) {
    if (c->size() != dim) throw Error(ErrorCode::kDimensionMismatch, "vectors differ in size");
  }
  const size_t n = cols.size();
  Mat G(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) G(i, j) = G(j, i) = Dot(*cols[i], *cols[j]);
  }
  return EvaluateGram(prob, G);
}

std::vector<Vec> GramToPoints(const Mat& G) {
  const size_t n = G.rows();
  if (n == 0) return {};
  SymEigResult eig = SymEigDecompose(G);
  double trace = 0.0;
  for (size_t i = 0; i < n; ++i) trace += G(i, i);
  if (eig.values.front() < -1e-9 * std::max(1.0, std::abs(trace))) {
    throw Error(ErrorCode::kNotPSD, "Gram matrix has eigenvalue " +
                                        FormatDouble17(eig.values.front()));
  }
  const double clip = 1e-9 * std::max(trace, 0.0);
  std::vector<size_t> kept;
  for (size_t k = n; k-- > 0;) {
    if (eig.values[k] > clip) kept.push_back(k);
  }
  const size_t dim = std::max<size_t>(kept.size(), 1);
  std::vector<Vec> pts(n, Vec(dim, 0.0));
  for (size_t c = 0; c < kept.size(); ++c) {
    const double s = std::sqrt(eig.values[kept[c]]);
    for (size_t i = 0; i < n; ++i) pts[i][c] = s * eig.vectors(i, kept[c]);
  }
  return pts;
}

namespace {

// Upper-triangular nonzeros with off-diagonal weights doubled, so that
// Tr(M G) is a single pass over the list.
struct SparseSym {
  std::vector<int> i, j;
  std::vector<double> w;

  explicit SparseSym(const Mat& m) {
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = r; c < m.cols(); ++c) {
        if (m(r, c) == 0.0) continue;
        i.push_back(static_cast<int>(r));
        j.push_back(static_cast<int>(c));
        w.push_back(r == c ? m(r, c) : 2.0 * m(r, c));
      }
    }
  }
  double Apply(const Mat& G) const {
    double s = 0.0;
    for (size_t k = 0; k < w.size(); ++k) s += w[k] * G(i[k], j[k]);
    return s;
  }
  // S += c * M, filling both triangles.
  void AddTo(Mat& S, double c) const {
    for (size_t k = 0; k < w.size(); ++k) {
      if (i[k] == j[k]) {
        S(i[k], i[k]) += c * w[k];
      } else {
        S(i[k], j[k]) += 0.5 * c * w[k];
        S(j[k], i[k]) += 0.5 * c * w[k];
      }
    }
  }
};

// The problem in the homogeneous form the search works with: maximize
// <obj, G> subject to <hom_k, G> >= 0 and a single scale condition
// <norm, G> == c (or <= c).
struct Compiled {
  size_t n = 0;
  SparseSym obj{Mat()};
  std::vector<SparseSym> hom;
  std::vector<size_t> hom_index;  // position in prob.ineqs
  SparseSym norm{Mat()};
  double norm_rhs = 1.0;
};

Compiled Compile(const GramProblem& prob) {
  Compiled c;
  c.n = prob.n();
  c.obj = SparseSym(prob.objective);
  int scale_count = 0;
  for (size_t k = 0; k < prob.ineqs.size(); ++k) {
    const auto& g = prob.ineqs[k];
    if (g.rhs == 0.0) {
      c.hom.emplace_back(g.m);
      c.hom_index.push_back(k);
    } else if (g.rhs < 0.0) {
      c.norm = SparseSym(-1.0 * g.m);
      c.norm_rhs = -g.rhs;
      ++scale_count;
    } else {
      throw Error(ErrorCode::kBadParameters, "unsupported inequality " + g.name);
    }
  }
  for (const auto& g : prob.eqs) {
    if (!(g.rhs > 0.0)) throw Error(ErrorCode::kBadParameters, "unsupported equality " + g.name);
    c.norm = SparseSym(g.m);
    c.norm_rhs = g.rhs;
    ++scale_count;
  }
  if (scale_count != 1) {
    throw Error(ErrorCode::kBadParameters, "search needs exactly one normalization constraint");
  }
  return c;
}

Mat GramOf(const Mat& V) {
  const size_t r = V.rows(), n = V.cols();
  Mat G(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (size_t k = 0; k < r; ++k) s += V(k, i) * V(k, j);
      G(i, j) = G(j, i) = s;
    }
  }
  return G;
}

// Rescales V so the normalization holds with equality. Returns false when V
// carries no mass along the normalization.
bool Normalize(const Compiled& c, Mat& V) {
  const double s = c.norm.Apply(GramOf(V));
  if (!(s > 1e-300) || !std::isfinite(s)) return false;
  V *= std::sqrt(c.norm_rhs / s);
  return true;
}

Mat RandomFactor(size_t r, size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat V(r, n);
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < n; ++j) V(i, j) = nd(rng);
  }
  return V;
}

// d/dV Tr(S V^T V) = 2 V S.
Mat FactorGradient(const Mat& V, const Mat& S) { return 2.0 * (V * S); }

double FrobeniusSq(const Mat& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return s;
}

double Inner(const Mat& a, const Mat& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.data().size(); ++k) s += a.data()[k] * b.data()[k];
  return s;
}

// Limited-memory BFGS ascent on a smooth function of the factor, restricted
// to a constraint surface. value_grad fills the ambient gradient and returns
// the value, normal gives the surface normal at V, and retract maps a raw
// step back onto the surface.
template <typename ValueGrad, typename Normal, typename Retract>
void Ascend(Mat& V, int steps, ValueGrad value_grad, Normal normal, Retract retract) {
  constexpr size_t kMemory = 8;
  auto tangent = [&](const Mat& W, Mat g) {
    const Mat nv = normal(W);
    const double nn = FrobeniusSq(nv);
    if (nn > 0) g -= (Inner(g, nv) / nn) * nv;
    return g;
  };
  Mat grad;
  double val = value_grad(V, &grad);
  grad = tangent(V, std::move(grad));
  std::vector<Mat> s_hist, y_hist;
  std::vector<double> rho_hist;
  for (int it = 0; it < steps; ++it) {
    const double gnorm = std::sqrt(FrobeniusSq(grad));
    if (!(gnorm > 1e-10 * std::max(1.0, std::abs(val)))) return;
    // Two-loop recursion on the ascent problem, i.e. minimizing -f.
    Mat q = grad;
    std::vector<double> alpha(s_hist.size());
    for (size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * Inner(s_hist[k], q);
      q -= alpha[k] * y_hist[k];
    }
    double t = 1.0;
    if (!s_hist.empty()) {
      q *= Inner(s_hist.back(), y_hist.back()) / FrobeniusSq(y_hist.back());
    } else {
      t = 0.1 / gnorm;
    }
    for (size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * Inner(y_hist[k], q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    Mat dir = tangent(V, std::move(q));
    double slope = Inner(dir, grad);
    if (!(slope > 0)) {
      dir = grad;
      slope = gnorm * gnorm;
      t = 0.1 / gnorm;
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }
    bool accepted = false;
    for (int tries = 0; tries < 50; ++tries, t *= 0.5) {
      Mat cand = V + t * dir;
      if (!retract(cand)) continue;
      Mat cand_grad;
      const double cv = value_grad(cand, &cand_grad);
      if (!std::isfinite(cv) || cv < val + 1e-4 * t * slope) continue;
      cand_grad = tangent(cand, std::move(cand_grad));
      Mat sk = cand - V;
      Mat yk = grad - cand_grad;  // gradient change of -f
      const double sy = Inner(sk, yk);
      if (sy > 1e-16 * std::sqrt(FrobeniusSq(sk) * FrobeniusSq(yk))) {
        s_hist.push_back(std::move(sk));
        y_hist.push_back(std::move(yk));
        rho_hist.push_back(1.0 / sy);
        if (s_hist.size() > kMemory) {
          s_hist.erase(s_hist.begin());
          y_hist.erase(y_hist.begin());
          rho_hist.erase(rho_hist.begin());
        }
      }
      V = std::move(cand);
      grad = std::move(cand_grad);
      val = cv;
      accepted = true;
      break;
    }
    if (!accepted) {
      if (s_hist.empty()) return;
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }
  }
}

std::mt19937_64 DerivedRng(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// A point with every homogeneous constraint strictly positive, scaled onto
// the normalization. Found by maximizing a smoothed minimum on the unit
// sphere.
std::optional<Mat> StrictlyFeasibleGram(const Compiled& c, const LowerBoundOptions& opts) {
  const size_t r = std::max<size_t>(opts.rank, 1);
  const double tau = 1e-3;
  auto value_grad = [&](const Mat& V, Mat* grad) {
    const Mat G = GramOf(V);
    std::vector<double> g;
    for (const auto& h : c.hom) g.push_back(h.Apply(G));
    g.push_back(c.norm.Apply(G));
    const double gmin = *std::min_element(g.begin(), g.end());
    double z = 0.0;
    std::vector<double> w(g.size());
    for (size_t k = 0; k < g.size(); ++k) z += (w[k] = std::exp(-(g[k] - gmin) / tau));
    Mat S(c.n, c.n);
    for (size_t k = 0; k < c.hom.size(); ++k) c.hom[k].AddTo(S, w[k] / z);
    c.norm.AddTo(S, w.back() / z);
    *grad = FactorGradient(V, S);
    return gmin - tau * std::log(z);
  };
  auto to_sphere = [](Mat& V) {
    const double f = std::sqrt(FrobeniusSq(V));
    if (!(f > 0)) return false;
    V *= 1.0 / f;
    return true;
  };
  std::optional<Mat> best;
  double best_min = 0.0;
  for (uint64_t attempt = 0; attempt < 8; ++attempt) {
    std::mt19937_64 rng = DerivedRng(opts.seed, 0x9e3779b97f4a7c15ULL + attempt);
    Mat V = RandomFactor(r, c.n, rng);
    to_sphere(V);
    Ascend(V, 2000, value_grad, [](const Mat& W) { return W; }, to_sphere);
    const Mat G = GramOf(V);
    double m = c.norm.Apply(G);
    for (const auto& h : c.hom) m = std::min(m, h.Apply(G));
    if (m > best_min && Normalize(c, V)) {
      best_min = m;
      best = GramOf(V);
    }
    if (best_min > 1e-6) break;
  }
  return best;
}

struct RestartResult {
  bool ok = false;
  Mat G;
  double objective = 0.0;
};

RestartResult RunRestart(const GramProblem& prob, const Compiled& c, const LowerBoundOptions& opts,
                         const std::optional<Mat>& interior, int restart) {
  std::mt19937_64 rng = DerivedRng(opts.seed, static_cast<uint64_t>(restart));
  Mat V = RandomFactor(std::max(opts.rank, 1), c.n, rng);
  if (!Normalize(c, V)) return {};
  std::vector<double> lambda(c.hom.size(), 0.0);
  double mu = opts.initial_penalty;
  const int rounds = std::max(opts.rounds, 1);
  auto retract = [&](Mat& W) { return Normalize(c, W); };
  auto norm_grad = [&](const Mat& W) {
    Mat S(c.n, c.n);
    c.norm.AddTo(S, 1.0);
    return FactorGradient(W, S);
  };
  for (int round = 0; round < rounds; ++round) {
    const int steps = opts.steps / rounds + (round < opts.steps % rounds ? 1 : 0);
    auto value_grad = [&](const Mat& W, Mat* grad) {
      const Mat G = GramOf(W);
      double val = c.obj.Apply(G);
      Mat S(c.n, c.n);
      c.obj.AddTo(S, 1.0);
      for (size_t k = 0; k < c.hom.size(); ++k) {
        const double g = c.hom[k].Apply(G);
        const double active = std::max(0.0, lambda[k] - mu * g);
        val -= (active * active - lambda[k] * lambda[k]) / (2.0 * mu);
        if (active > 0) c.hom[k].AddTo(S, active);
      }
      *grad = FactorGradient(W, S);
      return val;
    };
    Ascend(V, steps, value_grad, norm_grad, retract);
    const Mat G = GramOf(V);
    for (size_t k = 0; k < c.hom.size(); ++k) {
      lambda[k] = std::max(0.0, lambda[k] - mu * c.hom[k].Apply(G));
    }
    mu *= opts.penalty_growth;
  }

  Mat G = GramOf(V);
  // Pull residual violations back with the smallest convex step toward the
  // interior point; both ends satisfy the normalization, so the mix does too.
  double t = 0.0;
  for (size_t k = 0; k < c.hom.size(); ++k) {
    const double g = c.hom[k].Apply(G);
    if (g >= 0.0) continue;
    if (!interior) return {};
    const double gi = c.hom[k].Apply(*interior);
    t = std::max(t, -g / (gi - g));
  }
  if (t > 0.0) {
    t = std::min(1.0, t * (1.0 + 1e-9) + 1e-15);
    G = (1.0 - t) * G + t * (*interior);
  }
  FeasiblePoint fp = EvaluateGram(prob, G);
  if (!fp.Feasible(opts.tol) || !std::isfinite(fp.objective)) return {};
  return {true, G, fp.objective};
}

}  // namespace

FeasiblePoint LowerBoundSearch(const GramProblem& prob, const LowerBoundOptions& opts) {
  prob.Validate();
  if (opts.rank < 1 || opts.restarts < 1) {
    throw Error(ErrorCode::kBadParameters, "rank and restarts must be positive");
  }
  const Compiled c = Compile(prob);
  const std::optional<Mat> interior = StrictlyFeasibleGram(c, opts);

  std::vector<RestartResult> results(opts.restarts);
  if (opts.parallel) {
    const int workers = std::max(1u, std::thread::hardware_concurrency());
    for (int base = 0; base < opts.restarts; base += workers) {
      std::vector<std::future<RestartResult>> futs;
      for (int r = base; r < std::min(opts.restarts, base + workers); ++r) {
        futs.push_back(std::async(std::launch::async, RunRestart, std::cref(prob), std::cref(c),
                                  std::cref(opts), std::cref(interior), r));
      }
      for (size_t k = 0; k < futs.size(); ++k) results[base + k] = futs[k].get();
    }
  } else {
    for (int r = 0; r < opts.restarts; ++r) results[r] = RunRestart(prob, c, opts, interior, r);
  }

  int best = -1;
  for (int r = 0; r < opts.restarts; ++r) {
    if (!results[r].ok) continue;
    if (best < 0 || results[r].objective > results[best].objective) best = r;
  }
  if (best < 0) {
    throw Error(ErrorCode::kNoFeasiblePointFound,
                "no restart produced a verified feasible point for " + prob.name);
  }
  FeasiblePoint fp = EvaluateGram(prob, results[best].G);
  fp.restart = best;
  return fp;
}

nlohmann::json FeasiblePointToJson(const FeasiblePoint& fp) {
  nlohmann::json j;
  j["objective"] = fp.objective;
  j["max_violation"] = fp.max_violation;
  j["min_eigenvalue"] = fp.min_eigenvalue;
  j["restart"] = fp.restart;
  j["ineq_values"] = fp.ineq_values;
  j["eq_residuals"] = fp.eq_residuals;
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < fp.G.rows(); ++i) rows.push_back(fp.G.Row(i));
  j["G"] = rows;
  return j;
}

namespace {

void AppendEntries(std::ostringstream& out, size_t matno, const Mat& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = i; j < m.cols(); ++j) {
      if (m(i, j) == 0.0) continue;
      out << matno << " 1 " << i + 1 << " " << j + 1 << " " << FormatDouble17(m(i, j)) << "\n";
    }
  }
}

}  // namespace

std::string SdpaToString(const GramProblem& prob) {
  prob.Validate();
  const size_t n = prob.n();
  const size_t ni = prob.ineqs.size();
  const size_t m = ni + prob.eqs.size();
  std::ostringstream out;
  out << "\"" << prob.name << "\n";
  out << m << "\n";
  out << (ni > 0 ? 2 : 1) << "\n";
  out << n;
  if (ni > 0) out << " -" << ni;
  out << "\n";
  for (size_t k = 0; k < m; ++k) {
    const double c = k < ni ? prob.ineqs[k].rhs : prob.eqs[k - ni].rhs;
    out << (k ? " " : "") << FormatDouble17(c);
  }
  out << "\n";
  AppendEntries(out, 0, prob.objective);
  for (size_t k = 0; k < ni; ++k) {
    AppendEntries(out, k + 1, prob.ineqs[k].m);
    out << k + 1 << " 2 " << k + 1 << " " << k + 1 << " -1\n";
  }
  for (size_t k = 0; k < prob.eqs.size(); ++k) AppendEntries(out, ni + k + 1, prob.eqs[k].m);
  return out.str();
}

void ExportSdpa(const GramProblem& prob, const std::string& path) {
  const std::string body = SdpaToString(prob);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << body;
  std::ofstream meta(path + ".json");
  if (!meta) throw Error(ErrorCode::kIoError, "cannot write " + path + ".json");
  meta << prob.Metadata().dump(2) << "\n";
  if (!out || !meta) throw Error(ErrorCode::kIoError, "failed writing " + path);
}

GramProblem SdpaFromString(const std::string& text, const nlohmann::json* metadata) {
  std::istringstream lines(text);
  std::string line, body;
  bool header = true;
  while (std::getline(lines, line)) {
    if (header && !line.empty() && (line[0] == '"' || line[0] == '*')) continue;
    header = false;
    for (char& ch : line) {
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    }
    body += line + "\n";
  }
  std::istringstream in(body);
  auto fail = [](const std::string& what) -> void {
    throw Error(ErrorCode::kParseError, "SDPA: " + what);
  };
  long m = 0, nblocks = 0;
  if (!(in >> m >> nblocks) || m < 0 || nblocks < 1 || nblocks > 2) fail("bad header");
  long n = 0, slack = 0;
  if (!(in >> n) || n < 0) fail("bad block structure");
  if (nblocks == 2 && (!(in >> slack) || slack >= 0)) fail("slack block must be diagonal");
  slack = -slack;
  if (slack > m) fail("more slacks than constraints");
  auto read_double = [&](double& v) {
    std::string tok;
    if (!(in >> tok)) return false;
    char* end = nullptr;
    v = std::strtod(tok.c_str(), &end);
    return end != tok.c_str() && *end == '\0';
  };
  Vec c(m);
  for (long k = 0; k < m; ++k) {
    if (!read_double(c[k])) fail("bad right-hand side");
  }
  std::vector<Mat> mats(m + 1, Mat(n, n));
  std::vector<long> slack_of(m + 1, -1);
  long matno, blk, i, j;
  while (in >> matno) {
    double v = 0.0;
    if (!(in >> blk >> i >> j) || !read_double(v)) fail("truncated entry");
    if (matno < 0 || matno > m) fail("matrix index out of range");
    if (blk == 1) {
      if (i < 1 || j < 1 || i > n || j > n) fail("entry outside block 1");
      mats[matno](i - 1, j - 1) = v;
      mats[matno](j - 1, i - 1) = v;
    } else if (blk == 2 && nblocks == 2) {
      if (i != j || i < 1 || i > slack || v != -1.0 || matno == 0) fail("bad slack entry");
      slack_of[matno] = i;
    } else {
      fail("unknown block");
    }
  }
  if (!in.eof()) fail("trailing garbage");

  GramProblem p;
  p.name = "sdpa";
  for (long k = 0; k < n; ++k) p.basis.push_back("g" + std::to_string(k + 1));
  p.objective = mats[0];
  for (long k = 1; k <= m; ++k) {
    GramConstraint g{"c" + std::to_string(k), mats[k], c[k - 1]};
    if (slack_of[k] > 0) {
      p.ineqs.push_back(std::move(g));
    } else {
      p.eqs.push_back(std::move(g));
    }
  }
  if (static_cast<long>(p.ineqs.size()) != slack) fail("slack count mismatch");

  if (metadata != nullptr) {
    const auto& md = *metadata;
    try {
      p.name = md.at("name").get<std::string>();
      p.params.clear();
      for (const auto& [k, v] : md.at("params").items()) p.params.emplace_back(k, v.get<double>());
      auto basis = md.at("basis").get<std::vector<std::string>>();
      auto ineq_names = md.at("inequalities").get<std::vector<std::string>>();
      auto eq_names = md.at("equalities").get<std::vector<std::string>>();
      if (basis.size() != p.basis.size() || ineq_names.size() != p.ineqs.size() ||
          eq_names.size() != p.eqs.size()) {
        fail("metadata does not match the problem");
      }
      p.basis = basis;
      for (size_t k = 0; k < ineq_names.size(); ++k) p.ineqs[k].name = ineq_names[k];
      for (size_t k = 0; k < eq_names.size(); ++k) p.eqs[k].name = eq_names[k];
      p.logdet_delta = md.value("logdet_delta", p.logdet_delta);
    } catch (const nlohmann::json::exception& e) {
      fail(std::string("metadata: ") + e.what());
    }
  }
  return p;
}

GramProblem ReadSdpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string sidecar = path + ".json";
  if (std::filesystem::exists(sidecar)) {
    std::ifstream min(sidecar);
    nlohmann::json md;
    try {
      md = nlohmann::json::parse(min);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, std::string("metadata: ") + e.what());
    }
    return SdpaFromString(ss.str(), &md);
  }
  return SdpaFromString(ss.str());
}

}  // namespace vicert
