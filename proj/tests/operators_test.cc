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
#include <cstring>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "test_util.h"
#include "vicert/operator_io.h"

namespace vicert {
namespace {

using ::vicert::testing::RandomMat;
using ::vicert::testing::RandomMonotoneMat;
using ::vicert::testing::RandomVec;

const Mat kRot{{0, 1}, {-1, 0}};

template <typename Fn>
ErrorCode CodeOf(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

TEST(OperatorEvalTest, RotationAndLogistic) {
  EXPECT_EQ(Operator::Rotation().Eval({1, 0}), (Vec{0, -1}));
  EXPECT_EQ(Operator::LogisticGrad().Eval({0.0})[0], 0.5);
  // mpmath reference values.
  EXPECT_NEAR(Operator::LogisticGrad().Eval({1.3})[0], 0.7988349830425586126, 1e-15);
  EXPECT_NEAR(Operator::LogisticGrad(2.0, 0.5).Eval({-0.7})[0], 0.045632222882836503691,
              1e-15);
}

TEST(OperatorEvalTest, StoredRootsAreZeros) {
  std::mt19937_64 rng(1);
  std::vector<Operator> ops = {
      Operator::Rotation(), Operator::LogisticGrad(),
      Operator::Affine(RandomMonotoneMat(5, rng, 0.1), RandomVec(5, rng)),
      Operator::ScaledIdentity(3, 2.0, {1, 2, 3}),
      Operator::BilinearGame(RandomMat(2, 2, rng), RandomVec(4, rng))};
  for (const auto& op : ops) {
    ASSERT_TRUE(op.root().has_value()) << OperatorKindName(op.kind());
    EXPECT_LE(Norm(op.Eval(*op.root())), 1e-12) << OperatorKindName(op.kind());
  }
  EXPECT_NEAR(Operator::LogisticGrad().root()->at(0), -3.3592750453695935411, 1e-13);
}

TEST(OperatorEvalTest, DimensionMismatch) {
  EXPECT_EQ(CodeOf([] { Operator::Rotation().Eval({1, 2, 3}); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] { Operator::Affine(Mat(2, 2), {1, 2, 3}); }),
            ErrorCode::kDimensionMismatch);
}

TEST(OperatorJacobianTest, AnalyticValues) {
  EXPECT_EQ(Operator::Rotation().Jacobian({4, 5}), kRot);
  EXPECT_NEAR(Operator::LogisticGrad().Jacobian({0.0})(0, 0), 0.26, 1e-16);
  EXPECT_NEAR(Operator::LogisticGrad().Jacobian({1.3})(0, 0), 0.17829836246906023038,
              1e-15);
  EXPECT_NEAR(Operator::LogisticGrad(2.0, 0.5).Jacobian({-0.7})(0, 0),
              1.1347395899824585874, 1e-14);
}

TEST(OperatorJacobianTest, MatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  Operator logistic = Operator::LogisticGrad();
  Operator eg = MakeEgOperator(logistic, 0.7);
  for (int i = 0; i < 50; ++i) {
    const Vec x = RandomVec(1, rng, 4.0);
    auto f = [&](const Vec& y) { return logistic.Eval(y); };
    EXPECT_NEAR(logistic.Jacobian(x)(0, 0), FiniteDiffJacobian(f, x)(0, 0), 1e-6);
    auto g = [&](const Vec& y) { return eg.Eval(y); };
    EXPECT_NEAR(eg.Jacobian(x)(0, 0), FiniteDiffJacobian(g, x)(0, 0), 1e-6);
  }
}

TEST(OperatorJacobianTest, CustomTableHasNone) {
  Operator t = Operator::CustomTable({{{0.0}, {1.0}}});
  EXPECT_EQ(CodeOf([&] { t.Jacobian({0.0}); }), ErrorCode::kNoAnalyticJacobian);
  EXPECT_EQ(t.Eval({0.0}), (Vec{1.0}));
  EXPECT_EQ(CodeOf([&] { t.Eval({0.5}); }), ErrorCode::kOffTable);
  EXPECT_EQ(CodeOf([&] { MakeHamiltonianOperator(t); }), ErrorCode::kNoAnalyticJacobian);
}

TEST(EgOperatorTest, Examples) {
  Operator id = Operator::ScaledIdentity(3, 1.0);
  EXPECT_EQ(MaxAbs(MakeEgOperator(id, 1.0).A()), 0.0);
  Operator eg = MakeEgOperator(Operator::Rotation(), 1.0);
  ASSERT_TRUE(eg.is_affine());
  EXPECT_EQ(eg.A(), (Mat{{1, 1}, {-1, 1}}));
}

TEST(OgOperatorTest, Blocks) {
  Operator zero = Operator::Affine(Mat(2, 2), {});
  Operator og = MakeOgOperator(zero, 1.0);
  EXPECT_EQ(og.A(), (Mat{{0, 0, 0, 0}, {0, 0, 0, 0}, {-1, 0, 1, 0}, {0, -1, 0, 1}}));
  Operator og_rot = MakeOgOperator(Operator::Rotation(), 0.5);
  EXPECT_EQ(og_rot.A(), (Mat{{0, 2, 0, -1}, {-2, 0, 1, 0}, {-2, 0, 2, 0}, {0, -2, 0, 2}}));
  EXPECT_EQ(CodeOf([] { MakeOgOperator(Operator::LogisticGrad(), 1.0); }),
            ErrorCode::kNotAffine);
}

TEST(EftpOperatorTest, Examples) {
  Operator zero = Operator::Affine(Mat(2, 2), {1, -2});
  Operator eftp = MakeEftpOperator(zero, 0.5);
  const Vec z{1, 2, 3, 5};
  // (b, (y - x)/gamma + b)
  EXPECT_EQ(eftp.Eval(z), (Vec{1, -2, 5, 4}));
  Operator e = MakeEftpOperator(Operator::Rotation(), 1.0);
  const Vec out = e.Eval({1, 0, 0, 0});
  EXPECT_EQ(Vec(out.begin(), out.begin() + 2), (Vec{0, -1}));
  EXPECT_EQ(CodeOf([] { MakeEftpOperator(Operator::LogisticGrad(), 1.0); }),
            ErrorCode::kNotAffine);
}

TEST(EftpOperatorTest, AgreesWithDisplayedComposite) {
  std::mt19937_64 rng(4);
  Operator f = Operator::Affine(RandomMonotoneMat(3, rng), RandomVec(3, rng));
  const double gamma = 0.3;
  Operator e = MakeEftpOperator(f, gamma);
  for (int i = 0; i < 20; ++i) {
    const Vec x = RandomVec(3, rng), y = RandomVec(3, rng);
    const Vec top = f.Eval(Axpy(x, -gamma, f.Eval(y)));
    const Vec bottom = Add(Scale(1.0 / gamma, Sub(y, x)), f.Eval(y));
    EXPECT_LE(NormInf(Sub(e.Eval(Concat(x, y)), Concat(top, bottom))), 1e-12);
  }
}

TEST(PpOperatorTest, Examples) {
  Operator pp = MakePpOperator(Operator::ScaledIdentity(2, 1.0), 1.0);
  const Vec v = pp.Eval({2, -4});
  EXPECT_NEAR(v[0], 1, 1e-15);
  EXPECT_NEAR(v[1], -2, 1e-15);
  EXPECT_EQ(MaxAbs(MakePpOperator(Operator::Affine(Mat(2, 2), {}), 1.0).A()), 0.0);
  const Vec y = PpResolvent(Operator::Rotation(), 1.0, {1, 0});
  EXPECT_NEAR(y[0], 0.5, 1e-15);
  EXPECT_NEAR(y[1], 0.5, 1e-15);
  const Vec out = MakePpOperator(Operator::Rotation(), 1.0).Eval({1, 0});
  EXPECT_NEAR(out[0], 0.5, 1e-15);
  EXPECT_NEAR(out[1], -0.5, 1e-15);
}

TEST(PpOperatorTest, NonlinearResolventMatchesReference) {
  const Vec y = PpResolvent(Operator::LogisticGrad(), 2.0 / 0.26, {2.0});
  EXPECT_NEAR(y[0], -0.62812039309135679744, 1e-12);
  EXPECT_NEAR(MakePpOperator(Operator::LogisticGrad(), 2.0 / 0.26).Eval({2.0})[0],
              0.34165565110187638367, 1e-12);
}

TEST(PpOperatorTest, NonlinearWithoutJacobianUsesDampedIteration) {
  Operator eg = MakeEgOperator(Operator::LogisticGrad(), 1.0);
  Operator no_jac = Operator::Composite(
      "eg-copy", 1, [eg](const Vec& x) { return eg.Eval(x); }, nullptr, eg.root());
  for (double gamma : {0.5, 3.0, 20.0}) {
    const Vec x{1.7};
    const Vec y = PpResolvent(no_jac, gamma, x);
    EXPECT_LE(Norm(Sub(Axpy(y, gamma, no_jac.Eval(y)), x)), 1e-11);
  }
}

TEST(HamiltonianOperatorTest, Examples) {
  Operator h = MakeHamiltonianOperator(Operator::Rotation());
  EXPECT_EQ(h.A(), Mat::Identity(2));
  EXPECT_EQ(MaxAbs(MakeHamiltonianOperator(Operator::Affine(Mat(2, 2), {})).A()), 0.0);
  EXPECT_NEAR(MakeHamiltonianOperator(Operator::LogisticGrad()).Eval({0.0})[0], 0.13,
              1e-16);
  EXPECT_DOUBLE_EQ(HamiltonianValue(Operator::Rotation(), {3, 4}), 12.5);
}

// Property: every composite vanishes at the lifted root.
TEST(OperatorPropertyTest, RootPreservation) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 6;
    Operator f = Operator::Affine(RandomMonotoneMat(n, rng, 0.05), RandomVec(n, rng));
    ASSERT_TRUE(f.root());
    const double gamma = 0.1 + 0.05 * trial;
    const Vec& r = *f.root();
    const Vec lifted = Concat(r, r);
    EXPECT_LE(Norm(MakeEgOperator(f, gamma).Eval(r)), 1e-12);
    EXPECT_LE(Norm(MakePpOperator(f, gamma).Eval(r)), 1e-12);
    EXPECT_LE(Norm(MakeHamiltonianOperator(f).Eval(r)), 1e-12);
    EXPECT_LE(Norm(MakeOgOperator(f, gamma).Eval(lifted)), 1e-12);
    EXPECT_LE(Norm(MakeEftpOperator(f, gamma).Eval(lifted)), 1e-12);
  }
  Operator logistic = Operator::LogisticGrad();
  const Vec& r = *logistic.root();
  EXPECT_LE(Norm(MakeEgOperator(logistic, 2.0).Eval(r)), 1e-12);
  EXPECT_LE(Norm(MakePpOperator(logistic, 2.0).Eval(r)), 1e-12);
  EXPECT_LE(Norm(MakeHamiltonianOperator(logistic).Eval(r)), 1e-12);
}

// Property: composing affine operators stays affine and the stored data agree
// with direct composition of the base operator.
TEST(OperatorPropertyTest, AffineClosure) {
  std::mt19937_64 rng(12);
  const int n = 4;
  Operator f = Operator::Affine(RandomMonotoneMat(n, rng, 0.1), RandomVec(n, rng));
  const double gamma = 0.37;
  Operator eg = MakeEgOperator(f, gamma);
  Operator pp = MakePpOperator(f, gamma);
  Operator h = MakeHamiltonianOperator(f);
  Operator og = MakeOgOperator(f, gamma);
  Operator eftp = MakeEftpOperator(f, gamma);
  for (int i = 0; i < 100; ++i) {
    const Vec x = RandomVec(n, rng), xp = RandomVec(n, rng);
    const Vec direct_eg = f.Eval(Axpy(x, -gamma, f.Eval(x)));
    EXPECT_LE(NormInf(Sub(eg.Eval(x), direct_eg)), 1e-12);
    EXPECT_LE(NormInf(Sub(Add(eg.A() * x, eg.b()), direct_eg)), 1e-12);
    const Vec direct_pp = f.Eval(PpResolvent(f, gamma, x));
    EXPECT_LE(NormInf(Sub(pp.Eval(x), direct_pp)), 1e-12);
    EXPECT_LE(NormInf(Sub(h.Eval(x), f.A().Transpose() * f.Eval(x))), 1e-12);
    const Vec og_direct = Concat(Sub(Scale(2.0, f.Eval(x)), f.Eval(xp)),
                                 Scale(1.0 / gamma, Sub(xp, x)));
    EXPECT_LE(NormInf(Sub(og.Eval(Concat(x, xp)), og_direct)), 1e-12);
    const Vec top = f.Eval(Axpy(x, -gamma, f.Eval(xp)));
    const Vec bottom = Add(Scale(1.0 / gamma, Sub(xp, x)), f.Eval(xp));
    EXPECT_LE(NormInf(Sub(eftp.Eval(Concat(x, xp)), Concat(top, bottom))), 1e-11);
  }
}

// Property: the resolvent solves its defining equation.
TEST(OperatorPropertyTest, PpDefiningEquation) {
  std::mt19937_64 rng(14);
  Operator f = Operator::Affine(RandomMonotoneMat(6, rng), RandomVec(6, rng));
  Operator logistic = Operator::LogisticGrad();
  for (int i = 0; i < 100; ++i) {
    const double gamma = 0.05 + 0.1 * (i % 20);
    const Vec x = RandomVec(6, rng);
    const Vec y = PpResolvent(f, gamma, x);
    EXPECT_LE(Norm(Sub(Axpy(y, gamma, f.Eval(y)), x)), 1e-11);
    const Vec x1 = RandomVec(1, rng, 10.0);
    const Vec y1 = PpResolvent(logistic, gamma * 10, x1);
    EXPECT_LE(Norm(Sub(Axpy(y1, gamma * 10, logistic.Eval(y1)), x1)), 1e-11);
  }
}

bool BitEqual(const Vec& a, const Vec& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST(OperatorIoTest, JsonRoundTripIsBitExact) {
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<uint64_t> bits;
  for (int trial = 0; trial < 50; ++trial) {
    Mat a(3, 3);
    Vec b(3);
    // Arbitrary finite doubles, including subnormals and extreme exponents.
    auto draw = [&] {
      double v;
      do {
        uint64_t u = bits(rng);
        std::memcpy(&v, &u, sizeof v);
      } while (!std::isfinite(v));
      return v;
    };
    for (int i = 0; i < 3; ++i) {
      b[i] = draw();
      for (int j = 0; j < 3; ++j) a(i, j) = draw();
    }
    Operator op = Operator::Affine(a, b).WithConstants({1.0 / 3.0, 0.1, 7.25});
    Operator back = OperatorFromString(OperatorToString(op));
    EXPECT_TRUE(BitEqual(back.A().data(), a.data()));
    EXPECT_TRUE(BitEqual(back.b(), b));
    EXPECT_EQ(*back.constants().L, 1.0 / 3.0);
    EXPECT_EQ(OperatorToString(back), OperatorToString(op));
  }
}

TEST(OperatorIoTest, KindsSurviveRoundTrip) {
  std::mt19937_64 rng(21);
  std::vector<Operator> ops = {
      Operator::Rotation(4), Operator::LogisticGrad(10.0, 0.0),
      Operator::ScaledIdentity(2, 0.5, {1, 1}), Operator::BilinearGame(RandomMat(2, 3, rng)),
      Operator::CustomTable({{{1, 2}, {3, 4}}, {{0, 0}, {0, 0}}})};
  for (const auto& op : ops) {
    Operator back = OperatorFromString(OperatorToString(op));
    EXPECT_EQ(back.kind(), op.kind());
    EXPECT_EQ(OperatorToString(back), OperatorToString(op));
  }
}

TEST(OperatorIoTest, RejectsMalformed) {
  EXPECT_EQ(CodeOf([] { OperatorFromString("{\"kind\":\"nope\"}"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { OperatorFromString("{\"kind\":\"rotation\",\"A\":[[1,0],[0,1]]}"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { OperatorFromString("not json"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              OperatorFromString("{\"kind\":\"affine\",\"A\":[[1]],\"constants\":{\"L\":-1}}");
            }),
            ErrorCode::kBadParameters);
}

}  // namespace
}  // namespace vicert
