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


// Independent construction of the expansiveness problem: every matrix is
// expanded from its defining inner-product expression instead of typed in.

#ifndef VICERT_TESTS_PEP_ORACLE_H_
#define VICERT_TESTS_PEP_ORACLE_H_

#include <vector>

#include "vicert/pep.h"

namespace vicert::testing {

struct SymbolicExpansiveness {
  Mat objective;
  std::vector<Mat> rows;  // same order as BuildExpansivenessMatrices
  Mat distance;
};

inline SymbolicExpansiveness ExpandExpansiveness(double ell, double g1, double g2) {
  GramBasisPtr b = MakeGramBasis({"x", "y", "x_F1", "y_F1", "x_F2", "y_F2"});
  const GramExpr x = GramExpr::Unit(b, "x"), y = GramExpr::Unit(b, "y");
  const GramExpr xf1 = GramExpr::Unit(b, "x_F1"), yf1 = GramExpr::Unit(b, "y_F1");
  const GramExpr xf2 = GramExpr::Unit(b, "x_F2"), yf2 = GramExpr::Unit(b, "y_F2");
  // ell <F_a - F_b, a - b> - |F_a - F_b|^2
  auto row = [&](const GramExpr& fa, const GramExpr& fb, const GramExpr& diff) {
    return ell * InnerMatrix(fa - fb, diff) - SqNormMatrix(fa - fb);
  };
  SymbolicExpansiveness out;
  out.objective = SqNormMatrix(x - g2 * xf2 - y + g2 * yf2);
  out.rows = {
      row(xf1, xf2, g1 * xf1),
      row(xf1, yf1, x - y),
      row(xf1, yf2, x - y + g1 * yf1),
      row(xf2, yf1, x - g1 * xf1 - y),
      row(xf2, yf2, x - g1 * xf1 - y + g1 * yf1),
      row(yf1, yf2, g1 * yf1),
  };
  out.distance = SqNormMatrix(x - y);
  return out;
}

}  // namespace vicert::testing

#endif  // VICERT_TESTS_PEP_ORACLE_H_
