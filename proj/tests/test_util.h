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

#ifndef VICERT_TESTS_TEST_UTIL_H_
#define VICERT_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <random>

#include "vicert/numerics.h"

namespace vicert::testing {

inline Vec RandomVec(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vec v(n);
  for (double& x : v) x = g(rng);
  return v;
}

inline Mat RandomMat(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = g(rng);
  }
  return m;
}

// Gaussian matrix shifted so that its symmetric part is PSD plus `margin`.
inline Mat RandomMonotoneMat(int n, std::mt19937_64& rng, double margin = 0.0) {
  Mat m = RandomMat(n, n, rng);
  const Vec ev = SymEigs(0.5 * (m + m.Transpose()));
  const double shift = std::max(0.0, -ev.front()) + margin;
  return m + Mat::Identity(n) * shift;
}

// Q^T D Q with D block diagonal of 2x2 rotation-scalings and scalars.
inline Mat RandomNormalMat(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Mat d(n, n);
  int i = 0;
  while (i < n) {
    if (i + 1 < n && u(rng) > 0.0) {
      const double re = u(rng), im = u(rng);
      d(i, i) = re;
      d(i + 1, i + 1) = re;
      d(i, i + 1) = im;
      d(i + 1, i) = -im;
      i += 2;
    } else {
      d(i, i) = u(rng);
      ++i;
    }
  }
  // Orthogonal Q from the eigenvectors of a random symmetric matrix.
  Mat g = RandomMat(n, n, rng);
  const Mat q = SymEigDecompose(g + g.Transpose()).vectors;
  return q.Transpose() * d * q;
}

}  // namespace vicert::testing

#endif  // VICERT_TESTS_TEST_UTIL_H_
