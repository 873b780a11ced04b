// ctckit/matrix.h

// Copyright 2026  The ctckit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CTCKIT_MATRIX_H_
#define CTCKIT_MATRIX_H_

#include <cmath>
#include <cstddef>
#include <vector>

#include "ctckit/error.h"

namespace ctckit {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles.  Everything in the toolkit (feature
// sequences, layer activations, weights, log-probability tables) is one of
// these; double precision throughout.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {
    require(r >= 0 && c >= 0, "Matrix: negative shape ", r, "x", c);
  }

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

// y = W x + b where x has W.cols entries and y, b have W.rows entries.
// b may be null.
inline void affine(const Matrix& w, const double* x, const double* b, double* y) {
  for (int r = 0; r < w.rows; ++r) {
    const double* wr = w.row(r);
    double acc = b ? b[r] : 0.0;
    for (int c = 0; c < w.cols; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

// y += W^T g where g has W.rows entries and y has W.cols entries.
inline void add_transpose_matvec(const Matrix& w, const double* g, double* y) {
  for (int r = 0; r < w.rows; ++r) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    const double* wr = w.row(r);
    for (int c = 0; c < w.cols; ++c) y[c] += gr * wr[c];
  }
}

// G += g x^T with G shaped len(g) x len(x).
inline void add_outer(Matrix& grad, const double* g, const double* x) {
  for (int r = 0; r < grad.rows; ++r) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    double* row = grad.row(r);
    for (int c = 0; c < grad.cols; ++c) row[c] += gr * x[c];
  }
}

}  // namespace ctckit

#endif  // CTCKIT_MATRIX_H_
