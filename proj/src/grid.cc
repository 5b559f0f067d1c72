// src/grid.cc

// Copyright 2026  Dubkit Authors

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

#include "dubkit/grid.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dubkit {

Grid::Grid(std::vector<int64_t> shape) : shape_(std::move(shape)) {
  if (shape_.empty() || shape_.size() > 3)
    throw std::invalid_argument("Grid: rank must be 1, 2 or 3");
  int64_t n = 1;
  for (int64_t d : shape_) {
    if (d <= 0) throw std::invalid_argument("Grid: dimensions must be positive");
    n *= d;
  }
  data_.assign(static_cast<size_t>(n), 0.0);
}

Grid Grid::full(std::vector<int64_t> shape, double value) {
  Grid g(std::move(shape));
  g.fill(value);
  return g;
}

Grid Grid::randn(std::vector<int64_t> shape, Rng& rng) {
  Grid g(std::move(shape));
  for (double& v : g.data_) v = rng.normal();
  return g;
}

Grid Grid::uniform(std::vector<int64_t> shape, double lo, double hi, Rng& rng) {
  Grid g(std::move(shape));
  for (double& v : g.data_) v = rng.uniform(lo, hi);
  return g;
}

Grid Grid::row(std::initializer_list<double> values) {
  Grid g({1, static_cast<int64_t>(values.size())});
  int64_t j = 0;
  for (double v : values) g.data_[j++] = v;
  return g;
}

Grid Grid::row(const std::vector<double>& values) {
  Grid g({1, static_cast<int64_t>(values.size())});
  for (size_t j = 0; j < values.size(); ++j) g.data_[j] = values[j];
  return g;
}

Grid Grid::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  int64_t r = static_cast<int64_t>(rows.size());
  int64_t c = static_cast<int64_t>(rows.begin()->size());
  Grid g({r, c});
  int64_t i = 0;
  for (const auto& row : rows) {
    if (static_cast<int64_t>(row.size()) != c)
      throw std::invalid_argument("Grid::matrix: ragged rows");
    int64_t j = 0;
    for (double v : row) g.at(i, j++) = v;
    ++i;
  }
  return g;
}

int64_t Grid::rows() const {
  if (shape_.size() != 2) throw std::invalid_argument("Grid::rows: rank-2 only");
  return shape_[0];
}

int64_t Grid::cols() const {
  if (shape_.size() != 2) throw std::invalid_argument("Grid::cols: rank-2 only");
  return shape_[1];
}

bool Grid::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void Grid::fill(double value) {
  for (double& v : data_) v = value;
}

void Grid::add_scaled(const Grid& g, double s) {
  if (!same_shape(g)) throw_shape_error("Grid::add_scaled", *this, g);
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += s * g.data_[i];
}

void Grid::add(const Grid& g) {
  if (!same_shape(g)) throw_shape_error("Grid::add", *this, g);
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += g.data_[i];
}

void Grid::scale_inplace(double s) {
  for (double& v : data_) v *= s;
}

std::string shape_str(const Grid& g) {
  std::ostringstream os;
  os << "[";
  const auto& s = g.shape();
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) os << " x ";
    os << s[i];
  }
  os << "]";
  return os.str();
}

bool grids_equal(const Grid& a, const Grid& b) {
  if (!a.same_shape(b)) return false;
  const auto& x = a.flat();
  const auto& y = b.flat();
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) return false;
  return true;
}

double max_abs_diff(const Grid& a, const Grid& b) {
  if (!a.same_shape(b)) throw_shape_error("max_abs_diff", a, b);
  double m = 0.0;
  const auto& x = a.flat();
  const auto& y = b.flat();
  for (size_t i = 0; i < x.size(); ++i) m = std::max(m, std::fabs(x[i] - y[i]));
  return m;
}

Grid matmul(const Grid& a, const Grid& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows())
    throw_shape_error("matmul", a, b);
  int64_t m = a.rows(), k = a.cols(), n = b.cols();
  Grid c({m, n});
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t l = 0; l < k; ++l) {
      double av = pa[i * k + l];
      if (av == 0.0) continue;
      const double* brow = pb + l * n;
      double* crow = pc + i * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

Grid matmul_tn(const Grid& a, const Grid& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.rows() != b.rows())
    throw_shape_error("matmul_tn", a, b);
  int64_t k = a.rows(), m = a.cols(), n = b.cols();
  Grid c({m, n});
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  for (int64_t l = 0; l < k; ++l) {
    const double* arow = pa + l * m;
    const double* brow = pb + l * n;
    for (int64_t i = 0; i < m; ++i) {
      double av = arow[i];
      if (av == 0.0) continue;
      double* crow = pc + i * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

Grid matmul_nt(const Grid& a, const Grid& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.cols())
    throw_shape_error("matmul_nt", a, b);
  int64_t m = a.rows(), k = a.cols(), n = b.rows();
  Grid c({m, n});
  const double* pa = a.data();
  const double* pb = b.data();
  for (int64_t i = 0; i < m; ++i) {
    const double* arow = pa + i * k;
    for (int64_t j = 0; j < n; ++j) {
      const double* brow = pb + j * k;
      double s = 0.0;
      for (int64_t l = 0; l < k; ++l) s += arow[l] * brow[l];
      c.at(i, j) = s;
    }
  }
  return c;
}

Grid transpose(const Grid& a) {
  if (a.rank() != 2) throw_shape_error("transpose", a);
  int64_t m = a.rows(), n = a.cols();
  Grid c({n, m});
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < n; ++j) c.at(j, i) = a.at(i, j);
  return c;
}

Grid add(const Grid& a, const Grid& b) {
  if (!a.same_shape(b)) throw_shape_error("add", a, b);
  Grid c = a;
  c.add(b);
  return c;
}

Grid sub(const Grid& a, const Grid& b) {
  if (!a.same_shape(b)) throw_shape_error("sub", a, b);
  Grid c = a;
  c.add_scaled(b, -1.0);
  return c;
}

Grid mul(const Grid& a, const Grid& b) {
  if (!a.same_shape(b)) throw_shape_error("mul", a, b);
  Grid c = a;
  for (int64_t i = 0; i < c.numel(); ++i) c.flat()[i] *= b.flat()[i];
  return c;
}

Grid scale(const Grid& a, double s) {
  Grid c = a;
  c.scale_inplace(s);
  return c;
}

Grid colsum(const Grid& a) {
  if (a.rank() != 2) throw_shape_error("colsum", a);
  Grid c({1, a.cols()});
  for (int64_t i = 0; i < a.rows(); ++i)
    for (int64_t j = 0; j < a.cols(); ++j) c.at(0, j) += a.at(i, j);
  return c;
}

Grid pooled_mean_std(const Grid& x) {
  if (x.rank() != 2) throw_shape_error("pooled_mean_std", x);
  int64_t c = x.rows(), t = x.cols();
  Grid y({1, 2 * c});
  for (int64_t i = 0; i < c; ++i) {
    bool constant = true;
    for (int64_t j = 1; j < t; ++j)
      if (x.at(i, j) != x.at(i, 0)) {
        constant = false;
        break;
      }
    if (constant) {
      y.at(0, i) = x.at(i, 0);
      y.at(0, c + i) = 0.0;
      continue;
    }
    double mean = 0.0;
    for (int64_t j = 0; j < t; ++j) mean += x.at(i, j);
    mean /= static_cast<double>(t);
    double var = 0.0;
    for (int64_t j = 0; j < t; ++j) {
      double d = x.at(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<double>(t);
    y.at(0, i) = mean;
    y.at(0, c + i) = std::sqrt(var);
  }
  return y;
}

void throw_shape_error(const std::string& op, const Grid& a, const Grid& b) {
  throw std::invalid_argument(op + ": incompatible shapes " + shape_str(a) +
                              " and " + shape_str(b));
}

void throw_shape_error(const std::string& op, const Grid& a) {
  throw std::invalid_argument(op + ": unsupported shape " + shape_str(a));
}

}  // namespace dubkit
