// dubkit/grid.h

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

#ifndef DUBKIT_GRID_H_
#define DUBKIT_GRID_H_

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "dubkit/rng.h"

namespace dubkit {

// Dense row-major tensor of doubles. Rank 1..3; most of the code base works
// with rank-2 grids (rows x cols).
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<int64_t> shape);

  static Grid zeros(std::vector<int64_t> shape) { return Grid(std::move(shape)); }
  static Grid full(std::vector<int64_t> shape, double value);
  static Grid randn(std::vector<int64_t> shape, Rng& rng);
  static Grid uniform(std::vector<int64_t> shape, double lo, double hi, Rng& rng);
  // Row vector 1 x n from a list of values.
  static Grid row(std::initializer_list<double> values);
  static Grid row(const std::vector<double>& values);
  // Rank-2 grid from nested lists.
  static Grid matrix(std::initializer_list<std::initializer_list<double>> rows);

  const std::vector<int64_t>& shape() const { return shape_; }
  int64_t rank() const { return static_cast<int64_t>(shape_.size()); }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  int64_t rows() const;
  int64_t cols() const;

  double& at(int64_t i, int64_t j) { return data_[i * shape_[1] + j]; }
  double at(int64_t i, int64_t j) const { return data_[i * shape_[1] + j]; }
  double& at(int64_t i, int64_t j, int64_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double at(int64_t i, int64_t j, int64_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& flat() { return data_; }
  const std::vector<double>& flat() const { return data_; }

  bool same_shape(const Grid& other) const { return shape_ == other.shape_; }
  bool all_finite() const;

  void fill(double value);
  // this += s * g (shapes must match).
  void add_scaled(const Grid& g, double s);
  void add(const Grid& g);
  void scale_inplace(double s);

 private:
  std::vector<int64_t> shape_;
  std::vector<double> data_;
};

std::string shape_str(const Grid& g);

// Exact elementwise equality (bitwise for finite values).
bool grids_equal(const Grid& a, const Grid& b);
double max_abs_diff(const Grid& a, const Grid& b);

// C = A * B for rank-2 grids.
Grid matmul(const Grid& a, const Grid& b);
// C = A^T * B.
Grid matmul_tn(const Grid& a, const Grid& b);
// C = A * B^T.
Grid matmul_nt(const Grid& a, const Grid& b);
Grid transpose(const Grid& a);

Grid add(const Grid& a, const Grid& b);
Grid sub(const Grid& a, const Grid& b);
Grid mul(const Grid& a, const Grid& b);
Grid scale(const Grid& a, double s);

// Sum over rows: 1 x C from R x C.
Grid colsum(const Grid& a);

// Per-channel mean and population std of a C x T grid, packed [means stds]
// into 1 x 2C. A channel whose values are all identical reports std exactly 0.
Grid pooled_mean_std(const Grid& x);

[[noreturn]] void throw_shape_error(const std::string& op, const Grid& a,
                                    const Grid& b);
[[noreturn]] void throw_shape_error(const std::string& op, const Grid& a);

}  // namespace dubkit

#endif  // DUBKIT_GRID_H_
