#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sentipipe::nn {

// Dense row-major matrix of doubles. Scalars are 1x1, row vectors 1xn.
struct Tensor {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  static Tensor row(std::vector<double> values) {
    Tensor t;
    t.rows = 1;
    t.cols = values.size();
    t.data = std::move(values);
    return t;
  }

  size_t size() const { return rows * cols; }
  double& at(size_t r, size_t c) { return data[r * cols + c]; }
  double at(size_t r, size_t c) const { return data[r * cols + c]; }
  bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
  std::string shape_str() const;
  void fill(double v) { data.assign(data.size(), v); }
  bool all_finite() const;
};

// C = A * B; shapes (m x k)(k x n). Throws RunError on mismatch.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

}  // namespace sentipipe::nn
