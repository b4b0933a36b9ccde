#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace poisson {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense rank-3 tensor T(i, j, l) = d_l J_ij, zero-based storage.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int dim() const noexcept { return n_; }

  double& operator()(int i, int j, int l) { return data_[index(i, j, l)]; }
  double operator()(int i, int j, int l) const { return data_[index(i, j, l)]; }

  double max_abs() const;

 private:
  std::size_t index(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + l;
  }

  int n_ = 0;
  std::vector<double> data_;
};

/// Open real interval (lower, upper); either end may be infinite.
struct Interval {
  double lower;
  double upper;

  bool contains(double y) const { return y > lower && y < upper; }
  bool bounded() const;
  double width() const { return upper - lower; }
};

Interval whole_line();

}  // namespace poisson
