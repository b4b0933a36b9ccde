#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "poisson/spec.hpp"
#include "poisson/structure_field.hpp"

namespace poisson {

/// Left-hand side of the Jacobi PDE for the one-based triple (i, j, k):
///   sum_l J_il d_l J_jk + J_jl d_l J_ki + J_kl d_l J_ij.
double jacobi_residual(const StructureField& field, const Vector& x, int i, int j, int k);

/// Residuals for all triples i < j < k at x, in lexicographic order.
std::vector<double> jacobi_residuals(const StructureField& field, const Vector& x);

struct JacobiReport {
  double max_abs_residual = 0.0;
  /// max over samples of |residual| / (1 + max|J| * max|dJ|)
  double max_normalized_residual = 0.0;
  std::array<int, 3> worst_triple{1, 2, 3};  // one-based
  Vector worst_point;
  int samples = 0;
  double tolerance = 0.0;
  bool pass = true;
};

/// Residuals over every index triple at `num_points` Halton points of the
/// field's sample region. Deterministic for a fixed seed.
JacobiReport jacobi_sweep(const StructureField& field, int num_points, std::uint64_t seed,
                          double tolerance);

/// max over Casimirs p > r of ||J(x) B_p^T||_inf.
double kernel_check(const MultiseparableSpec& spec, const Vector& x);

struct KernelReport {
  double max_abs = 0.0;
  /// max over samples of kernel_check / max|J(x)| (0 when J vanishes)
  double max_relative = 0.0;
  Vector worst_point;
  int samples = 0;
  double relative_tolerance = 0.0;
  bool pass = true;
};

KernelReport kernel_sweep(const MultiseparableSpec& spec, int num_points, std::uint64_t seed,
                          double relative_tolerance = 1e-12);

inline constexpr double kDefaultRankTolerance = 1e-9;

/// Number of singular values above rel_tolerance * sigma_max (0 for J = 0).
int rank_at(const StructureField& field, const Vector& x,
            double rel_tolerance = kDefaultRankTolerance);
int numerical_rank(const Matrix& M, double rel_tolerance = kDefaultRankTolerance);

struct RankReport {
  int min_rank = 0;
  int max_rank = 0;
  int expected = -1;  // -1 when only constancy is required
  Vector first_mismatch;  // empty when every sample agrees
  int samples = 0;
  bool pass = true;
};

RankReport rank_sweep(const StructureField& field, int num_points, std::uint64_t seed,
                      int expected_rank = -1, double rel_tolerance = kDefaultRankTolerance);

}  // namespace poisson
