#pragma once

#include <vector>

#include "poisson/domain.hpp"
#include "poisson/factor.hpp"
#include "poisson/types.hpp"

namespace poisson {

/// Skew 2x2 minors of A = B^-1 for the column pairs that enter the structure
/// matrix: pair p (zero-based) holds Lambda_ij^{2p+1,2p+2} in one-based terms,
/// i.e. a_{i,2p} a_{j,2p+1} - a_{i,2p+1} a_{j,2p} with zero-based columns.
class LambdaTable {
 public:
  LambdaTable() = default;
  LambdaTable(const Matrix& A, int r);

  int pairs() const noexcept { return static_cast<int>(minors_.size()); }
  const Matrix& pair(int p) const { return minors_[p]; }

 private:
  std::vector<Matrix> minors_;
};

/// A multiseparable structure matrix
///
///   J_ij(x) = sum_{p} Lambda_ij^{2p-1,2p} phi_{2p-1}(B_{2p-1} x) phi_{2p}(B_{2p} x)
///
/// on a box domain. Immutable once built; every query is a pure function of
/// (spec, x) and safe to call concurrently.
class MultiseparableSpec {
 public:
  int dim() const noexcept { return n_; }
  int rank() const noexcept { return r_; }
  const Matrix& B() const noexcept { return B_; }
  const Matrix& A() const noexcept { return A_; }
  const std::vector<FactorFunction>& factors() const noexcept { return factors_; }
  const BoxDomain& domain() const noexcept { return domain_; }
  const LambdaTable& lambda_table() const noexcept { return lambda_; }

  /// True when some factor's nonvanishing was checked by sampling only.
  bool heuristic_certification() const noexcept { return heuristic_; }

  /// Omega_i* = {B_i . x : x in Omega}, one-based i in 1..n.
  Interval projected_interval(int i) const;

  /// Lambda_ij^{kl} = a_ik a_jl - a_il a_jk with one-based indices.
  double lambda(int i, int j, int k, int l) const;

  /// J(x); throws OutOfDomain for x outside the box.
  Matrix evaluate(const Vector& x) const;
  /// Same as evaluate() but skips the box test (factor validity still holds).
  Matrix evaluate_unchecked(const Vector& x) const;

  /// T(i, j, l) = d_l J_ij(x) by the chain rule through each factor.
  Tensor3 partials(const Vector& x) const;

 private:
  friend MultiseparableSpec build_spec(int n, int r, Matrix B, std::vector<FactorFunction> factors,
                                       BoxDomain domain);
  MultiseparableSpec(int n, int r, Matrix B, Matrix A, std::vector<FactorFunction> factors,
                     BoxDomain domain, bool heuristic);

  void require_inside(const Vector& x) const;

  int n_;
  int r_;
  Matrix B_;
  Matrix A_;
  std::vector<FactorFunction> factors_;
  BoxDomain domain_;
  LambdaTable lambda_;
  bool heuristic_;
};

/// Validates and assembles a spec: inverts B by partially pivoted LU
/// (requiring max|AB - I| <= 1e-10) and certifies every factor nonvanishing on
/// its projected interval.
///
/// Errors: SingularB, OddRank, RankExceedsDimension, DimensionMismatch,
/// FactorVanishes.
MultiseparableSpec build_spec(int n, int r, Matrix B, std::vector<FactorFunction> factors,
                              BoxDomain domain);

}  // namespace poisson
