#pragma once

#include <map>
#include <string>
#include <vector>

#include "poisson/spec.hpp"

namespace poisson {

/// Kermack-McKendrick bracket J = R x1 x2 [[0,1,-1],[-1,0,1],[1,-1,0]] on the
/// positive octant, with phi_i(y) = kappa_i y and kappa1 * kappa2 = R.
/// Throws ParameterMismatch when |kappa1 kappa2 - R| > 1e-12, InvalidArgument
/// when R <= 0.
MultiseparableSpec kermack_mckendrick(double R, double kappa1, double kappa2);

/// Toda lattice in Flaschka variables x = (alpha_1..alpha_{N-1},
/// beta_1..beta_N), n = 2N - 1, on the domain alpha_i > 0. Throws InvalidN
/// for N < 2.
MultiseparableSpec toda(int N);

/// B = I, all factors 1, rank 2s: J is the canonical block matrix itself.
/// Throws InvalidRank unless 0 <= 2s <= n.
MultiseparableSpec constant_symplectic(int s, int n);

/// Symbolic value of one structure-matrix entry.
struct PatternEntry {
  enum class Kind { Zero, Unit, Alpha, RX1X2 } kind = Kind::Zero;
  double sign = 1.0;
  int alpha = 0;  // one-based alpha index for Kind::Alpha

  double evaluate(const Vector& x, double R) const;
};

/// A catalog system together with the structure the worked example
/// predicts for it.
struct CatalogEntry {
  std::string name;
  std::map<std::string, double> params;
  MultiseparableSpec spec;
  std::vector<std::vector<PatternEntry>> pattern;
  int expected_rank = 0;
  std::vector<Vector> expected_casimirs;

  /// The predicted J(x), assembled from the symbolic pattern.
  Matrix expected_structure(const Vector& x) const;
};

/// Sample boxes used for sweeps on the unbounded catalog domains:
/// x in [0.25, 2]^3 for kmk; alpha in [0.25, 2], beta in [-1, 1] for toda;
/// [-1, 1]^n for symplectic.

/// Names accepted by make_catalog_entry.
std::vector<std::string> catalog_names();

/// Builds "kmk" (R, kappa1, kappa2), "toda" (N) or "symplectic" (s, n).
/// Missing parameters take defaults: R = kappa1 = kappa2 = 1, N = 3,
/// s = 1, n = 3. Unknown names or parameters throw InvalidArgument.
CatalogEntry make_catalog_entry(const std::string& name,
                                const std::map<std::string, double>& params = {});

}  // namespace poisson
