#pragma once

#include <functional>

#include "poisson/domain.hpp"
#include "poisson/spec.hpp"
#include "poisson/types.hpp"

namespace poisson {

/// A candidate structure matrix field x -> J(x) with a provider for its
/// partial derivatives. Wraps multiseparable specs (analytic partials) as well
/// as arbitrary user fields, which may violate the Jacobi identity.
class StructureField {
 public:
  using Evaluator = std::function<Matrix(const Vector&)>;
  using PartialsProvider = std::function<Tensor3(const Vector&)>;

  StructureField(int n, Evaluator evaluator, PartialsProvider partials, BoxDomain domain);

  static StructureField from_spec(const MultiseparableSpec& spec);
  /// Partials by central differences of `evaluator`.
  static StructureField generic(int n, Evaluator evaluator, BoxDomain domain);

  /// Copy whose partials come from central differences of the evaluator,
  /// used as an independent oracle for analytic partials.
  StructureField with_finite_difference_partials() const;

  int dim() const noexcept { return n_; }
  const BoxDomain& domain() const noexcept { return domain_; }

  /// J(x); throws OutOfDomain outside the box.
  Matrix evaluate(const Vector& x) const;
  /// d_l J_ij(x); throws OutOfDomain outside the box.
  Tensor3 partials(const Vector& x) const;

 private:
  int n_;
  Evaluator evaluator_;
  PartialsProvider partials_;
  BoxDomain domain_;
};

/// Central differences with per-coordinate step h_l = 1e-5 * (1 + |x_l|).
Tensor3 finite_difference_partials(const StructureField::Evaluator& evaluator, const Vector& x);

}  // namespace poisson
