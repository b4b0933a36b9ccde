#include "poisson/structure_field.hpp"

#include <cmath>

#include "poisson/errors.hpp"

namespace poisson {

StructureField::StructureField(int n, Evaluator evaluator, PartialsProvider partials,
                               BoxDomain domain)
    : n_(n),
      evaluator_(std::move(evaluator)),
      partials_(std::move(partials)),
      domain_(std::move(domain)) {
  if (domain_.dim() != n_) throw Error(ErrorCode::DimensionMismatch, "field domain dimension mismatch");
}

StructureField StructureField::from_spec(const MultiseparableSpec& spec) {
  auto shared = std::make_shared<const MultiseparableSpec>(spec);
  return StructureField(
      spec.dim(), [shared](const Vector& x) { return shared->evaluate_unchecked(x); },
      [shared](const Vector& x) { return shared->partials(x); }, spec.domain());
}

StructureField StructureField::generic(int n, Evaluator evaluator, BoxDomain domain) {
  auto provider = [evaluator](const Vector& x) { return finite_difference_partials(evaluator, x); };
  return StructureField(n, std::move(evaluator), std::move(provider), std::move(domain));
}

StructureField StructureField::with_finite_difference_partials() const {
  return generic(n_, evaluator_, domain_);
}

Matrix StructureField::evaluate(const Vector& x) const {
  if (!domain_.contains(x)) throw Error(ErrorCode::OutOfDomain, "point lies outside the field domain");
  return evaluator_(x);
}

Tensor3 StructureField::partials(const Vector& x) const {
  if (!domain_.contains(x)) throw Error(ErrorCode::OutOfDomain, "point lies outside the field domain");
  return partials_(x);
}

Tensor3 finite_difference_partials(const StructureField::Evaluator& evaluator, const Vector& x) {
  const int n = static_cast<int>(x.size());
  Tensor3 T(n);
  Vector probe = x;
  for (int l = 0; l < n; ++l) {
    const double h = 1e-5 * (1.0 + std::abs(x[l]));
    probe[l] = x[l] + h;
    const Matrix plus = evaluator(probe);
    probe[l] = x[l] - h;
    const Matrix minus = evaluator(probe);
    probe[l] = x[l];
    const double inv = 1.0 / (2.0 * h);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T(i, j, l) = (plus(i, j) - minus(i, j)) * inv;
  }
  return T;
}

}  // namespace poisson
