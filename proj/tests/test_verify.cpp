#include <cmath>

#include <doctest.h>

#include "poisson/catalog.hpp"
#include "poisson/verify.hpp"
#include "support/random_spec.hpp"

using namespace poisson;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// J12 = x2, J23 = x1, J13 = 0: the only surviving Jacobi term for (1,2,3) is
// J32 d2 J12 = -x1.
StructureField counterexample() {
  auto eval = [](const Vector& x) {
    Matrix J = Matrix::Zero(3, 3);
    J(0, 1) = x[1];
    J(1, 0) = -x[1];
    J(1, 2) = x[0];
    J(2, 1) = -x[0];
    return J;
  };
  return StructureField::generic(3, eval, BoxDomain(Vector::Constant(3, 0.5), Vector::Constant(3, 3.0)));
}

}  // namespace

TEST_CASE("constant fields satisfy the Jacobi identity trivially") {
  Matrix C(4, 4);
  C << 0, 1, 2, 3, -1, 0, 4, 5, -2, -4, 0, 6, -3, -5, -6, 0;
  const StructureField f(
      4, [C](const Vector&) { return C; }, [](const Vector&) { return Tensor3(4); }, BoxDomain::unit_cube(4));
  for (double r : jacobi_residuals(f, Vector::Constant(4, 0.5))) CHECK(r == 0.0);
}

TEST_CASE("counterexample residual equals -x1") {
  const StructureField f = counterexample();
  CHECK(jacobi_residual(f, vec({2, 1, 1}), 1, 2, 3) == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(jacobi_residual(f, vec({1.5, 2, 0.7}), 1, 2, 3) == doctest::Approx(-1.5).epsilon(1e-9));
  // the residual is totally antisymmetric in the triple
  CHECK(jacobi_residual(f, vec({2, 1, 1}), 2, 1, 3) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(jacobi_residual(f, vec({2, 1, 1}), 2, 3, 1) == doctest::Approx(-2.0).epsilon(1e-9));

  const JacobiReport report = jacobi_sweep(f, 50, 0, 1e-7);
  CHECK_FALSE(report.pass);
  CHECK(report.worst_triple == std::array<int, 3>{1, 2, 3});
  CHECK(report.max_abs_residual == doctest::Approx(report.worst_point[0]).epsilon(1e-8));
}

TEST_CASE("multiseparable specs pass the Jacobi sweep") {
  const StructureField kmk = StructureField::from_spec(kermack_mckendrick(1.0, 1.0, 1.0));
  for (const Vector& x : HaltonSampler(3, 4).sample(kmk.domain(), 20))
    for (double r : jacobi_residuals(kmk, x)) CHECK(std::abs(r) <= 1e-9);
  const JacobiReport report = jacobi_sweep(kmk, 50, 1, 1e-7);
  CHECK(report.pass);
  CHECK(report.samples == 50);

  const StructureField zero = StructureField::from_spec(constant_symplectic(0, 3));
  const JacobiReport z = jacobi_sweep(zero, 20, 0, 1e-7);
  CHECK(z.pass);
  CHECK(z.max_abs_residual == 0.0);
}

TEST_CASE("jacobi sweep results do not depend on the thread count") {
  testing::RandomSpecFactory factory(5);
  const MultiseparableSpec spec = factory.make(6, 4);
  const StructureField field = StructureField::from_spec(spec);
  const JacobiReport a = jacobi_sweep(field, 30, 9, 1e-7);
  const JacobiReport b = jacobi_sweep(field, 30, 9, 1e-7);
  CHECK(a.max_abs_residual == b.max_abs_residual);
  CHECK(a.worst_point == b.worst_point);
  CHECK(a.worst_triple == b.worst_triple);
}

TEST_CASE("casimir kernel vanishes") {
  const MultiseparableSpec kmk = kermack_mckendrick(1.0, 1.0, 1.0);
  CHECK(kernel_check(kmk, vec({2, 3, 1})) <= 1e-14);
  CHECK(kernel_check(constant_symplectic(2, 4), Vector::Zero(4)) == 0.0);
  const MultiseparableSpec t3 = toda(3);
  for (const Vector& x : HaltonSampler(5, 2).sample(t3.domain(), 20)) CHECK(kernel_check(t3, x) <= 1e-14);
  CHECK(kernel_sweep(t3, 20, 0).pass);
}

TEST_CASE("numerical rank") {
  const StructureField kmk = StructureField::from_spec(kermack_mckendrick(1.0, 1.0, 1.0));
  CHECK(rank_at(kmk, vec({0.3, 2, 5})) == 2);
  CHECK(rank_at(StructureField::from_spec(constant_symplectic(0, 3)), Vector::Zero(3)) == 0);
  const StructureField t3 = StructureField::from_spec(toda(3));
  CHECK(rank_at(t3, vec({0.7, 1.3, -0.2, 0.5, 1.0})) == 4);
  const RankReport r = rank_sweep(t3, 20, 0, 4);
  CHECK(r.pass);
  CHECK(r.min_rank == 4);
  CHECK(r.max_rank == 4);

  Matrix M = Matrix::Zero(3, 3);
  M(0, 1) = 1.0;
  M(1, 0) = -1.0;
  M(2, 2) = 1e-12;
  CHECK(numerical_rank(M) == 2);
  CHECK(numerical_rank(M, 1e-13) == 3);
  CHECK(numerical_rank(Matrix::Zero(2, 2)) == 0);

  const RankReport wrong = rank_sweep(t3, 5, 0, 2);
  CHECK_FALSE(wrong.pass);
  CHECK(wrong.first_mismatch.size() == 5);
}
