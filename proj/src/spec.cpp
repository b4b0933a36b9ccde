#include "poisson/spec.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "poisson/errors.hpp"

namespace poisson {

namespace {

constexpr double kInversionTolerance = 1e-10;

}  // namespace

LambdaTable::LambdaTable(const Matrix& A, int r) {
  const auto n = A.rows();
  minors_.reserve(r / 2);
  for (int p = 0; p < r / 2; ++p) {
    const int k = 2 * p;
    const int l = 2 * p + 1;
    Matrix L = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = A(i, k) * A(j, l) - A(i, l) * A(j, k);
        L(i, j) = v;
        L(j, i) = -v;
      }
    }
    minors_.push_back(std::move(L));
  }
}

MultiseparableSpec::MultiseparableSpec(int n, int r, Matrix B, Matrix A,
                                       std::vector<FactorFunction> factors, BoxDomain domain,
                                       bool heuristic)
    : n_(n),
      r_(r),
      B_(std::move(B)),
      A_(std::move(A)),
      factors_(std::move(factors)),
      domain_(std::move(domain)),
      lambda_(A_, r),
      heuristic_(heuristic) {}

MultiseparableSpec build_spec(int n, int r, Matrix B, std::vector<FactorFunction> factors,
                              BoxDomain domain) {
  if (n < 2) throw Error(ErrorCode::DimensionMismatch, "dimension must be at least 2");
  if (B.rows() != n || B.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "B must be " + std::to_string(n) + "x" +
                                                  std::to_string(n));
  if (r % 2 != 0) throw Error(ErrorCode::OddRank, "rank must be even, got " + std::to_string(r));
  if (r < 0 || r > n)
    throw Error(ErrorCode::RankExceedsDimension,
                "rank " + std::to_string(r) + " outside 0.." + std::to_string(n));
  if (static_cast<int>(factors.size()) != r)
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(r) + " factors, got " +
                                                  std::to_string(factors.size()));
  if (domain.dim() != n) throw Error(ErrorCode::DimensionMismatch, "domain dimension mismatch");
  if (!B.allFinite()) throw Error(ErrorCode::SingularB, "B has non-finite entries");

  Eigen::PartialPivLU<Matrix> lu(B);
  Matrix A = lu.inverse();
  const double defect = (A * B - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!A.allFinite() || !(defect <= kInversionTolerance)) {
    std::ostringstream os;
    os << "B is not invertible within tolerance (max|AB - I| = " << defect << ")";
    throw Error(ErrorCode::SingularB, os.str());
  }

  bool heuristic = false;
  for (int i = 0; i < r; ++i) {
    const Interval ys = domain.project(B.row(i));
    const NonvanishingCheck check = factors[i].check_nonvanishing(ys);
    heuristic = heuristic || check.heuristic;
    if (!check.ok) {
      std::ostringstream os;
      os.precision(17);
      os << "factor " << (i + 1) << " (" << factors[i].kind_name()
         << ") vanishes or is undefined on its projected interval (" << ys.lower << ", "
         << ys.upper << "), witness y = " << check.witness.value_or(NAN);
      throw FactorVanishes(i + 1, check.witness.value_or(NAN), os.str());
    }
  }

  return MultiseparableSpec(n, r, std::move(B), std::move(A), std::move(factors),
                            std::move(domain), heuristic);
}

Interval MultiseparableSpec::projected_interval(int i) const {
  if (i < 1 || i > n_) throw Error(ErrorCode::IndexOutOfRange, "row index out of range");
  return domain_.project(B_.row(i - 1));
}

double MultiseparableSpec::lambda(int i, int j, int k, int l) const {
  for (int idx : {i, j, k, l}) {
    if (idx < 1 || idx > n_)
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(idx) + " outside 1.." + std::to_string(n_));
  }
  --i, --j, --k, --l;
  return A_(i, k) * A_(j, l) - A_(i, l) * A_(j, k);
}

void MultiseparableSpec::require_inside(const Vector& x) const {
  if (x.size() != n_) throw Error(ErrorCode::DimensionMismatch, "state has wrong dimension");
  if (!domain_.contains(x)) throw Error(ErrorCode::OutOfDomain, "point lies outside the domain");
}

Matrix MultiseparableSpec::evaluate(const Vector& x) const {
  require_inside(x);
  return evaluate_unchecked(x);
}

Matrix MultiseparableSpec::evaluate_unchecked(const Vector& x) const {
  Matrix J = Matrix::Zero(n_, n_);
  if (r_ == 0) return J;
  const Vector y = B_.topRows(r_) * x;
  for (int p = 0; p < lambda_.pairs(); ++p) {
    const double weight = factors_[2 * p].value(y[2 * p]) * factors_[2 * p + 1].value(y[2 * p + 1]);
    const Matrix& L = lambda_.pair(p);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) J(i, j) += L(i, j) * weight;
  }
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) J(j, i) = -J(i, j);
  return J;
}

Tensor3 MultiseparableSpec::partials(const Vector& x) const {
  require_inside(x);
  Tensor3 T(n_);
  if (r_ == 0) return T;
  const Vector y = B_.topRows(r_) * x;
  for (int p = 0; p < lambda_.pairs(); ++p) {
    const int a = 2 * p;
    const int b = 2 * p + 1;
    const double fa = factors_[a].value(y[a]);
    const double fb = factors_[b].value(y[b]);
    const double da = factors_[a].derivative(y[a]);
    const double db = factors_[b].derivative(y[b]);
    // gradient of phi_a(B_a x) phi_b(B_b x)
    const Eigen::RowVectorXd grad = da * fb * B_.row(a) + fa * db * B_.row(b);
    const Matrix& L = lambda_.pair(p);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        const double lij = L(i, j);
        if (lij == 0.0) continue;
        for (int l = 0; l < n_; ++l) T(i, j, l) += lij * grad[l];
      }
  }
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      for (int l = 0; l < n_; ++l) T(j, i, l) = -T(i, j, l);
  return T;
}

}  // namespace poisson
