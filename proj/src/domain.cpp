#include "poisson/domain.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "poisson/errors.hpp"

namespace poisson {

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Interval::bounded() const { return std::isfinite(lower) && std::isfinite(upper); }

Interval whole_line() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf};
}

BoxDomain::BoxDomain(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0)
    throw Error(ErrorCode::DimensionMismatch, "box bounds must be nonempty and equally sized");
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (std::isnan(lower_[i]) || std::isnan(upper_[i]) || !(lower_[i] < upper_[i]))
      throw Error(ErrorCode::InvalidArgument, "box must have lower < upper in every coordinate");
  }
}

BoxDomain::BoxDomain(Vector lower, Vector upper, BoxDomain sample_region)
    : BoxDomain(std::move(lower), std::move(upper)) {
  if (!sample_region.bounded() || sample_region.dim() != dim())
    throw Error(ErrorCode::InvalidArgument, "sample region must be a bounded box of equal dimension");
  for (int i = 0; i < dim(); ++i) {
    if (sample_region.lower_[i] < lower_[i] || sample_region.upper_[i] > upper_[i])
      throw Error(ErrorCode::InvalidArgument, "sample region must lie inside the domain");
  }
  sample_region_ = std::make_shared<const BoxDomain>(std::move(sample_region));
}

BoxDomain BoxDomain::unit_cube(int n) { return {Vector::Zero(n), Vector::Ones(n)}; }

BoxDomain BoxDomain::positive_orthant(int n) {
  return {Vector::Zero(n), Vector::Constant(n, std::numeric_limits<double>::infinity())};
}

bool BoxDomain::bounded() const { return lower_.allFinite() && upper_.allFinite(); }

bool BoxDomain::contains(const Vector& x) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !(x[i] > lower_[i] && x[i] < upper_[i])) return false;
  }
  return true;
}

Interval BoxDomain::project(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  double lo = 0.0;
  double hi = 0.0;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    const double b = row[j];
    if (b == 0.0) continue;
    const double a = b * lower_[j];
    const double c = b * upper_[j];
    lo += std::min(a, c);
    hi += std::max(a, c);
  }
  return {lo, hi};
}

const BoxDomain& BoxDomain::sample_region() const {
  if (bounded()) return *this;
  if (sample_region_) return *sample_region_;
  throw Error(ErrorCode::EmptyDomainSample,
              "unbounded domain has no sample region; supply a bounded sample box");
}

Vector BoxDomain::map_unit(const Vector& u, double inset) const {
  const BoxDomain& box = sample_region();
  Vector x(dim());
  for (int i = 0; i < dim(); ++i) {
    const double width = box.upper_[i] - box.lower_[i];
    const double t = inset + (1.0 - 2.0 * inset) * u[i];
    x[i] = box.lower_[i] + width * t;
  }
  return x;
}

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                           43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

double radical_inverse(std::uint64_t k, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (k > 0) {
    result += f * static_cast<double>(k % base);
    k /= base;
    f /= base;
  }
  return result;
}

}  // namespace

HaltonSampler::HaltonSampler(int dim, std::uint64_t seed) : dim_(dim), shift_(dim, 0.0) {
  if (dim <= 0 || dim > static_cast<int>(std::size(kPrimes)))
    throw Error(ErrorCode::InvalidArgument, "Halton sampler supports 1..25 dimensions");
  // mt19937_64's output sequence is fixed by the standard, so the shift is
  // reproducible across platforms.
  std::mt19937_64 rng(seed);
  for (auto& s : shift_) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vector HaltonSampler::unit_point(std::uint64_t k) const {
  Vector u(dim_);
  for (int d = 0; d < dim_; ++d) {
    double v = radical_inverse(k + 1, kPrimes[d]) + shift_[d];
    if (v >= 1.0) v -= 1.0;
    u[d] = v;
  }
  return u;
}

std::vector<Vector> HaltonSampler::sample(const BoxDomain& domain, int count) const {
  if (domain.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "sampler dimension mismatch");
  std::vector<Vector> points;
  points.reserve(count);
  for (int k = 0; k < count; ++k) points.push_back(domain.map_unit(unit_point(k)));
  return points;
}

}  // namespace poisson
