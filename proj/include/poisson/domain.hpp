#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "poisson/types.hpp"

namespace poisson {

/// Axis-aligned open box {x : lower < x < upper}. Bounds may be infinite.
///
/// Unbounded boxes cannot be sampled directly; they carry an optional bounded
/// sample region (a sub-box) that sweeps and chart certification draw from.
class BoxDomain {
 public:
  BoxDomain(Vector lower, Vector upper);
  BoxDomain(Vector lower, Vector upper, BoxDomain sample_region);

  static BoxDomain unit_cube(int n);
  static BoxDomain positive_orthant(int n);

  int dim() const noexcept { return static_cast<int>(lower_.size()); }
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }

  bool bounded() const;
  bool contains(const Vector& x) const;

  /// Interval swept by row . x as x ranges over the box.
  Interval project(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

  bool has_sample_region() const { return bounded() || sample_region_ != nullptr; }
  /// The box itself when bounded, else the user-supplied sub-box.
  /// Throws EmptyDomainSample when neither exists.
  const BoxDomain& sample_region() const;

  /// Maps u in [0,1)^n to a point strictly inside the sample region, inset
  /// from every face by `inset` times the side length.
  Vector map_unit(const Vector& u, double inset = 1e-9) const;

 private:
  Vector lower_;
  Vector upper_;
  std::shared_ptr<const BoxDomain> sample_region_;
};

/// Halton low-discrepancy sequence with a seed-derived Cranley-Patterson
/// shift. Same (dim, seed) always yields the same points.
class HaltonSampler {
 public:
  HaltonSampler(int dim, std::uint64_t seed);

  /// Point number k (zero-based) of the shifted sequence, in [0,1)^dim.
  Vector unit_point(std::uint64_t k) const;

  /// First `count` points mapped into the domain's sample region.
  std::vector<Vector> sample(const BoxDomain& domain, int count) const;

 private:
  int dim_;
  std::vector<double> shift_;
};

}  // namespace poisson
