#include "poisson/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"
#include "poisson/errors.hpp"

namespace poisson {

namespace {

// Zero-based triple.
double residual(const Matrix& J, const Tensor3& T, int i, int j, int k) {
  const int n = static_cast<int>(J.rows());
  double s = 0.0;
  for (int l = 0; l < n; ++l) {
    s += J(i, l) * T(j, k, l) + J(j, l) * T(k, i, l) + J(k, l) * T(i, j, l);
  }
  return s;
}

void check_index(int idx, int n) {
  if (idx < 1 || idx > n)
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(idx) + " outside 1.." + std::to_string(n));
}

}  // namespace

double jacobi_residual(const StructureField& field, const Vector& x, int i, int j, int k) {
  const int n = field.dim();
  check_index(i, n);
  check_index(j, n);
  check_index(k, n);
  return residual(field.evaluate(x), field.partials(x), i - 1, j - 1, k - 1);
}

std::vector<double> jacobi_residuals(const StructureField& field, const Vector& x) {
  const Matrix J = field.evaluate(x);
  const Tensor3 T = field.partials(x);
  const int n = field.dim();
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) out.push_back(residual(J, T, i, j, k));
  return out;
}

JacobiReport jacobi_sweep(const StructureField& field, int num_points, std::uint64_t seed,
                          double tolerance) {
  if (num_points < 1) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one point");
  const auto points = HaltonSampler(field.dim(), seed).sample(field.domain(), num_points);

  struct PointResult {
    double max_abs = 0.0;
    double normalized = 0.0;
    std::array<int, 3> triple{1, 2, 3};
  };
  std::vector<PointResult> results(points.size());
  const int n = field.dim();

  detail::parallel_for(num_points, [&](int s) {
    const Matrix J = field.evaluate(points[s]);
    const Tensor3 T = field.partials(points[s]);
    PointResult& out = results[s];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          const double v = std::abs(residual(J, T, i, j, k));
          if (v > out.max_abs) {
            out.max_abs = v;
            out.triple = {i + 1, j + 1, k + 1};
          }
        }
    const double scale = 1.0 + J.cwiseAbs().maxCoeff() * T.max_abs();
    out.normalized = out.max_abs / scale;
  });

  JacobiReport report;
  report.samples = num_points;
  report.tolerance = tolerance;
  report.worst_point = points.front();
  for (int s = 0; s < num_points; ++s) {
    if (results[s].max_abs > report.max_abs_residual) {
      report.max_abs_residual = results[s].max_abs;
      report.worst_triple = results[s].triple;
      report.worst_point = points[s];
    }
    report.max_normalized_residual = std::max(report.max_normalized_residual, results[s].normalized);
  }
  report.pass = report.max_abs_residual <= tolerance;
  return report;
}

double kernel_check(const MultiseparableSpec& spec, const Vector& x) {
  const int n = spec.dim();
  const int r = spec.rank();
  if (r == n) {
    if (!spec.domain().contains(x)) throw Error(ErrorCode::OutOfDomain, "point lies outside the domain");
    return 0.0;
  }
  const Matrix J = spec.evaluate(x);
  const Matrix products = J * spec.B().bottomRows(n - r).transpose();
  return products.cwiseAbs().maxCoeff();
}

KernelReport kernel_sweep(const MultiseparableSpec& spec, int num_points, std::uint64_t seed,
                          double relative_tolerance) {
  if (num_points < 1) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one point");
  const auto points = HaltonSampler(spec.dim(), seed).sample(spec.domain(), num_points);
  std::vector<double> absolute(points.size());
  std::vector<double> relative(points.size());
  detail::parallel_for(num_points, [&](int s) {
    absolute[s] = kernel_check(spec, points[s]);
    const double scale = spec.evaluate(points[s]).cwiseAbs().maxCoeff();
    relative[s] = scale > 0.0 ? absolute[s] / scale : absolute[s];
  });

  KernelReport report;
  report.samples = num_points;
  report.relative_tolerance = relative_tolerance;
  report.worst_point = points.front();
  for (int s = 0; s < num_points; ++s) {
    report.max_abs = std::max(report.max_abs, absolute[s]);
    if (relative[s] > report.max_relative) {
      report.max_relative = relative[s];
      report.worst_point = points[s];
    }
  }
  report.pass = report.max_relative <= relative_tolerance;
  return report;
}

int numerical_rank(const Matrix& M, double rel_tolerance) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(M);
  const Vector& sigma = svd.singularValues();
  const double top = sigma.size() ? sigma[0] : 0.0;
  if (!(top > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > rel_tolerance * top) ++rank;
  return rank;
}

int rank_at(const StructureField& field, const Vector& x, double rel_tolerance) {
  return numerical_rank(field.evaluate(x), rel_tolerance);
}

RankReport rank_sweep(const StructureField& field, int num_points, std::uint64_t seed,
                      int expected_rank, double rel_tolerance) {
  if (num_points < 1) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one point");
  const auto points = HaltonSampler(field.dim(), seed).sample(field.domain(), num_points);
  std::vector<int> ranks(points.size());
  detail::parallel_for(num_points, [&](int s) { ranks[s] = rank_at(field, points[s], rel_tolerance); });

  RankReport report;
  report.samples = num_points;
  report.expected = expected_rank;
  report.min_rank = *std::min_element(ranks.begin(), ranks.end());
  report.max_rank = *std::max_element(ranks.begin(), ranks.end());
  const int reference = expected_rank >= 0 ? expected_rank : ranks.front();
  for (int s = 0; s < num_points; ++s) {
    if (ranks[s] != reference) {
      report.first_mismatch = points[s];
      report.pass = false;
      break;
    }
  }
  return report;
}

}  // namespace poisson
