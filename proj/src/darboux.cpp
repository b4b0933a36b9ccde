#include "poisson/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "parallel.hpp"

namespace poisson {

namespace {

constexpr int kChartSamples = 100;

void require_anchor_count(const MultiseparableSpec& spec, const std::vector<double>& anchors) {
  if (static_cast<int>(anchors.size()) != spec.rank())
    throw Error(ErrorCode::DimensionMismatch, "expected one anchor per factor");
}

double round_trip_error(const Vector& x, const Vector& back) {
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  return (back - x).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

std::vector<Vector> casimirs(const MultiseparableSpec& spec) {
  std::vector<Vector> out;
  for (int p = spec.rank(); p < spec.dim(); ++p) out.emplace_back(spec.B().row(p).transpose());
  return out;
}

Vector linear_chart(const MultiseparableSpec& spec, const Vector& x) { return spec.B() * x; }

Vector inverse_linear_chart(const MultiseparableSpec& spec, const Vector& y) {
  return spec.A() * y;
}

std::vector<double> default_anchors(const MultiseparableSpec& spec) {
  std::vector<double> anchors;
  for (int i = 0; i < spec.rank(); ++i) {
    const Interval ys = spec.projected_interval(i + 1);
    const FactorFunction& f = spec.factors()[i];
    double anchor;
    if (ys.bounded()) {
      anchor = 0.5 * (ys.lower + ys.upper);
    } else if (ys.contains(0.0) && f.validity().contains(0.0) && f.value(0.0) != 0.0) {
      anchor = 0.0;
    } else if (std::isfinite(ys.lower)) {
      anchor = ys.lower + 1.0;
    } else {
      anchor = ys.upper - 1.0;
    }
    anchors.push_back(anchor);
  }
  return anchors;
}

Vector quadrature_chart(const MultiseparableSpec& spec, const std::vector<double>& anchors,
                        const Vector& y) {
  require_anchor_count(spec, anchors);
  Vector z = y;
  for (int i = 0; i < spec.rank(); ++i)
    z[i] = spec.factors()[i].reciprocal_antiderivative(y[i], anchors[i]);
  return z;
}

Vector inverse_quadrature_chart(const MultiseparableSpec& spec, const std::vector<double>& anchors,
                                const Vector& z) {
  require_anchor_count(spec, anchors);
  Vector y = z;
  for (int i = 0; i < spec.rank(); ++i)
    y[i] = spec.factors()[i].invert_antiderivative(z[i], anchors[i]);
  return y;
}

Matrix pushforward(const Matrix& J, const Matrix& jacobian) {
  Matrix out = jacobian * J * jacobian.transpose();
  // the congruence of a skew matrix is skew; restore it bitwise
  const auto n = out.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 0.5 * (out(i, j) - out(j, i));
      out(i, j) = v;
      out(j, i) = -v;
    }
  }
  return out;
}

Matrix pushforward(const StructureField& field, const MapJacobian& map_jacobian, const Vector& x) {
  return pushforward(field.evaluate(x), map_jacobian(x));
}

Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& map, const Vector& x) {
  const Vector f0 = map(x);
  Matrix M(f0.size(), x.size());
  Vector probe = x;
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    const double h = 1e-6 * (1.0 + std::abs(x[l]));
    probe[l] = x[l] + h;
    const Vector plus = map(probe);
    probe[l] = x[l] - h;
    const Vector minus = map(probe);
    probe[l] = x[l];
    M.col(l) = (plus - minus) / (2.0 * h);
  }
  return M;
}

DarbouxChart::DarbouxChart(std::shared_ptr<const MultiseparableSpec> spec, std::vector<double> anchors)
    : spec_(std::move(spec)), anchors_(std::move(anchors)), inverse_anchors_(anchors_) {
  const int n = spec_->dim();
  for (int i = 0; i < n; ++i) {
    const Interval ys = spec_->projected_interval(i + 1);
    image_.y_bounds.push_back(ys);
    if (i < spec_->rank()) {
      image_.z_bounds.push_back(spec_->factors()[i].antiderivative_image(ys, anchors_[i]));
    } else {
      image_.z_bounds.push_back(ys);
    }
  }
}

Vector DarbouxChart::forward(const Vector& x) const {
  return quadrature_chart(*spec_, anchors_, linear_chart(*spec_, x));
}

Vector DarbouxChart::inverse(const Vector& z) const {
  return inverse_linear_chart(*spec_, inverse_quadrature_chart(*spec_, inverse_anchors_, z));
}

Matrix DarbouxChart::jacobian(const Vector& x) const {
  Matrix M = spec_->B();
  const Vector y = linear_chart(*spec_, x);
  for (int i = 0; i < spec_->rank(); ++i) M.row(i) /= spec_->factors()[i].value(y[i]);
  return M;
}

Matrix DarbouxChart::inverse_jacobian(const Vector& z) const {
  Matrix M = spec_->A();
  const Vector y = inverse_quadrature_chart(*spec_, inverse_anchors_, z);
  for (int i = 0; i < spec_->rank(); ++i) M.col(i) *= spec_->factors()[i].value(y[i]);
  return M;
}

Matrix DarbouxChart::canonical_matrix() const {
  const int n = spec_->dim();
  Matrix C = Matrix::Zero(n, n);
  for (int p = 0; p < blocks(); ++p) {
    C(2 * p, 2 * p + 1) = 1.0;
    C(2 * p + 1, 2 * p) = -1.0;
  }
  return C;
}

bool DarbouxChart::contains_y(const Vector& y) const {
  return spec_->domain().contains(inverse_linear_chart(*spec_, y));
}

bool DarbouxChart::contains_z(const Vector& z) const {
  for (int i = 0; i < spec_->dim(); ++i)
    if (!(z[i] >= image_.z_bounds[i].lower && z[i] <= image_.z_bounds[i].upper)) return false;
  try {
    return spec_->domain().contains(inverse(z));
  } catch (const Error&) {
    return false;
  }
}

bool DarbouxChart::is_identity() const {
  const int n = spec_->dim();
  if (spec_->B() != Matrix::Identity(n, n)) return false;
  for (int i = 0; i < spec_->rank(); ++i) {
    const auto* c = std::get_if<factor_kind::Constant>(&spec_->factors()[i].kind());
    if (c == nullptr || c->c != 1.0 || anchors_[i] != 0.0 || inverse_anchors_[i] != 0.0)
      return false;
  }
  return true;
}

DarbouxChart DarbouxChart::with_inverse_anchors(std::vector<double> anchors) const {
  require_anchor_count(*spec_, anchors);
  DarbouxChart copy = *this;
  copy.inverse_anchors_ = std::move(anchors);
  return copy;
}

DarbouxChart darboux_chart(const MultiseparableSpec& spec, std::optional<std::vector<double>> anchors) {
  std::vector<double> chosen = anchors ? std::move(*anchors) : default_anchors(spec);
  require_anchor_count(spec, chosen);
  for (int i = 0; i < spec.rank(); ++i) {
    const FactorFunction& f = spec.factors()[i];
    if (!f.validity().contains(chosen[i]) || f.value(chosen[i]) == 0.0)
      throw Error(ErrorCode::OutOfValidity, "anchor " + std::to_string(i + 1) + " is not admissible");
  }
  DarbouxChart chart(std::make_shared<const MultiseparableSpec>(spec), std::move(chosen));

  const auto points = HaltonSampler(spec.dim(), 0).sample(spec.domain(), kChartSamples);
  std::vector<double> errors(points.size());
  detail::parallel_for(kChartSamples, [&](int s) {
    errors[s] = round_trip_error(points[s], chart.inverse(chart.forward(points[s])));
  });
  const auto worst = std::max_element(errors.begin(), errors.end());
  if (!(*worst <= kRoundTripTolerance)) {
    CanonicalReport report;
    report.max_round_trip = *worst;
    report.worst_point = points[worst - errors.begin()];
    report.samples = kChartSamples;
    report.pass = false;
    std::ostringstream os;
    os << "chart round trip error " << *worst << " exceeds " << kRoundTripTolerance;
    throw CertificationFailure(report, os.str());
  }
  return chart;
}

CanonicalReport certify_canonical(const MultiseparableSpec& spec, const DarbouxChart& chart,
                                  int num_points, double tolerance, std::uint64_t seed) {
  if (num_points < 1) throw Error(ErrorCode::InvalidArgument, "certification needs at least one point");
  if (chart.spec().dim() != spec.dim())
    throw Error(ErrorCode::DimensionMismatch, "chart was built for a different spec");
  const auto points = HaltonSampler(spec.dim(), seed).sample(spec.domain(), num_points);
  const Matrix canonical = chart.canonical_matrix();
  const double inf = std::numeric_limits<double>::infinity();

  struct PointResult {
    double deviation = 0.0;
    std::array<int, 2> entry{1, 1};
    double round_trip = 0.0;
  };
  std::vector<PointResult> results(points.size());
  detail::parallel_for(num_points, [&](int s) {
    const Vector& x = points[s];
    PointResult& out = results[s];
    try {
      const Vector back = chart.inverse(chart.forward(x));
      out.round_trip = round_trip_error(x, back);
      const Matrix pushed = pushforward(spec.evaluate_unchecked(back), chart.jacobian(x));
      for (int i = 0; i < spec.dim(); ++i)
        for (int j = 0; j < spec.dim(); ++j) {
          const double d = std::abs(pushed(i, j) - canonical(i, j));
          if (!(d <= out.deviation)) {
            out.deviation = std::isnan(d) ? inf : d;
            out.entry = {i + 1, j + 1};
          }
        }
    } catch (const Error&) {
      out.deviation = inf;
      out.round_trip = inf;
    }
  });

  CanonicalReport report;
  report.samples = num_points;
  report.tolerance = tolerance;
  report.worst_point = points.front();
  for (int s = 0; s < num_points; ++s) {
    if (results[s].deviation > report.max_deviation) {
      report.max_deviation = results[s].deviation;
      report.worst_entry = results[s].entry;
      report.worst_point = points[s];
    }
    report.max_round_trip = std::max(report.max_round_trip, results[s].round_trip);
  }
  report.pass = report.max_deviation <= tolerance && report.max_round_trip <= kRoundTripTolerance;
  if (!report.pass) {
    std::ostringstream os;
    os.precision(17);
    os << "canonical form not reached: max deviation " << report.max_deviation << " at entry ("
       << report.worst_entry[0] << "," << report.worst_entry[1] << "), round trip "
       << report.max_round_trip;
    throw CertificationFailure(report, os.str());
  }
  return report;
}

}  // namespace poisson
