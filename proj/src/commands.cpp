#include "poisson/commands.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "poisson/catalog.hpp"
#include "poisson/darboux.hpp"
#include "poisson/dynamics.hpp"
#include "poisson/errors.hpp"
#include "poisson/verify.hpp"

namespace poisson {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (std::isfinite(v)) return v + 0.0;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

Json matrix_json(const Matrix& M) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) out.push_back(vector_json(M.row(i).transpose()));
  return out;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

std::string format(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Json jacobi_json(const JacobiReport& r) {
  return Json{{"max_abs_residual", number(r.max_abs_residual)},
              {"max_normalized_residual", number(r.max_normalized_residual)},
              {"worst_triple", r.worst_triple},
              {"worst_point", vector_json(r.worst_point)},
              {"samples", r.samples},
              {"tolerance", number(r.tolerance)},
              {"pass", r.pass}};
}

Json kernel_json(const KernelReport& r) {
  return Json{{"max_abs", number(r.max_abs)},
              {"max_relative", number(r.max_relative)},
              {"worst_point", vector_json(r.worst_point)},
              {"samples", r.samples},
              {"relative_tolerance", number(r.relative_tolerance)},
              {"pass", r.pass}};
}

Json rank_json(const RankReport& r) {
  Json out{{"min_rank", r.min_rank}, {"max_rank", r.max_rank}};
  out["expected"] = r.expected >= 0 ? Json(r.expected) : Json(nullptr);
  out["first_mismatch"] = r.first_mismatch.size() ? vector_json(r.first_mismatch) : Json(nullptr);
  out["samples"] = r.samples;
  out["pass"] = r.pass;
  return out;
}

Json canonical_json(const CanonicalReport& r) {
  return Json{{"max_deviation", number(r.max_deviation)},
              {"worst_entry", r.worst_entry},
              {"worst_point", vector_json(r.worst_point)},
              {"max_round_trip", number(r.max_round_trip)},
              {"samples", r.samples},
              {"tolerance", number(r.tolerance)},
              {"pass", r.pass}};
}

Json interval_json(const Interval& i) { return Json::array({number(i.lower), number(i.upper)}); }

Json header(const char* command, const SystemConfig& config) {
  Json out{{"command", command}, {"system", config.name}, {"n", config.n}};
  out["r"] = config.is_structure_field() ? Json(nullptr) : Json(config.r);
  return out;
}

Vector default_start(const BoxDomain& domain) {
  const BoxDomain& box = domain.sample_region();
  return 0.5 * (box.lower() + box.upper());
}

}  // namespace

CommandResult usage_error(const std::exception& error) {
  Json err{{"message", error.what()}};
  if (const auto* e = dynamic_cast<const Error*>(&error)) {
    err["code"] = std::string(to_string(e->code()));
  } else if (const auto* v = dynamic_cast<const ValidationError*>(&error)) {
    err["code"] = "ValidationError";
    err["field"] = v->field();
  } else if (const auto* p = dynamic_cast<const ParseError*>(&error)) {
    err["code"] = "ParseError";
    err["line"] = p->line();
    err["column"] = p->column();
  } else {
    err["code"] = "UsageError";
  }
  return {kExitUsage, render(Json{{"pass", false}, {"error", err}}), std::string("error: ") + error.what()};
}

CommandResult cmd_verify(const SystemConfig& config, int points, std::uint64_t seed) {
  if (points < 1) return usage_error(ValidationError("points", "points: must be positive"));
  Json report = header("verify", config);
  report["points"] = points;
  report["seed"] = seed;
  Json failures = Json::array();
  std::ostringstream summary;
  try {
    const StructureField field = field_from_config(config);
    const JacobiReport jacobi = jacobi_sweep(field, points, seed, kVerifyJacobiTolerance);
    report["jacobi"] = jacobi_json(jacobi);
    if (!jacobi.pass) failures.push_back("jacobi");
    summary << "jacobi max residual " << format(jacobi.max_abs_residual);

    int expected_rank = -1;
    if (!config.is_structure_field()) {
      const MultiseparableSpec spec = spec_from_config(config);
      const KernelReport kernel = kernel_sweep(spec, points, seed);
      report["kernel"] = kernel_json(kernel);
      if (!kernel.pass) failures.push_back("kernel");
      summary << ", kernel relative " << format(kernel.max_relative);
      expected_rank = spec.rank();
      report["heuristic_certification"] = spec.heuristic_certification();
    }
    const RankReport rank = rank_sweep(field, points, seed, expected_rank);
    report["rank"] = rank_json(rank);
    if (!rank.pass) failures.push_back("rank");
    summary << ", rank " << rank.min_rank << ".." << rank.max_rank;
  } catch (const ValidationError& e) {
    return usage_error(e);
  } catch (const Error& e) {
    return usage_error(e);
  }
  const bool pass = failures.empty();
  report["failures"] = failures;
  report["pass"] = pass;
  summary << (pass ? ": pass" : ": FAIL");
  return {pass ? kExitSuccess : kExitFailure, render(report), summary.str()};
}

CommandResult cmd_darboux(const SystemConfig& config, int points, std::uint64_t seed) {
  if (points < 1) return usage_error(ValidationError("points", "points: must be positive"));
  Json report = header("darboux", config);
  std::optional<MultiseparableSpec> spec;
  try {
    spec = spec_from_config(config);
  } catch (const ValidationError& e) {
    return usage_error(e);
  } catch (const Error& e) {
    return usage_error(e);
  }
  report["B"] = matrix_json(spec->B());
  report["A"] = matrix_json(spec->A());
  Json factors = Json::array();
  for (const FactorFunction& f : spec->factors()) {
    Json params = Json::object();
    for (const auto& [k, v] : f.parameters()) params[k] = number(v);
    factors.push_back(Json{{"kind", f.kind_name()}, {"params", params}, {"validity", interval_json(f.validity())}});
  }
  report["factors"] = factors;
  report["blocks"] = spec->rank() / 2;
  Json cas = Json::array();
  for (const Vector& c : casimirs(*spec)) cas.push_back(vector_json(c));
  report["casimirs"] = cas;

  try {
    const DarbouxChart chart = darboux_chart(*spec);
    report["anchors"] = chart.anchors();
    Json images = Json::array();
    for (const Interval& i : chart.image().z_bounds) images.push_back(interval_json(i));
    report["z_bounds"] = images;
    report["identity_chart"] = chart.is_identity();
    const CanonicalReport cert = certify_canonical(*spec, chart, points, kCertifyTolerance, seed);
    report["certification"] = canonical_json(cert);
    report["pass"] = true;
    return {kExitSuccess, render(report),
            "canonical form certified: " + std::to_string(spec->rank() / 2) + " block(s), max deviation " +
                format(cert.max_deviation)};
  } catch (const CertificationFailure& e) {
    report["certification"] = canonical_json(e.report());
    report["failure"] = e.what();
    report["pass"] = false;
    return {kExitFailure, render(report), std::string("certification failed: ") + e.what()};
  } catch (const Error& e) {
    return usage_error(e);
  }
}

CommandResult cmd_integrate(const SystemConfig& config, const IntegrateOptions& options) {
  try {
    const MultiseparableSpec spec = spec_from_config(config);
    HamiltonianConfig hc;
    if (options.hamiltonian) hc = *options.hamiltonian;
    else if (config.hamiltonian) hc = *config.hamiltonian;
    else hc = HamiltonianConfig{"quadratic-diagonal", Vector::Ones(spec.dim()), 0};
    const Hamiltonian H = build_hamiltonian(hc, spec.dim());

    Vector x0;
    if (options.x0) x0 = *options.x0;
    else if (config.x0) x0 = *config.x0;
    else x0 = default_start(spec.domain());
    if (x0.size() != spec.dim()) throw ValidationError("x0", "x0: expected " + std::to_string(spec.dim()) + " entries");

    const TrajectoryRecord record = options.route == Route::Canonical
                                        ? integrate_canonical(spec, H, x0, options.dt, options.steps)
                                        : integrate_direct(spec, H, x0, options.dt, options.steps);
    std::ostringstream csv;
    write_csv(record, csv);
    std::ostringstream summary;
    summary.precision(17);
    summary << "max |dH| = " << record.max_energy_drift() << ", max |dC| = " << record.max_casimir_drift();
    if (record.domain_exit) {
      summary << "; domain exit after t = " << record.exit_time;
      return {kExitFailure, csv.str(), summary.str()};
    }
    return {kExitSuccess, csv.str(), summary.str()};
  } catch (const ValidationError& e) {
    return usage_error(e);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MaxNewtonIters) return {kExitFailure, "", std::string("error: ") + e.what()};
    return usage_error(e);
  }
}

CommandResult cmd_catalog_list() {
  Json out = Json::array();
  for (const std::string& name : catalog_names()) {
    const CatalogEntry entry = make_catalog_entry(name);
    Json params = Json::object();
    for (const auto& [k, v] : entry.params) params[k] = number(v);
    out.push_back(Json{{"name", name}, {"params", params}, {"n", entry.spec.dim()}, {"r", entry.spec.rank()}});
  }
  return {kExitSuccess, render(out), ""};
}

}  // namespace poisson
