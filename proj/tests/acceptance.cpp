// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "poisson/catalog.hpp"
#include "poisson/darboux.hpp"
#include "poisson/dynamics.hpp"
#include "poisson/verify.hpp"
#include "support/random_spec.hpp"

using namespace poisson;

namespace {

constexpr int kSpecs = 50;
constexpr int kPoints = 20;
constexpr double kEps = 2.220446049250313e-16;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

int failures = 0;

void report(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome out;
  out.detail.precision(3);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  std::printf("%s [%2d] %s (%.2fs) %s\n", out.pass ? "PASS" : "FAIL", id, title, secs, out.detail.str().c_str());
  std::fflush(stdout);
}

double max_abs(const Matrix& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

std::vector<MultiseparableSpec> random_specs(std::set<std::string>* kinds = nullptr) {
  testing::RandomSpecFactory factory(2024);
  auto specs = factory.batch(kSpecs);
  if (kinds) *kinds = factory.kinds_seen();
  return specs;
}

std::vector<Vector> points_for(const MultiseparableSpec& spec, std::uint64_t seed) {
  return HaltonSampler(spec.dim(), seed).sample(spec.domain(), kPoints);
}

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

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd = std::string("\"") + POISSONCTL_PATH + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fixture(const char* name) { return std::string("\"") + FIXTURE_DIR + "/" + name + "\""; }

}  // namespace

int main() {
  std::set<std::string> kinds;
  const std::vector<MultiseparableSpec> specs = random_specs(&kinds);

  report(1, "Jacobi identity on 50 random specs", [&](Outcome& o) {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    int n_min = 99, n_max = 0;
    std::set<std::pair<int, int>> shapes;
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const JacobiReport r = jacobi_sweep(StructureField::from_spec(specs[s]), kPoints, s, 1e-7);
      worst = std::max(worst, r.max_abs_residual);
      o.require(r.pass, "spec " + std::to_string(s));
      n_min = std::min(n_min, specs[s].dim());
      n_max = std::max(n_max, specs[s].dim());
      shapes.insert({specs[s].dim(), specs[s].rank()});
      o.require(std::abs(specs[s].B().determinant()) >= 1.0 - 1e-9, "|det B| >= 1");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(n_min == 2 && n_max == 8 && shapes.size() == 23, "every n in 2..8 with every even r");
    o.require(kinds.size() == 5, "all five factor kinds drawn");
    o.require(secs <= 10.0, "runtime <= 10 s");
    o.detail << "max residual " << worst << ", kinds " << kinds.size() << ", shapes " << shapes.size()
             << ", sweep " << secs << "s";
  });

  report(2, "analytic vs finite-difference residuals", [&](Outcome& o) {
    double worst = 0.0;
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const StructureField field = StructureField::from_spec(specs[s]);
      const StructureField fd = field.with_finite_difference_partials();
      for (const Vector& x : points_for(specs[s], s)) {
        const auto a = jacobi_residuals(field, x);
        const auto b = jacobi_residuals(fd, x);
        for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
      }
    }
    o.require(worst <= 1e-4, "agreement within 1e-4");
    o.detail << "max |analytic - fd| " << worst;
  });

  report(3, "counterexample detected", [&](Outcome& o) {
    const StructureField f = counterexample();
    const JacobiReport r = jacobi_sweep(f, kPoints, 0, 1e-7);
    o.require(!r.pass, "sweep fails");
    o.require(r.worst_triple == std::array<int, 3>{1, 2, 3}, "worst triple (1,2,3)");
    o.require(std::abs(r.max_abs_residual - std::abs(r.worst_point[0])) <= 1e-9, "|residual| = |x1|");
    Vector x(3);
    x << 2, 1, 1;
    const double at = jacobi_residual(f, x, 1, 2, 3);
    o.require(std::abs(std::abs(at) - 2.0) <= 1e-9, "value 2 at (2,1,1)");
    o.detail.precision(17);
    o.detail << "residual at (2,1,1) " << at;
  });

  report(4, "Casimir kernel and Casimir rank", [&](Outcome& o) {
    double worst = 0.0;
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const KernelReport k = kernel_sweep(specs[s], kPoints, s, 1e-12);
      worst = std::max(worst, k.max_relative);
      o.require(k.pass, "kernel spec " + std::to_string(s));
      const auto cs = casimirs(specs[s]);
      const int expected = specs[s].dim() - specs[s].rank();
      if (expected > 0) {
        Matrix C(expected, specs[s].dim());
        for (int p = 0; p < expected; ++p) C.row(p) = cs[p].transpose();
        o.require(numerical_rank(C) == expected, "Casimir set rank n - r");
      } else {
        o.require(cs.empty(), "no Casimirs at full rank");
      }
    }
    o.detail << "max |J grad C| / max|J| " << worst;
  });

  report(5, "constant rank r", [&](Outcome& o) {
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const RankReport r = rank_sweep(StructureField::from_spec(specs[s]), kPoints, s, specs[s].rank(), 1e-9);
      o.require(r.pass, "spec " + std::to_string(s) + " rank " + std::to_string(r.min_rank) + ".." +
                            std::to_string(r.max_rank) + " vs " + std::to_string(specs[s].rank()));
    }
  });

  report(6, "block form under y = Bx", [&](Outcome& o) {
    double off = 0.0, block = 0.0;
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const MultiseparableSpec& spec = specs[s];
      for (const Vector& x : points_for(spec, s)) {
        const Matrix Js = pushforward(spec.evaluate(x), spec.B());
        const Vector y = spec.B() * x;
        for (int i = 0; i < spec.dim(); ++i)
          for (int j = 0; j < spec.dim(); ++j) {
            const bool in_block = i < spec.rank() && j < spec.rank() && i / 2 == j / 2 && i != j;
            if (!in_block) {
              off = std::max(off, std::abs(Js(i, j)));
              continue;
            }
            const int p = std::min(i, j);
            const double phi = spec.factors()[p].value(y[p]) * spec.factors()[p + 1].value(y[p + 1]);
            block = std::max(block, std::abs(Js(i, j) - (i < j ? phi : -phi)));
          }
      }
    }
    o.require(off <= 1e-12, "off-pattern <= 1e-12");
    o.require(block <= 1e-12, "block entries within 1e-12");
    o.detail << "off-pattern " << off << ", block error " << block;
  });

  report(7, "canonical form certified", [&](Outcome& o) {
    double deviation = 0.0, round_trip = 0.0;
    std::vector<MultiseparableSpec> all = specs;
    for (const std::string& name : catalog_names()) all.push_back(make_catalog_entry(name).spec);
    for (int N = 4; N <= 6; ++N) all.push_back(toda(N));
    for (std::size_t s = 0; s < all.size(); ++s) {
      const CanonicalReport r = certify_canonical(all[s], darboux_chart(all[s]), kPoints, 1e-9, s);
      deviation = std::max(deviation, r.max_deviation);
      round_trip = std::max(round_trip, r.max_round_trip);
      o.require(r.pass && r.max_round_trip <= 1e-10, "spec " + std::to_string(s));
    }
    o.detail << all.size() << " specs, max deviation " << deviation << ", max round trip " << round_trip;
  });

  report(8, "Kermack-McKendrick reproduction", [&](Outcome& o) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    struct Params {
      double R, k1, k2;
    };
    double worst_J = 0.0, worst_star = 0.0, worst_can = 0.0;
    for (const Params& p : {Params{1, 1, 1}, Params{2.5, 5, 0.5}, Params{0.3, -0.6, -0.5}}) {
      const MultiseparableSpec kmk = kermack_mckendrick(p.R, p.k1, p.k2);
      const DarbouxChart chart = darboux_chart(kmk);
      Matrix M(3, 3);
      M << 0, 1, -1, -1, 0, 1, 1, -1, 0;
      for (int k = 0; k < 100; ++k) {
        Vector x(3);
        x << u(rng), u(rng), u(rng);
        const Matrix J = kmk.evaluate(x);
        const Matrix expected = p.R * x[0] * x[1] * M;
        worst_J = std::max(worst_J, max_abs(J - expected) / (kEps * max_abs(expected)));
        o.require(rank_at(StructureField::from_spec(kmk), x) == 2, "rank 2");

        const Vector y = kmk.B() * x;
        Matrix star = Matrix::Zero(3, 3);
        star(0, 1) = p.R * y[0] * y[1];
        star(1, 0) = -star(0, 1);
        worst_star = std::max(worst_star, max_abs(pushforward(J, kmk.B()) - star) / std::max(1.0, max_abs(star)));
        worst_can = std::max(worst_can, max_abs(pushforward(J, chart.jacobian(x)) - chart.canonical_matrix()));
      }
      o.require(casimirs(kmk).size() == 1 && casimirs(kmk)[0] == Vector::Ones(3), "Casimir (1,1,1)");
      Matrix canonical = Matrix::Zero(3, 3);
      canonical(0, 1) = 1;
      canonical(1, 0) = -1;
      o.require(chart.canonical_matrix() == canonical, "canonical matrix layout");
    }
    o.require(worst_J <= 4.0, "J = R x1 x2 M to machine precision");
    o.require(worst_star <= 1e-12, "J*(y) within 1e-12");
    o.require(worst_can <= 1e-9, "canonical within 1e-9");
    o.detail << "J error " << worst_J << " ulp-scaled, J* error " << worst_star << ", canonical error "
             << worst_can;
  });

  report(9, "Toda reproduction for N = 3..6", [&](Outcome& o) {
    double worst_band = 0.0, worst_star = 0.0;
    for (int N = 3; N <= 6; ++N) {
      const MultiseparableSpec t = toda(N);
      const int n = 2 * N - 1;
      for (const Vector& x : HaltonSampler(n, N).sample(t.domain(), 50)) {
        const Matrix J = t.evaluate(x);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double expected = 0.0;
            if (i < N - 1 && j == i + N - 1) expected = -x[i];
            if (i < N - 1 && j == i + N) expected = x[i];
            if (j < N - 1 && i == j + N - 1) expected = x[j];
            if (j < N - 1 && i == j + N) expected = -x[j];
            if (expected == 0.0) o.require(J(i, j) == 0.0, "zero entries exactly zero");
            else worst_band = std::max(worst_band, std::abs(J(i, j) - expected) / (kEps * std::abs(expected)));
          }
        const Vector y = t.B() * x;
        Matrix star = Matrix::Zero(n, n);
        for (int i = 0; i < N - 1; ++i) {
          star(2 * i, 2 * i + 1) = -y[2 * i];
          star(2 * i + 1, 2 * i) = y[2 * i];
        }
        worst_star = std::max(worst_star, max_abs(pushforward(J, t.B()) - star));
      }
      Vector beta = Vector::Zero(n);
      beta.tail(N).setOnes();
      o.require(casimirs(t).size() == 1 && casimirs(t)[0] == beta, "single Casimir sum of betas");
      const DarbouxChart chart = darboux_chart(t);
      o.require(chart.blocks() == N - 1, "N - 1 blocks");
      o.require(certify_canonical(t, chart, kPoints, 1e-9).pass, "canonical form");
    }
    o.require(worst_band <= 1.0, "band entries to machine precision");
    o.require(worst_star <= 1e-12, "J*(y) within 1e-12");
    o.detail << "band error " << worst_band << " ulp-scaled, J* error " << worst_star;
  });

  report(10, "dynamics: Casimir flow, Casimir drift, RK4 order", [&](Outcome& o) {
    const auto start = std::chrono::steady_clock::now();
    // (a) H = Casimir gives the zero vector field
    double casimir_flow = 0.0;
    std::vector<MultiseparableSpec> systems = specs;
    systems.push_back(kermack_mckendrick(1, 1, 1));
    systems.push_back(toda(3));
    for (std::size_t s = 0; s < systems.size(); ++s)
      for (const Vector& c : casimirs(systems[s]))
        for (const Vector& x : points_for(systems[s], s)) {
          const double scale = std::max(1.0, max_abs(systems[s].evaluate(x)) * c.cwiseAbs().maxCoeff());
          casimir_flow = std::max(casimir_flow, max_abs(vector_field(systems[s], ScalarField::linear(c), x)) / scale);
        }
    o.require(casimir_flow <= 1e-14, "(a) zero vector field");

    // (b) canonical route keeps the Casimir over 1e4 steps
    double drift = 0.0;
    Vector x_kmk(3), x_toda(5);
    x_kmk << 1.0, 1.2, 0.9;
    x_toda << 0.9, 1.1, 0.2, -0.1, 0.3;
    for (const auto& [spec, x0] : {std::pair{kermack_mckendrick(1, 1, 1), x_kmk}, std::pair{toda(3), x_toda}}) {
      const Hamiltonian H = ScalarField::quadratic_diagonal(Vector::Ones(spec.dim()));
      const TrajectoryRecord rec = integrate_canonical(spec, H, x0, 1e-3, 10000);
      o.require(!rec.domain_exit && rec.states.size() == 10001, "(b) full trajectory");
      drift = std::max(drift, rec.max_casimir_drift());
    }
    o.require(drift <= 1e-10, "(b) Casimir drift <= 1e-10");

    // (c) RK4 energy error at a fixed final time shrinks by 2^4 per halving
    const MultiseparableSpec t3 = toda(3);
    const Hamiltonian H = ScalarField::quadratic_diagonal(Vector::Ones(5));
    const double T = 5.0;
    auto energy_error = [&](double dt) {
      const auto steps = static_cast<long long>(std::llround(T / dt));
      return std::abs(integrate_direct(t3, H, x_toda, dt, steps).energy_drift.back());
    };
    const double e1 = energy_error(0.02), e2 = energy_error(0.01), e3 = energy_error(0.005);
    const double r1 = e1 / e2, r2 = e2 / e3;
    o.require(r1 >= 8 && r1 <= 32 && r2 >= 8 && r2 <= 32, "(c) ratio in [8, 32]");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs <= 30.0, "runtime <= 30 s");
    o.detail << "(a) " << casimir_flow << " (b) " << drift << " (c) ratios " << r1 << ", " << r2 << ", " << secs
             << "s";
  });

  report(11, "CLI determinism and exit codes", [&](Outcome& o) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("poisson_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const int a = run_cli("verify --seed 7 --config " + fixture("explicit.json"), dir / "a.json");
    const int b = run_cli("verify --seed 7 --config " + fixture("explicit.json"), dir / "b.json");
    const std::string ra = slurp(dir / "a.json"), rb = slurp(dir / "b.json");
    o.require(a == 0 && b == 0, "pass fixture exits 0");
    o.require(!ra.empty() && ra == rb, "byte-identical reports");
    const int c = run_cli("verify --seed 7 --system kmk --param R=2", dir / "c.json");
    const int d = run_cli("verify --seed 7 --system kmk --param R=2", dir / "d.json");
    o.require(c == 0 && d == 0 && slurp(dir / "c.json") == slurp(dir / "d.json"), "catalog run deterministic");
    const int i1 = run_cli("integrate --system toda --route canonical --steps 200", dir / "i1.csv");
    const int i2 = run_cli("integrate --system toda --route canonical --steps 200", dir / "i2.csv");
    o.require(i1 == 0 && i2 == 0 && slurp(dir / "i1.csv") == slurp(dir / "i2.csv"), "CSV deterministic");
    const int fail = run_cli("verify --config " + fixture("counterexample.json"), dir / "f.json");
    o.require(fail == 1, "failure fixture exits 1");
    const int parse = run_cli("verify --config " + fixture("malformed.json"), dir / "p.json");
    o.require(parse == 2, "parse-error fixture exits 2");
    const int invalid = run_cli("verify --config " + fixture("odd_rank.json"), dir / "v.json");
    o.require(invalid == 2, "validation-error fixture exits 2");
    const int usage = run_cli("verify --points 0 --system kmk", dir / "u.json");
    o.require(usage == 2, "bad flag exits 2");
    fs::remove_all(dir);
    o.detail << "exit codes pass/fail/parse/invalid/usage " << a << "/" << fail << "/" << parse << "/" << invalid
             << "/" << usage;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
