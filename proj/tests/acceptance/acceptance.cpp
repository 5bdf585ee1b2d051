// Acceptance run: one PASS/FAIL line per criterion. Expected values are
// computed here from closed forms or brute-force oracles; tolerances are
// pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "stringcap/bounds.hpp"
#include "stringcap/catalog.hpp"
#include "stringcap/frames.hpp"
#include "stringcap/gauge.hpp"
#include "stringcap/reproduce.hpp"

using namespace stringcap;

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kEllipsoidRelTol = 1e-4;
constexpr double kEllipsoidSeconds = 30.0;
constexpr double kCamelAbsTol = 1e-9;
constexpr double kCamelLimitTol = 1e-6;
constexpr double kKleinAbsTol = 1e-6;
constexpr double kFrameResidualTol = 1e-10;
constexpr double kFrameDriftTol = 0.1;
constexpr double kFrameSeconds = 10.0;
constexpr std::size_t kContainmentSamples = 10000;

struct Outcome {
  bool pass = true;
  int checks = 0;
  double worst = 0.0;  // largest deviation seen, in the criterion's own units
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
  void near(double got, double want, double tol, bool relative, const std::string& what) {
    const double dev = relative ? std::abs(got - want) / std::abs(want) : std::abs(got - want);
    worst = std::max(worst, dev);
    std::ostringstream os;
    os.precision(12);
    os << what << ": got " << got << ", want " << want;
    expect(std::isfinite(got) && dev <= tol, os.str());
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const CapacityBound& by_route(const std::vector<CapacityBound>& bs, const std::string& route) {
  for (const auto& b : bs)
    if (b.target.route == route) return b;
  throw InvalidInputError("no bound for route " + route);
}

// Brute-force shortest orientation-reversing loop on the flat Klein bottle:
// piecewise-linear paths in the universal cover with one free vertex, from
// (0, y0) to a lift (a, -y0 + j b) of the start point.
double klein_grid_search(double a, double b) {
  double best = std::numeric_limits<double>::infinity();
  const int ny = 48, nv = 7;
  for (int iy = 0; iy < ny; ++iy) {
    const double y0 = b * iy / ny;
    for (int j = -2; j <= 2; ++j) {
      const double ex = a, ey = -y0 + j * b;
      for (int vx = 0; vx < nv; ++vx) {
        for (int vy = 0; vy < nv; ++vy) {
          const double px = a * vx / (nv - 1);
          const double py = y0 + (ey - y0) * vy / (nv - 1) + b * (vy - nv / 2) / (3.0 * nv);
          best = std::min(best, std::hypot(px, py - y0) + std::hypot(ex - px, ey - py));
        }
      }
    }
  }
  return best;
}

Outcome ellipsoid_one() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (int n : {2, 3}) {
    for (double a : {0.2, 0.5, 1.0}) {
      const std::string c = "n=" + std::to_string(n) + " a=" + std::to_string(a);
      const Scenario s = ellipsoid_scenario(n, a);
      BindingResolver resolver(s, {});
      o.near(resolver.resolve("E_+").value, 2 * kPi * a, kEllipsoidRelTol, true, c + " E_+");
      o.near(resolver.resolve("E_-").value, 2 * kPi * a, kEllipsoidRelTol, true, c + " E_-");
      std::vector<CapacityBound> bs;
      for (const auto& t : s.targets) bs.push_back(bound_for_target(s, t, resolver));
      o.near(by_route(bs, "ob1.M").upper_bound, 2 * kPi * a, kEllipsoidRelTol, true, c + " bound [S^n]");
      o.near(by_route(bs, "ob1.pt").upper_bound, 4 * kPi * a, kEllipsoidRelTol, true, c + " bound [pt]");
    }
  }
  const double elapsed = seconds_since(t0);
  o.expect(elapsed < kEllipsoidSeconds, "runtime " + std::to_string(elapsed) + " s");
  return o;
}

Outcome ellipsoid_two() {
  Outcome o;
  for (int n : {3, 4}) {
    for (double a : {0.4, 1.0}) {
      const std::string c = "n=" + std::to_string(n) + " a=" + std::to_string(a);
      const CapacityBound b = bound_ellipsoid2(ellipsoid2_scenario(n, a));
      o.near(b.upper_bound, 2 * kPi * a, kEllipsoidRelTol, true, c + " bound [pt]");
      o.expect(b.equality_known, c + " equality flag");
    }
  }
  return o;
}

Outcome camel() {
  Outcome o;
  const std::vector<double> deltas = {0.1, 0.01, 0.001};
  for (double eps : {0.4, 1.0}) {
    std::vector<std::vector<double>> by_n;
    for (int n : {2, 3}) {
      const CamelLimitReport r = camel_limit_report(n, eps, deltas);
      std::vector<double> bounds;
      for (std::size_t i = 0; i < deltas.size(); ++i) {
        const std::string c = "n=" + std::to_string(n) + " eps=" + std::to_string(eps) + " delta=" + std::to_string(deltas[i]);
        o.near(r.rows[i].bound, eps + 3 * deltas[i], kCamelAbsTol, false, c);
        bounds.push_back(r.rows[i].bound);
      }
      o.near(r.extrapolated, eps, kCamelLimitTol, false, "extrapolation n=" + std::to_string(n));
      by_n.push_back(bounds);
    }
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      o.near(by_n[0][i], by_n[1][i], kCamelAbsTol, false, "n-independence eps=" + std::to_string(eps));
    }
  }
  return o;
}

Outcome klein() {
  Outcome o;
  for (const auto& [a, b] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}}) {
    const std::string c = "a=" + std::to_string(a) + " b=" + std::to_string(b);
    const double closed_form = 2 * a;  // straight loop of length a, traversed both ways
    o.near(2 * klein_grid_search(a, b), closed_form, 1e-12, false, c + " grid search vs closed form");
    o.near(bound_non_orientable(klein_bottle_scenario(a, b)).upper_bound, closed_form, kKleinAbsTol, false, c);
  }
  return o;
}

Outcome properties() {
  Outcome o;
  for (const auto& r : reproduce("properties")) {
    o.worst = std::max(o.worst, r.deviation);
    o.expect(r.pass, r.case_id + ": " + r.quantity);
  }
  // Every built-in certificate replays; five independent tamperings of each are rejected.
  for (const auto& [s, t] : repro::catalog_targets()) {
    const stralg::Certificate cert = stralg::derive_certificate(s, t);
    o.expect(stralg::check_certificate(cert).passed, "replay " + s.id + " " + t.name);
    std::vector<std::function<void(stralg::Certificate&)>> tamper = {
        [](stralg::Certificate& c) { c.derivations[0].steps.back().after = stralg::FiltExpr::zero_plus(); },
        [](stralg::Certificate& c) { c.derivations[0].conclusion.filtration += stralg::FiltExpr::constant(0.5); },
        [](stralg::Certificate& c) { c.derivations[0].steps.pop_back(); },
        [](stralg::Certificate& c) { c.derivations[0].steps.front().rule = "STAR_COMM"; },
        [](stralg::Certificate& c) { c.target.declared_pairing = "nonsense"; },
    };
    for (std::size_t i = 0; i < tamper.size(); ++i) {
      stralg::Certificate bad = cert;
      tamper[i](bad);
      o.expect(!stralg::check_certificate(bad).passed, "mutation " + std::to_string(i) + " of " + s.id + " " + t.name);
    }
  }
  return o;
}

Outcome frames() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (int n : {1, 2, 3}) {
    SphereGrid g;
    g.points = random_sphere_points(n, 1000, 2024);
    const FrameFamilyReport r = verify_frame_family(n, g, kFrameResidualTol);
    o.worst = std::max({o.worst, r.max_unitarity_defect, r.max_basepoint_defect});
    o.expect(r.residuals_ok, "residuals on S^" + std::to_string(n));
  }
  auto drift = [&](const std::string& what, const std::vector<double>& moduli) {
    for (std::size_t i = 1; i < moduli.size(); ++i) {
      o.near(moduli[i], moduli[i - 1], kFrameDriftTol, true, what + " refinement " + std::to_string(i));
    }
  };
  std::vector<double> ico;
  for (int depth : {3, 4, 5}) ico.push_back(verify_frame_family(2, icosphere(depth)).continuity_modulus);
  drift("S^2 icosphere", ico);
  for (int n : {1, 3}) {
    std::vector<double> pairs;
    for (double h : {1e-3, 5e-4, 2.5e-4}) pairs.push_back(verify_frame_family(n, random_sphere_pairs(n, 10000, h, 99)).continuity_modulus);
    drift("S^" + std::to_string(n) + " random pairs", pairs);
  }
  const double elapsed = seconds_since(t0);
  o.expect(elapsed < kFrameSeconds, "runtime " + std::to_string(elapsed) + " s");
  return o;
}

Outcome containment() {
  Outcome o;
  for (int n : {2, 3}) {
    const SamplePlan plan = sphere_sample_plan(n, kContainmentSamples, 77);
    for (double a : {0.2, 0.5, 1.0}) {
      const ContainmentResult r = domain_contains(round_sphere_codisk(n, a), ellipsoid_codisk(n, a), plan);
      o.worst = std::max(o.worst, r.max_excess);
      o.expect(r.contained && r.samples_checked == kContainmentSamples,
               "n=" + std::to_string(n) + " a=" + std::to_string(a));
    }
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "ellipsoid bounds 2 pi a and 4 pi a", ellipsoid_one},
      {2, "diagonal-action ellipsoid bound 2 pi a", ellipsoid_two},
      {3, "camel threshold eps + 3 delta", camel},
      {4, "Klein bottle bound 2a", klein},
      {5, "property suites", properties},
      {6, "unitary frame family", frames},
      {7, "round codisk inside ellipsoid codisk", containment},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::printf("criterion %d: %s (%s; %d checks, worst deviation %.3g, %.2f s)\n", c.id, o.pass ? "PASS" : "FAIL",
                c.title, o.checks, o.worst, seconds_since(t0));
    for (const auto& f : o.failures) std::printf("  failed: %s\n", f.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
