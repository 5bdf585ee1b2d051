#pragma once

// Built-in scenarios: a domain, its loop families, the target classes and the
// tables the symbolic calculus needs to derive their bounds.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "stringcap/errors.hpp"
#include "stringcap/gauge.hpp"
#include "stringcap/loops.hpp"
#include "stringcap/stralg/context.hpp"
#include "stringcap/stralg/filtration.hpp"
#include "stringcap/target.hpp"

namespace stringcap {

/// Which number of which family a filtration symbol stands for.
struct BindingSelector {
  enum class Extremum { kSup, kInf };
  enum class Component { kTotal, kForward, kReverse };

  std::string family;
  Extremum extremum = Extremum::kSup;
  Component component = Component::kTotal;

  nlohmann::json to_json() const {
    static const char* comps[] = {"total", "forward", "reverse"};
    return {{"family", family},
            {"extremum", extremum == Extremum::kSup ? "sup" : "inf"},
            {"component", comps[static_cast<int>(component)]}};
  }
};

struct Scenario {
  std::string id;
  std::string kind;
  nlohmann::json parameters;  // constructor arguments; make_scenario rebuilds from these
  GaugeDomain domain;
  std::vector<LoopFamily> families;
  std::vector<TargetClass> targets;
  std::map<std::string, BindingSelector> symbolic_bindings;
  stralg::AlgebraContext algebra;
  std::map<std::string, std::string> route_labels;  // cycle labels used by the derivations
  bool boundary_nonempty = false;
  std::vector<std::string> notes;

  const LoopFamily& family(const std::string& name) const {
    for (const auto& f : families)
      if (f.name == name) return f;
    throw InvalidInputError("scenario " + id + " has no family '" + name + "'");
  }

  const TargetClass& target(const std::string& name_or_route) const {
    for (const auto& t : targets)
      if (t.name == name_or_route || t.route == name_or_route) return t;
    throw InvalidInputError("scenario " + id + " has no target '" + name_or_route + "'");
  }

  /// Every binding names a family of the scenario.
  void validate() const {
    for (const auto& [symbol, sel] : symbolic_bindings) {
      bool found = false;
      for (const auto& f : families) found = found || f.name == sel.family;
      if (!found) throw InvalidInputError("binding " + symbol + " refers to missing family " + sel.family);
    }
  }

  nlohmann::json to_json() const {
    using nlohmann::json;
    json fams = json::array();
    for (const auto& f : families) {
      json axes = json::array();
      for (const auto& a : f.params.axes) {
        axes.push_back({{"name", a.name}, {"lower", a.lower}, {"upper", a.upper}, {"samples", a.samples},
                        {"periodic", a.periodic}});
      }
      fams.push_back({{"name", f.name},
                      {"axes", axes},
                      {"grid_size", f.params.grid_size()},
                      {"singular_loops", f.singular_loops.size()},
                      {"objective", f.objective == LoopFamily::Objective::kForward ? "forward" : "forward+reverse"},
                      {"notes", f.notes}});
    }
    json targets_j = json::array();
    for (const auto& t : targets) targets_j.push_back(t.to_json());
    json bindings = json::object();
    for (const auto& [s, sel] : symbolic_bindings) bindings[s] = sel.to_json();
    return {{"id", id},
            {"kind", kind},
            {"parameters", parameters},
            {"domain", domain.metadata()},
            {"manifold", domain.base().manifold},
            {"families", fams},
            {"targets", targets_j},
            {"symbolic_bindings", bindings},
            {"boundary_nonempty", boundary_nonempty},
            {"notes", notes}};
  }
};

// ---------------------------------------------------------------------------
// Open books

struct PageSpec {
  enum class Kind { kDisk, kCircle };
  Kind kind = Kind::kDisk;
  int dim = 1;          // disk pages: dimension m of D^m
  double length = 1.0;  // circle pages: circumference

  static PageSpec disk(int m) { return {Kind::kDisk, m, 1.0}; }
  static PageSpec circle(double length) { return {Kind::kCircle, 1, length}; }
};

/// Radial profile phi of the page function f(v) = phi(|v|) on a disk page;
/// the open book is {(v, z) : phi(|v|) + |z|^2 = 1}.
struct PageFunction {
  enum class Kind { kRound, kPower, kCustom, kTrivial };
  Kind kind = Kind::kRound;
  double exponent = 2.0;
  std::function<double(double)> profile;
  std::string name = "round";

  static PageFunction round() { return {Kind::kRound, 2.0, [](double r) { return r * r; }, "round"}; }
  static PageFunction power(double p) {
    if (!(p > 0.0)) throw InvalidInputError("page function exponent must be positive");
    std::ostringstream os;
    os << "power(" << p << ")";
    return {Kind::kPower, p, [p](double r) { return std::pow(r, p); }, os.str()};
  }
  static PageFunction custom(std::string name, std::function<double(double)> phi) {
    return {Kind::kCustom, 0.0, std::move(phi), std::move(name)};
  }
  /// For closed pages (circle), where no function is needed.
  static PageFunction trivial() { return {Kind::kTrivial, 0.0, nullptr, "trivial"}; }

  /// phi(1) = 1 with phi'(1) != 0 (a regular level at the page boundary) and
  /// 0 <= phi < 1 inside.
  void check_regular_boundary() const {
    if (!profile) throw InvalidInputError("page function '" + name + "' has no regular level at the page boundary");
    constexpr double h = 1e-6;
    const double at_one = profile(1.0);
    const double slope = (at_one - profile(1.0 - h)) / h;
    if (!(std::abs(at_one - 1.0) <= 1e-12) || !(slope > 1e-6)) {
      throw InvalidInputError("page function '" + name + "' has no regular level at the page boundary");
    }
    for (int i = 0; i < 64; ++i) {
      const double r = i / 64.0;
      const double v = profile(r);
      if (!(v >= 0.0 && v < 1.0)) throw InvalidInputError("page function '" + name + "' must map [0,1) into [0,1)");
    }
  }
};

struct PageAction {
  enum class Kind {
    kTrivial,         // rotate the C factor only
    kRotatePagePair,  // also rotate the last two page coordinates (diagonal action)
  };
  Kind kind = Kind::kTrivial;
  static PageAction trivial() { return {Kind::kTrivial}; }
  static PageAction rotate_page_pair() { return {Kind::kRotatePagePair}; }
};

struct DomainSpec {
  std::vector<double> ambient_scales;  // disk pages: linear stretch of R^{m+2}; empty means unit
  double action_length = 1.0;          // circle pages: length of the orbit circle
  double radius = 1.0;                 // codisk radius
};

inline constexpr double kPageCollar = 1e-3;

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

/// Disk-page open book in ambient coordinates (v_1..v_m, Re z, Im z).
struct DiskOpenBook {
  int m = 1;
  PageFunction f;
  bool rotate_pair = false;
  ChartId chart;

  double fiber_radius(const std::vector<double>& v) const {
    double r2 = 0.0;
    for (double x : v) r2 += x * x;
    return std::sqrt(std::max(0.0, 1.0 - f.profile(std::min(1.0, std::sqrt(r2)))));
  }

  /// Orbit of the page point v, traversed with orientation `sign`.
  Loop orbit(const std::vector<double>& v, int sign, const std::string& label) const {
    const double s = fiber_radius(v);
    const int m_ = m;
    const bool rp = rotate_pair;
    const ChartId c = chart;
    auto coords = [v, s, sign, m_, rp](double t) {
      const double phi = 2.0 * std::numbers::pi * sign * t;
      Vec q(m_ + 2);
      for (int i = 0; i < m_; ++i) q[i] = v[static_cast<std::size_t>(i)];
      if (rp) {
        const double x = v[static_cast<std::size_t>(m_ - 2)], y = v[static_cast<std::size_t>(m_ - 1)];
        q[m_ - 2] = std::cos(phi) * x - std::sin(phi) * y;
        q[m_ - 1] = std::sin(phi) * x + std::cos(phi) * y;
      }
      q[m_] = s * std::cos(phi);
      q[m_ + 1] = s * std::sin(phi);
      return q;
    };
    auto point_fn = [coords, c](double t) { return make_point(c, coords(t)); };
    auto deriv_fn = [coords, sign, m_, rp](double t) {
      const Vec q = coords(t);
      const double w = 2.0 * std::numbers::pi * sign;
      Vec d = Vec::Zero(m_ + 2);
      if (rp) {
        d[m_ - 2] = -w * q[m_ - 1];
        d[m_ - 1] = w * q[m_ - 2];
      }
      d[m_] = -w * q[m_ + 1];
      d[m_ + 1] = w * q[m_];
      return d;
    };
    return Loop(chart, point_fn, Loop::DerivFn(deriv_fn), label);
  }
};

inline std::string vec_label(const std::vector<double>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace detail

/// Open book with trivial monodromy: for a disk page D^m the manifold
/// {(v, z) in R^m x C : phi(|v|) + |z|^2 = 1}; for a circle page the torus
/// V x R/Z. The circle action rotates z (and optionally a page pair).
inline Scenario open_book_scenario(const PageSpec& page, const PageFunction& f, const PageAction& action,
                                   const DomainSpec& dom) {
  using stralg::FiltExpr;
  const bool rotate_pair = action.kind == PageAction::Kind::kRotatePagePair;
  std::vector<LoopFamily> families;
  std::optional<GaugeDomain> domain;
  nlohmann::json params;
  bool boundary = false;
  int manifold_dim = 0;
  std::string manifold;

  if (page.kind == PageSpec::Kind::kDisk) {
    const int m = page.dim;
    if (m < 1) throw InvalidInputError("disk page dimension must be >= 1");
    if (m + 2 > kMaxDim) throw InvalidInputError("page dimension too large");
    if (rotate_pair && m < 2) throw InvalidInputError("rotating a page pair needs a page of dimension >= 2");
    f.check_regular_boundary();
    std::vector<double> scales = dom.ambient_scales.empty() ? std::vector<double>(static_cast<std::size_t>(m + 2), 1.0)
                                                             : dom.ambient_scales;
    if (static_cast<int>(scales.size()) != m + 2) throw InvalidInputError("need m + 2 ambient scales");
    for (double s : scales)
      if (!(s > 0.0)) throw InvalidInputError("ambient scales must be positive");
    boundary = true;
    manifold_dim = m + 1;
    const bool round = f.kind == PageFunction::Kind::kRound;
    const ChartId chart = round ? ChartId::sphere(m + 1) : ChartId::embedded(m + 2);
    manifold = round ? "S^" + std::to_string(m + 1) : "OB(D^" + std::to_string(m) + ", " + f.name + ")";

    Mat d = Mat::Zero(m + 2, m + 2);
    for (int i = 0; i < m + 2; ++i) d(i, i) = scales[static_cast<std::size_t>(i)];
    std::ostringstream meta;
    meta << "codisk bundle (radius " << dom.radius << ") of the metric pulled back by diag(";
    for (int i = 0; i < m + 2; ++i) meta << (i ? ", " : "") << scales[static_cast<std::size_t>(i)];
    meta << ") on " << manifold;
    domain = codisk_bundle(BaseDescriptor{manifold, chart},
                           MetricSpec::linear(MetricSpec::Kind::kEmbeddingInduced, d, dom.radius, meta.str()),
                           meta.str());

    const detail::DiskOpenBook book{m, f, rotate_pair, chart};
    ParamSpace space;
    const int samples = default_axis_samples(m);
    for (int i = 0; i < m; ++i) space.axes.push_back({"u" + std::to_string(i + 1), -1.0, 1.0, samples, false});

    std::vector<std::vector<double>> binding_points;
    for (int i = 0; i < m; ++i) {
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> b(static_cast<std::size_t>(m), 0.0);
        b[static_cast<std::size_t>(i)] = sgn;
        binding_points.push_back(b);
      }
    }
    auto make_family = [&](const std::string& name, int sign) {
      LoopFamily fam;
      fam.name = name;
      fam.params = space;
      fam.loop_at = [book, sign, name](const std::vector<double>& u) {
        const std::vector<double> v = cube_to_ball(u, kPageCollar);
        return book.orbit(v, sign, name + " orbit through page point " + detail::vec_label(v));
      };
      for (const auto& b : binding_points) {
        fam.singular_loops.push_back(book.orbit(b, sign, name + " binding orbit at " + detail::vec_label(b)));
      }
      fam.notes = "page grid excludes a collar of width " + detail::fmt(kPageCollar) +
                  " at the binding; binding orbits are included explicitly";
      return fam;
    };
    if (rotate_pair) {
      families.push_back(make_family("L_A", 1));
    } else {
      families.push_back(make_family("L_+", 1));
      families.push_back(make_family("L_-", -1));
    }
    params["page"] = {{"kind", "disk"}, {"dim", m}};
    params["function"] = {{"kind", f.kind == PageFunction::Kind::kRound   ? "round"
                                   : f.kind == PageFunction::Kind::kPower ? "power"
                                                                          : "custom"},
                          {"name", f.name},
                          {"exponent", f.exponent}};
    params["domain"] = {{"ambient_scales", scales}, {"radius", dom.radius}};
  } else {
    if (f.kind != PageFunction::Kind::kTrivial) {
      throw InvalidInputError("circle pages are closed and take the trivial page function");
    }
    if (rotate_pair) throw InvalidInputError("a circle page has no coordinate pair to rotate");
    if (!(page.length > 0.0) || !(dom.action_length > 0.0)) throw InvalidInputError("circle lengths must be positive");
    manifold_dim = 2;
    manifold = "T^2";
    domain = flat_torus_codisk({page.length, dom.action_length}, dom.radius);
    const ChartId chart = ChartId::torus(2);
    ParamSpace space;
    space.axes.push_back({"u", 0.0, 1.0, default_axis_samples(1), true});
    auto make_family = [&](const std::string& name, double sign) {
      LoopFamily fam;
      fam.name = name;
      fam.params = space;
      fam.loop_at = [chart, sign, name](const std::vector<double>& p) {
        const double u = p[0];
        return Loop(
            chart, [chart, u, sign](double t) { return make_point(chart, make_vec({u, sign * t})); },
            Loop::DerivFn([sign](double) { return make_vec({0.0, sign}); }),
            name + " orbit through u = " + detail::fmt(u));
      };
      return fam;
    };
    families.push_back(make_family("L_+", 1.0));
    families.push_back(make_family("L_-", -1.0));
    params["page"] = {{"kind", "circle"}, {"length", page.length}};
    params["function"] = {{"kind", "trivial"}};
    params["domain"] = {{"action_length", dom.action_length}, {"radius", dom.radius}};
  }
  params["action"] = rotate_pair ? "rotate_page_pair" : "trivial";

  Scenario s{.id = "openbook",
             .kind = "openbook",
             .parameters = params,
             .domain = *domain,
             .families = std::move(families),
             .targets = {},
             .symbolic_bindings = {},
             .algebra = {},
             .route_labels = {},
             .boundary_nonempty = boundary,
             .notes = {}};
  std::ostringstream id;
  id << "openbook(" << manifold << ", " << (rotate_pair ? "diagonal" : "trivial") << " action)";
  s.id = id.str();

  auto& ctx = s.algebra;
  ctx.manifold_dim = manifold_dim;
  ctx.label_dims["pt"] = 0;
  using Sel = BindingSelector;
  if (rotate_pair) {
    s.symbolic_bindings["E_A"] = {"L_A", Sel::Extremum::kSup, Sel::Component::kTotal};
    ctx.axioms.insert("OB_BV2");
    ctx.bv_rules["hopf"] = "OB_BV2";
    s.targets.push_back({"[pt]", "PD(T*M)", "ellipsoid2.pt",
                         "a point pairs with the Poincare dual of the whole cotangent bundle"});
  } else {
    s.symbolic_bindings["E_+"] = {"L_+", Sel::Extremum::kSup, Sel::Component::kTotal};
    s.symbolic_bindings["E_-"] = {"L_-", Sel::Extremum::kSup, Sel::Component::kTotal};
    s.symbolic_bindings["e_+"] = {"L_+", Sel::Extremum::kInf, Sel::Component::kTotal};
    s.symbolic_bindings["e_-"] = {"L_-", Sel::Extremum::kInf, Sel::Component::kTotal};
    ctx.axioms.insert("ACTION_IS_BV");
    ctx.bv_rules["ob"] = "ACTION_IS_BV";
    s.targets.push_back({"[pt]", "PD(T*M)", "ob1.pt",
                         "a point pairs with the Poincare dual of the whole cotangent bundle"});
    if (boundary) {
      ctx.axioms.insert("BINDING_CONTRACT");
      ctx.fixed_cycles["ob"] = {"pt"};
      s.targets.push_back({"[M]", "T*M_pt", "ob1.M", "the zero section meets a cotangent fiber once"});
      s.notes.push_back("binding is nonempty: the point class is taken on the binding, where orbits are constant");
    } else {
      ctx.rotations["pt"] = "zeta(pt)";
      ctx.label_dims["zeta(pt)"] = 1;
      ctx.thom["T*M|zeta(pt)"] = "zeta(pt)";
      s.targets.push_back({"[V]", "T*M|zeta(pt)", "ob1.V", "a page meets an orbit of the circle action once"});
    }
  }
  s.notes.push_back("reported thresholds are computed suprema; the strict level l < c is below tolerance");
  s.validate();
  return s;
}

inline Scenario open_book_scenario(const PageSpec& page, const PageFunction& f, const PageAction& action) {
  return open_book_scenario(page, f, action, DomainSpec{});
}

// ---------------------------------------------------------------------------
// Ellipsoids

/// Unit codisk bundle of S^n with the metric of
/// {x_0^2 + ... + x_{n-2}^2 + (x_{n-1}^2 + x_n^2)/a^2 = 1}, as an open book with page D^{n-1}.
inline Scenario ellipsoid_scenario(int n, double a) {
  if (n < 2) throw InvalidInputError("ellipsoid scenario needs n >= 2");
  if (!(a > 0.0 && a <= 1.0)) throw InvalidInputError("ellipsoid parameter a must lie in (0, 1]");
  DomainSpec dom;
  dom.ambient_scales.assign(static_cast<std::size_t>(n + 1), 1.0);
  dom.ambient_scales[static_cast<std::size_t>(n - 1)] = a;
  dom.ambient_scales[static_cast<std::size_t>(n)] = a;
  Scenario s = open_book_scenario(PageSpec::disk(n - 1), PageFunction::round(), PageAction::trivial(), dom);
  s.domain = ellipsoid_codisk(n, a);
  s.kind = "ellipsoid1";
  s.id = "ellipsoid1(n=" + std::to_string(n) + ", a=" + detail::fmt(a) + ")";
  s.parameters = {{"n", n}, {"a", a}};
  for (auto& t : s.targets)
    if (t.route == "ob1.M") t.name = "[S^" + std::to_string(n) + "]";
  s.notes.push_back("E_+ = E_- by the reflection z -> conj(z), which maps L_+ onto L_-");
  return s;
}

/// S^n with the last four ambient axes stretched by a, as an open book whose
/// circle action rotates the last page pair and the C factor together.
inline Scenario ellipsoid2_scenario(int n, double a) {
  if (n < 3) throw InvalidInputError("ellipsoid2 scenario needs n >= 3");
  if (!(a > 0.0 && a <= 1.0)) throw InvalidInputError("ellipsoid parameter a must lie in (0, 1]");
  DomainSpec dom;
  dom.ambient_scales.assign(static_cast<std::size_t>(n + 1), 1.0);
  for (int i = n - 3; i <= n; ++i) dom.ambient_scales[static_cast<std::size_t>(i)] = a;
  Scenario s = open_book_scenario(PageSpec::disk(n - 1), PageFunction::round(), PageAction::rotate_page_pair(), dom);
  s.domain = ellipsoid_codisk(n, a, 4);
  s.kind = "ellipsoid2";
  s.id = "ellipsoid2(n=" + std::to_string(n) + ", a=" + detail::fmt(a) + ")";
  s.parameters = {{"n", n}, {"a", a}};
  s.algebra.axioms.insert("HOPF_CONTRACT");
  s.algebra.contractible_actions["hopf"] = stralg::FiltExpr::symbol("E_A");
  s.notes.push_back("the diagonal action on the stretched C^2 factor is homotopic to the trivial action through "
                    "loops no longer than its orbits, whose maximal length is E_A");
  return s;
}

// ---------------------------------------------------------------------------
// Products with tori

namespace detail {

inline std::string product_label(std::initializer_list<std::pair<std::string, int>> parts) {
  // adjacent factors with the same base merge: 0^k x 0 -> 0^{k+1}
  std::vector<std::pair<std::string, int>> merged;
  for (const auto& [base, exp] : parts) {
    if (exp <= 0) continue;
    if (!merged.empty() && merged.back().first == base && base != "V") {
      merged.back().second += exp;
    } else {
      merged.emplace_back(base, exp);
    }
  }
  std::string s;
  for (const auto& [base, exp] : merged) s += (s.empty() ? "" : "x") + (base == "V" ? base : base + "^" + std::to_string(exp));
  return s.empty() ? "pt" : s;
}

}  // namespace detail

/// M = V x T^d with V = T^m (m = 0 for a point). Families L_- and L_+^k.
inline Scenario product_torus_scenario(int m, int d, int k, const GaugeDomain& domain) {
  if (m < 0 || d < 1) throw InvalidInputError("product torus needs m >= 0 and d >= 1");
  if (k < 0 || k >= d) throw InvalidInputError("product torus needs 0 <= k < d");
  const int dim = m + d;
  const ChartId chart = ChartId::torus(dim);
  if (!(domain.chart() == chart)) throw ChartMismatchError("domain does not live on T^" + std::to_string(dim));

  auto periodic_axes = [](int count, const std::string& prefix, int first_index, int samples) {
    std::vector<ParamAxis> axes;
    for (int i = 0; i < count; ++i) axes.push_back({prefix + std::to_string(first_index + i), 0.0, 1.0, samples, true});
    return axes;
  };

  std::vector<LoopFamily> families;
  {
    LoopFamily fam;
    fam.name = "L_-";
    const int pdim = m + d - 1;
    const int samples = default_axis_samples(pdim);
    for (auto& a : periodic_axes(m, "v", 1, samples)) fam.params.axes.push_back(a);
    for (auto& a : periodic_axes(d - 1, "x", 1, samples)) fam.params.axes.push_back(a);
    fam.loop_at = [chart, dim](const std::vector<double>& p) {
      Vec base(dim);
      for (int i = 0; i < dim - 1; ++i) base[i] = p[static_cast<std::size_t>(i)];
      base[dim - 1] = 0.0;
      return Loop(
          chart,
          [chart, base, dim](double t) {
            Vec q = base;
            q[dim - 1] = -t;
            return make_point(chart, q);
          },
          Loop::DerivFn([dim](double) {
            Vec v = Vec::Zero(dim);
            v[dim - 1] = -1.0;
            return v;
          }),
          "L_- loop through " + detail::vec_label(p));
    };
    families.push_back(std::move(fam));
  }
  const std::string plus_name = "L_+^" + std::to_string(k);
  {
    LoopFamily fam;
    fam.name = plus_name;
    const int free = d - k - 1;
    const int samples = default_axis_samples(m + free);
    for (auto& a : periodic_axes(m, "v", 1, samples)) fam.params.axes.push_back(a);
    for (auto& a : periodic_axes(free, "x", k + 1, samples)) fam.params.axes.push_back(a);
    std::uint32_t pinned = 0;
    for (int i = 0; i < k; ++i) pinned |= 1u << (m + i);
    fam.loop_at = [chart, dim, m, k, free, pinned, plus_name](const std::vector<double>& p) {
      Vec base = Vec::Zero(dim);
      for (int i = 0; i < m; ++i) base[i] = p[static_cast<std::size_t>(i)];
      for (int i = 0; i < free; ++i) base[m + k + i] = p[static_cast<std::size_t>(m + i)];
      return Loop(
          chart,
          [chart, base, dim, pinned](double t) {
            Vec q = base;
            q[dim - 1] = t;
            return make_point(chart, q, pinned);
          },
          Loop::DerivFn([dim](double) {
            Vec v = Vec::Zero(dim);
            v[dim - 1] = 1.0;
            return v;
          }),
          plus_name + " loop through " + detail::vec_label(p));
    };
    if (k > 0) fam.notes = "the first " + std::to_string(k) + " torus coordinates vanish identically along the family";
    families.push_back(std::move(fam));
  }

  std::ostringstream id;
  id << "product_torus(m=" << m << ", d=" << d << ", k=" << k << ")";
  Scenario s{.id = id.str(),
             .kind = "product-torus",
             .parameters = {{"m", m}, {"d", d}, {"k", k}},
             .domain = domain,
             .families = std::move(families),
             .targets = {},
             .symbolic_bindings = {},
             .algebra = {},
             .route_labels = {},
             .boundary_nonempty = false,
             .notes = {}};
  using Sel = BindingSelector;
  const std::string plus_symbol = "E_+^" + std::to_string(k);
  s.symbolic_bindings["E_-"] = {"L_-", Sel::Extremum::kSup, Sel::Component::kTotal};
  s.symbolic_bindings[plus_symbol] = {plus_name, Sel::Extremum::kSup, Sel::Component::kTotal};

  const std::string g_minus = detail::product_label({{"V", m}, {"T", d - 1}, {"0", 1}});
  const std::string g_plus = detail::product_label({{"V", m}, {"0", k}, {"T", d - k - 1}, {"0", 1}});
  // with k = 0 both families start on the same cycle and L_+ sweeps out the whole manifold
  const std::string swept_plus =
      k == 0 ? stralg::AlgebraContext{}.manifold : detail::product_label({{"V", m}, {"0", k}, {"T", d - k}});
  s.route_labels = {{"g_minus", g_minus}, {"g_plus", g_plus}, {"swept_plus", swept_plus},
                    {"E_minus", "E_-"},   {"E_plus", plus_symbol}};
  auto& ctx = s.algebra;
  ctx.manifold_dim = dim;
  ctx.rotations[g_minus] = ctx.manifold;
  ctx.rotations[g_plus] = swept_plus;  // same entry as g_minus when k = 0
  ctx.label_dims[g_minus] = dim - 1;
  ctx.label_dims[g_plus] = dim - k - 1;
  ctx.label_dims[swept_plus] = dim - k;
  const std::string beta = "T*M|" + swept_plus;
  ctx.thom[beta] = swept_plus;
  s.targets.push_back({"[T^" + std::to_string(k) + "]", beta, "prod_torus.Tk",
                       "the torus x -> (v0, x_1..x_k, 0..0) meets " + swept_plus + " in one point"});
  s.notes.push_back("reported thresholds are computed suprema; the strict level l < c is below tolerance");
  s.validate();
  return s;
}

/// Flat product torus with per-axis lengths (V = T^m first, then T^d).
inline Scenario product_torus_scenario(int m, int d, int k, const std::vector<double>& lengths, double radius = 1.0) {
  if (static_cast<int>(lengths.size()) != m + d) throw InvalidInputError("need m + d axis lengths");
  Scenario s = product_torus_scenario(m, d, k, flat_torus_codisk(lengths, radius));
  s.parameters["lengths"] = lengths;
  s.parameters["radius"] = radius;
  return s;
}

/// Camel domain on T*T^n with V = pt, d = n and k = 1.
inline Scenario camel_scenario(int n, double eps, double delta) {
  if (n < 2) throw InvalidInputError("camel scenario needs n > 1");
  if (!(eps > 0.0)) throw InvalidInputError("camel scenario needs eps > 0");
  if (!(delta > 0.0)) throw InvalidInputError("camel scenario needs delta > 0");
  Scenario s = product_torus_scenario(0, n, 1, camel_domain(n, eps, delta));
  s.kind = "camel";
  s.id = "camel(n=" + std::to_string(n) + ", eps=" + detail::fmt(eps) + ", delta=" + detail::fmt(delta) + ")";
  s.parameters = {{"n", n}, {"eps", eps}, {"delta", delta}};
  s.notes.push_back("the slice q_1 = 0 is evaluated exactly through the pinned-coordinate flag of L_+^1");
  return s;
}

// ---------------------------------------------------------------------------
// Klein bottle

/// Flat Klein bottle R^2 / <(x,y)->(x+a,-y), (x,y)->(x,y+b)>, in unit
/// coordinates of the fundamental domain. The family consists of the straight
/// orientation-reversing loops of x-winding one, parametrized by basepoint.
inline Scenario klein_bottle_scenario(double a, double b, double radius = 1.0) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInputError("Klein bottle needs a > 0 and b > 0");
  const ChartId chart = ChartId::klein_bottle();
  LoopFamily fam;
  fam.name = "L";
  fam.objective = LoopFamily::Objective::kForwardPlusReverse;
  fam.params.axes = {{"x0", 0.0, 1.0, kDefaultAxisSamples, true}, {"y0", 0.0, 1.0, kDefaultAxisSamples, true}};
  fam.loop_at = [chart](const std::vector<double>& p) {
    const double x0 = p[0], y0 = p[1];
    // closes after the glide (x, y) -> (x + 1, -y) composed with y -> y + m
    const double c = std::round(2.0 * y0) - 2.0 * y0;
    return Loop(
        chart, [chart, x0, y0, c](double t) { return make_point(chart, make_vec({x0 + t, y0 + c * t})); },
        Loop::DerivFn([c](double) { return make_vec({1.0, c}); }),
        "straight orientation-reversing loop through " + detail::vec_label(p));
  };
  fam.notes = "restricted to straight loops of the flat structure";

  std::ostringstream id;
  id << "klein(a=" << a << ", b=" << b << ", r=" << radius << ")";
  Scenario s{.id = id.str(),
             .kind = "klein",
             .parameters = {{"a", a}, {"b", b}, {"radius", radius}},
             .domain = flat_klein_codisk(a, b, radius),
             .families = {std::move(fam)},
             .targets = {},
             .symbolic_bindings = {},
             .algebra = {},
             .route_labels = {},
             .boundary_nonempty = false,
             .notes = {}};
  using Sel = BindingSelector;
  s.symbolic_bindings["E"] = {"L", Sel::Extremum::kInf, Sel::Component::kTotal};
  s.symbolic_bindings["E_q"] = {"L", Sel::Extremum::kInf, Sel::Component::kForward};
  s.symbolic_bindings["E_qbar"] = {"L", Sel::Extremum::kInf, Sel::Component::kReverse};
  auto& ctx = s.algebra;
  ctx.manifold_dim = 2;
  ctx.axioms.insert("NONORIENT_PAIR");
  ctx.nonorientable_loops.insert("q");
  ctx.label_dims["pt"] = 0;
  s.targets.push_back({"[Sigma]", "T*M_pt", "non_orientable.Sigma", "the zero section meets a cotangent fiber once"});
  s.notes.push_back(
      "q is the minimizer of l(q) + l(rev q) over straight loops; for a flat metric straight loops realize the "
      "infimum over the free homotopy class");
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Rebuilding scenarios from their JSON description

namespace detail {

template <class T>
T param_or(const nlohmann::json& p, const char* name, T fallback) {
  return p.contains(name) ? p.at(name).get<T>() : fallback;
}

}  // namespace detail

/// Builds a scenario from {"kind": ..., "parameters": {...}} as produced by Scenario::to_json.
inline Scenario make_scenario(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const nlohmann::json p = j.value("parameters", nlohmann::json::object());
  using detail::param_or;
  if (kind == "ellipsoid1" || kind == "ellipsoid2") {
    const int n = p.at("n").get<int>();
    const double a = p.at("a").get<double>();
    Scenario s = kind == "ellipsoid1" ? ellipsoid_scenario(n, a) : ellipsoid2_scenario(n, a);
    const double radius = param_or(p, "radius", 1.0);
    if (radius != 1.0) {
      s.domain = scaled_domain(s.domain, radius);
      s.parameters["radius"] = radius;
    }
    return s;
  }
  if (kind == "camel") {
    return camel_scenario(p.at("n").get<int>(), p.at("eps").get<double>(), p.at("delta").get<double>());
  }
  if (kind == "klein") {
    return klein_bottle_scenario(p.at("a").get<double>(), p.at("b").get<double>(), param_or(p, "radius", 1.0));
  }
  if (kind == "product-torus") {
    const int m = param_or(p, "m", 0), d = p.at("d").get<int>(), k = p.at("k").get<int>();
    const auto lengths = param_or(p, "lengths", std::vector<double>(static_cast<std::size_t>(m + d), 1.0));
    return product_torus_scenario(m, d, k, lengths, param_or(p, "radius", 1.0));
  }
  if (kind == "openbook") {
    const auto& page = p.at("page");
    const auto& dom_j = p.value("domain", nlohmann::json::object());
    DomainSpec dom;
    dom.radius = param_or(dom_j, "radius", 1.0);
    const PageAction action =
        p.value("action", std::string("trivial")) == "rotate_page_pair" ? PageAction::rotate_page_pair() : PageAction::trivial();
    if (page.at("kind").get<std::string>() == "circle") {
      dom.action_length = param_or(dom_j, "action_length", 1.0);
      return open_book_scenario(PageSpec::circle(page.at("length").get<double>()), PageFunction::trivial(), action,
                                dom);
    }
    dom.ambient_scales = param_or(dom_j, "ambient_scales", std::vector<double>{});
    const auto& fj = p.value("function", nlohmann::json{{"kind", "round"}});
    const std::string fk = fj.at("kind").get<std::string>();
    PageFunction f = PageFunction::round();
    if (fk == "power") {
      f = PageFunction::power(fj.at("exponent").get<double>());
    } else if (fk != "round") {
      throw InvalidInputError("page function kind '" + fk + "' cannot be rebuilt from JSON");
    }
    return open_book_scenario(PageSpec::disk(page.at("dim").get<int>()), f, action, dom);
  }
  throw InvalidInputError("unknown scenario kind '" + kind + "'");
}

}  // namespace stringcap
