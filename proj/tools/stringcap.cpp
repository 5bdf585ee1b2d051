// stringcap: certified upper bounds on Gromov widths of fiberwise starshaped
// domains, from the command line.
//
//   stringcap bound [config.json] [--scenario S --n N ...]
//   stringcap certify --scenario S [--target T]
//   stringcap reproduce <table|all>
//   stringcap frames --n N [--count C]
//   stringcap schema
//
// Exit codes: 0 success, 1 certificate check failed, 2 invalid input,
// 3 numeric failure or missing axiom.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "stringcap/bounds.hpp"
#include "stringcap/config.hpp"
#include "stringcap/frames.hpp"
#include "stringcap/reproduce.hpp"
#include "stringcap/stralg/certificate.hpp"
#include "stringcap/stralg/derive.hpp"
#include "stringcap_schema.hpp"  // generated from schemas/run_config.schema.json

namespace {

using nlohmann::json;
using namespace stringcap;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

// Flag values; each is applied only if the flag was given.
struct Flags {
  std::string config_path;
  std::string scenario;
  int n = 0, k = 0, d = 0, m = 0;
  double a = 0, b = 0, eps = 0, delta = 0, radius = 0;
  int quad_panels = 0, refine_budget = 0;
  std::uint64_t seed = 0;
  std::string out, format;
  std::string target;
  std::string table;
  std::size_t count = 1000;
};

struct FlagOptions {
  CLI::Option *scenario = nullptr, *n = nullptr, *k = nullptr, *d = nullptr, *m = nullptr, *a = nullptr,
              *b = nullptr, *eps = nullptr, *delta = nullptr, *radius = nullptr, *quad_panels = nullptr,
              *refine_budget = nullptr, *seed = nullptr, *out = nullptr, *format = nullptr;
};

void add_scenario_flags(CLI::App* cmd, Flags& f, FlagOptions& o) {
  o.scenario = cmd->add_option("--scenario", f.scenario, "ellipsoid1, ellipsoid2, camel, klein, product-torus, "
                                                          "openbook-s2, openbook-torus or openbook-rotate");
  o.n = cmd->add_option("--n", f.n, "Dimension parameter n");
  o.a = cmd->add_option("--a", f.a, "Axis parameter a");
  o.b = cmd->add_option("--b", f.b, "Second Klein bottle length b");
  o.eps = cmd->add_option("--eps", f.eps, "Camel hole size");
  o.delta = cmd->add_option("--delta", f.delta, "Camel wall slack");
  o.k = cmd->add_option("--k", f.k, "Rank k of the torus class");
  o.d = cmd->add_option("--d", f.d, "Torus dimension d");
  o.radius = cmd->add_option("--radius", f.radius, "Codisk radius");
}

void add_run_flags(CLI::App* cmd, Flags& f, FlagOptions& o) {
  o.quad_panels = cmd->add_option("--quad-panels", f.quad_panels, "Initial Simpson panel count (even, >= 8)");
  o.refine_budget = cmd->add_option("--refine-budget", f.refine_budget, "Evaluations per refinement (0 disables)");
  o.seed = cmd->add_option("--seed", f.seed, "Seed for sampled plans");
  o.out = cmd->add_option("--out", f.out, "Output file (default: standard output)");
  o.format = cmd->add_option("--format", f.format, "json, csv or text");
}

// The config file first, then every flag that was given on top of it.
RunConfig resolve_config(const Flags& f, const FlagOptions& o) {
  RunConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw ConfigError("cannot read config file '" + f.config_path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config file '" + f.config_path + "' is not valid JSON: " + e.what());
    }
    c = config_from_json(j);
  }
  auto given = [](const CLI::Option* opt) { return opt && opt->count() > 0; };
  if (given(o.scenario)) c.scenario = f.scenario;
  if (given(o.n)) c.params.n = f.n;
  if (given(o.k)) c.params.k = f.k;
  if (given(o.d)) c.params.d = f.d;
  if (given(o.m)) c.params.m = f.m;
  if (given(o.a)) c.params.a = f.a;
  if (given(o.b)) c.params.b = f.b;
  if (given(o.eps)) c.params.eps = f.eps;
  if (given(o.delta)) c.params.delta = f.delta;
  if (given(o.radius)) c.params.radius = f.radius;
  if (given(o.quad_panels)) c.quad_panels = f.quad_panels;
  if (given(o.refine_budget)) c.refine_budget = f.refine_budget;
  if (given(o.seed)) c.seed = f.seed;
  if (given(o.out)) c.out = f.out;
  if (given(o.format)) c.format = f.format;
  if (c.scenario.empty()) throw ConfigError("no scenario given (use --scenario or a config file)");
  validate(c);
  return c;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write '" + path + "'");
  out << text;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

std::string bounds_csv(const std::vector<CapacityBound>& bounds) {
  std::ostringstream os;
  os << "scenario,target,gr_symbol,bound_expression,upper_bound,tolerance,equality_known,known_value\n";
  for (const auto& b : bounds) {
    os << csv_escape(b.scenario_id) << ',' << csv_escape(b.target.name) << ',' << csv_escape(b.gr_symbol) << ','
       << csv_escape(b.certificate.bound_expression()) << ',' << fmt(b.upper_bound) << ',' << fmt(b.tolerance) << ','
       << (b.equality_known ? "true" : "false") << ',' << (b.known_value ? fmt(*b.known_value) : "") << '\n';
  }
  return os.str();
}

std::string bounds_text(const std::vector<CapacityBound>& bounds) {
  std::ostringstream os;
  for (const auto& b : bounds) {
    os << b.gr_symbol << " <= " << b.certificate.bound_expression() << " = " << fmt(b.upper_bound) << " (+/- "
       << fmt(b.tolerance) << ")";
    if (b.equality_known) os << ", equality";
    os << "  [" << b.scenario_id << "]\n";
  }
  return os.str();
}

int cmd_bound(const RunConfig& c) {
  const Scenario s = build_scenario(c);
  const std::vector<CapacityBound> bounds = compute_bounds(s, c.bound_options());

  json certs = json::array();
  for (const auto& b : bounds) certs.push_back(stralg::to_json(b.certificate));
  if (c.format == "json") {
    json bs = json::array();
    for (const auto& b : bounds) bs.push_back(b.to_json());
    const json doc{{"config", config_to_json(c)}, {"scenario", s.to_json()}, {"bounds", bs}, {"certificates", certs}};
    write_output(c.out, doc.dump(2) + "\n");
  } else {
    write_output(c.out, c.format == "csv" ? bounds_csv(bounds) : bounds_text(bounds));
    if (!c.out.empty()) write_output(c.out + ".certificates.json", certs.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_certify(const RunConfig& c, const std::string& target) {
  const Scenario s = build_scenario(c);
  std::vector<TargetClass> targets;
  if (target.empty()) {
    targets = s.targets;
  } else {
    targets.push_back(s.target(target));
  }
  json out = json::array();
  bool passed = true;
  for (const auto& t : targets) {
    const stralg::Certificate cert = stralg::derive_certificate(s, t);
    const stralg::CertificateCheck check = stralg::check_certificate(cert);
    passed = passed && check.passed;
    out.push_back({{"certificate", stralg::to_json(cert)}, {"check", check.to_json()}});
    if (!check.passed) {
      for (const auto& f : check.failures) std::cerr << "certificate for " << t.name << ": " << f << "\n";
    }
  }
  write_output(c.out, out.dump(2) + "\n");
  return passed ? kExitOk : kExitCheckFailed;
}

int cmd_reproduce(const std::string& table, const RunConfig& c) {
  const std::vector<ReproRow> rows = reproduce(table, c.bound_options());
  bool all_pass = true;
  for (const auto& r : rows) all_pass = all_pass && r.pass;
  if (c.format == "json") {
    json j = json::array();
    for (const auto& r : rows) j.push_back(r.to_json());
    write_output(c.out, j.dump(2) + "\n");
  } else {
    write_output(c.out, rows_to_csv(rows));
  }
  if (!all_pass) std::cerr << "some rows are outside their tolerance\n";
  return all_pass ? kExitOk : kExitNumeric;
}

int cmd_frames(int n, std::size_t count, std::uint64_t seed, const std::string& out) {
  SphereGrid g;
  g.points = random_sphere_points(n, count, seed);
  const FrameFamilyReport r = verify_frame_family(n, g);
  json frames = json::array();
  for (const auto& q : g.points) {
    const UnitaryFrame f = sphere_unitary_frame(n, q);
    json re = json::array(), im = json::array();
    for (int i = 0; i < f.matrix.rows(); ++i) {
      json rr = json::array(), ii = json::array();
      for (int j = 0; j < f.matrix.cols(); ++j) {
        rr.push_back(f.matrix(i, j).real());
        ii.push_back(f.matrix(i, j).imag());
      }
      re.push_back(rr);
      im.push_back(ii);
    }
    frames.push_back({{"q", std::vector<double>(q.data(), q.data() + q.size())}, {"re", re}, {"im", im}});
  }
  write_output(out, json{{"report", r.to_json()}, {"frames", frames}}.dump(2) + "\n");
  return r.residuals_ok ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified Gromov width bounds for fiberwise starshaped domains"};
  app.require_subcommand(1);
  Flags f;

  FlagOptions bound_opts;
  CLI::App* bound = app.add_subcommand("bound", "Compute the bounds of a scenario");
  bound->add_option("config", f.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  add_scenario_flags(bound, f, bound_opts);
  add_run_flags(bound, f, bound_opts);

  FlagOptions certify_opts;
  CLI::App* certify = app.add_subcommand("certify", "Derive and replay certificates for a scenario's targets");
  add_scenario_flags(certify, f, certify_opts);
  certify->add_option("--target", f.target, "Target name or route (default: all targets)");
  certify_opts.out = certify->add_option("--out", f.out, "Output file (default: standard output)");

  FlagOptions repro_opts;
  CLI::App* repro = app.add_subcommand("reproduce", "Regression table against closed-form values");
  repro->add_option("table", f.table, "Table id or 'all'")->required();
  add_run_flags(repro, f, repro_opts);

  CLI::App* frames = app.add_subcommand("frames", "Dump and check the unitary frame family on S^n");
  int frame_n = 2;
  frames->add_option("--n", frame_n, "Sphere dimension")->required()->check(CLI::Range(1, 64));
  frames->add_option("--count", f.count, "Number of random points")->check(CLI::Range(1, 1000000));
  frames->add_option("--seed", f.seed, "Seed for the random points");
  frames->add_option("--out", f.out, "Output file (default: standard output)");

  CLI::App* schema = app.add_subcommand("schema", "Print the run configuration schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*bound) return cmd_bound(resolve_config(f, bound_opts));
    if (*certify) {
      RunConfig c = resolve_config(f, certify_opts);
      return cmd_certify(c, f.target);
    }
    if (*repro) {
      RunConfig c;
      c.scenario = "ellipsoid1";  // unused; keeps validation of the numeric flags uniform
      c.format = "csv";
      auto given = [](const CLI::Option* o) { return o && o->count() > 0; };
      if (given(repro_opts.quad_panels)) c.quad_panels = f.quad_panels;
      if (given(repro_opts.refine_budget)) c.refine_budget = f.refine_budget;
      if (given(repro_opts.format)) c.format = f.format;
      if (given(repro_opts.out)) c.out = f.out;
      validate(c);
      return cmd_reproduce(f.table, c);
    }
    if (*frames) return cmd_frames(frame_n, f.count, f.seed, f.out);
    if (*schema) {
      std::cout << stringcap_schema::kRunConfig;
      return kExitOk;
    }
  } catch (const MissingAxiomError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& rule : e.rules()) std::cerr << "missing rule: " << rule << "\n";
    return kExitNumeric;
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InvalidInputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const RuleMismatchError& e) {
    std::cerr << "certificate failure: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
