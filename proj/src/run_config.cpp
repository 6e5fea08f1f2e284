#include <varex/run_config.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <varex/counterexamples.hpp>
#include <varex/energy.hpp>
#include <varex/exponent.hpp>
#include <varex/expr.hpp>
#include <varex/grid.hpp>
#include <varex/inequalities.hpp>
#include <varex/modular.hpp>
#include <varex/random.hpp>
#include <varex/solver.hpp>

namespace varex::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string iso_utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// JSON has no infinities; keep reports loadable by spelling them out.
ordered_json num_or_inf(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "NAN";
  return v > 0.0 ? "INF" : "-INF";
}

// ---------------------------------------------------------------------------
// config access helpers
// ---------------------------------------------------------------------------

const ordered_json& need(const ordered_json& obj, const std::string& key,
                         const std::string& ctx) {
  if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(ctx + ": missing field '" + key + "'");
  return *it;
}

void check_keys(const ordered_json& obj,
                std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(ctx + ": unknown field '" + item.key() + "'");
  }
}

double as_number(const ordered_json& v, const std::string& ctx) {
  if (!v.is_number()) throw ConfigError(ctx + ": expected a number");
  return v.get<double>();
}

long long as_integer(const ordered_json& v, const std::string& ctx) {
  if (!v.is_number_integer()) throw ConfigError(ctx + ": expected an integer");
  return v.get<long long>();
}

std::string as_string(const ordered_json& v, const std::string& ctx) {
  if (!v.is_string()) throw ConfigError(ctx + ": expected a string");
  return v.get<std::string>();
}

ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// field expressions, domain, grid
// ---------------------------------------------------------------------------

struct FieldSpec {
  Expr expr;
  std::string text;    // expression actually parsed
  ordered_json echo;   // the original JSON node, for the config echo
};

FieldSpec parse_field(const ordered_json& node, const std::string& ctx) {
  check_keys(node, {"expr", "preset"}, ctx);
  if (node.contains("expr") && node.contains("preset")) {
    throw ConfigError(ctx + ": give either 'expr' or 'preset', not both");
  }
  std::string text;
  if (node.contains("expr")) {
    text = as_string(node.at("expr"), ctx + ".expr");
  } else if (node.contains("preset")) {
    const std::string name = as_string(node.at("preset"), ctx + ".preset");
    if (name == "inverse_x") {
      text = "1/x";
    } else {
      throw ConfigError(ctx + ": unknown preset '" + name +
                        "' (known: inverse_x)");
    }
  } else {
    throw ConfigError(ctx + ": needs an 'expr' or 'preset' field");
  }
  FieldSpec f;
  try {
    f.expr = parse(text);
  } catch (const ParseError& e) {
    throw ConfigError(ctx + ": " + e.what());
  }
  f.text = text;
  f.echo = node;
  return f;
}

struct Discretization {
  Domain domain;
  std::array<int, 2> nodes{3, 1};
};

Discretization parse_discretization(const ordered_json& root) {
  const ordered_json& dj = need(root, "domain", "config");
  check_keys(dj, {"dim", "bounds"}, "domain");
  const long long dim = as_integer(need(dj, "dim", "domain"), "domain.dim");
  if (dim != 1 && dim != 2) throw ConfigError("domain.dim: must be 1 or 2");

  const ordered_json& bounds = need(dj, "bounds", "domain");
  if (!bounds.is_array() || bounds.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("domain.bounds: expected " + std::to_string(dim) +
                      " [lo, hi] pair(s)");
  }
  double lo[2] = {0.0, 0.0};
  double hi[2] = {0.0, 0.0};
  for (std::size_t ax = 0; ax < static_cast<std::size_t>(dim); ++ax) {
    const std::string ctx = "domain.bounds[" + std::to_string(ax) + "]";
    const ordered_json& pr = bounds[ax];
    if (!pr.is_array() || pr.size() != 2) {
      throw ConfigError(ctx + ": expected [lo, hi]");
    }
    lo[ax] = as_number(pr[0], ctx + "[0]");
    hi[ax] = as_number(pr[1], ctx + "[1]");
    if (!std::isfinite(lo[ax]) || !std::isfinite(hi[ax]) || !(lo[ax] < hi[ax])) {
      throw ConfigError(ctx + ": need finite lo < hi");
    }
  }

  const ordered_json& gj = need(root, "grid", "config");
  check_keys(gj, {"nodes"}, "grid");
  const ordered_json& nj = need(gj, "nodes", "grid");
  if (!nj.is_array() || nj.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("grid.nodes: expected " + std::to_string(dim) +
                      " entrie(s) matching domain.dim");
  }
  Discretization disc;
  disc.domain = dim == 1 ? Domain::interval(lo[0], hi[0])
                         : Domain::rectangle(lo[0], hi[0], lo[1], hi[1]);
  for (std::size_t ax = 0; ax < static_cast<std::size_t>(dim); ++ax) {
    const long long n = as_integer(nj[ax], "grid.nodes[" + std::to_string(ax) + "]");
    if (n < 3 || n > 100000) {
      throw ConfigError("grid.nodes[" + std::to_string(ax) +
                        "]: need between 3 and 100000 nodes per axis");
    }
    disc.nodes[ax] = static_cast<int>(n);
  }
  return disc;
}

double eval_field(const FieldSpec& f, double x, double y,
                  const std::string& ctx) {
  try {
    return eval(f.expr, x, y);
  } catch (const EvalError& e) {
    throw ConfigError(ctx + ": expression '" + f.text + "' failed at (" +
                      fmt17(x) + ", " + fmt17(y) + "): " + e.what() +
                      "; choose bounds that keep the sample points away from "
                      "the singular set");
  }
}

void reject_y_in_1d(const Grid& g, const FieldSpec& f, const std::string& ctx) {
  if (g.dim() == 1 && f.expr.references_y()) {
    throw ConfigError(ctx +
                      ": expression references y on a one-dimensional domain");
  }
}

ExponentField sample_exponent(const Grid& g, const FieldSpec& f) {
  reject_y_in_1d(g, f, "exponent");
  try {
    return make_exponent(g, [&](double x, double y) {
      return eval_field(f, x, y, "exponent");
    });
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("exponent: ") + e.what());
  }
}

GridFunction sample_nodes(const Grid& g, const FieldSpec& f,
                          const std::string& ctx) {
  reject_y_in_1d(g, f, ctx);
  try {
    return GridFunction::sample(
        g, [&](double x, double y) { return eval_field(f, x, y, ctx); });
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ctx + ": " + e.what());
  }
}

std::vector<double> sample_cells(const Grid& g, const FieldSpec& f,
                                 const std::string& ctx) {
  reject_y_in_1d(g, f, ctx);
  std::vector<double> vals(g.cell_count());
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const auto m = g.cell_midpoint(c);
    const double v = eval_field(f, m[0], m[1], ctx);
    if (!std::isfinite(v) || v < 0.0) {
      throw ConfigError(ctx + ": weight at cell " + std::to_string(c) +
                        " must be finite and nonnegative, got " + fmt17(v));
    }
    vals[c] = v;
  }
  return vals;
}

// ---------------------------------------------------------------------------
// enum names
// ---------------------------------------------------------------------------

EnergyKind parse_energy_kind(const std::string& s) {
  if (s == "F_FULL") return EnergyKind::F_FULL;
  if (s == "F_GRAD") return EnergyKind::F_GRAD;
  if (s == "J_WEIGHTED") return EnergyKind::J_WEIGHTED;
  if (s == "G_UNWEIGHTED") return EnergyKind::G_UNWEIGHTED;
  throw ConfigError("energy_kind: unknown value '" + s +
                    "' (known: F_FULL, F_GRAD, J_WEIGHTED, G_UNWEIGHTED)");
}

const char* energy_kind_name(EnergyKind k) {
  switch (k) {
    case EnergyKind::F_FULL: return "F_FULL";
    case EnergyKind::F_GRAD: return "F_GRAD";
    case EnergyKind::J_WEIGHTED: return "J_WEIGHTED";
    case EnergyKind::G_UNWEIGHTED: return "G_UNWEIGHTED";
  }
  return "?";
}

ModularKind parse_modular_kind(const std::string& s) {
  if (s == "RHO_P") return ModularKind::RHO_P;
  if (s == "ETA_P") return ModularKind::ETA_P;
  if (s == "RHO_GRAD") return ModularKind::RHO_GRAD;
  if (s == "RHO_1P") return ModularKind::RHO_1P;
  if (s == "ETA_GRAD") return ModularKind::ETA_GRAD;
  throw ConfigError("modular_kind: unknown value '" + s +
                    "' (known: RHO_P, ETA_P, RHO_GRAD, RHO_1P, ETA_GRAD)");
}

const char* modular_kind_name(ModularKind k) {
  switch (k) {
    case ModularKind::RHO_P: return "RHO_P";
    case ModularKind::ETA_P: return "ETA_P";
    case ModularKind::RHO_GRAD: return "RHO_GRAD";
    case ModularKind::RHO_1P: return "RHO_1P";
    case ModularKind::ETA_GRAD: return "ETA_GRAD";
  }
  return "?";
}

const char* termination_name(SolverReport::Termination t) {
  switch (t) {
    case SolverReport::Termination::converged: return "converged";
    case SolverReport::Termination::max_iters: return "max_iters";
    case SolverReport::Termination::saturated_energy: return "saturated_energy";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// solve configuration
// ---------------------------------------------------------------------------

struct SolveSpec {
  Discretization disc;
  FieldSpec exponent;
  FieldSpec phi;
  std::optional<FieldSpec> q;
  EnergyKind kind = EnergyKind::F_GRAD;
  SolverConfig solver;
  std::string init_name = "zeros";
  std::string rule_name = "adaptive";
  bool want_variational = false;
  long long var_directions = 64;
  std::uint64_t var_seed = 1;
  bool want_uniqueness = false;
  std::uint64_t uniq_seed = 7;
  std::string out_dir = ".";
};

SolveSpec load_solve_spec(const std::string& path) {
  const ordered_json root = load_json_file(path);
  check_keys(root,
             {"domain", "grid", "exponent", "phi", "q", "energy_kind",
              "solver", "certificates", "output"},
             "config");

  SolveSpec spec;
  spec.disc = parse_discretization(root);
  spec.exponent = parse_field(need(root, "exponent", "config"), "exponent");
  spec.phi = parse_field(need(root, "phi", "config"), "phi");
  if (root.contains("q")) spec.q = parse_field(root.at("q"), "q");
  spec.kind =
      parse_energy_kind(as_string(need(root, "energy_kind", "config"), "energy_kind"));
  if (spec.kind == EnergyKind::J_WEIGHTED && !spec.q) {
    throw ConfigError("energy_kind: J_WEIGHTED requires a 'q' field");
  }

  if (root.contains("solver")) {
    const ordered_json& sj = root.at("solver");
    check_keys(sj,
               {"grad_tol", "max_iters", "armijo_c", "backtrack", "init",
                "seed", "step_rule"},
               "solver");
    if (sj.contains("grad_tol")) {
      spec.solver.grad_tol = as_number(sj.at("grad_tol"), "solver.grad_tol");
      if (!(spec.solver.grad_tol > 0.0)) {
        throw ConfigError("solver.grad_tol: must be positive");
      }
    }
    if (sj.contains("max_iters")) {
      const long long m = as_integer(sj.at("max_iters"), "solver.max_iters");
      if (m < 0) throw ConfigError("solver.max_iters: must be nonnegative");
      spec.solver.max_iters = static_cast<long>(m);
    }
    if (sj.contains("armijo_c")) {
      spec.solver.armijo_c = as_number(sj.at("armijo_c"), "solver.armijo_c");
      if (!(spec.solver.armijo_c > 0.0 && spec.solver.armijo_c < 1.0)) {
        throw ConfigError("solver.armijo_c: must lie in (0, 1)");
      }
    }
    if (sj.contains("backtrack")) {
      spec.solver.backtrack = as_number(sj.at("backtrack"), "solver.backtrack");
      if (!(spec.solver.backtrack > 0.0 && spec.solver.backtrack < 1.0)) {
        throw ConfigError("solver.backtrack: must lie in (0, 1)");
      }
    }
    if (sj.contains("init")) {
      spec.init_name = as_string(sj.at("init"), "solver.init");
      if (spec.init_name == "zeros") {
        spec.solver.init = SolverConfig::Init::zeros;
      } else if (spec.init_name == "random") {
        spec.solver.init = SolverConfig::Init::random;
      } else {
        throw ConfigError("solver.init: unknown value '" + spec.init_name +
                          "' (known: zeros, random)");
      }
    }
    if (sj.contains("seed")) {
      const long long s = as_integer(sj.at("seed"), "solver.seed");
      if (s < 0) throw ConfigError("solver.seed: must be nonnegative");
      spec.solver.seed = static_cast<std::uint64_t>(s);
    }
    if (sj.contains("step_rule")) {
      spec.rule_name = as_string(sj.at("step_rule"), "solver.step_rule");
      if (spec.rule_name == "adaptive") {
        spec.solver.step_rule = SolverConfig::StepRule::adaptive;
      } else if (spec.rule_name == "classic") {
        spec.solver.step_rule = SolverConfig::StepRule::classic;
      } else {
        throw ConfigError("solver.step_rule: unknown value '" + spec.rule_name +
                          "' (known: adaptive, classic)");
      }
    }
  }

  if (root.contains("certificates")) {
    const ordered_json& cj = root.at("certificates");
    check_keys(cj, {"variational", "uniqueness"}, "certificates");
    if (cj.contains("variational")) {
      const ordered_json& vj = cj.at("variational");
      check_keys(vj, {"directions", "seed"}, "certificates.variational");
      spec.want_variational = true;
      if (vj.contains("directions")) {
        spec.var_directions =
            as_integer(vj.at("directions"), "certificates.variational.directions");
        if (spec.var_directions < 1 || spec.var_directions > 1000000) {
          throw ConfigError(
              "certificates.variational.directions: must lie in [1, 1000000]");
        }
      }
      if (vj.contains("seed")) {
        const long long s =
            as_integer(vj.at("seed"), "certificates.variational.seed");
        if (s < 0) throw ConfigError("certificates.variational.seed: must be nonnegative");
        spec.var_seed = static_cast<std::uint64_t>(s);
      }
    }
    if (cj.contains("uniqueness")) {
      const ordered_json& uj = cj.at("uniqueness");
      check_keys(uj, {"seed"}, "certificates.uniqueness");
      spec.want_uniqueness = true;
      if (uj.contains("seed")) {
        const long long s = as_integer(uj.at("seed"), "certificates.uniqueness.seed");
        if (s < 0) throw ConfigError("certificates.uniqueness.seed: must be nonnegative");
        spec.uniq_seed = static_cast<std::uint64_t>(s);
      }
    }
  }

  if (root.contains("output")) {
    const ordered_json& oj = root.at("output");
    check_keys(oj, {"dir"}, "output");
    if (oj.contains("dir")) {
      spec.out_dir = as_string(oj.at("dir"), "output.dir");
      if (spec.out_dir.empty()) throw ConfigError("output.dir: must not be empty");
    }
  }
  return spec;
}

ordered_json echo_solve_config(const SolveSpec& spec) {
  ordered_json c;
  c["domain"]["dim"] = spec.disc.domain.dim;
  ordered_json bounds = ordered_json::array();
  for (int ax = 0; ax < spec.disc.domain.dim; ++ax) {
    bounds.push_back({spec.disc.domain.lo[static_cast<std::size_t>(ax)],
                      spec.disc.domain.hi[static_cast<std::size_t>(ax)]});
  }
  c["domain"]["bounds"] = bounds;
  ordered_json nodes = ordered_json::array();
  for (int ax = 0; ax < spec.disc.domain.dim; ++ax) {
    nodes.push_back(spec.disc.nodes[static_cast<std::size_t>(ax)]);
  }
  c["grid"]["nodes"] = nodes;
  c["exponent"] = spec.exponent.echo;
  c["phi"] = spec.phi.echo;
  if (spec.q) c["q"] = spec.q->echo;
  c["energy_kind"] = energy_kind_name(spec.kind);
  c["solver"]["grad_tol"] = spec.solver.grad_tol;
  c["solver"]["max_iters"] = spec.solver.max_iters;
  c["solver"]["armijo_c"] = spec.solver.armijo_c;
  c["solver"]["backtrack"] = spec.solver.backtrack;
  c["solver"]["init"] = spec.init_name;
  c["solver"]["seed"] = spec.solver.seed;
  c["solver"]["step_rule"] = spec.rule_name;
  if (spec.want_variational || spec.want_uniqueness) {
    ordered_json certs;
    if (spec.want_variational) {
      certs["variational"]["directions"] = spec.var_directions;
      certs["variational"]["seed"] = spec.var_seed;
    }
    if (spec.want_uniqueness) {
      certs["uniqueness"]["seed"] = spec.uniq_seed;
    }
    c["certificates"] = certs;
  }
  c["output"]["dir"] = spec.out_dir;
  return c;
}

// ---------------------------------------------------------------------------
// artifact writers
// ---------------------------------------------------------------------------

void write_text_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

std::string solution_csv(const GridFunction& v) {
  const Grid& g = v.grid();
  std::string s = g.dim() == 1 ? "x,value\n" : "x,y,value\n";
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const auto xy = g.node_coord(n);
    s += fmt17(xy[0]);
    if (g.dim() == 2) {
      s += ',';
      s += fmt17(xy[1]);
    }
    s += ',';
    s += fmt17(v[n]);
    s += '\n';
  }
  return s;
}

std::string trace_csv(const SolverReport& rep) {
  std::string s = "iter,energy,grad_norm\n";
  for (std::size_t i = 0; i < rep.energy_trace.size(); ++i) {
    s += std::to_string(i);
    s += ',';
    s += fmt17(rep.energy_trace[i]);
    s += ',';
    s += fmt17(rep.grad_norm_trace[i]);
    s += '\n';
  }
  return s;
}

void write_record(const fs::path& path, ordered_json payload,
                  const std::string& started_at) {
  ordered_json root;
  root["payload"] = std::move(payload);
  root["envelope"]["started_at"] = started_at;
  root["envelope"]["finished_at"] = iso_utc_now();
  root["envelope"]["tool"] = std::string("varex ") + kVersion;
  write_text_file(path, root.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

using Checks = std::vector<ordered_json>;

Grid unit_interval_grid(int nodes) {
  return build_grid(Domain::interval(0.0, 1.0), {nodes, 1});
}

Checks run_clarkson_suite(std::uint64_t seed, long n) {
  Checks out;
  Rng rng(seed);
  for (int dim = 1; dim <= 4; ++dim) {
    for (int high = 0; high < 2; ++high) {
      double max_excess = -std::numeric_limits<double>::infinity();
      long violations = 0;
      long done = 0;
      for (long s = 0; s < n; ++s) {
        // Hit the exponent-range endpoints before sampling the interior.
        double p;
        if (high != 0) {
          p = s == 0 ? 2.0 : (s == 1 ? 6.0 : rng.uniform(2.0, 6.0));
        } else {
          p = s == 0 ? 1.0 : (s == 1 ? 2.0 : rng.uniform(1.0, 2.0));
        }
        std::vector<double> u(static_cast<std::size_t>(dim));
        std::vector<double> v(static_cast<std::size_t>(dim));
        for (auto& x : u) x = rng.uniform(-10.0, 10.0);
        for (auto& x : v) x = rng.uniform(-10.0, 10.0);
        bool all_zero = true;
        for (int i = 0; i < dim; ++i) {
          if (u[static_cast<std::size_t>(i)] != 0.0 ||
              v[static_cast<std::size_t>(i)] != 0.0) {
            all_zero = false;
          }
        }
        if (all_zero) continue;
        const InequalityCheck r =
            high != 0 ? clarkson_high(u, v, p) : clarkson_low(u, v, p);
        const double excess = r.lhs - r.rhs;
        max_excess = std::max(max_excess, excess);
        if (excess > 1e-12 * std::max(1.0, std::fabs(r.rhs))) ++violations;
        ++done;
      }
      ordered_json c;
      c["name"] = std::string(high != 0 ? "clarkson_high_dim" : "clarkson_low_dim") +
                  std::to_string(dim);
      c["n"] = done;
      c["max_excess"] = num_or_inf(max_excess);
      c["pass"] = violations == 0;
      out.push_back(std::move(c));
    }
  }
  return out;
}

Checks run_ucstar_suite(std::uint64_t seed, long n) {
  Checks out;
  const Grid grid = unit_interval_grid(33);
  const struct {
    const char* label;
    const char* expr;
    bool quadratic;
  } exponents[] = {
      {"p=2", "2", true},
      {"p=2+x", "2 + x", false},
  };
  const ModularKind kinds[] = {ModularKind::RHO_P, ModularKind::RHO_GRAD,
                               ModularKind::RHO_1P};
  const double epsilons[] = {0.25, 0.5};

  std::uint64_t salt = 0;
  for (const auto& ex : exponents) {
    const Expr pe = parse(ex.expr);
    const ExponentField p = make_exponent(
        grid, [&](double x, double y) { return eval(pe, x, y); });
    for (ModularKind kind : kinds) {
      for (double eps : epsilons) {
        const UcStarEstimate est = uc_star_probe(kind, p, eps, n, seed + salt);
        ++salt;
        bool pass = est.n_admissible > 0 &&
                    est.delta_empirical >= est.delta_formula - 1e-9;
        if (ex.quadratic) {
          // For a quadratic modular the parallelogram identity forces the
          // empirical margin up to epsilon itself.
          pass = pass && est.delta_empirical >= eps - 1e-9;
        }
        ordered_json c;
        c["name"] = std::string("ucstar[") + ex.label + "][" +
                    modular_kind_name(kind) + "][eps=" + fmt17(eps) + "]";
        c["epsilon"] = est.epsilon;
        c["delta_formula"] = est.delta_formula;
        c["delta_empirical"] = est.delta_empirical;
        c["n_samples"] = est.n_samples;
        c["n_admissible"] = est.n_admissible;
        c["pass"] = pass;
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

Checks run_lemmas_suite(std::uint64_t seed) {
  Checks out;

  {
    const std::vector<double> samples = {1.0 + 1e-8, 1.0001, 1.001, 1.01,
                                         1.1,        1.5,    2.0,   2.5,
                                         std::numbers::e_v<double>, 5.0,
                                         10.0,       50.0,   100.0, 1000.0};
    ordered_json c;
    c["name"] = "log_ratio_facts";
    c["n"] = samples.size();
    c["pass"] = lemma_stupid_check(samples);
    out.push_back(std::move(c));
  }

  {
    const Grid grid = unit_interval_grid(65);
    const GridFunction one =
        GridFunction::sample(grid, [](double, double) { return 1.0; });
    const ExponentField p2 =
        make_exponent(grid, [](double, double) { return 2.0; });
    const ExponentField p3 =
        make_exponent(grid, [](double, double) { return 3.0; });
    const double r2 = delta2_ratio(ModularKind::RHO_P, one, p2).value();
    const double r3 = delta2_ratio(ModularKind::ETA_P, one, p3).value();
    const double dev = std::max(std::fabs(r2 - 4.0), std::fabs(r3 - 8.0));
    ordered_json c;
    c["name"] = "doubling_exact_constant_exponent";
    c["ratio_p2"] = r2;
    c["ratio_p3"] = r3;
    c["max_deviation"] = dev;
    c["pass"] = dev <= 1e-12;
    out.push_back(std::move(c));
  }

  {
    // A unit spike moved toward the high-exponent end must raise the
    // doubling ratio monotonically.
    const Grid grid = unit_interval_grid(129);
    const ExponentField p =
        make_exponent(grid, [](double x, double) { return 2.0 + 8.0 * x; });
    double prev = 0.0;
    bool monotone = true;
    ordered_json ratios = ordered_json::array();
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      std::vector<double> vals(grid.node_count(), 0.0);
      const int at = static_cast<int>(t * (grid.nodes(0) - 1) + 0.5);
      vals[static_cast<std::size_t>(at)] = 1.0;
      const GridFunction spike(grid, std::move(vals));
      const double r = delta2_ratio(ModularKind::RHO_P, spike, p).value();
      ratios.push_back(r);
      if (r <= prev) monotone = false;
      prev = r;
    }
    ordered_json c;
    c["name"] = "doubling_grows_with_exponent";
    c["ratios"] = ratios;
    c["pass"] = monotone;
    out.push_back(std::move(c));
  }

  {
    const Grid grid = unit_interval_grid(65);
    const GridFunction one =
        GridFunction::sample(grid, [](double, double) { return 1.0; });
    const ExponentField p2 =
        make_exponent(grid, [](double, double) { return 2.0; });
    const double norm = luxemburg_norm(ModularKind::RHO_P, one, p2, 1e-13);
    const double expected = 1.0 / std::numbers::sqrt2_v<double>;
    ordered_json c;
    c["name"] = "luxemburg_unit_constant";
    c["value"] = norm;
    c["expected"] = expected;
    c["pass"] = std::fabs(norm - expected) <= 1e-12;
    out.push_back(std::move(c));
  }

  {
    const Grid grid = unit_interval_grid(33);
    const ExponentField p =
        make_exponent(grid, [](double x, double) { return 2.0 + x; });
    Rng rng(seed);
    std::vector<double> vals(grid.node_count());
    for (auto& v : vals) v = rng.uniform(-1.0, 1.0);
    const GridFunction u(grid, std::move(vals));
    const double a = luxemburg_norm(ModularKind::RHO_1P, 2.0 * u, p, 1e-13);
    const double b = luxemburg_norm(ModularKind::RHO_1P, u, p, 1e-13);
    ordered_json c;
    c["name"] = "luxemburg_homogeneous";
    c["norm_2u"] = a;
    c["norm_u"] = b;
    c["pass"] = std::fabs(a - 2.0 * b) <= 1e-10 * std::max(1.0, a);
    out.push_back(std::move(c));
  }

  {
    const Grid grid = build_grid(Domain::interval(0.0, 0.5), {65, 1});
    const ExponentField q =
        make_exponent(grid, [](double, double) { return 2.0; });
    const ExtendedReal val = exp_integrability_check(q);
    const double expected = std::exp(2.0) / 4.0;
    ordered_json c;
    c["name"] = "exp_integrability_constant";
    c["value"] = val.is_finite() ? num_or_inf(val.value()) : ordered_json("INF");
    c["expected"] = expected;
    c["pass"] = val.is_finite() && std::fabs(val.value() - expected) <= 1e-12;
    out.push_back(std::move(c));
  }

  {
    // The reciprocal exponent fails the condition: the quadrature blows up
    // under refinement and saturates once the sample exponents pass the
    // finite range.
    const auto value_at = [](int cells) {
      const Grid grid = build_grid(Domain::interval(0.0, 0.5), {cells + 1, 1});
      const ExponentField p =
          make_exponent(grid, [](double x, double) { return 1.0 / x; });
      return exp_integrability_check(p);
    };
    const ExtendedReal coarse = value_at(64);
    const ExtendedReal fine = value_at(4096);
    ordered_json c;
    c["name"] = "exp_integrability_unbounded";
    c["coarse_cells"] = 64;
    c["coarse_value"] =
        coarse.is_finite() ? num_or_inf(coarse.value()) : ordered_json("INF");
    c["refined_cells"] = 4096;
    c["refined_value"] =
        fine.is_finite() ? num_or_inf(fine.value()) : ordered_json("INF");
    c["pass"] = coarse.is_finite() && coarse.value() > 1e50 && !fine.is_finite();
    out.push_back(std::move(c));
  }

  return out;
}

Checks run_gradientcheck_suite(std::uint64_t seed, long n_directions) {
  Checks out;
  const struct {
    const char* label;
    int dim;
    const char* p_expr;
    const char* phi_expr;
  } cases[] = {
      {"1d", 1, "2 + x", "x^2"},
      {"2d", 2, "2 + x*y", "x*y"},
  };
  const EnergyKind kinds[] = {EnergyKind::F_FULL, EnergyKind::F_GRAD,
                              EnergyKind::J_WEIGHTED, EnergyKind::G_UNWEIGHTED};

  std::uint64_t salt = 0;
  for (const auto& cs : cases) {
    const Grid grid = cs.dim == 1
                          ? unit_interval_grid(17)
                          : build_grid(Domain::rectangle(0.0, 1.0, 0.0, 1.0),
                                       {9, 9});
    const Expr pe = parse(cs.p_expr);
    const Expr fe = parse(cs.phi_expr);
    const ExponentField p = make_exponent(
        grid, [&](double x, double y) { return eval(pe, x, y); });
    const GridFunction phi = GridFunction::sample(
        grid, [&](double x, double y) { return eval(fe, x, y); });
    const std::vector<double> q(grid.cell_count(), 1.0);
    const ProblemData data(p, phi, q);
    const std::vector<std::size_t> interior = grid.interior_nodes();

    for (EnergyKind kind : kinds) {
      Rng rng(seed + salt);
      ++salt;
      std::vector<double> wv(grid.node_count(), 0.0);
      for (std::size_t i : interior) wv[i] = 0.1 * rng.uniform(-1.0, 1.0);
      const GridFunction w(grid, std::move(wv));

      double max_err = 0.0;
      bool pass = true;
      for (long d = 0; d < n_directions; ++d) {
        std::vector<double> hv(grid.node_count(), 0.0);
        double norm_sq = 0.0;
        for (std::size_t i : interior) {
          hv[i] = rng.uniform(-1.0, 1.0);
          norm_sq += hv[i] * hv[i];
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (std::size_t i : interior) hv[i] *= inv;
        const GridFunction h(grid, std::move(hv));

        const double dd = directional_derivative(kind, data, w, h);
        const double t = 1e-6;
        const double e_plus = energy(kind, data, w + t * h).value();
        const double e_minus = energy(kind, data, w + (-t) * h).value();
        const double fd = (e_plus - e_minus) / (2.0 * t);
        const double err = std::fabs(dd - fd);
        max_err = std::max(max_err, err);
        if (err > std::max(1e-9, 1e-6 * std::fabs(dd))) pass = false;
      }

      ordered_json c;
      c["name"] = std::string("gradient_consistency_") + cs.label + "_" +
                  energy_kind_name(kind);
      c["n_directions"] = n_directions;
      c["max_abs_error"] = max_err;
      c["pass"] = pass;
      out.push_back(std::move(c));
    }
  }
  return out;
}

Checks run_monotonicity_suite(std::uint64_t seed, long n) {
  Checks out;
  const double ps[] = {2.0, 2.5, 3.0, 4.0, 8.0};
  for (double p : ps) {
    Rng rng(seed + static_cast<std::uint64_t>(p * 100.0));
    double min_margin = std::numeric_limits<double>::infinity();
    long violations = 0;
    for (long s = 0; s < n; ++s) {
      double a[3];
      double b[3];
      for (double& x : a) x = rng.gaussian();
      for (double& x : b) x = rng.gaussian();
      if (a[0] == b[0] && a[1] == b[1] && a[2] == b[2]) continue;
      const MonotonicityGap gap = monotonicity_gap(a, b, p);
      const double margin = gap.normalized_pairing - gap.gamma_bound;
      min_margin = std::min(min_margin, margin);
      if (margin < -1e-12) ++violations;
    }
    // Antipodal pair: the bound is attained exactly.
    double a[3] = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
    double b[3] = {-a[0], -a[1], -a[2]};
    const MonotonicityGap tight = monotonicity_gap(a, b, p);
    const double antipodal_dev =
        std::fabs(tight.normalized_pairing - tight.gamma_bound);

    ordered_json c;
    c["name"] = "monotonicity_p=" + fmt17(p);
    c["n"] = n;
    c["min_margin"] = num_or_inf(min_margin);
    c["antipodal_deviation"] = antipodal_dev;
    c["pass"] = violations == 0 &&
                antipodal_dev <= 1e-12 * std::max(1.0, tight.gamma_bound);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int cmd_solve(const std::string& config_path) {
  const std::string started = iso_utc_now();
  SolveSpec spec;
  try {
    spec = load_solve_spec(config_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }

  try {
    const Grid grid = build_grid(spec.disc.domain, spec.disc.nodes);
    const ExponentField p = sample_exponent(grid, spec.exponent);
    const GridFunction phi = sample_nodes(grid, spec.phi, "phi");
    std::optional<std::vector<double>> q;
    if (spec.q) q = sample_cells(grid, *spec.q, "q");

    const ProblemData data(p, phi, std::move(q));

    const bool admissible = admissible_for_dirichlet(p, grid.dim());
    if (!admissible) {
      std::fprintf(stderr,
                   "warning: min exponent %.17g does not exceed the dimension "
                   "%d; the continuous theory does not guarantee a minimizer\n",
                   p.p_minus(), grid.dim());
    }

    const SolverReport rep = solve_dirichlet(spec.kind, data, spec.solver);

    ordered_json result;
    result["termination"] = termination_name(rep.termination);
    result["iterations"] = rep.iterations;
    result["final_energy"] = num_or_inf(rep.final_energy);
    if (rep.grad_norm_trace.empty()) {
      result["final_grad_norm"] = nullptr;
    } else {
      result["final_grad_norm"] = rep.grad_norm_trace.back();
    }
    result["energy_trace_length"] = rep.energy_trace.size();
    result["p_minus"] = p.p_minus();
    result["p_max"] = p.p_max();
    result["admissible"] = admissible;

    double v_min = std::numeric_limits<double>::infinity();
    double v_max = -std::numeric_limits<double>::infinity();
    double boundary_err = 0.0;
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
      v_min = std::min(v_min, rep.solution[n]);
      v_max = std::max(v_max, rep.solution[n]);
      if (grid.is_boundary_node(n)) {
        boundary_err =
            std::max(boundary_err, std::fabs(rep.solution[n] - phi[n]));
      }
    }
    result["solution_min"] = v_min;
    result["solution_max"] = v_max;
    result["boundary_sup_error"] = boundary_err;

    const bool converged =
        rep.termination == SolverReport::Termination::converged;
    if (spec.want_variational && converged) {
      const VariationalCertificate cert = variational_certificate(
          spec.kind, data, rep.solution,
          static_cast<int>(spec.var_directions), spec.var_seed);
      ordered_json cj;
      cj["directions"] = cert.n_directions;
      cj["seed"] = spec.var_seed;
      cj["min_pairing"] = cert.min_pairing;
      cj["tolerance"] = spec.solver.grad_tol;
      cj["pass"] = cert.min_pairing >= -(spec.solver.grad_tol + 1e-15);
      result["certificates"]["variational"] = cj;
    }
    if (spec.want_uniqueness && converged) {
      SolverConfig alt = spec.solver;
      alt.init = SolverConfig::Init::random;
      alt.seed = spec.uniq_seed;
      alt.initial.reset();
      const SolverReport second = solve_dirichlet(spec.kind, data, alt);
      double sup = 0.0;
      for (std::size_t n = 0; n < grid.node_count(); ++n) {
        sup = std::max(sup, std::fabs(rep.solution[n] - second.solution[n]));
      }
      ordered_json uj;
      uj["seed"] = spec.uniq_seed;
      uj["second_termination"] = termination_name(second.termination);
      uj["sup_diff"] = sup;
      result["certificates"]["uniqueness"] = uj;
    }

    const fs::path out_dir(spec.out_dir);
    fs::create_directories(out_dir);
    write_text_file(out_dir / "solution.csv", solution_csv(rep.solution));
    write_text_file(out_dir / "trace.csv", trace_csv(rep));

    ordered_json payload;
    payload["version"] = kVersion;
    payload["command"] = "solve";
    payload["config"] = echo_solve_config(spec);
    payload["result"] = result;
    write_record(out_dir / "run.json", std::move(payload), started);

    std::printf("solve: %s after %ld iteration(s), artifacts in %s\n",
                termination_name(rep.termination), rep.iterations,
                out_dir.string().c_str());

    switch (rep.termination) {
      case SolverReport::Termination::converged:
        return kExitOk;
      case SolverReport::Termination::max_iters:
        return kExitMaxIters;
      case SolverReport::Termination::saturated_energy:
        return kExitSaturated;
    }
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const SaturationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSaturated;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}

int cmd_norm(const std::string& config_path) {
  try {
    const ordered_json root = load_json_file(config_path);
    check_keys(root, {"domain", "grid", "exponent", "field", "modular_kind", "tol"},
               "config");
    const Discretization disc = parse_discretization(root);
    const FieldSpec pe = parse_field(need(root, "exponent", "config"), "exponent");
    const FieldSpec fe = parse_field(need(root, "field", "config"), "field");
    const ModularKind kind = parse_modular_kind(
        as_string(need(root, "modular_kind", "config"), "modular_kind"));
    double tol = 1e-13;
    if (root.contains("tol")) {
      tol = as_number(root.at("tol"), "tol");
      if (!(tol > 0.0 && tol < 1.0)) {
        throw ConfigError("tol: must lie in (0, 1)");
      }
    }

    const Grid grid = build_grid(disc.domain, disc.nodes);
    const ExponentField p = sample_exponent(grid, pe);
    const GridFunction u = sample_nodes(grid, fe, "field");
    const double value = luxemburg_norm(kind, u, p, tol);
    std::printf("%.12g\n", value);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSaturated;
  }
}

int cmd_verify(const std::string& suite, std::uint64_t seed, long n_samples,
               const std::string& out_dir) {
  const std::string started = iso_utc_now();
  Checks checks;
  long n_eff = n_samples;
  try {
    if (suite == "clarkson") {
      if (n_eff <= 0) n_eff = 20000;
      checks = run_clarkson_suite(seed, n_eff);
    } else if (suite == "ucstar") {
      if (n_eff <= 0) n_eff = 4000;
      checks = run_ucstar_suite(seed, n_eff);
    } else if (suite == "lemmas") {
      n_eff = 0;
      checks = run_lemmas_suite(seed);
    } else if (suite == "gradientcheck") {
      if (n_eff <= 0) n_eff = 5;
      checks = run_gradientcheck_suite(seed, n_eff);
    } else if (suite == "monotonicity") {
      if (n_eff <= 0) n_eff = 20000;
      checks = run_monotonicity_suite(seed, n_eff);
    } else {
      std::fprintf(stderr,
                   "error: unknown suite '%s' (known: clarkson, ucstar, "
                   "lemmas, gradientcheck, monotonicity)\n",
                   suite.c_str());
      return kExitConfig;
    }

    bool all_pass = true;
    for (const auto& c : checks) {
      const bool pass = c.at("pass").get<bool>();
      all_pass = all_pass && pass;
      std::printf("  [%s] %s\n", pass ? "PASS" : "FAIL",
                  c.at("name").get<std::string>().c_str());
    }

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    ordered_json payload;
    payload["version"] = kVersion;
    payload["command"] = "verify";
    payload["suite"] = suite;
    payload["seed"] = seed;
    payload["n"] = n_eff;
    payload["checks"] = checks;
    payload["pass"] = all_pass;
    write_record(dir / "report.json", std::move(payload), started);

    std::printf("verify %s: %s (%zu checks), report in %s\n", suite.c_str(),
                all_pass ? "PASS" : "FAIL", checks.size(),
                dir.string().c_str());
    return all_pass ? kExitOk : kExitCheckFailed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}

int cmd_reproduce(const std::string& example, long j, int k, int s_max,
                  int resolution, const std::string& out_dir) {
  const std::string started = iso_utc_now();
  ExampleReport rep;
  ordered_json params;
  try {
    if (example == "remark") {
      rep = remark_sequence(j, resolution);
      params["j"] = j;
      params["resolution"] = resolution;
    } else if (example == "v0-example") {
      rep = example_construction(k, s_max, resolution);
      params["k"] = k;
      params["s_max"] = s_max;
      params["resolution"] = resolution;
    } else if (example == "pimpliesq") {
      rep = pimpliesq_demo(resolution);
      params["resolution"] = resolution;
    } else {
      std::fprintf(stderr,
                   "error: unknown example '%s' (known: remark, v0-example, "
                   "pimpliesq)\n",
                   example.c_str());
      return kExitConfig;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }

  try {
    ordered_json payload;
    payload["version"] = kVersion;
    payload["command"] = "reproduce";
    payload["example"] = rep.example;
    payload["params"] = params;
    payload["index"] = rep.index;
    ordered_json computed;
    for (const auto& [name, value] : rep.computed) computed[name] = num_or_inf(value);
    payload["computed"] = computed;
    ordered_json bounds;
    for (const auto& [name, value] : rep.bounds) bounds[name] = num_or_inf(value);
    payload["bounds"] = bounds;
    payload["pass"] = rep.pass;

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_record(dir / "report.json", std::move(payload), started);

    std::printf("example %s (index %ld): %s, report in %s\n",
                rep.example.c_str(), rep.index, rep.pass ? "PASS" : "FAIL",
                dir.string().c_str());
    return rep.pass ? kExitOk : kExitCheckFailed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}

}  // namespace varex::cli
