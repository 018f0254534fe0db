#include "mixodyn/cli.hpp"

#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "mixodyn/bifurcation.hpp"
#include "mixodyn/error.hpp"
#include "mixodyn/io.hpp"
#include "mixodyn/solver.hpp"
#include "mixodyn/stability.hpp"

namespace mixodyn {

namespace {

using nlohmann::json;

constexpr const char* kSynopsis =
    "usage: mixodyn <validate|scale|equilibria|classify|simulate|attractor|lyapunov|sweep|curves>"
    " [--config PATH] [--set key=value]... [--out PATH] [--format csv|json]"
    " [--tol-rel R] [--tol-abs A] [--budget T]";

struct Common {
  std::optional<std::string> config;
  std::vector<std::string> sets;
  std::optional<std::string> out;
  std::string format = "csv";
  double tol_rel = 1e-9;
  double tol_abs = 1e-11;
  std::optional<double> budget;
  std::string y0 = "default";
  std::string x_grid;
  std::string a2_grid;
  int threads = 0;
  double transient = 500.0;
  double renorm = 1.0;
  double transient_fraction = 0.5;
};

std::string g17(double v) { return fmt::format("{:.17g}", v); }

json to_json(const State3& s) { return {{"x", s.x}, {"y", s.y}, {"z", s.z}}; }

json to_json(const ScaledParams& sp) {
  return {{"c", sp.c},         {"k", sp.k},           {"x_star", sp.x_star},
          {"a1", sp.a1},       {"a2", sp.a2},         {"b1", sp.b1},
          {"b2", sp.b2},       {"gamma1", sp.gamma1}, {"kappa1", sp.kappa1},
          {"gamma2", sp.gamma2}, {"kappa2", sp.kappa2}, {"m", sp.m}};
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json to_json(const RegionCell& c) {
  const RegionSignature& s = c.signature;
  json j = {{"x_star", c.x_star},
            {"a2", c.a2},
            {"region", std::string(1, c.label)},
            {"provenance", to_string(c.provenance)},
            {"pp_regime", to_string(s.pp_regime)},
            {"a2_band", to_string(s.a2_band)},
            {"n_comp_eq", s.n_comp_eq},
            {"comp_plus_planar_stable", opt_json(s.comp_plus_planar_stable)},
            {"coexist_exists", s.coexist_exists},
            {"coexist_stable", opt_json(s.coexist_stable)},
            {"coexist_failing_criterion", opt_json(s.coexist_failing_criterion)},
            {"mixo_cc_stable", s.mixo_cc_stable},
            {"x_minus", opt_json(s.x_minus)},
            {"x_plus", opt_json(s.x_plus)},
            {"uncertain", c.uncertain},
            {"note", c.note}};
  return j;
}

json to_json(const ThresholdSet& t) {
  return {{"check_a2", t.check_a2},         {"hat_a2", t.hat_a2},
          {"breve_a2", t.breve_a2},         {"tilde_a2", t.tilde_a2},
          {"underline_a2", t.underline_a2}, {"a2_plus", t.a2_plus},
          {"a2_minus", t.a2_minus},         {"a2_star", opt_json(t.a2_star)},
          {"hopf_comp_a2", opt_json(t.hopf_comp_a2)}};
}

ScaledParams scaled_from(const ParamSource& src) {
  if (src.scaled) return *src.scaled;
  return nondimensionalize(*src.chemostat);
}

State3 parse_y0(const std::string& text, const ScaledParams& sp) {
  if (text == "default") return default_initial_state();
  if (text == "invasion") return invasion_start(sp);
  const auto v = parse_real_list(text, 3, "--y0");
  return {v[0], v[1], v[2]};
}

Axis parse_axis(const std::string& text, const char* what) {
  const auto v = parse_real_list(text, 3, what);
  const double n = v[2];
  if (n < 2 || n != static_cast<int>(n)) {
    throw Error(ErrorKind::Usage, std::string(what) + " needs an integer count >= 2");
  }
  return {v[0], v[1], static_cast<int>(n)};
}

SolverOptions solver_options(const Common& o) {
  SolverOptions so;
  so.rel_tol = o.tol_rel;
  so.abs_tol = o.tol_abs;
  return so;
}

std::vector<EquilibriumRecord> listed_equilibria(const ScaledParams& sp, std::ostream& err) {
  std::vector<EquilibriumRecord> out = boundary_equilibria(sp);
  for (auto& e : competition_equilibria(sp)) out.push_back(std::move(e));
  try {
    if (auto co = coexistence_equilibrium(sp)) out.push_back(std::move(*co));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::LocalConditionViolated) throw;
    err << "note: " << e.what() << "\n";
  }
  return out;
}

int cmd_validate(const Common& o, std::string& text, std::ostream& err) {
  const ParamSource src = load_params(o.config, o.sets);
  bool ok = true;
  if (src.chemostat) {
    check_invariants(*src.chemostat);
    const ValidationReport r = validate_trade_offs(*src.chemostat);
    ok = r.admissible();
    for (const auto& m : r.messages) err << m << "\n";
    if (o.format == "json") {
      text = json({{"condition_A", r.condition_A},
                   {"condition_B_global", r.condition_B_global},
                   {"condition_B_local", r.condition_B_local},
                   {"admissible", ok},
                   {"messages", r.messages}})
                 .dump(2) +
             "\n";
    } else {
      text = fmt::format("condition_A,condition_B_global,condition_B_local,admissible\n{},{},{},{}\n",
                         int(r.condition_A), int(r.condition_B_global), int(r.condition_B_local),
                         int(ok));
    }
  } else {
    const ScaledParams& sp = *src.scaled;
    const double bound = mixotroph_efficiency_bound(sp);
    ok = sp.a2 < bound;
    if (!ok) err << "local condition violated: a2 < a1 (1 + b2 x_star) / (1 + b1 x_star) fails\n";
    if (o.format == "json") {
      text = json({{"saturated", sp.saturated()},
                   {"local_condition", ok},
                   {"a2_bound", bound},
                   {"admissible", ok}})
                 .dump(2) +
             "\n";
    } else {
      text = fmt::format("saturated,local_condition,a2_bound,admissible\n{},{},{},{}\n",
                         int(sp.saturated()), int(ok), g17(bound), int(ok));
    }
  }
  return ok ? kExitOk : kExitValidation;
}

int cmd_scale(const Common& o, std::string& text) {
  const ScaledParams sp = scaled_from(load_params(o.config, o.sets));
  if (o.format == "json") {
    text = to_json(sp).dump(2) + "\n";
  } else {
    text = "c,k,x_star,a1,a2,b1,b2,gamma1,kappa1,gamma2,kappa2,m\n";
    text += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", g17(sp.c), g17(sp.k),
                        g17(sp.x_star), g17(sp.a1), g17(sp.a2), g17(sp.b1), g17(sp.b2),
                        g17(sp.gamma1), g17(sp.kappa1), g17(sp.gamma2), g17(sp.kappa2),
                        g17(sp.m));
  }
  return kExitOk;
}

int cmd_equilibria(const Common& o, std::string& text, std::ostream& err) {
  const ScaledParams sp = scaled_from(load_params(o.config, o.sets));
  const auto eqs = listed_equilibria(sp, err);
  json arr = json::array();
  std::string csv = "kind,x,y,z,stability\n";
  for (const auto& e : eqs) {
    const EquilibriumClassification c = classify_equilibrium(e, sp);
    arr.push_back({{"kind", to_string(e.kind)},
                   {"point", to_json(e.point)},
                   {"stability", to_string(c.overall)},
                   {"planar_stable", c.planar.stable},
                   {"transversal_eigenvalue", opt_json(c.transversal_eigenvalue)},
                   {"marginal", c.marginal}});
    csv += fmt::format("{},{},{},{},{}\n", to_string(e.kind), g17(e.point.x), g17(e.point.y),
                       g17(e.point.z), to_string(c.overall));
  }
  text = o.format == "json" ? arr.dump(2) + "\n" : csv;
  return kExitOk;
}

int cmd_classify(const Common& o, std::string& text) {
  const ScaledParams sp = scaled_from(load_params(o.config, o.sets));
  RegionCell cell;
  try {
    cell = classify_region(sp.x_star, sp.a2, sp, o.budget.value_or(kDefaultSimBudget));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OnBoundary) throw;
    cell.x_star = sp.x_star;
    cell.a2 = sp.a2;
    cell.note = e.what();
  }
  if (o.format == "json") {
    json j = to_json(cell);
    j["thresholds"] = to_json(a2_thresholds(sp));
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    write_sweep_csv(os, {cell});
    text = os.str();
  }
  return kExitOk;
}

int cmd_simulate(const Common& o, std::string& text) {
  const ScaledParams sp = scaled_from(load_params(o.config, o.sets));
  const Trajectory tr = integrate(sp, parse_y0(o.y0, sp), o.budget.value_or(1000.0), solver_options(o));
  if (o.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      rows.push_back({{"tau", tr.times[i]},
                      {"x", tr.states[i].x},
                      {"y", tr.states[i].y},
                      {"z", tr.states[i].z}});
    }
    text = rows.dump() + "\n";
  } else {
    std::ostringstream os;
    write_trajectory_csv(os, tr);
    text = os.str();
  }
  return kExitOk;
}

int cmd_attractor(const Common& o, std::string& text) {
  const ScaledParams sp = scaled_from(load_params(o.config, o.sets));
  AttractorOptions ao;
  ao.transient_fraction = o.transient_fraction;
  ao.solver = solver_options(o);
  const AttractorReport r =
      detect_attractor(sp, parse_y0(o.y0, sp), o.budget.value_or(kDefaultSimBudget), ao);
  const std::string eq = r.equilibrium_kind ? std::string(to_string(*r.equilibrium_kind)) : "";
  if (o.format == "json") {
    json pts = json::array();
    for (const auto& p : r.section_points) pts.push_back(to_json(p));
    text = json({{"kind", to_string(r.kind)},
                 {"equilibrium", r.equilibrium_kind ? json(eq) : json(nullptr)},
                 {"point", to_json(r.point)},
                 {"period", r.period},
                 {"amplitude", r.amplitude},
                 {"section", r.section},
                 {"section_points", pts},
                 {"return_spread", r.return_spread},
                 {"terminal", to_json(r.terminal)},
                 {"terminal_rhs_norm", r.terminal_rhs_norm},
                 {"transient_discarded", r.transient_discarded},
                 {"budget", r.budget},
                 {"persistence",
                  {{"x", to_string(r.persistence[0])},
                   {"y", to_string(r.persistence[1])},
                   {"z", to_string(r.persistence[2])}}},
                 {"accepted_steps", r.stats.accepted},
                 {"rejected_steps", r.stats.rejected}})
               .dump(2) +
           "\n";
  } else {
    text = "kind,equilibrium,x,y,z,period,return_spread,terminal_rhs_norm,herbivore,mixotroph\n";
    const State3 p = r.kind == AttractorKind::Equilibrium ? r.point : r.terminal;
    text += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", to_string(r.kind), eq, g17(p.x),
                        g17(p.y), g17(p.z), g17(r.period), g17(r.return_spread),
                        g17(r.terminal_rhs_norm), to_string(r.persistence[1]),
                        to_string(r.persistence[2]));
  }
  return kExitOk;
}

int cmd_lyapunov(const Common& o, std::string& text) {
  const ScaledParams sp = scaled_from(load_params(o.config, o.sets));
  LyapunovOptions lo;
  lo.renorm_interval = o.renorm;
  lo.transient = o.transient;
  lo.rel_tol = o.tol_rel;
  lo.abs_tol = o.tol_abs;
  const LyapunovEstimate e =
      largest_lyapunov_exponent(sp, parse_y0(o.y0, sp), o.budget.value_or(2000.0), lo);
  if (o.format == "json") {
    text = json({{"exponent", e.exponent},
                 {"renorm_interval", e.renorm_interval},
                 {"transient", e.transient},
                 {"horizon", e.horizon},
                 {"renormalizations", e.renormalizations}})
               .dump(2) +
           "\n";
  } else {
    text = fmt::format("exponent,renorm_interval,transient,horizon,renormalizations\n{},{},{},{},{}\n",
                       g17(e.exponent), g17(e.renorm_interval), g17(e.transient),
                       g17(e.horizon), e.renormalizations);
  }
  return kExitOk;
}

int cmd_sweep(const Common& o, std::string& text) {
  const ScaledParams sp = scaled_from(load_params(o.config, o.sets));
  SweepGrid grid{parse_axis(o.x_grid.empty() ? "0.01,0.4,50" : o.x_grid, "--x-grid"),
                 parse_axis(o.a2_grid.empty() ? "0.1,6,50" : o.a2_grid, "--a2-grid")};
  const auto cells = sweep(grid, sp, o.budget.value_or(kDefaultSimBudget), o.threads);
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& c : cells) arr.push_back(to_json(c));
    text = arr.dump(2) + "\n";
  } else {
    std::ostringstream os;
    write_sweep_csv(os, cells);
    text = os.str();
  }
  return kExitOk;
}

int cmd_curves(const Common& o, std::string& text) {
  const ScaledParams sp = scaled_from(load_params(o.config, o.sets));
  const BoundaryCurves c =
      boundary_curves(sp, parse_axis(o.x_grid.empty() ? "0.005,0.995,199" : o.x_grid, "--x-grid"));
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& r : c.rows) {
      rows.push_back({{"x_star", r.x_star}, {"breve_a2", r.breve_a2}, {"tilde_a2", r.tilde_a2}});
    }
    text = json({{"rows", rows},
                 {"check_a2", c.check_a2},
                 {"hat_a2", c.hat_a2},
                 {"a2_star", opt_json(c.a2_star)},
                 {"hopf_comp_a2", opt_json(c.hopf_comp_a2)},
                 {"x_H", c.x_H},
                 {"tilde_max", c.tilde_max},
                 {"tilde_argmax", c.tilde_argmax}})
               .dump(2) +
           "\n";
  } else {
    std::ostringstream os;
    write_curves_csv(os, c);
    text = os.str();
  }
  return kExitOk;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"Mixotroph-autotroph-herbivore chemostat analysis", "mixodyn"};
  app.require_subcommand(1);
  app.fallthrough();
  Common o;
  app.add_option("--config", o.config, "JSON parameter file");
  app.add_option("--set", o.sets, "key=value parameter override")->allow_extra_args(false);
  app.add_option("--out", o.out, "output file (default: stdout)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tol-rel", o.tol_rel, "relative integration tolerance");
  app.add_option("--tol-abs", o.tol_abs, "absolute integration tolerance");
  app.add_option("--budget", o.budget, "integration time");

  auto* validate = app.add_subcommand("validate", "check trade-off conditions");
  auto* scale = app.add_subcommand("scale", "print dimensionless parameters");
  auto* equilibria = app.add_subcommand("equilibria", "list equilibria with stability");
  auto* classify = app.add_subcommand("classify", "region label at (x_star, a2)");
  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory");
  auto* attractor = app.add_subcommand("attractor", "detect the attractor reached from y0");
  auto* lyapunov = app.add_subcommand("lyapunov", "largest Lyapunov exponent estimate");
  auto* sweep_cmd = app.add_subcommand("sweep", "classify a grid of (x_star, a2)");
  auto* curves = app.add_subcommand("curves", "coexistence boundary curves over x_star");

  for (auto* sub : {simulate, attractor, lyapunov}) {
    sub->add_option("--y0", o.y0, "x,y,z start, or 'default' / 'invasion'");
  }
  attractor->add_option("--transient-fraction", o.transient_fraction, "share of budget discarded");
  lyapunov->add_option("--transient", o.transient, "time discarded before averaging");
  lyapunov->add_option("--renorm", o.renorm, "renormalization interval");
  sweep_cmd->add_option("--x-grid", o.x_grid, "lo,hi,n for x_star");
  sweep_cmd->add_option("--a2-grid", o.a2_grid, "lo,hi,n for a2");
  sweep_cmd->add_option("--threads", o.threads, "worker count (capped by MIXODYN_THREADS)");
  curves->add_option("--x-grid", o.x_grid, "lo,hi,n for x_star");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << kSynopsis << "\n";
    return kExitUsage;
  }

  try {
    std::string text;
    int code = kExitOk;
    if (validate->parsed()) code = cmd_validate(o, text, err);
    else if (scale->parsed()) code = cmd_scale(o, text);
    else if (equilibria->parsed()) code = cmd_equilibria(o, text, err);
    else if (classify->parsed()) code = cmd_classify(o, text);
    else if (simulate->parsed()) code = cmd_simulate(o, text);
    else if (attractor->parsed()) code = cmd_attractor(o, text);
    else if (lyapunov->parsed()) code = cmd_lyapunov(o, text);
    else if (sweep_cmd->parsed()) code = cmd_sweep(o, text);
    else if (curves->parsed()) code = cmd_curves(o, text);

    if (o.out) {
      write_text_file(text, *o.out);
    } else {
      out << text;
    }
    return code;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Usage) {
      err << "error: " << e.what() << "\n" << kSynopsis << "\n";
      return kExitUsage;
    }
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace mixodyn
