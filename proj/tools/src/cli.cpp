#include "bmo_cli/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "bmo/concavity.hpp"
#include "bmo/error.hpp"
#include "bmo/extremals.hpp"
#include "bmo/induction.hpp"
#include "bmo/jn_bellman.hpp"
#include "bmo/martingale.hpp"
#include "bmo/osc_bellman.hpp"
#include "bmo/random.hpp"
#include "bmo_cli/json_io.hpp"

namespace bmo::cli {

namespace {

struct Result {
  Json body;
  int code = kOk;
};

using Action = std::function<Result()>;

std::uint64_t default_seed() {
  if (const char* s = std::getenv("BMO_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      // fall through to the fixed default
    }
  }
  return 1;
}

OmegaPoint parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw DomainError("expected a point as x1,x2: " + s);
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw DomainError("expected a point as x1,x2: " + s);
  }
}

int dyadic_dimension(double alpha) {
  const int n = static_cast<int>(std::lround(-std::log2(alpha)));
  if (n < 1 || std::ldexp(1.0, -n) != alpha) throw DomainError("a dyadic tree needs alpha = 2^-n");
  return n;
}

Json witness_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  return Json{{"beta", w->beta}, {"minus", to_json(w->minus)}, {"plus", to_json(w->plus)}};
}

Json shape_json(const ShapeReport& r) {
  return Json{{"samples", r.samples},   {"attempts", r.attempts},
              {"violations", r.violations}, {"worst_violation", r.worst_violation},
              {"witness", witness_json(r.witness)}, {"seed", r.seed}};
}

Json martingale_rows(const BinaryMartingale& m, const GoodnessReport& g) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.nodes().size(); ++i) {
    const MartingaleNode& n = m.node(i);
    rows.push_back({{"path", m.path(i)},
                    {"measure", n.measure},
                    {"x1", n.point.x1},
                    {"x2", n.point.x2},
                    {"alpha_max", n.children ? Json(g.alpha_max[i]) : Json(nullptr)}});
  }
  return rows;
}

// Options shared by every leaf command.
struct Common {
  std::string out = "json";
  std::string output;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  cmd->add_option("-o,--output", c.output, "Write the result to a file instead of stdout");
  cmd->add_option("--seed", c.seed, "Random seed (default: $BMO_SEED or 1)");
}

// ---- tree ------------------------------------------------------------------

Result tree_validate(const std::string& file) {
  const TreeFile f = parse_tree(read_json_file(file));
  Json r{{"file", file}, {"alpha", f.alpha}};
  try {
    const double amax = max_admissible_alpha(f.root);
    const TreePtr t = AlphaTree::build(f.root, f.alpha);
    r["valid"] = true;
    r["max_admissible_alpha"] = amax;
    r["nodes"] = t->size();
    r["depth"] = t->depth();
    return {r, kOk};
  } catch (const StructureError& e) {
    r["valid"] = false;
    r["error"] = e.what();
    r["node"] = e.node();
    return {r, kCheckFailed};
  }
}

Result tree_norms(const std::string& file) {
  const TreeFile f = parse_tree(read_json_file(file));
  const TreePtr t = AlphaTree::build(f.root, f.alpha);
  const SimpleFunction phi = function_from_spec(t, f.root);
  const BmoNorms n = bmo_norms(phi);
  Json rows = Json::array();
  for (const OscillationReport& r : n.reports)
    rows.push_back({{"node", r.node},
                    {"depth", t->node_depth(r.node)},
                    {"measure", t->measure(r.node)},
                    {"mean", r.mean},
                    {"mean_sq", r.mean_sq},
                    {"delta1", r.delta1},
                    {"delta2", r.delta2}});
  return {Json{{"file", file}, {"alpha", f.alpha}, {"generation", phi.depth()}, {"norm2", n.norm2}, {"norm1", n.norm1},
               {"rows", rows}}};
}

// ---- jn / osc --------------------------------------------------------------

Result jn_constants(int n, int points) {
  const DyadicConstants c = dyadic_constants(n);
  Json rows = Json::array();
  for (int k = 0; k <= points; ++k) {
    const double eps = c.eps0 * k / (points + 1);
    rows.push_back({{"eps", eps}, {"C", c.C(eps)}});
  }
  return {Json{{"n", n}, {"alpha", c.alpha}, {"eps0", c.eps0}, {"rows", rows}}};
}

Result jn_delta(double alpha, double eps) {
  const JnParams p = solve_delta(alpha, eps);
  return {Json{{"alpha", alpha},
               {"eps", eps},
               {"eps0", jn_threshold(alpha)},
               {"K", jn_constant(alpha, eps)},
               {"delta", p.delta},
               {"mu", p.mu},
               {"residual", delta_equation(alpha, p.delta, eps)},
               {"bracket_hi", std::min(1.0, (1.0 + alpha) * eps / (2.0 * std::sqrt(alpha)))}}};
}

template <class F>
Json surface_rows(double eps, int grid, double x1_max, F&& value) {
  if (grid < 2) throw DomainError("grid must be at least 2");
  if (!(x1_max > 0.0)) throw DomainError("x1-max must be positive");
  const double x2_max = x1_max * x1_max + eps * eps;
  Json rows = Json::array();
  for (int i = 0; i < grid; ++i) {
    for (int k = 0; k < grid; ++k) {
      const OmegaPoint x{-x1_max + 2.0 * x1_max * i / (grid - 1), x2_max * k / (grid - 1)};
      Json row{{"x1", x.x1}, {"x2", x.x2}};
      value(row, x, in_omega(x, eps));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

Result jn_surface(double alpha, double eps, int grid, double x1_max) {
  const JnParams p = solve_delta(alpha, eps);
  Json rows = surface_rows(eps, grid, x1_max, [&](Json& row, const OmegaPoint& x, bool inside) {
    row["B"] = inside ? Json(jn_bellman(x, p)) : Json(nullptr);
  });
  return {Json{{"alpha", alpha}, {"eps", eps}, {"delta", p.delta}, {"grid", grid}, {"rows", rows}}};
}

Result osc_surface(double alpha, double eps, int grid, double x1_max) {
  const OscRegions g = OscRegions::make(alpha, eps);
  Json rows = surface_rows(eps, grid, x1_max, [&](Json& row, const OmegaPoint& x, bool inside) {
    if (!inside) {
      row["b"] = nullptr;
      row["region"] = nullptr;
      return;
    }
    const RegionInfo info = classify(x, g);
    row["b"] = osc_bellman(x, g);
    row["region"] = info.region == OscRegion::kOmega0 ? "omega0" : "omega1";
  });
  return {Json{{"alpha", alpha}, {"eps", eps}, {"slope", g.slope}, {"grid", grid}, {"rows", rows}}};
}

Result osc_bound(double alpha, double eps, double delta2) {
  const OscRegions g = OscRegions::make(alpha, eps);
  return {Json{{"alpha", alpha}, {"eps", eps}, {"delta2", delta2},
               {"bound", osc_lower_bound(delta2, g.alpha, g.eps)}}};
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  double alpha = 0.25;
  double eps = 0.5;
  int trials = 100;
  int depth = 4;
  std::string tree = "random";
  int max_children = 4;
};

Result verify(bool jn, const VerifyArgs& a, std::uint64_t seed) {
  if (a.trials < 1 || a.depth < 0) throw DomainError("trials must be positive and depth nonnegative");
  if (jn) jn_constant(a.alpha, a.eps);  // reports the threshold up front
  const bool dyadic = a.tree == "dyadic";
  const int n = dyadic ? dyadic_dimension(a.alpha) : 0;

  Rng rng(seed);
  int failures = 0;
  int chain_failures = 0;
  int worst_trial = -1;
  double worst_excess = -INFINITY;
  double worst_ratio = 0.0;
  for (int k = 0; k < a.trials; ++k) {
    const std::size_t depth = static_cast<std::size_t>(a.depth);
    const TreePtr t = dyadic ? build_dyadic_tree(n, a.depth)
                             : random_alpha_tree(rng, a.alpha, depth, static_cast<std::size_t>(a.max_children));
    const SimpleFunction phi = random_function(rng, t, depth, a.eps);
    double excess = 0.0;
    bool holds = false;
    bool chain = false;
    if (jn) {
      const JnVerification v = verify_jn(phi, a.alpha, a.eps);
      excess = v.worst_excess;
      holds = v.holds;
      chain = v.chain.monotone();
    } else {
      const OscVerification v = verify_osc(phi, a.alpha, a.eps);
      excess = v.worst_excess;
      holds = v.holds;
      chain = !v.chain || v.chain->monotone();
      worst_ratio = std::max(worst_ratio, v.worst_ratio);
    }
    failures += holds ? 0 : 1;
    chain_failures += chain ? 0 : 1;
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_trial = k;
    }
  }

  Json r{{"inequality", jn ? "john-nirenberg" : "oscillation"},
         {"alpha", a.alpha},
         {"eps", a.eps},
         {"tree", a.tree},
         {"trials", a.trials},
         {"depth", a.depth},
         {"seed", seed},
         {"failures", failures},
         {"chain_failures", chain_failures},
         {"worst_excess", worst_excess},
         {"worst_trial", worst_trial}};
  if (jn) {
    r["K"] = jn_constant(a.alpha, a.eps);
  } else {
    r["worst_ratio"] = worst_ratio;
  }
  const bool ok = failures == 0 && chain_failures == 0;
  r["passed"] = ok;
  return {r, ok ? kOk : kCheckFailed};
}

// ---- extremal --------------------------------------------------------------

Result phi_star(int n, int depth, const std::string& closure) {
  if (depth < 1) throw DomainError("depth must be at least 1");
  const StarFunction s = build_phi_star(n, static_cast<std::size_t>(depth),
                                        closure == "conditional" ? TailClosure::kConditionalMean
                                                                 : TailClosure::kMomentMatched);
  const std::vector<OmegaPoint> pts = node_points(s.function);
  Json rows = Json::array();
  for (std::size_t k = 0; k < s.chain.size(); ++k) {
    const OmegaPoint& p = pts[s.chain[k]];
    rows.push_back({{"k", k},
                    {"mean", p.x1},
                    {"mean_closed", star_mean(n, k)},
                    {"mean_sq", p.x2},
                    {"mean_sq_closed", star_second_moment(n, k)}});
  }
  const BmoNorms norms = bmo_norms(s.function);
  return {Json{{"n", n},
               {"depth", depth},
               {"closure", closure},
               {"nodes", s.function.tree().size()},
               {"norm2", norms.norm2},
               {"norm1", norms.norm1},
               {"rows", rows}}};
}

Result sharpness(int n, double eps, int max_depth, double a) {
  if (max_depth < 1) throw DomainError("max-depth must be at least 1");
  const SharpnessReport s = sharpness_report(n, eps, static_cast<std::size_t>(max_depth), a);
  Json rows = Json::array();
  for (const SharpnessRow& r : s.rows)
    rows.push_back({{"depth", r.depth},
                    {"lhs", r.lhs},
                    {"tree_lhs", r.tree_lhs ? Json(*r.tree_lhs) : Json(nullptr)},
                    {"gap", r.gap ? Json(*r.gap) : Json(nullptr)}});
  Json body{{"n", n},
            {"eps", eps},
            {"a", a},
            {"eps0", s.eps0},
            {"convergent", s.convergent},
            {"ratio", s.ratio},
            {"closed_form", to_json(s.closed_form)},
            {"growth_slope", s.growth_slope},
            {"verify_holds", s.verify_holds ? Json(*s.verify_holds) : Json(nullptr)},
            {"rows", rows}};
  return {body, s.verify_holds.value_or(true) ? kOk : kCheckFailed};
}

// ---- check -----------------------------------------------------------------

Result check_shape(const std::string& which, const CheckConfig& cfg, bool conditions) {
  ShapeReport r;
  if (which == "jn") {
    const JnParams p = solve_delta(cfg.alpha, cfg.eps);
    r = check_alpha_shape([&](const OmegaPoint& x) { return jn_bellman(x, p); }, Shape::kConcave, cfg);
  } else {
    const OscRegions g = OscRegions::make(cfg.alpha, cfg.eps);
    r = check_alpha_shape([&](const OmegaPoint& x) { return osc_bellman(x, g); }, Shape::kConvex, cfg);
  }
  Json body{{"which", which}, {"mode", which == "jn" ? "concave" : "convex"}, {"alpha", cfg.alpha}, {"eps", cfg.eps}};
  body.update(shape_json(r));
  bool ok = r.passed();
  if (conditions) {
    const SufficientConditionsReport s = check_sufficient_conditions(
        which == "jn" ? BellmanKind::kJohnNirenberg : BellmanKind::kOscillation, cfg);
    Json list = Json::array();
    for (const ConditionReport& c : s.conditions)
      list.push_back({{"name", c.name},
                      {"applicable", c.applicable},
                      {"samples", c.samples},
                      {"discarded", c.discarded},
                      {"violations", c.violations},
                      {"worst_violation", c.worst_violation}});
    body["conditions"] = list;
    body["extreme_slack"] = s.extreme_slack ? Json(*s.extreme_slack) : Json(nullptr);
    ok = ok && s.passed();
  }
  body["passed"] = ok;
  return {body, ok ? kOk : kCheckFailed};
}

// ---- martingale ------------------------------------------------------------

Result martingale_demo(const std::string& strategy) {
  const SquareExample ex = square_example(strategy == "halves" ? SquareStrategy::kHalves : SquareStrategy::kQuarters);
  const GoodnessReport g = martingale_goodness(ex.martingale);
  return {Json{{"strategy", strategy},
               {"eps", ex.martingale.eps()},
               {"overall_alpha", ex.overall_alpha},
               {"worst_node", ex.martingale.path(g.worst_node)},
               {"rows", martingale_rows(ex.martingale, g)}}};
}

Result martingale_goodness_file(const std::string& file) {
  const MartingaleFile f = parse_martingale(read_json_file(file));
  const BinaryMartingale m = BinaryMartingale::from_spec(f.root, f.eps);
  const GoodnessReport g = martingale_goodness(m);
  return {Json{{"file", file},
               {"eps", f.eps},
               {"overall_alpha", g.overall},
               {"worst_node", m.path(g.worst_node)},
               {"rows", martingale_rows(m, g)}}};
}

Result martingale_bound(int n) {
  const Alpha0Bound b = alpha0_bound(n);
  return {Json{{"n", n}, {"alpha0_lower", b.alpha0_lower}, {"eps0_lower", b.eps0_lower}}};
}

void emit(const Json& body, const std::string& format, std::ostream& os) {
  if (format == "csv")
    write_csv(os, body);
  else if (format == "table")
    write_table(os, body);
  else
    write_json(os, body);
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bellman functions, sharp constants and martingales for BMO on alpha-trees", "bmo"};
  app.require_subcommand(1);

  Common common;
  common.seed = default_seed();
  Action action;

  std::string file;
  int n = 1;
  int depth = 4;
  int grid = 41;
  int points = 10;
  double alpha = 0.25;
  double eps = 0.5;
  double delta2 = 0.0;
  double a = 0.0;
  double x1_max = 2.0;
  std::string p_str;
  std::string r_str;
  std::string which = "jn";
  std::string strategy = "halves";
  std::string closure = "moment";
  std::size_t samples = 100000;
  bool conditions = false;
  VerifyArgs va;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::function<Result()> fn) {
    CLI::App* c = parent->add_subcommand(name, help);
    add_common(c, common);
    c->callback([&action, fn] { action = fn; });
    return c;
  };

  // tree
  CLI::App* tree = app.add_subcommand("tree", "Alpha-trees from JSON files")->require_subcommand(1);
  leaf(tree, "validate", "Check the measure and alpha conditions", [&] { return tree_validate(file); })
      ->add_option("file", file)->required();
  leaf(tree, "norms", "BMO norms and per-node oscillations", [&] { return tree_norms(file); })
      ->add_option("file", file)->required();

  // segment
  CLI::App* seg = leaf(&app, "segment", "Part of a chord lying outside Omega_eps", [&] {
    const SegmentGoodness g = segment_goodness(parse_point(p_str), parse_point(r_str), eps);
    return Result{Json{{"eps", eps},
                       {"total_length", g.total_length},
                       {"outside_length", g.outside_length},
                       {"alpha_max", g.alpha_max},
                       {"t_enter", g.t_enter},
                       {"t_exit", g.t_exit}}};
  });
  seg->add_option("--p", p_str, "First endpoint x1,x2")->required();
  seg->add_option("--r", r_str, "Second endpoint x1,x2")->required();
  seg->add_option("--eps", eps)->required();

  // jn
  CLI::App* jn = app.add_subcommand("jn", "John-Nirenberg Bellman function")->require_subcommand(1);
  CLI::App* jc = leaf(jn, "constants", "Dyadic threshold and sharp constant", [&] { return jn_constants(n, points); });
  jc->add_option("--n", n, "Dimension")->required();
  jc->add_option("--points", points, "Grid points below the threshold")->check(CLI::Range(1, 10000));
  CLI::App* jd = leaf(jn, "delta", "Root delta(alpha, eps)", [&] { return jn_delta(alpha, eps); });
  jd->add_option("--alpha", alpha)->required();
  jd->add_option("--eps", eps)->required();
  CLI::App* js = leaf(jn, "surface", "Bellman function on a lattice", [&] { return jn_surface(alpha, eps, grid, x1_max); });
  js->add_option("--alpha", alpha)->required();
  js->add_option("--eps", eps)->required();
  js->add_option("--grid", grid);
  js->add_option("--x1-max", x1_max);

  // osc
  CLI::App* osc = app.add_subcommand("osc", "Oscillation Bellman function")->require_subcommand(1);
  CLI::App* os = leaf(osc, "surface", "Bellman function on a lattice", [&] { return osc_surface(alpha, eps, grid, x1_max); });
  os->add_option("--alpha", alpha)->required();
  os->add_option("--eps", eps)->required();
  os->add_option("--grid", grid);
  os->add_option("--x1-max", x1_max);
  CLI::App* ob = leaf(osc, "bound", "Lower bound for the 1-oscillation", [&] { return osc_bound(alpha, eps, delta2); });
  ob->add_option("--alpha", alpha)->required();
  ob->add_option("--eps", eps)->required();
  ob->add_option("--delta2", delta2)->required();

  // verify
  CLI::App* ver = app.add_subcommand("verify", "Randomized checks of the inequalities")->require_subcommand(1);
  for (const bool is_jn : {true, false}) {
    CLI::App* v = leaf(ver, is_jn ? "jn" : "osc", is_jn ? "Integral John-Nirenberg inequality" : "1- vs 2-oscillations",
                       [&, is_jn] { return verify(is_jn, va, common.seed); });
    v->add_option("--alpha", va.alpha)->required();
    v->add_option("--eps", va.eps)->required();
    v->add_option("--trials", va.trials);
    v->add_option("--depth", va.depth);
    v->add_option("--tree", va.tree)->check(CLI::IsMember({"random", "dyadic"}));
    v->add_option("--max-children", va.max_children)->check(CLI::Range(1, 64));
  }

  // extremal
  CLI::App* ext = app.add_subcommand("extremal", "Extremal function and sharpness")->require_subcommand(1);
  CLI::App* ps = leaf(ext, "phi-star", "Averages of the extremal function", [&] { return phi_star(n, depth, closure); });
  ps->add_option("--n", n)->required();
  ps->add_option("--depth", depth)->required();
  ps->add_option("--closure", closure)->check(CLI::IsMember({"moment", "conditional"}));
  CLI::App* sh = leaf(ext, "sharpness", "Exponential averages of shifted extremals", [&] { return sharpness(n, eps, depth, a); });
  sh->add_option("--n", n)->required();
  sh->add_option("--eps", eps)->required();
  sh->add_option("--max-depth", depth)->required();
  sh->add_option("--a", a);

  // check
  CLI::App* chk = app.add_subcommand("check", "Sampled concavity checks")->require_subcommand(1);
  CLI::App* cs = leaf(chk, "shape", "alpha-concavity / alpha-convexity by sampling", [&] {
    CheckConfig cfg;
    cfg.alpha = alpha;
    cfg.eps = eps;
    cfg.samples = samples;
    cfg.seed = common.seed;
    return check_shape(which, cfg, conditions);
  });
  cs->add_option("--which", which)->check(CLI::IsMember({"jn", "osc"}));
  cs->add_option("--alpha", alpha)->required();
  cs->add_option("--eps", eps)->required();
  cs->add_option("--samples", samples);
  cs->add_flag("--conditions", conditions, "Also check the boundary sufficient conditions");

  // martingale
  CLI::App* mart = app.add_subcommand("martingale", "Binary martingales in Omega_eps")->require_subcommand(1);
  leaf(mart, "demo", "The unit-square example", [&] { return martingale_demo(strategy); })
      ->add_option("--strategy", strategy)
      ->check(CLI::IsMember({"quarters", "halves"}));
  leaf(mart, "goodness", "Goodness of a martingale from JSON", [&] { return martingale_goodness_file(file); })
      ->add_option("file", file)
      ->required();
  leaf(mart, "bound", "Guaranteed lower bounds for alpha0 and eps0", [&] { return martingale_bound(n); })
      ->add_option("--n", n)
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Result result;
  try {
    result = action();
  } catch (const ThresholdError& e) {
    err << "error: " << e.what() << " (threshold eps0 = " << fmt17(e.threshold()) << ")\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (!result.body.contains("seed")) result.body["seed"] = common.seed;

  if (common.output.empty()) {
    emit(result.body, common.out, out);
  } else {
    std::ofstream f(common.output);
    if (!f) {
      err << "error: cannot write " << common.output << '\n';
      return kUsage;
    }
    emit(result.body, common.out, f);
  }
  return result.code;
}

}  // namespace bmo::cli
