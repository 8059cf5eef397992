// Batch front-end: parses space / expression / convexity-type files,
// dispatches the engines, writes JSON reports. Exit codes: 0 success,
// 1 input error, 2 failed assertion (counterexample candidate).
#include <cmath>
#include <cstdint>
#include <ctime>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "freelat/convexity.hpp"
#include "freelat/expr.hpp"
#include "freelat/geometry.hpp"
#include "freelat/io.hpp"
#include "freelat/norms.hpp"
#include "freelat/universal.hpp"

namespace {

using namespace fbl;

std::string iso_timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

Json meta_json(const std::string& command) {
  Json j;
  j["command"] = command;
  j["timestamp"] = iso_timestamp();
  return j;
}

void emit(const Json& report, const std::string& out_path) {
  std::cout << report.dump(2) << '\n';
  if (!out_path.empty()) write_json_file(out_path, report);
}

double parse_p(const std::string& text) {
  if (text == "inf") return kPInf;
  std::size_t used = 0;
  double p = std::stod(text, &used);
  if (used != text.size())
    throw std::invalid_argument("--p: expected a number or \"inf\"");
  return p_from_json(Json(p));
}

/// Expression files hold either an expression tree or an explicit normal
/// form (recognized by its "generators" key).
NormalForm load_normal_form(const std::string& path) {
  Json j = load_json_file(path);
  if (j.is_object() && j.contains("generators")) return normal_form_from_json(j);
  return normalize(*expr_from_json(j));
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
  return r;
}

/// Brute-force sup of |nf| over B+: barycentric grid plus one compass
/// refinement. Independent of the LP engine on purpose.
double grid_sup_abs(const PreorderedSpace& space, const NormalForm& nf,
                    double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1.0))
    throw std::invalid_argument("--grid-step: must lie in (0, 1]");
  const Polytope& bplus = space.positive_dual();
  const int res = std::max<int>(1, std::llround(1.0 / grid_step));
  const int k = static_cast<int>(bplus.vertices.size());
  if (binom(res + k - 1, k - 1) > 2e6)
    throw std::invalid_argument(
        "grid oracle: too many grid points; choose a coarser --grid-step");
  double best = 0.0;
  Vec arg = zero_vec(space.dim());
  for (const Vec& pt : simplex_grid(bplus.vertices, res)) {
    double v = std::fabs(evaluate(nf, pt));
    if (v > best) {
      best = v;
      arg = pt;
    }
  }
  // Refinement walks every sign-pattern direction so it can follow edges
  // of B+ that no axis-aligned move stays inside.
  const int d = space.dim();
  std::vector<Vec> dirs;
  {
    std::vector<int> sig(d, -1);
    for (;;) {
      Vec dir(d, 0.0);
      bool nonzero = false;
      for (int i = 0; i < d; ++i) {
        dir[i] = sig[i];
        if (sig[i] != 0) nonzero = true;
      }
      if (nonzero) dirs.push_back(std::move(dir));
      int i = 0;
      while (i < d && sig[i] == 1) sig[i++] = -1;
      if (i == d) break;
      ++sig[i];
    }
  }
  for (double delta = grid_step; delta > 1e-9; delta *= 0.5) {
    for (int sweep = 0; sweep < 50; ++sweep) {
      bool moved = false;
      for (const Vec& dir : dirs) {
        Vec cand = arg;
        for (int i = 0; i < d; ++i) cand[i] += dir[i] * delta;
        if (!bplus.contains(cand)) continue;
        double v = std::fabs(evaluate(nf, cand));
        if (v > best) {
          best = v;
          arg = std::move(cand);
          moved = true;
        }
      }
      if (!moved) break;
    }
  }
  return best;
}

struct Options {
  std::string space_path;
  std::string expr_path;
  std::string tuple_path;
  std::string type_path;
  std::string out_path;
  std::string p_text = "inf";
  std::uint64_t seed = 1;
  int restarts = 64;
  int steps = 500;
  int tuple_size = 0;
  int samples = 200;
  int trials = 50;
  double grid_step = 0.05;
  double tol = -1.0;  // negative: per-command default
  bool oracle_check = false;

  SearchParams search() const {
    SearchParams sp;
    sp.tuple_size = tuple_size;
    sp.restarts = restarts;
    sp.steps = steps;
    sp.seed = seed;
    return sp;
  }
};

void warn_expansion(const NormalForm& nf) {
  const int mn = nf.m() * nf.n();
  if (mn > 12)
    std::cerr << "warning: sup-norm engine expands the negative part as n^m; "
              << "m*n = " << mn << " exceeds 12 and may be slow\n";
}

Json oracle_compare_json(const Options& opt, double* discrepancy_out) {
  PreorderedSpace space = space_from_json(load_json_file(opt.space_path));
  NormalForm nf = load_normal_form(opt.expr_path);
  double p = parse_p(opt.p_text);

  Json j;
  double engine_value = 0.0;
  double oracle_value = 0.0;
  if (p == kPInf) {
    warn_expansion(nf);
    NormEstimate est = norm_inf_exact(space, nf);
    engine_value = est.value;
    oracle_value = grid_sup_abs(space, nf, opt.grid_step);
    j["engine"] = estimate_to_json(est, Json{{"geometry", kGeoTol}});
    j["oracle"] = Json{{"norm", oracle_value},
                       {"method", "grid"},
                       {"grid_step", opt.grid_step}};
  } else {
    NormEstimate est = norm_p_lower(space, nf, p, opt.search());
    NormEstimate ref = norm_p_oracle(space, nf, p, opt.grid_step,
                                     opt.tuple_size);
    engine_value = est.value;
    oracle_value = ref.value;
    j["engine"] = estimate_to_json(est, Json{{"search_stop", 1e-10}});
    j["oracle"] = estimate_to_json(ref, Json{{"grid_step", opt.grid_step}});
  }
  const double tol = opt.tol >= 0.0 ? opt.tol : (p == kPInf ? 1e-3 : 5e-3);
  const double disc =
      std::fabs(engine_value - oracle_value) / std::max(1.0, oracle_value);
  j["discrepancy"] = disc;
  j["tol"] = tol;
  j["pass"] = disc <= tol;
  *discrepancy_out = disc - tol;
  return j;
}

int run_space_analyze(const Options& opt) {
  PreorderedSpace space = space_from_json(load_json_file(opt.space_path));
  Json j;
  j["meta"] = meta_json("space-analyze");
  j["space"] = space_to_json(space);
  Json geo;
  geo["dual_ball_vertices"] = space.dual_ball().vertices;
  geo["positive_dual_vertices"] = space.positive_dual().vertices;
  geo["cone"] = is_cone(space);
  geo["separates_points"] = separates_points(space);
  geo["norming"] = is_norming(space);
  j["geometry"] = std::move(geo);
  j["diagnostics"] =
      diagnostics_to_json(diagnostics(space, opt.samples, opt.seed));
  emit(j, opt.out_path);
  return 0;
}

int run_norm(const Options& opt) {
  PreorderedSpace space = space_from_json(load_json_file(opt.space_path));
  NormalForm nf = load_normal_form(opt.expr_path);
  double p = parse_p(opt.p_text);

  Json j;
  j["meta"] = meta_json("norm");
  j["p"] = p_to_json(p);
  j["normal_form"] = Json{{"m", nf.m()}, {"n", nf.n()}, {"dim", nf.dim}};
  if (p == kPInf) {
    warn_expansion(nf);
    NormEstimate est = norm_inf_exact(space, nf);
    j["estimate"] = estimate_to_json(est, Json{{"geometry", kGeoTol}});
  } else {
    NormEstimate est = norm_p_lower(space, nf, p, opt.search());
    j["estimate"] = estimate_to_json(est, Json{{"search_stop", 1e-10}});
  }
  int rc = 0;
  if (opt.oracle_check) {
    double excess = 0.0;
    j["oracle_check"] = oracle_compare_json(opt, &excess);
    if (excess > 0.0) rc = 2;
  }
  emit(j, opt.out_path);
  return rc;
}

int run_normalize(const Options& opt) {
  Json in = load_json_file(opt.expr_path);
  ExprPtr e = expr_from_json(in);
  NormalForm nf = normalize(*e);
  Json j;
  j["meta"] = meta_json("normalize");
  j["dim"] = nf.dim;
  j["m"] = nf.m();
  j["n"] = nf.n();
  if (!opt.out_path.empty()) {
    write_json_file(opt.out_path, normal_form_to_json(nf));
    j["out"] = opt.out_path;
    std::cout << j.dump(2) << '\n';
  } else {
    j["normal_form"] = normal_form_to_json(nf);
    std::cout << j.dump(2) << '\n';
  }
  return 0;
}

int run_convexity_check(const Options& opt) {
  PreorderedSpace space = space_from_json(load_json_file(opt.space_path));
  Json j;
  j["meta"] = meta_json("convexity-check");
  int rc = 0;

  if (!opt.type_path.empty()) {
    ConvexityType ct = convexity_type_from_json(load_json_file(opt.type_path));
    NormEngine engine;
    engine.p = parse_p(opt.p_text);
    engine.params = opt.search();
    engine.tol = opt.tol >= 0.0 ? opt.tol : 5e-3;
    Json reports = Json::array();
    for (const ConvexityImplication& impl : ct.implications) {
      ImplicationReport rep =
          check_implication(space, engine, impl, opt.trials, opt.seed);
      Json rj;
      rj["trials"] = rep.trials;
      rj["filtered_out"] = rep.filtered_out;
      rj["passes"] = rep.passes;
      rj["filter_rate"] = rep.filter_rate();
      Json cands = Json::array();
      for (const ConvexityCandidate& c : rep.candidates) {
        Json cj;
        cj["trial"] = c.trial;
        cj["consequent"] = c.consequent;
        cj["lhs"] = c.lhs;
        cj["rhs"] = c.rhs;
        Json tuple = Json::array();
        for (const ExprPtr& f : c.tuple) tuple.push_back(expr_to_json(*f));
        cj["tuple"] = std::move(tuple);
        cands.push_back(std::move(cj));
        rc = 2;
      }
      rj["candidates"] = std::move(cands);
      rj["seed"] = opt.seed;
      rj["restarts"] = opt.restarts;
      rj["tol"] = engine.tol;
      reports.push_back(std::move(rj));
    }
    j["implications"] = std::move(reports);
  } else {
    Json in = load_json_file(opt.expr_path);
    if (!in.is_array() || in.empty())
      throw std::invalid_argument(
          "convexity-check: --expr file must hold an array of expressions");
    std::vector<ExprPtr> fs;
    for (const Json& node : in) fs.push_back(expr_from_json(node));
    const double p = parse_p(opt.p_text);
    const double tol = opt.tol >= 0.0 ? opt.tol : 5e-3;
    PConvexityReport rep = p_convexity_check(space, p, fs, opt.search(), tol);
    j["p"] = p_to_json(rep.p);
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["norms"] = rep.norms;
    j["tol"] = rep.tol;
    j["pass"] = rep.pass;
    j["seed"] = opt.seed;
    j["restarts"] = opt.restarts;
    if (!rep.pass) rc = 2;
  }
  emit(j, opt.out_path);
  return rc;
}

int run_factor(const Options& opt) {
  PreorderedSpace space = space_from_json(load_json_file(opt.space_path));
  NormalForm nf = load_normal_form(opt.expr_path);
  PositiveContraction phi{tuple_from_json(load_json_file(opt.tuple_path))};

  NormEngine engine;
  engine.p = phi.tuple.p;
  engine.params = opt.search();
  engine.tol = opt.tol >= 0.0 ? opt.tol : 1e-9;
  ContractionReport rep = verify_contraction(space, phi, nf, engine);

  Json j;
  j["meta"] = meta_json("factor");
  j["p"] = p_to_json(phi.tuple.p);
  j["image"] = rep.image;
  j["image_norm"] = rep.image_norm;
  j["lattice_norm"] = rep.lattice_norm;
  j["tol"] = rep.tol;
  j["pass"] = rep.pass;
  j["seed"] = opt.seed;
  j["restarts"] = opt.restarts;
  emit(j, opt.out_path);
  return rep.pass ? 0 : 2;
}

int run_oracle_compare(const Options& opt) {
  double excess = 0.0;
  Json j;
  j["meta"] = meta_json("oracle-compare");
  j["comparison"] = oracle_compare_json(opt, &excess);
  emit(j, opt.out_path);
  return excess > 0.0 ? 2 : 0;
}

void add_search_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--seed", opt.seed, "RNG seed for stochastic search");
  cmd->add_option("--restarts", opt.restarts, "multi-start restart count");
  cmd->add_option("--steps", opt.steps, "ascent steps per restart");
  cmd->add_option("--tuple-size", opt.tuple_size,
                  "functional tuple size N (0: derive 2mn from the input)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "norms and structural diagnostics of free p-convex Banach lattices "
      "over finite-dimensional pre-ordered spaces"};
  app.require_subcommand(1);
  Options opt;
  int rc = 0;

  CLI::App* sa = app.add_subcommand(
      "space-analyze", "geometry and canonical-map diagnostics of a space");
  sa->add_option("--space", opt.space_path, "space JSON file")->required();
  sa->add_option("--samples", opt.samples, "bipositivity sample count");
  sa->add_option("--seed", opt.seed, "RNG seed for the sampled checks");
  sa->add_option("--out", opt.out_path, "write the report here too");
  sa->callback([&] { rc = run_space_analyze(opt); });

  CLI::App* nm = app.add_subcommand(
      "norm", "norm of a lattice expression (exact for p=inf, certified "
              "lower bound otherwise)");
  nm->add_option("--space", opt.space_path, "space JSON file")->required();
  nm->add_option("--expr", opt.expr_path,
                 "expression or normal-form JSON file")->required();
  nm->add_option("--p", opt.p_text, "convexity index in [1, inf] or \"inf\"");
  add_search_flags(nm, opt);
  nm->add_flag("--oracle-check", opt.oracle_check,
               "cross-check against the brute-force oracle");
  nm->add_option("--grid-step", opt.grid_step, "oracle grid resolution");
  nm->add_option("--tol", opt.tol, "oracle cross-check tolerance");
  nm->add_option("--out", opt.out_path, "write the report here too");
  nm->callback([&] { rc = run_norm(opt); });

  CLI::App* nz = app.add_subcommand(
      "normalize", "rewrite an expression as a sup of infs of generators");
  nz->add_option("--expr", opt.expr_path, "expression JSON file")->required();
  nz->add_option("--out", opt.out_path, "write the normal form here");
  nz->callback([&] { rc = run_normalize(opt); });

  CLI::App* cc = app.add_subcommand(
      "convexity-check", "p-convexity on a tuple of expressions, or a full "
                         "convexity-type fuzz when --type is given");
  cc->add_option("--space", opt.space_path, "space JSON file")->required();
  cc->add_option("--expr", opt.expr_path,
                 "JSON array of expressions (tuple mode)");
  cc->add_option("--type", opt.type_path, "convexity-type JSON file");
  cc->add_option("--p", opt.p_text, "convexity index in [1, inf] or \"inf\"");
  cc->add_option("--trials", opt.trials, "random tuples per implication");
  add_search_flags(cc, opt);
  cc->add_option("--tol", opt.tol, "inequality slack");
  cc->add_option("--out", opt.out_path, "write the report here too");
  cc->callback([&] {
    if (opt.type_path.empty() && opt.expr_path.empty())
      throw CLI::ValidationError(
          "convexity-check needs --expr or --type");
    rc = run_convexity_check(opt);
  });

  CLI::App* fc = app.add_subcommand(
      "factor", "factor a positive contraction through the free lattice and "
                "verify contractivity on one element");
  fc->add_option("--space", opt.space_path, "space JSON file")->required();
  fc->add_option("--expr", opt.expr_path,
                 "expression or normal-form JSON file")->required();
  fc->add_option("--tuple", opt.tuple_path,
                 "feasible-tuple JSON file (the contraction)")->required();
  add_search_flags(fc, opt);
  fc->add_option("--tol", opt.tol, "contraction slack");
  fc->add_option("--out", opt.out_path, "write the report here too");
  fc->callback([&] { rc = run_factor(opt); });

  CLI::App* oc = app.add_subcommand(
      "oracle-compare", "engine value vs brute-force reference; exits 2 when "
                        "they disagree beyond --tol");
  oc->add_option("--space", opt.space_path, "space JSON file")->required();
  oc->add_option("--expr", opt.expr_path,
                 "expression or normal-form JSON file")->required();
  oc->add_option("--p", opt.p_text, "convexity index in [1, inf] or \"inf\"");
  add_search_flags(oc, opt);
  oc->add_option("--grid-step", opt.grid_step, "oracle grid resolution");
  oc->add_option("--tol", opt.tol,
                 "allowed discrepancy relative to max(1, oracle)");
  oc->add_option("--out", opt.out_path, "write the report here too");
  oc->callback([&] { rc = run_oracle_compare(opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
