#include "freelat/io.hpp"

#include <fstream>
#include <stdexcept>

namespace fbl {
namespace {

Vec vec_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(std::string(what) +
                                ": expected a nonempty array of numbers");
  Vec v;
  v.reserve(j.size());
  for (const auto& t : j) {
    if (!t.is_number())
      throw std::invalid_argument(std::string(what) + ": non-numeric entry");
    v.push_back(t.get<double>());
  }
  return v;
}

std::vector<Vec> vec_list_from_json(const Json& j, const char* what) {
  if (!j.is_array())
    throw std::invalid_argument(std::string(what) + ": expected an array");
  std::vector<Vec> out;
  out.reserve(j.size());
  for (const auto& t : j) out.push_back(vec_from_json(t, what));
  return out;
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument(path + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::invalid_argument(path + ": write failed");
}

Json p_to_json(double p) {
  if (p == kPInf) return "inf";
  return p;
}

double p_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kPInf;
    throw std::invalid_argument("p: only the string \"inf\" is accepted");
  }
  if (!j.is_number()) throw std::invalid_argument("p: expected number or \"inf\"");
  double p = j.get<double>();
  if (!(p >= 1.0)) throw std::invalid_argument("p: must be >= 1");
  return p;
}

PreorderedSpace space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("ball_vertices"))
    throw std::invalid_argument(
        "space: expected {\"dim\", \"ball_vertices\", [\"cone_generators\"]}");
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
    throw std::invalid_argument("space: dim must be a positive integer");
  int dim = j["dim"].get<int>();
  std::vector<Vec> ball = vec_list_from_json(j["ball_vertices"], "ball_vertices");
  std::vector<Vec> gens;
  if (j.contains("cone_generators"))
    gens = vec_list_from_json(j["cone_generators"], "cone_generators");
  return PreorderedSpace(dim, std::move(ball), std::move(gens));
}

Json space_to_json(const PreorderedSpace& space) {
  Json j;
  j["dim"] = space.dim();
  j["ball_vertices"] = space.ball_vertices();
  j["cone_generators"] = space.cone_generators();
  return j;
}

ExprPtr expr_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 1)
    throw std::invalid_argument(
        "expression: each node is an object with exactly one key");
  const std::string key = j.begin().key();
  const Json& val = j.begin().value();
  if (key == "gen") return gen(vec_from_json(val, "gen"));
  if (key == "scale") {
    if (!val.is_object() || !val.contains("c") || !val.contains("of") ||
        !val["c"].is_number())
      throw std::invalid_argument("scale: expected {\"c\": number, \"of\": node}");
    return scale(val["c"].get<double>(), expr_from_json(val["of"]));
  }
  if (key == "abs") return abs_val(expr_from_json(val));
  if (key == "pos_part") return pos_part(expr_from_json(val));
  if (key == "neg_part") return neg_part(expr_from_json(val));
  if (key == "add" || key == "sup" || key == "inf") {
    if (!val.is_array() || val.empty())
      throw std::invalid_argument(key + ": expected a nonempty array of nodes");
    std::vector<ExprPtr> kids;
    kids.reserve(val.size());
    for (const auto& t : val) kids.push_back(expr_from_json(t));
    if (key == "add") return add(std::move(kids));
    if (key == "sup") return sup(std::move(kids));
    return inf(std::move(kids));
  }
  throw std::invalid_argument("expression: unknown node kind \"" + key + "\"");
}

Json expr_to_json(const LatticeExpr& e) {
  switch (e.kind) {
    case ExprKind::Generator:
      return Json{{"gen", e.x}};
    case ExprKind::Scale:
      return Json{{"scale", Json{{"c", e.c}, {"of", expr_to_json(*e.kids[0])}}}};
    case ExprKind::Abs:
      return Json{{"abs", expr_to_json(*e.kids[0])}};
    case ExprKind::PosPart:
      return Json{{"pos_part", expr_to_json(*e.kids[0])}};
    case ExprKind::NegPart:
      return Json{{"neg_part", expr_to_json(*e.kids[0])}};
    default: {
      Json arr = Json::array();
      for (const auto& k : e.kids) arr.push_back(expr_to_json(*k));
      const char* key = e.kind == ExprKind::Add   ? "add"
                        : e.kind == ExprKind::Sup ? "sup"
                                                  : "inf";
      return Json{{key, std::move(arr)}};
    }
  }
}

NormalForm normal_form_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("generators"))
    throw std::invalid_argument(
        "normal form: expected {\"dim\", \"generators\" (m x n x dim)}");
  NormalForm nf;
  nf.dim = j["dim"].get<int>();
  if (nf.dim < 1) throw std::invalid_argument("normal form: dim must be >= 1");
  if (!j["generators"].is_array() || j["generators"].empty())
    throw std::invalid_argument("normal form: generators must be a nonempty array");
  for (const auto& row : j["generators"]) {
    nf.rows.push_back(vec_list_from_json(row, "normal form row"));
    if (nf.rows.back().empty())
      throw std::invalid_argument("normal form: empty row");
  }
  const std::size_t n = nf.rows[0].size();
  for (const auto& row : nf.rows) {
    if (row.size() != n)
      throw std::invalid_argument("normal form: rows must have equal length");
    for (const auto& v : row) {
      if (static_cast<int>(v.size()) != nf.dim)
        throw std::invalid_argument("normal form: entry has wrong dimension");
    }
  }
  return nf;
}

Json normal_form_to_json(const NormalForm& nf) {
  Json j;
  j["dim"] = nf.dim;
  j["m"] = nf.m();
  j["n"] = nf.n();
  j["generators"] = nf.rows;
  return j;
}

FeasibleTuple tuple_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("functionals"))
    throw std::invalid_argument("tuple: expected {\"p\", \"functionals\"}");
  FeasibleTuple t;
  t.p = p_from_json(j["p"]);
  for (auto& v : vec_list_from_json(j["functionals"], "functionals"))
    t.functionals.push_back(DualFunctional{std::move(v)});
  return t;
}

Json tuple_to_json(const FeasibleTuple& t) {
  Json j;
  j["p"] = p_to_json(t.p);
  Json arr = Json::array();
  for (const auto& f : t.functionals) arr.push_back(f.coords);
  j["functionals"] = std::move(arr);
  return j;
}

HomogeneousFunction homogeneous_from_json(const Json& j) {
  if (!j.is_object())
    throw std::invalid_argument("homogeneous function: expected an object");
  if (j.contains("builtin")) {
    if (j["builtin"].get<std::string>() != "c_p")
      throw std::invalid_argument(
          "homogeneous function: the only builtin family is \"c_p\"");
    if (!j.contains("arity") || !j.contains("p"))
      throw std::invalid_argument(
          "homogeneous function: builtin needs \"arity\" and \"p\"");
    return HomogeneousFunction::builtin_cp(j["arity"].get<int>(),
                                           p_from_json(j["p"]));
  }
  if (!j.contains("expr"))
    throw std::invalid_argument(
        "homogeneous function: expected \"expr\" or \"builtin\"");
  ExprPtr e = expr_from_json(j["expr"]);
  int arity = j.contains("arity") ? j["arity"].get<int>() : expr_dim(*e);
  return HomogeneousFunction::from_expr(arity, std::move(e));
}

Json homogeneous_to_json(const HomogeneousFunction& h) {
  Json j;
  j["arity"] = h.arity;
  if (h.is_builtin()) {
    j["builtin"] = "c_p";
    j["p"] = p_to_json(h.builtin_p);
  } else {
    j["expr"] = expr_to_json(*h.expr);
  }
  return j;
}

ConvexityType convexity_type_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("implications") ||
      !j["implications"].is_array())
    throw std::invalid_argument(
        "convexity type: expected {\"implications\": [...]}");
  ConvexityType ct;
  for (const auto& ij : j["implications"]) {
    ConvexityImplication impl;
    if (!ij.contains("arity"))
      throw std::invalid_argument("implication: missing \"arity\"");
    impl.arity = ij["arity"].get<int>();
    if (impl.arity < 1)
      throw std::invalid_argument("implication: arity must be >= 1");
    if (ij.contains("antecedents")) {
      for (const auto& a : ij["antecedents"]) {
        impl.antecedents.push_back(homogeneous_from_json(a));
        if (impl.antecedents.back().arity != impl.arity)
          throw std::invalid_argument("implication: antecedent arity mismatch");
      }
    }
    if (!ij.contains("consequents") || !ij["consequents"].is_array())
      throw std::invalid_argument("implication: missing \"consequents\"");
    for (const auto& c : ij["consequents"]) {
      if (!c.is_array() || c.size() != 2)
        throw std::invalid_argument(
            "implication: each consequent is a [c1, c2] pair");
      auto c1 = homogeneous_from_json(c[0]);
      auto c2 = homogeneous_from_json(c[1]);
      if (c1.arity != impl.arity || c2.arity != impl.arity)
        throw std::invalid_argument("implication: consequent arity mismatch");
      impl.consequents.emplace_back(std::move(c1), std::move(c2));
    }
    ct.implications.push_back(std::move(impl));
  }
  return ct;
}

Json convexity_type_to_json(const ConvexityType& ct) {
  Json arr = Json::array();
  for (const auto& impl : ct.implications) {
    Json ij;
    ij["arity"] = impl.arity;
    Json ants = Json::array();
    for (const auto& a : impl.antecedents) ants.push_back(homogeneous_to_json(a));
    ij["antecedents"] = std::move(ants);
    Json cons = Json::array();
    for (const auto& [c1, c2] : impl.consequents)
      cons.push_back(Json::array({homogeneous_to_json(c1), homogeneous_to_json(c2)}));
    ij["consequents"] = std::move(cons);
    arr.push_back(std::move(ij));
  }
  return Json{{"implications", std::move(arr)}};
}

Json estimate_to_json(const NormEstimate& est, const Json& tolerances) {
  Json j;
  j["norm"] = est.value;
  j["exact"] = est.exact;
  j["p"] = p_to_json(est.certificate.p);
  j["certificate"] = tuple_to_json(est.certificate);
  j["seed"] = est.seed;
  j["restarts"] = est.restarts_used;
  j["tolerances"] = tolerances;
  return j;
}

Json diagnostics_to_json(const SpaceDiagnostics& d) {
  Json j;
  j["trivial"] = d.trivial;
  j["injective"] = d.injective;
  j["isometric"] = d.isometric;
  j["cone"] = d.cone;
  j["bipositive"] = d.bipositive;
  j["bipositivity_samples"] = d.bipositivity_samples;
  j["seed"] = d.seed;
  j["j_norm"] = d.j_norm;
  return j;
}

}  // namespace fbl
