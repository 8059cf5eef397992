#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "freelat/io.hpp"
#include "freelat/rng.hpp"

using namespace fbl;

TEST_CASE("p round trips and rejects junk") {
  CHECK(p_to_json(kPInf) == Json("inf"));
  CHECK(p_to_json(2.0) == Json(2.0));
  CHECK(p_from_json(Json("inf")) == kPInf);
  CHECK(p_from_json(Json(1.5)) == 1.5);
  CHECK_THROWS_AS(p_from_json(Json("sup")), std::invalid_argument);
  CHECK_THROWS_AS(p_from_json(Json(0.5)), std::invalid_argument);
  CHECK_THROWS_AS(p_from_json(Json(true)), std::invalid_argument);
}

TEST_CASE("space round trip") {
  PreorderedSpace b = fixtures::space_b();
  Json j = space_to_json(b);
  PreorderedSpace back = space_from_json(j);
  CHECK(back.dim() == 2);
  CHECK(back.ball_vertices() == b.ball_vertices());
  CHECK(back.cone_generators() == b.cone_generators());
  CHECK(space_to_json(back) == j);

  // cone_generators is optional and defaults to the empty wedge.
  Json bare = {{"dim", 2}, {"ball_vertices", j["ball_vertices"]}};
  CHECK(space_from_json(bare).cone_generators().empty());

  CHECK_THROWS_AS(space_from_json(Json{{"dim", 2}}), std::invalid_argument);
  CHECK_THROWS_AS(space_from_json(Json{{"dim", 0},
                                       {"ball_vertices", j["ball_vertices"]}}),
                  std::invalid_argument);
  Json bad = j;
  bad["ball_vertices"][0] = {1.0, "x"};
  CHECK_THROWS_AS(space_from_json(bad), std::invalid_argument);
}

TEST_CASE("expression round trip preserves structure and values") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    ExprPtr e = random_expression(2, 4, rng);
    Json j = expr_to_json(*e);
    ExprPtr back = expr_from_json(j);
    CHECK(expr_to_json(*back) == j);
    for (int s = 0; s < 10; ++s) {
      Vec pt = rng.uniform_vec(2, -2.0, 2.0);
      CHECK(evaluate(*e, pt) == evaluate(*back, pt));
    }
  }
}

TEST_CASE("expression parsing rejects malformed nodes") {
  CHECK_THROWS_AS(expr_from_json(Json::array()), std::invalid_argument);
  CHECK_THROWS_AS(expr_from_json(Json{{"gen", {1.0}}, {"abs", {{"gen", {1.0}}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(expr_from_json(Json{{"mystery", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(expr_from_json(Json{{"scale", {{"of", {{"gen", {1.0}}}}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(expr_from_json(Json{{"add", Json::array()}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(expr_from_json(Json{{"gen", Json::array()}}),
                  std::invalid_argument);
}

TEST_CASE("normal form round trip") {
  Rng rng(32);
  NormalForm nf = fixtures::random_normal_form(2, 3, 2, rng);
  Json j = normal_form_to_json(nf);
  CHECK(j["m"] == 3);
  CHECK(j["n"] == 2);
  NormalForm back = normal_form_from_json(j);
  CHECK(back.dim == nf.dim);
  CHECK(back.rows == nf.rows);

  CHECK_THROWS_AS(normal_form_from_json(Json{{"dim", 2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      normal_form_from_json(Json{{"dim", 2}, {"generators", Json::array()}}),
      std::invalid_argument);
  Json ragged = j;
  ragged["generators"][0].erase(1);
  CHECK_THROWS_AS(normal_form_from_json(ragged), std::invalid_argument);
  Json wrong_dim = j;
  wrong_dim["generators"][0][0] = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(normal_form_from_json(wrong_dim), std::invalid_argument);
}

TEST_CASE("tuple round trip") {
  FeasibleTuple t;
  t.p = 1.0;
  t.functionals = {DualFunctional{{0.5, 0.0}}, DualFunctional{{0.0, 0.5}}};
  Json j = tuple_to_json(t);
  CHECK(j["p"] == Json(1.0));
  FeasibleTuple back = tuple_from_json(j);
  CHECK(back.p == 1.0);
  REQUIRE(back.functionals.size() == 2);
  CHECK(back.functionals[0].coords == t.functionals[0].coords);
  CHECK(back.functionals[1].coords == t.functionals[1].coords);

  t.p = kPInf;
  CHECK(tuple_to_json(t)["p"] == Json("inf"));
  CHECK(tuple_from_json(tuple_to_json(t)).p == kPInf);

  CHECK_THROWS_AS(tuple_from_json(Json{{"functionals", Json::array()}}),
                  std::invalid_argument);
}

TEST_CASE("homogeneous function round trip") {
  HomogeneousFunction c2 = HomogeneousFunction::builtin_cp(3, 2.0);
  Json j = homogeneous_to_json(c2);
  CHECK(j["builtin"] == "c_p");
  HomogeneousFunction back = homogeneous_from_json(j);
  CHECK(back.is_builtin());
  CHECK(back.arity == 3);
  CHECK(back.builtin_p == 2.0);
  CHECK(back({3.0, 4.0, 0.0}) == doctest::Approx(5.0));

  // Expression body: max(t_1, 2 t_2) with the formal variables as axes.
  ExprPtr body = sup({gen({1.0, 0.0}), scale(2.0, gen({0.0, 1.0}))});
  HomogeneousFunction h = HomogeneousFunction::from_expr(2, std::move(body));
  Json hj = homogeneous_to_json(h);
  HomogeneousFunction hb = homogeneous_from_json(hj);
  CHECK_FALSE(hb.is_builtin());
  CHECK(hb.arity == 2);
  Rng rng(33);
  for (int s = 0; s < 20; ++s) {
    Vec t = rng.uniform_vec(2, -2.0, 2.0);
    CHECK(hb(t) == h(t));
  }

  // Arity defaults to the expression's formal dimension.
  Json no_arity = {{"expr", hj["expr"]}};
  CHECK(homogeneous_from_json(no_arity).arity == 2);

  CHECK_THROWS_AS(homogeneous_from_json(Json{{"builtin", "d_p"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(homogeneous_from_json(Json{{"builtin", "c_p"}, {"p", 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(homogeneous_from_json(Json{{"arity", 2}}),
                  std::invalid_argument);
}

TEST_CASE("convexity type round trip") {
  Json j = {
      {"implications",
       {{{"arity", 2},
         {"antecedents", Json::array()},
         {"consequents",
          {{{{"arity", 2}, {"builtin", "c_p"}, {"p", 2.0}},
            {{"arity", 2}, {"builtin", "c_p"}, {"p", 2.0}}}}}}}}};
  ConvexityType ct = convexity_type_from_json(j);
  REQUIRE(ct.implications.size() == 1);
  CHECK(ct.implications[0].arity == 2);
  CHECK(ct.implications[0].antecedents.empty());
  REQUIRE(ct.implications[0].consequents.size() == 1);
  CHECK(ct.implications[0].consequents[0].first.builtin_p == 2.0);

  Json out = convexity_type_to_json(ct);
  CHECK(convexity_type_to_json(convexity_type_from_json(out)) == out);

  CHECK_THROWS_AS(convexity_type_from_json(Json::object()),
                  std::invalid_argument);
  Json bad_arity = j;
  bad_arity["implications"][0]["consequents"][0][0]["arity"] = 3;
  CHECK_THROWS_AS(convexity_type_from_json(bad_arity), std::invalid_argument);
  Json lone = j;
  lone["implications"][0]["consequents"][0] = {
      {{"arity", 2}, {"builtin", "c_p"}, {"p", 2.0}}};
  CHECK_THROWS_AS(convexity_type_from_json(lone), std::invalid_argument);
  Json no_arity = j;
  no_arity["implications"][0].erase("arity");
  CHECK_THROWS_AS(convexity_type_from_json(no_arity), std::invalid_argument);
}

TEST_CASE("report serialization carries every field") {
  PreorderedSpace a = fixtures::space_a();
  NormalForm nf;
  nf.dim = 2;
  nf.rows = {{{1.0, 0.0}}};
  NormEstimate est = norm_inf_exact(a, nf);
  Json j = estimate_to_json(est, Json{{"geometry", 1e-9}});
  CHECK(j["norm"] == est.value);
  CHECK(j["exact"] == true);
  CHECK(j["p"] == Json("inf"));
  CHECK(j["certificate"]["functionals"].size() == 1);
  CHECK(j["tolerances"]["geometry"] == 1e-9);
  CHECK(j.contains("seed"));
  CHECK(j.contains("restarts"));

  SpaceDiagnostics d = diagnostics(a);
  Json dj = diagnostics_to_json(d);
  CHECK(dj["trivial"] == false);
  CHECK(dj["injective"] == true);
  CHECK(dj["isometric"] == true);
  CHECK(dj["cone"] == true);
  CHECK(dj["bipositive"] == true);
  CHECK(dj["bipositivity_samples"] == d.bipositivity_samples);
  CHECK(dj["j_norm"] == 1.0);
}

TEST_CASE("file round trip and load errors") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "freelat_io_test";
  fs::create_directories(dir);
  fs::path file = dir / "space.json";

  Json j = space_to_json(fixtures::space_e());
  write_json_file(file.string(), j);
  CHECK(load_json_file(file.string()) == j);

  fs::path missing = dir / "missing.json";
  bool threw = false;
  try {
    load_json_file(missing.string());
  } catch (const std::invalid_argument& e) {
    threw = true;
    CHECK(std::string(e.what()).find("missing.json") != std::string::npos);
  }
  CHECK(threw);

  fs::path garbage = dir / "garbage.json";
  {
    std::FILE* f = std::fopen(garbage.string().c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("{ not json", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_json_file(garbage.string()), std::invalid_argument);

  fs::remove_all(dir);
}
