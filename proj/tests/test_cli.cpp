#include "doctest.h"
#include "spinob/cli.hpp"

using namespace spinob;
using namespace spinob::cli;

namespace {

Json f3_form() { return Json{{"field", {{"kind", "Fp"}, {"p", 3}}}, {"diagonal", {1, 1, 1, 2}}}; }
Json q6_form() { return Json{{"field", {{"kind", "Fp"}, {"p", 3}}}, {"diagonal", {1, 1, 1, 1, 1, 1}}}; }

std::string pointer_of(const std::string& cmd, const Json& cfg) {
  try {
    parse_config(cmd, cfg);
  } catch (const ConfigError& e) {
    return e.pointer();
  }
  return "";
}

}  // namespace

TEST_CASE("element literals round trip") {
  const Field& q = Field::rationals();
  CHECK(decode(Json("-3/6"), q, "") == q.from_rational(mpq_class(-1, 2)));
  CHECK(encode(q.from_rational(mpq_class(5, 3))) == Json("5/3"));
  CHECK_THROWS_AS(decode(Json("1/0"), q, "/x"), ConfigError);
  CHECK_THROWS_AS(decode(Json("x"), q, "/x"), ConfigError);
  CHECK_THROWS_AS(decode(Json(1.5), q, "/x"), ConfigError);

  const Field& q2 = Field::qsqrt(2);
  FieldElement x = q2.make(q.from_int(1), q.from_rational(mpq_class(-2, 7)));
  CHECK(decode(encode(x), q2, "") == x);
  CHECK(decode(Json(4), q2, "") == q2.from_int(4));

  const Field& f9 = Field::finite(3, 2);
  for (const auto& e : f9.elements()) CHECK(decode(encode(e), f9, "") == e);
  CHECK(decode(Json(-1), Field::prime(5), "") == Field::prime(5).from_int(4));

  QuadSpace s(Field::prime(3), {Field::prime(3).from_int(1), Field::prime(3).from_int(1), Field::prime(3).from_int(1),
                                Field::prime(3).from_int(2)});
  ObstructionContext ctx(s);
  for (const auto& z : ctx.z().nonzero_elements()) CHECK(decode(encode(z), ctx.z(), "") == z);
}

TEST_CASE("field and form descriptors") {
  CHECK(&decode_field(Json{{"kind", "Q"}}, "") == &Field::rationals());
  CHECK(&decode_field(Json{{"kind", "Qsqrt"}, {"d", 2}}, "") == &Field::qsqrt(2));
  CHECK(&decode_field(Json{{"kind", "Fq"}, {"p", 3}, {"m", 2}}, "") == &Field::finite(3, 2));
  for (const Field* f : {&Field::rationals(), &Field::qsqrt(-5), &Field::prime(7), &Field::finite(5, 3)})
    CHECK(&decode_field(encode_field(*f), "") == f);
  CHECK_THROWS_AS(decode_field(Json{{"kind", "Qsqrt"}, {"d", 4}}, "/field"), ConfigError);
  CHECK_THROWS_AS(decode_field(Json{{"kind", "Fp"}, {"p", 9}}, "/field"), ConfigError);
  CHECK_THROWS_AS(decode_field(Json{{"kind", "R"}}, "/field"), ConfigError);
  QuadSpace s = decode_form(f3_form(), "/form");
  CHECK(s.dimension() == 4);
  CHECK(encode_form(s) == f3_form());
}

TEST_CASE("validation points at the offending entry") {
  Json bad = f3_form();
  bad["diagonal"][2] = 0;
  CHECK(pointer_of("spinor-norm", Json{{"form", bad}}) == "/form/diagonal/2");
  CHECK(pointer_of("spinor-norm", Json::object()) == "/form");
  CHECK(pointer_of("spinor-norm", Json{{"form", f3_form()}, {"bogus", 1}}) == "/bogus");
  CHECK(pointer_of("h1", Json{{"form", f3_form()}, {"samples", 0}}) == "/samples");
  CHECK(pointer_of("h1", Json{{"form", f3_form()}, {"seed", -1}}) == "/seed");
  CHECK(pointer_of("h1", Json{{"form", f3_form()}, {"schema", "v2"}}) == "/schema");
  CHECK(pointer_of("np-check", Json{{"form", f3_form()}, {"extension", {{"kind", "Fq"}, {"p", 3}, {"m", 1}}}}) ==
        "/extension/m");
  CHECK(pointer_of("hilbert", Json{{"a", 0}, {"b", 5}}) == "/a");
  CHECK(pointer_of("hilbert", Json{{"a", 2}, {"b", 5}, {"place", 4}}) == "/place");
  // Not an isometry of <1,1,1,2>.
  Json m = Json::array({{1, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  CHECK(pointer_of("spinor-norm", Json{{"form", f3_form()}, {"isometry", m}}) == "/isometry");
  CHECK(pointer_of("nope", Json::object()) == "/");
}

TEST_CASE("spinor-norm of the identity is trivial") {
  Json id = Json::array({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  Json r = run_command(parse_config("spinor-norm", Json{{"form", f3_form()}, {"isometry", id}}));
  REQUIRE(r["results"].size() == 1);
  CHECK(r["results"][0]["trivial"] == true);
  CHECK(r["results"][0]["vectors"].empty());
  CHECK(r["schema"] == "v1");
  CHECK(verify_report(r).ok);
}

TEST_CASE("h1 on q6 over F_3") {
  Json r = run_command(parse_config("h1", Json{{"form", q6_form()}}));
  CHECK(r["results"][0]["order"] == 4);
  CHECK(r["results"][0]["u_over_u0"] == 4);
  CHECK(r["results"][0]["agree"] == true);
  CHECK(verify_report(r).ok);
}

TEST_CASE("reports are deterministic and replay") {
  std::vector<std::pair<std::string, Json>> runs = {
      {"spinor-norm", {{"form", f3_form()}, {"samples", 5}, {"seed", 9}}},
      {"lift", {{"form", q6_form()}, {"samples", 3}, {"seed", 9}}},
      {"obstruction", {{"form", q6_form()}, {"samples", 3}, {"seed", 9}}},
      {"np-check", {{"form", f3_form()}, {"extension", {{"kind", "Fq"}, {"p", 3}, {"m", 3}}}, {"samples", 3}}},
      {"hilbert", {{"a", "-1"}, {"b", "-1"}}},
      {"search",
       {{"forms", {f3_form()}}, {"extensions", {{{"kind", "Fq"}, {"p", 3}, {"m", 3}}, {{"kind", "Qsqrt"}, {"d", 2}}}},
        {"samples", 2}}},
  };
  for (const auto& [cmd, cfg] : runs) {
    CAPTURE(cmd);
    RunConfig c = parse_config(cmd, cfg);
    std::string a = render(run_command(c)), b = render(run_command(c));
    CHECK(a == b);
    VerifyOutcome v = verify_report(Json::parse(a));
    CHECK_MESSAGE(v.ok, v.message);
  }
  Json other = run_command(parse_config("spinor-norm", Json{{"form", f3_form()}, {"samples", 5}, {"seed", 10}}));
  CHECK(render(other) != render(run_command(parse_config("spinor-norm", runs[0].second))));
}

TEST_CASE("replay rejects tampered reports") {
  Json r = run_command(parse_config("obstruction", Json{{"form", f3_form()}, {"samples", 4}, {"seed", 1}}));
  std::size_t n = 0;
  for (auto& e : r["results"]) {
    if (e["obstruction"].is_null()) continue;
    Json bad = r;
    Json& o = bad["results"][n]["obstruction"];
    o["alpha"] = o["alpha"] == 1 ? 2 : 1;
    CHECK_FALSE(verify_report(bad).ok);
    ++n;
  }
  CHECK(n > 0);

  Json l = run_command(parse_config("lift", Json{{"form", q6_form()}, {"samples", 1}, {"seed", 1}}));
  Json bad = l;
  bad["results"][0]["omega"][0]["coeff"] = bad["results"][0]["omega"][0]["coeff"] == 1 ? 2 : 1;
  CHECK_FALSE(verify_report(bad).ok);
  bad = l;
  bad["schema"] = "v0";
  CHECK_FALSE(verify_report(bad).ok);
  bad = l;
  bad["seed"] = 99;
  CHECK_FALSE(verify_report(bad).ok);
  CHECK_FALSE(verify_report(Json::array()).ok);
}

TEST_CASE("hilbert report") {
  Json r = run_command(parse_config("hilbert", Json{{"a", 2}, {"b", 5}}));
  CHECK(r["results"][0]["ramified"] == Json::array({2, 5}));
  CHECK(r["results"][0]["split"] == false);
  CHECK(r["results"][0]["product"] == 1);
  Json inf = run_command(parse_config("hilbert", Json{{"a", -1}, {"b", -1}, {"place", "inf"}}));
  CHECK(inf["results"][0]["places"] == Json::array({{{"place", "inf"}, {"symbol", -1}}}));
}

TEST_CASE("obstruction with an explicit theta and witness") {
  QuadSpace s = decode_form(f3_form(), "");
  ObstructionContext ctx(s);
  FieldElement z = ctx.z().generator();
  Json cfg = {{"form", f3_form()}, {"theta", {{"z", encode(z)}}}};
  Json r = run_command(parse_config("obstruction", cfg));
  REQUIRE(r["results"].size() == 1);
  // A witness whose multiplier does not match j(theta) is rejected up front.
  SquareClass jv = j_map(ctx, z);
  Similitude g = find_similitude_with_multiplier(s, jv.representative()).similitude.value();
  cfg["witness"] = encode(g.matrix());
  Json ok = run_command(parse_config("obstruction", cfg));
  CHECK(ok["results"][0]["special"]["status"] == "Given");
  CHECK(verify_report(ok).ok);
  FieldElement other = s.field().least_nonsquare() * jv.representative();
  Similitude g2 = find_similitude_with_multiplier(s, other).similitude.value();
  cfg["witness"] = encode(g2.matrix());
  CHECK(pointer_of("obstruction", cfg) == "/witness");
}
