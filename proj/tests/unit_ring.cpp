#include <catch_amalgamated.hpp>

#include "prism/ring.hpp"

using namespace prism;

namespace {

LaurentPoly P(const Ctx& c, const std::string& s) { return LaurentPoly::parse(c, s); }

}  // namespace

TEST_CASE("addition identities", "[ring]") {
  Ctx c = standard_context(1, {"t"});
  LaurentPoly p = P(c, "(1 - y1)*t^2 + (y1 - x1^-1)*t");
  CHECK(p + LaurentPoly(c) == p);
  CHECK((P(c, "q - q^-1") + P(c, "q^-1 - q")).is_zero());
  CHECK((p + (-p)).is_zero());
  CHECK(p - p == LaurentPoly(c));
}

TEST_CASE("multiplication by hand expansion", "[ring]") {
  Ctx a = RingContext::make({"A"});
  LaurentPoly d = P(a, "-A^2 - A^-2");
  CHECK(d * LaurentPoly::one(a) == d);
  CHECK(d * d == P(a, "A^4 + 2 + A^-4"));

  Ctx c = standard_context(1, {"t"});
  // (t-1)(1 - 2xy + x^2y^2), expanded by hand
  LaurentPoly lhs = P(c, "(t - 1)*(1 - x1*y1)^2");
  LaurentPoly rhs = P(c, "t - 2*t*x1*y1 + t*x1^2*y1^2 - 1 + 2*x1*y1 - x1^2*y1^2");
  CHECK(lhs == rhs);
  CHECK(lhs.size() == 6);
}

TEST_CASE("big coefficients stay exact", "[ring]") {
  Ctx c = RingContext::make({"q"});
  LaurentPoly p = P(c, "1 + q").pow(100);
  // central binomial coefficient C(100,50) by Pascal's rule
  std::vector<Int> row{1};
  for (int n = 1; n <= 100; ++n) {
    std::vector<Int> next(n + 1, 1);
    for (int k = 1; k < n; ++k) next[k] = row[k - 1] + row[k];
    row = next;
  }
  LaurentPoly::Exps e(1, 50 * c->qden());
  CHECK(p.terms().at(e) == row[50]);
  CHECK(row[50].str() == "100891344545564193334812497256");
}

TEST_CASE("half powers of q", "[ring]") {
  Ctx c = standard_context(0);
  LaurentPoly h = LaurentPoly::q_pow(c, 1, 2);
  CHECK(h * h == LaurentPoly::var(c, "q"));
  CHECK(h.str() == "q^(1/2)");
  CHECK(P(c, "q^(1/2)*q^(-3/2)") == LaurentPoly::var(c, "q", -1));
  CHECK_THROWS_AS(LaurentPoly::q_pow(c, 1, 3), RingError);
}

TEST_CASE("printing is descending and parse round-trips", "[ring]") {
  Ctx c = standard_context(1);
  LaurentPoly p = P(c, "3 - q^2*x1/y1");
  CHECK(p.str() == "-q^2*x1*y1^-1 + 3");
  CHECK(P(c, p.str()) == p);
  CHECK(LaurentPoly(c).str() == "0");
  CHECK(LaurentPoly::from_json(c, p.to_json()) == p);
}

TEST_CASE("parse errors", "[ring]") {
  Ctx c = standard_context(1);
  CHECK_THROWS_AS(P(c, "x1 +"), ParseError);
  CHECK_THROWS_AS(P(c, "z"), RingError);
  CHECK_THROWS_AS(P(c, "(x1 + 1"), ParseError);
  // division by a non-monomial is not a Laurent polynomial
  CHECK_THROWS(P(c, "1/(1 + x1)"));
}

TEST_CASE("context rules", "[ring]") {
  CHECK_THROWS_AS(RingContext::make({"q", "q"}), RingError);
  CHECK_THROWS_AS(RingContext::make({"q", "y1", "x1"}, 1), RingError);
  CHECK_NOTHROW(RingContext::make({"t", "x1", "y1", "x2", "y2"}, 2));
  Ctx a = RingContext::make({"q"}), b = RingContext::make({"t"});
  CHECK_THROWS_AS(LaurentPoly::one(a) + LaurentPoly::one(b), RingError);
}

TEST_CASE("substitution", "[ring]") {
  Ctx c = RingContext::make({"t", "x", "w"}, 0);
  // w = x*y with y written as a new ring
  Ctx d = RingContext::make({"t", "x", "y"}, 0);
  LaurentPoly p = P(c, "t^2 - t^2*x^-1*w + t*x^-1*w - t*x^-1 + x^-1 - x^-2*w");
  std::map<std::string, LaurentPoly> phi{{"t", P(d, "t")}, {"x", P(d, "x")}, {"w", P(d, "x*y")}};
  CHECK(substitute(p, phi, d) == P(d, "t^2 - t^2*y + t*y - t*x^-1 + x^-1 - x^-1*y"));

  Ctx q = RingContext::make({"q", "x"});
  CHECK(substitute(P(q, "q^2 + x"), {{"q", P(q, "q^-1")}}) == P(q, "q^-2 + x"));
  // general polynomial images
  CHECK(substitute(P(q, "x^2"), {{"x", P(q, "1 + q")}}) == P(q, "1 + 2*q + q^2"));
  CHECK(invert_vars(P(q, "q*x^2 - x^-1"), {"x"}) == P(q, "q*x^-2 - x"));
}

TEST_CASE("comparison up to units", "[ring]") {
  Ctx c = standard_context(1);
  LaurentPoly r = P(c, "1 - x1 + q*y1");
  LaurentPoly u = P(c, "-q^3*x1");
  auto got = eq_up_to_unit(u * r, r, UnitSpec::all(c));
  REQUIRE(got);
  CHECK(*got == u);
  CHECK_FALSE(eq_up_to_unit(u * r, r, UnitSpec::of({"q"})));
  CHECK_FALSE(eq_up_to_unit(P(c, "2") * r, r, UnitSpec::all(c)));
  CHECK_FALSE(eq_up_to_unit(r + P(c, "1"), r, UnitSpec::all(c)));
  // q^(1/2) only with q_half
  LaurentPoly h = LaurentPoly::q_pow(c, 1, 2);
  CHECK_FALSE(eq_up_to_unit(h * r, r, UnitSpec::all(c)));
  CHECK(eq_up_to_unit(h * r, r, UnitSpec::all(c, true)));
  CHECK(eq_up_to_unit(LaurentPoly(c), LaurentPoly(c), UnitSpec::none()));
}

TEST_CASE("canonical form is constant on unit orbits", "[ring]") {
  Ctx c = standard_context(2);
  LaurentPoly p = P(c, "q^3*x1 - 2*y2^-1 + q^-1*x1*y1*x2");
  LaurentPoly cp = canonical_form(p, UnitSpec::all(c, true));
  for (const char* unit : {"-1", "q^(1/2)", "x1^-4*y2", "-q^-7*x2^3*y1"}) {
    LaurentPoly moved = P(c, unit) * p;
    CHECK(canonical_form(moved, UnitSpec::all(c, true)) == cp);
  }
  CHECK(canonical_form(p, UnitSpec::all(c, true)).least_term().second > 0);
  CHECK(canonical_form(LaurentPoly(c), UnitSpec::all(c)).is_zero());
}

TEST_CASE("exact division", "[ring]") {
  Ctx c = standard_context(1);
  LaurentPoly a = P(c, "1 - x1 + q*y1"), b = P(c, "q - x1^-1");
  CHECK((a * b).exact_div(b) == a);
  CHECK(P(c, "2*q").exact_div(P(c, "q")) == P(c, "2"));
  CHECK_THROWS_AS(P(c, "q").exact_div(P(c, "2")), RingError);
  CHECK_THROWS_AS(a.exact_div(LaurentPoly(c)), RingError);
}
