#include <catch_amalgamated.hpp>

#include "prism/prism.hpp"

using namespace prism;

namespace {

const char* kTrefoil = "N=2 g=1 close=LR ; O'(2,y1) O(1,x1) V(1) S'(1) S'(1)";

LaurentPoly P(const Ctx& c, const std::string& s) { return LaurentPoly::parse(c, s); }

}  // namespace

TEST_CASE("generator matrices", "[burau]") {
  auto w = parse_braid("N=2 g=1 ; S(1)");
  Ctx c = burau_context(w, TMode::T);
  RingMatrix s = rho_token(Token::sigma(1, 1), 2, c, TMode::T);
  CHECK(s == RingMatrix::from_rows(c, {{P(c, "1 - t"), P(c, "t")}, {P(c, "1"), P(c, "0")}}));
  RingMatrix si = rho_token(Token::sigma(1, -1), 2, c, TMode::T);
  CHECK(s * si == RingMatrix::identity(c, 2));
  CHECK(si * s == RingMatrix::identity(c, 2));
  RingMatrix v = rho_token(Token::chi(1), 2, c, TMode::T);
  CHECK(v * v == RingMatrix::identity(c, 2));
  RingMatrix l = rho_token(Token::lambda(2, "y1", -1), 2, c, TMode::T);
  CHECK(l == RingMatrix::diagonal(c, {P(c, "1"), P(c, "y1^-1")}));
}

TEST_CASE("braid relations hold in the representation", "[burau]") {
  CHECK(rho(parse_braid("N=3 g=0 ; S(1) S(2) S(1)")) == rho(parse_braid("N=3 g=0 ; S(2) S(1) S(2)")));
  CHECK(rho(parse_braid("N=3 g=0 ; S(1) V(2) V(1)")) == rho(parse_braid("N=3 g=0 ; V(2) V(1) S(2)")));
  CHECK(rho(parse_braid("N=2 g=1 ; O(1,x1) V(1)")) == rho(parse_braid("N=2 g=1 ; V(1) O(2,x1)")));
  CHECK(rho(parse_braid("N=1 g=1 ; O(1,x1) O(1,y1) O'(1,x1) O'(1,y1)")) ==
        RingMatrix::identity(burau_context(parse_braid("N=1 g=1 ;"), TMode::T), 1));
}

TEST_CASE("determinant of a one-crossing word by hand", "[burau]") {
  // rho = diag(x,1) * [[1-t, t],[1, 0]] = [[x(1-t), xt],[1, 0]];
  // det(rho - I) = -(x(1-t) - 1) - xt = 1 - x
  auto w = parse_braid("N=2 g=1 ; O(1,x1) S(1)");
  LaurentPoly d = csw_det(w);
  CHECK(d == P(d.ctx(), "1 - x1"));
  // classical unknots and the Hopf link give 0
  CHECK(csw_det(parse_braid("N=2 g=0 ; S(1)")).is_zero());
  CHECK(csw_det(parse_braid("N=2 g=0 ; S(1) S(1)")).is_zero());
}

TEST_CASE("trefoil determinant", "[burau]") {
  auto w = parse_braid(kTrefoil);
  LaurentPoly d = csw_det(w);
  CHECK(d == P(d.ctx(), "1 - y1^-1 - t^-1*x1 + t^-1*y1^-1 + t^-2*x1 - t^-2*x1*y1^-1"));
  LaurentPoly dq = csw_det(w, TMode::QInv2);
  CHECK(P(dq.ctx(), "q^-4") * dq ==
        P(dq.ctx(), "x1 + q^-4 + q^-2*y1^-1 - q^-2*x1 - x1*y1^-1 - q^-4*y1^-1"));
  CHECK(quotient_rank(d, 1) == 2);
}

TEST_CASE("det-trace identity", "[burau]") {
  for (const char* s : {kTrefoil, "N=3 g=1 ; S(1) O(3,x1) S'(2) V(1) O'(2,y1)", "N=1 g=1 ; O(1,x1)"}) {
    auto w = parse_braid(s);
    auto dt = det_trace_sides(w);
    CHECK(dt.det_side == dt.trace_side);
    CHECK(det_trace_identity_check(w, TMode::QInv2));
  }
}

TEST_CASE("exterior power bridge to the (1|1) matrices", "[burau]") {
  auto w2 = parse_braid("N=2 g=1 ;");
  Ctx c = burau_context(w2, TMode::QInv2);
  RMatrixSet s = build_rmatrices(SuperDim{1, 1}, c);
  auto bridge = [&](const Token& t, int n) {
    return exterior_power(exterior_basis_change(rho_token(t, n, c, TMode::QInv2)));
  };
  CHECK(bridge(Token::sigma(1, 1), 2) == LaurentPoly::q_pow(c, -1) * s.pos);
  CHECK(bridge(Token::sigma(1, -1), 2) == LaurentPoly::q_pow(c, 1) * s.neg);
  CHECK(bridge(Token::chi(1), 2) == s.virt);
  CHECK(bridge(Token::lambda(1, "x1", 1), 1) == s.omega_action("x1", 1));
  CHECK(bridge(Token::lambda(1, "x1", -1), 1) == s.omega_action("x1", -1));
}

TEST_CASE("wedge basis indices", "[burau]") {
  // N = 1: u1 sits at slot 1
  CHECK(wedge_to_tensor_index(0b1, 1) == 1);
  // N = 2: u1 -> slot 2, u2 -> slot 1
  CHECK(wedge_to_tensor_index(0b01, 2) == 1);
  CHECK(wedge_to_tensor_index(0b10, 2) == 2);
  CHECK(wedge_to_tensor_index(0b11, 2) == 3);
  CHECK(wedge_to_tensor_index(0, 3) == 0);
}

TEST_CASE("Fox derivatives by hand", "[burau]") {
  Presentation p = parse_presentation("gens: a,b\nops:\nrel: a b a~\nrel: b\n");
  Ctx c = fox_context(p);
  // d(a b a^-1)/da = 1 - a b a^-1, abelianized to 1 - b
  CHECK(fox_derivative(p.relators[0], "a", c) == P(c, "1 - b"));
  CHECK(fox_derivative(p.relators[0], "b", c) == P(c, "a"));
  CHECK(fox_derivative(p.relators[1], "a", c).is_zero());

  // conjugation by an operator word contributes its monomial
  Presentation q = parse_presentation("gens: a ; ops: x ; rel: a[x^-1] a~");
  Ctx cq = fox_context(q);
  CHECK(fox_derivative(q.relators[0], "a", cq) == P(cq, "x^-1 - 1"));
}

TEST_CASE("presentations parse and reject bad input", "[burau]") {
  Presentation p = parse_presentation("# first basis\ngens: a,b\nops: x1,y1\ngenus: 1\nrel: b[x1^-1] a\nrel: a~ b\n");
  CHECK(p.gens.size() == 2);
  CHECK(p.relators[0].str() == "b[x1^-1] a");
  CHECK(p.relators[1].str() == "a~ b");
  CHECK_THROWS(parse_presentation("gens: a\nrel: c\n"));
  CHECK_THROWS(parse_presentation("gens: a\nops: x\nrel: a[z]\n"));
  CHECK_THROWS_AS(csw_from_presentation(parse_presentation("gens: a,b\nrel: a\n")), FoxError);
}

TEST_CASE("braid presentation matches the determinant", "[burau]") {
  for (const char* s : {kTrefoil, "N=2 g=1 ; O(1,x1) S(1)", "N=3 g=1 ; S(1) O(3,y1) S'(2) O'(1,x1) V(2)"}) {
    auto w = parse_braid(s);
    LaurentPoly fox = csw_from_presentation(presentation_from_braid(w));
    LaurentPoly det = csw_det(w);
    CHECK(fox == invert_vars(det, w.palette.colors()));
  }
}

TEST_CASE("two bases of the worked presentation", "[burau]") {
  auto first = parse_presentation(
      "gens: a,b\nops: x1,y1\ngenus: 1\n"
      "rel: b[x1^-1] a b[x1^-1]~ b[x1^-1 y1 x1^-1]~\n"
      "rel: b[x1^-1 y1] b b[x1^-1 y1]~ a~\n");
  auto second = parse_presentation(
      "gens: a,b\nops: x1,y1\ngenus: 1\nrel: b a b~ b[y1]~\nrel: b[y1] b b[y1]~ a[x1^-1]~\n");
  LaurentPoly d1 = csw_from_presentation(first), d2 = csw_from_presentation(second);
  Ctx c = d1.ctx();
  CHECK(d1 == P(c, "t^2 - t^2*x1^-1*y1 + t*x1^-1*y1 - t*x1^-1 + x1^-1 - x1^-2*y1"));
  CHECK(d2 == P(c, "-t^2*y1 + t^2 + t*y1 - t*x1^-1 - x1^-1*y1 + x1^-1"));
  // the first basis' y1 is w = x*y in the second
  std::map<std::string, LaurentPoly> phi{{"t", P(c, "t")}, {"x1", P(c, "x1")}, {"y1", P(c, "x1*y1")}};
  CHECK(substitute(d1, phi, c) == d2);
  CHECK(quotient_rank(d1, 1) == 2);
  CHECK(quotient_rank(d2, 1) == 2);
}
