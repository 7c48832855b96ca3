#include <catch_amalgamated.hpp>

#include "prism/prism.hpp"

using namespace prism;

namespace {

std::set<H1Vector> vecs(int g, std::vector<std::vector<long>> rows) {
  std::set<H1Vector> s;
  for (auto& r : rows) s.insert(H1Vector(g, r));
  return s;
}

LaurentPoly P(const Ctx& c, const std::string& s) { return LaurentPoly::parse(c, s); }

}  // namespace

TEST_CASE("pairing", "[symplectic]") {
  CHECK(pairing(H1Vector(1, {1, 0}), H1Vector(1, {0, 1})) == 1);
  CHECK(pairing(H1Vector(1, {0, 1}), H1Vector(1, {1, 0})) == -1);
  CHECK(pairing(H1Vector(2, {1, 0, 0, 0}), H1Vector(2, {0, 0, 0, 1})) == 0);
  CHECK_THROWS_AS(pairing(H1Vector(1), H1Vector(2)), SymplecticError);
}

TEST_CASE("symplectic rank examples", "[symplectic]") {
  CHECK(symplectic_rank(vecs(1, {{-1, 1}, {-1, 0}, {-2, 1}})) == 2);
  CHECK(symplectic_rank({}) == 0);
  CHECK(symplectic_rank(vecs(1, {{0, 0}})) == 0);
  CHECK(symplectic_rank(vecs(2, {{3, -1, 2, 5}})) == 0);
  // x1 and x2 span an isotropic plane
  CHECK(symplectic_rank(vecs(2, {{1, 0, 0, 0}, {0, 0, 1, 0}})) == 0);
  CHECK(symplectic_rank(vecs(2, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}})) == 2);
  CHECK(symplectic_rank(vecs(2, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})) == 4);
  // pairing 2 is invisible mod 2 but not over Q
  CHECK(symplectic_rank(vecs(1, {{2, 0}, {0, 1}})) == 2);
  CHECK(z2_symplectic_rank(vecs(1, {{2, 0}, {0, 1}})) == 0);
}

TEST_CASE("Z2 rank examples", "[symplectic]") {
  CHECK(z2_symplectic_rank(vecs(1, {{1, 0}, {0, 1}})) == 2);
  CHECK(z2_symplectic_rank(vecs(1, {{1, 1}})) == 0);
  CHECK(z2_symplectic_rank(vecs(1, {{1, 1}, {0, 1}})) == 2);
  CHECK(z2_symplectic_rank(vecs(1, {{1, 1}, {-1, -1}, {3, 3}})) == 0);
}

TEST_CASE("coefficient vectors", "[symplectic]") {
  Ctx c = RingContext::make({"t", "x1", "y1"}, 1);
  // first-basis worked example with w written as y1
  LaurentPoly d = P(c, "t^2 - t^2*x1^-1*y1 + t*x1^-1*y1 - t*x1^-1 + x1^-1 - x1^-2*y1");
  CHECK(coefficient_vectors(d, 1) == vecs(1, {{0, 0}, {-1, 1}, {-1, 0}, {-2, 1}}));
  CHECK(polynomial_rank(d, 1) == 2);
  CHECK(coefficient_vectors(P(c, "3*t^2 - t"), 1) == vecs(1, {{0, 0}}));
  CHECK(coefficient_vectors(LaurentPoly(c), 1).empty());
  CHECK(genus_lower_bound(LaurentPoly(c), 1) == 0);
}

TEST_CASE("raw and quotient ranks", "[symplectic]") {
  Ctx c = standard_context(1);
  // two classes x and y: raw rank 2, but their quotient x - y alone is isotropic
  LaurentPoly p = P(c, "q^3*x1 - q^3*y1 - 2*q*x1 + q^-1*x1 + 2*q*y1 - q^-1*y1");
  CHECK(polynomial_rank(p, 1) == 2);
  CHECK(quotient_rank(p, 1) == 0);
  // quotients ignore unit multiples
  LaurentPoly r = P(c, "1 - x1 + x1*y1^2");
  CHECK(quotient_rank(P(c, "x1^5*y1^-3") * r, 1) == quotient_rank(r, 1));
}

TEST_CASE("Sp(2g,Z) basis change", "[symplectic]") {
  SpMatrix id{{1, 0}, {0, 1}}, shear{{1, 0}, {1, 1}}, bad{{2, 0}, {0, 1}};
  CHECK(is_symplectic(id));
  CHECK(is_symplectic(shear));
  CHECK_FALSE(is_symplectic(bad));
  CHECK_FALSE(is_symplectic({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  Ctx c = standard_context(1);
  LaurentPoly p = P(c, "q*x1 - y1^2 + 3");
  CHECK(apply_basis_change(p, id) == p);
  // (a,b) -> (a, a+b): x1 -> x1*y1
  CHECK(apply_basis_change(p, shear) == P(c, "q*x1*y1 - y1^2 + 3"));
  CHECK_THROWS_AS(apply_basis_change(p, bad), SymplecticError);
  CHECK(prism::apply(shear, H1Vector(1, {2, -1})) == H1Vector(1, {2, 1}));
  CHECK(standard_j(1) == SpMatrix{{0, 1}, {-1, 0}});
}

TEST_CASE("mixed genus is an error", "[symplectic]") {
  std::set<H1Vector> s;
  s.insert(H1Vector(1, {1, 0}));
  s.insert(H1Vector(2, {1, 0, 0, 0}));
  CHECK_THROWS_AS(symplectic_rank(s), SymplecticError);
}
