#include <catch_amalgamated.hpp>

#include "prism/prism.hpp"
#include "support.hpp"

using namespace prism;
using namespace prism::testing;

TEST_CASE("invariants survive 200 random move sequences", "[property][moves]") {
  std::mt19937_64 rng(2024);
  int moved = 0;
  for (int seq = 0; seq < 200; ++seq) {
    auto w = random_word(rng, small_words());
    Values base = values_of(w);
    int steps = std::uniform_int_distribution<int>(1, 5)(rng);
    for (int k = 0; k < steps; ++k) {
      auto moves = legal_moves(w, 12);
      if (moves.empty()) break;
      auto m = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
      w = apply_move(w, m);
      ++moved;
      INFO("after " << m.str() << ": " << w.to_dsl());
      Values now = values_of(w);
      CHECK(now.f11 == base.f11);
      CHECK(now.f21 == base.f21);
      CHECK(now.csw == base.csw);
      CHECK(now.bracket == base.bracket);
    }
  }
  CHECK(moved > 300);
}

TEST_CASE("genus bound is move invariant on the trefoil", "[property][moves]") {
  auto w = parse_braid("N=2 g=1 close=LR ; O'(2,y1) O(1,x1) V(1) S'(1) S'(1)");
  std::mt19937_64 rng(99);
  for (int k = 0; k < 40; ++k) {
    auto moves = legal_moves(w, 10);
    w = apply_move(w, moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)]);
    CHECK(genus_lower_bound(f_polynomial(w, {1, 1}), 1) == 1);
  }
}

TEST_CASE("Yang-Baxter and invertibility of the R-matrices", "[property][rmatrix]") {
  for (SuperDim dim : {SuperDim{1, 1}, SuperDim{2, 1}, SuperDim{1, 2}, SuperDim{2, 2}}) {
    INFO("dim " << dim.str());
    Ctx c = standard_context(1);
    RMatrixSet s = build_rmatrices(dim, c);
    int d = dim.d();
    RingMatrix id2 = RingMatrix::identity(c, d * d);
    CHECK(s.pos * s.neg == id2);
    CHECK(s.neg * s.pos == id2);
    CHECK(s.virt * s.virt == id2);
    for (const RingMatrix* r : {&s.pos, &s.neg, &s.virt}) {
      RingMatrix a = tensor_id(*r, 0, 1, c, d), b = tensor_id(*r, 1, 0, c, d);
      CHECK(a * b * a == b * a * b);
    }
    // mixed move: V1 V2 R1 = R2 V1 V2
    RingMatrix v1 = tensor_id(s.virt, 0, 1, c, d), v2 = tensor_id(s.virt, 1, 0, c, d);
    RingMatrix r1 = tensor_id(s.pos, 0, 1, c, d), r2 = tensor_id(s.pos, 1, 0, c, d);
    CHECK(v1 * v2 * r1 == r2 * v1 * v2);
    // Omega actions pass through crossings in pairs
    RingMatrix oo = kron(s.omega_action("x1", 1), s.omega_action("x1", 1));
    CHECK(oo * s.pos == s.pos * oo);
    RingMatrix ox = kron(s.omega_action("x1", 1), RingMatrix::identity(c, d));
    RingMatrix xo = kron(RingMatrix::identity(c, d), s.omega_action("x1", 1));
    CHECK(ox * s.virt == s.virt * xo);
  }
}

TEST_CASE("symplectic rank: parity, Sp invariance, brute-force oracle", "[property][symplectic]") {
  std::mt19937_64 rng(77);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int trial = 0; trial < 1000; ++trial) {
    int g = uni(1, 3);
    auto vs = random_vectors(rng, g);
    int r = symplectic_rank(vs);
    CHECK(r % 2 == 0);
    CHECK(r <= 2 * g);

    SpMatrix m = random_sp(rng, g);
    REQUIRE(is_symplectic(m));
    std::set<H1Vector> moved;
    for (const auto& v : vs) moved.insert(prism::apply(m, v));
    CHECK(symplectic_rank(moved) == r);

    CHECK(r == oracle_rank(vs, g));
    CHECK(z2_symplectic_rank(vs) == brute_rank_mod(vs, g, 2));
  }
}

TEST_CASE("det-trace identity on 100 random words", "[property][burau]") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 100; ++k) {
    auto w = random_word(rng, small_words());
    INFO(w.to_dsl());
    auto dt = det_trace_sides(w);
    CHECK(dt.det_side == dt.trace_side);
  }
}

TEST_CASE("quantum CSW model on 100 random words", "[property][burau]") {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 100; ++k) {
    auto w = random_word(rng, small_words());
    INFO(w.to_dsl());
    CHECK(quantum_csw_check(w).holds());
  }
}

TEST_CASE("bracket Z2 rank never exceeds 2g", "[property][bracket]") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    auto w = random_word(rng, small_words());
    LaurentPoly b = surface_bracket(w);
    std::set<H1Vector> vs;
    for (const auto& v : coefficient_vectors(b, w.genus())) vs.insert(v);
    CHECK(z2_symplectic_rank(vs) <= 2 * w.genus());
  }
}
