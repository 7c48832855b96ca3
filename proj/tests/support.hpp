#pragma once
// Helpers shared by the property suite and the acceptance runner.

#include <random>
#include <unordered_set>

#include "prism/prism.hpp"

namespace prism::testing {

inline RandomWordOptions small_words() {
  RandomWordOptions o;
  o.max_n = 3;
  o.max_g = 2;
  o.max_tokens = 8;
  return o;
}

struct Values {
  LaurentPoly f11, f21, csw, bracket;
};

inline Values values_of(const PrismaticBraidWord& w) {
  return {f_polynomial(w, {1, 1}), f_polynomial(w, {2, 1}), csw_det(w), surface_bracket(w)};
}

inline RingMatrix tensor_id(const RingMatrix& m, int left, int right, const Ctx& c, int d) {
  RingMatrix out = RingMatrix::identity(c, 1);
  for (int k = 0; k < left; ++k) out = kron(out, RingMatrix::identity(c, d));
  out = kron(out, m);
  for (int k = 0; k < right; ++k) out = kron(out, RingMatrix::identity(c, d));
  return out;
}

// Span of the vectors over GF(p), enumerated element by element.
inline int brute_rank_mod(const std::set<H1Vector>& vs, int g, int p) {
  std::vector<std::vector<long>> gens;
  for (const auto& v : vs) {
    std::vector<long> r;
    for (long x : v.coords) r.push_back(((x % p) + p) % p);
    gens.push_back(r);
  }
  auto key = [&](const std::vector<long>& v) {
    long k = 0;
    for (long x : v) k = k * p + x;
    return k;
  };
  std::vector<std::vector<long>> span{std::vector<long>(2 * g, 0)};
  std::unordered_set<long> seen{0};
  for (std::size_t i = 0; i < span.size(); ++i)
    for (const auto& gv : gens) {
      std::vector<long> s(2 * g);
      for (int k = 0; k < 2 * g; ++k) s[k] = (span[i][k] + gv[k]) % p;
      if (seen.insert(key(s)).second) span.push_back(s);
    }
  auto form = [&](const std::vector<long>& u, const std::vector<long>& v) {
    long s = 0;
    for (int i = 0; i < g; ++i) s += u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i];
    return ((s % p) + p) % p;
  };
  long radical = 0;
  for (const auto& v : span) {
    bool all = true;
    for (const auto& gv : gens) all = all && form(v, gv) == 0;
    radical += all;
  }
  auto log_p = [&](long n) {
    int e = 0;
    while (n > 1) {
      n /= p;
      ++e;
    }
    return e;
  };
  return log_p(static_cast<long>(span.size())) - log_p(radical);
}

inline SpMatrix random_sp(std::mt19937_64& rng, int g) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int n = 2 * g;
  SpMatrix m(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  for (int step = 0; step < 6; ++step) {
    SpMatrix e(n, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i) e[i][i] = 1;
    int k = uni(-2, 2), i = uni(0, g - 1), j = uni(0, g - 1);
    switch (uni(0, 2)) {
      case 0: e[2 * i][2 * i + 1] = k; break;  // x_i += k y_i
      case 1: e[2 * i + 1][2 * i] = k; break;  // y_i += k x_i
      default:
        if (i == j) break;
        e[2 * i][2 * j] = k;           // x_i += k x_j
        e[2 * j + 1][2 * i + 1] = -k;  // y_j -= k y_i
    }
    SpMatrix prod(n, std::vector<long>(n, 0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) prod[a][b] += e[a][c] * m[c][b];
    m = prod;
  }
  return m;
}

// At most 4 vectors with coordinates in [-3,3] and g <= 3: the rank is at most 4,
// and a nonzero 4x4 Pfaffian of pairings is at most 3 * 54^2 < 7 * 11 * 13 * 17,
// so one of these primes sees the rational rank.
inline int oracle_rank(const std::set<H1Vector>& vs, int g) {
  int r = 0;
  for (int p : {7, 11, 13, 17}) r = std::max(r, brute_rank_mod(vs, g, p));
  return r;
}

inline std::set<H1Vector> random_vectors(std::mt19937_64& rng, int g) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::set<H1Vector> vs;
  int count = uni(1, g == 3 ? 4 : 5);
  for (int k = 0; k < count; ++k) {
    H1Vector v(g);
    for (auto& x : v.coords) x = uni(-3, 3);
    vs.insert(v);
  }
  return vs;
}

// Counters for the acceptance runner; each returns the number of failed checks.

inline int move_invariance_failures(std::uint64_t seed, int sequences, int* moves_done = nullptr) {
  std::mt19937_64 rng(seed);
  int bad = 0, moved = 0;
  for (int seq = 0; seq < sequences; ++seq) {
    auto w = random_word(rng, small_words());
    Values base = values_of(w);
    int steps = std::uniform_int_distribution<int>(1, 5)(rng);
    for (int k = 0; k < steps; ++k) {
      auto moves = legal_moves(w, 12);
      if (moves.empty()) break;
      w = apply_move(w, moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)]);
      ++moved;
      Values now = values_of(w);
      bad += !(now.f11 == base.f11) + !(now.f21 == base.f21) + !(now.csw == base.csw) +
             !(now.bracket == base.bracket);
    }
  }
  if (moves_done) *moves_done = moved;
  return bad;
}

inline int rmatrix_failures() {
  int bad = 0;
  for (SuperDim dim : {SuperDim{1, 1}, SuperDim{2, 1}, SuperDim{1, 2}, SuperDim{2, 2}}) {
    Ctx c = standard_context(1);
    RMatrixSet s = build_rmatrices(dim, c);
    int d = dim.d();
    RingMatrix id2 = RingMatrix::identity(c, d * d);
    bad += !(s.pos * s.neg == id2) + !(s.neg * s.pos == id2);
    RingMatrix a = tensor_id(s.pos, 0, 1, c, d), b = tensor_id(s.pos, 1, 0, c, d);
    bad += !(a * b * a == b * a * b);
  }
  return bad;
}

inline int rank_failures(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  int bad = 0;
  for (int trial = 0; trial < trials; ++trial) {
    int g = std::uniform_int_distribution<int>(1, 3)(rng);
    auto vs = random_vectors(rng, g);
    int r = symplectic_rank(vs);
    std::set<H1Vector> moved;
    SpMatrix m = random_sp(rng, g);
    for (const auto& v : vs) moved.insert(prism::apply(m, v));
    bad += (r % 2 != 0) + !is_symplectic(m) + (symplectic_rank(moved) != r) + (r != oracle_rank(vs, g));
  }
  return bad;
}

}  // namespace prism::testing
