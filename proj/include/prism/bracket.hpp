#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "diagram.hpp"
#include "matrix.hpp"
#include "ring.hpp"
#include "symplectic.hpp"

namespace prism {

struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BracketOptions {
  bool strict_paper = false;  // empty state-variable sum counts as 0
  int max_crossings = 20;
};

struct BracketState {
  std::vector<bool> choices;  // true = A smoothing, per classical crossing top to bottom
  int n_a = 0, n_b = 0;
  int trivial_loops = 0;
  std::vector<std::vector<int>> decorated_loops;  // Z2 vectors over the colors
};

// Colors carried by the bracket variables: the palette, then om if present.
inline std::vector<std::string> bracket_colors(const PrismaticBraidWord& w) {
  auto c = w.palette.colors();
  if (w.uses_omega()) c.push_back(kOmega);
  return c;
}

inline Ctx bracket_context(const PrismaticBraidWord& w) {
  std::vector<std::string> v{"A"};
  for (const auto& c : bracket_colors(w)) v.push_back(c);
  return RingContext::make(v, w.genus());
}

inline int classical_crossings(const PrismaticBraidWord& w) {
  int c = 0;
  for (const auto& t : w.tokens) c += t.kind == TokenKind::Sigma;
  return c;
}

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

// Loops of the flat closure under one choice of smoothings. Strand segment
// (level k, position p) lies above token k; the bottom level is glued to the top.
inline BracketState resolve_state(const PrismaticBraidWord& w, std::uint64_t mask) {
  int n = w.n, t = static_cast<int>(w.tokens.size());
  auto colors = bracket_colors(w);
  int levels = std::max(t, 1);
  auto node = [&](int k, int p) { return (k % levels) * n + p; };
  detail::UnionFind uf(levels * n);
  std::vector<std::vector<int>> toggles(levels * n, std::vector<int>(colors.size(), 0));
  BracketState st;
  int crossing = 0;
  for (int k = 0; k < t; ++k) {
    const Token& tk = w.tokens[k];
    int a = tk.i - 1;
    for (int p = 0; p < n; ++p) {
      bool touched = p == a || (tk.kind != TokenKind::Lambda && p == a + 1);
      if (!touched) uf.unite(node(k, p), node(k + 1, p));
    }
    switch (tk.kind) {
      case TokenKind::Chi:
        uf.unite(node(k, a), node(k + 1, a + 1));
        uf.unite(node(k, a + 1), node(k + 1, a));
        break;
      case TokenKind::Lambda: {
        uf.unite(node(k, a), node(k + 1, a));
        auto it = std::find(colors.begin(), colors.end(), tk.color);
        toggles[node(k, a)][it - colors.begin()] ^= 1;
        break;
      }
      case TokenKind::Sigma: {
        bool a_choice = mask >> crossing & 1u;
        ++crossing;
        st.choices.push_back(a_choice);
        (a_choice ? st.n_a : st.n_b) += 1;
        bool vertical = (tk.sign > 0) == a_choice;
        if (vertical) {
          uf.unite(node(k, a), node(k + 1, a));
          uf.unite(node(k, a + 1), node(k + 1, a + 1));
        } else {
          uf.unite(node(k, a), node(k, a + 1));
          uf.unite(node(k + 1, a), node(k + 1, a + 1));
        }
        break;
      }
    }
  }
  std::map<int, std::vector<int>> loops;
  for (int v = 0; v < levels * n; ++v) {
    auto& acc = loops.try_emplace(uf.find(v), std::vector<int>(colors.size(), 0)).first->second;
    for (std::size_t c = 0; c < colors.size(); ++c) acc[c] ^= toggles[v][c];
  }
  for (const auto& [root, vec] : loops) {
    if (std::all_of(vec.begin(), vec.end(), [](int b) { return b == 0; }))
      ++st.trivial_loops;
    else
      st.decorated_loops.push_back(vec);
  }
  return st;
}

inline void check_size(const PrismaticBraidWord& w, const BracketOptions& o) {
  int c = classical_crossings(w);
  if (c > o.max_crossings || c > 62)
    throw BracketError("bracket of " + std::to_string(c) + " crossings exceeds the cap of " +
                       std::to_string(o.max_crossings));
}

inline std::vector<BracketState> resolve_states(const PrismaticBraidWord& w, const BracketOptions& o = {}) {
  check_size(w, o);
  std::uint64_t total = std::uint64_t{1} << classical_crossings(w);
  std::vector<BracketState> out(total);
  parallel_for(total, [&](std::size_t m) { out[m] = resolve_state(w, m); });
  return out;
}

inline std::vector<BracketState> resolve_states(const SliceWord& d, const BracketOptions& o = {}) {
  return resolve_states(slices_to_braid(d), o);
}

inline LaurentPoly state_term(const BracketState& s, const Ctx& c, const BracketOptions& o) {
  LaurentPoly a = LaurentPoly::var(c, "A");
  LaurentPoly d = -LaurentPoly::var(c, "A", 2) - LaurentPoly::var(c, "A", -2);
  LaurentPoly var_sum(c);
  for (const auto& v : s.decorated_loops) {
    LaurentPoly::Exps e(c->size(), 0);
    for (std::size_t k = 0; k < v.size(); ++k) e[k + 1] = v[k];
    var_sum += LaurentPoly::monomial(c, e);
  }
  if (s.decorated_loops.empty() && !o.strict_paper) var_sum = LaurentPoly::one(c);
  return a.pow(s.n_a - s.n_b) * d.pow(s.trivial_loops) * var_sum;
}

// Sum over states of A^{#A-#B} d^{#0} (sum of state variables), palette
// exponents in {0,1}.
inline LaurentPoly surface_bracket(const PrismaticBraidWord& w, const BracketOptions& o = {}) {
  check_size(w, o);
  Ctx c = bracket_context(w);
  std::uint64_t total = std::uint64_t{1} << classical_crossings(w);
  unsigned chunks = std::max<unsigned>(1, std::min<std::uint64_t>(worker_count(), total));
  std::vector<LaurentPoly> part(chunks, LaurentPoly(c));
  parallel_for(chunks, [&](std::size_t k) {
    for (std::uint64_t m = k; m < total; m += chunks) part[k] += state_term(resolve_state(w, m), c, o);
  });
  LaurentPoly sum(c);
  for (const auto& p : part) sum += p;
  return sum;
}

inline LaurentPoly surface_bracket(const SliceWord& d, const BracketOptions& o = {}) {
  return surface_bracket(slices_to_braid(d), o);
}

// Z2 rank of the state-variable vectors appearing in b equals 2g.
inline bool dye_kauffman_minimal(const LaurentPoly& b, int g) {
  if (g == 0) return true;
  std::set<H1Vector> vs;
  for (const auto& v : coefficient_vectors(b, g)) {
    H1Vector r(g);
    for (int k = 0; k < 2 * g; ++k) r.coords[k] = ((v.coords[k] % 2) + 2) % 2;
    vs.insert(r);
  }
  return z2_symplectic_rank(vs) == 2 * g;
}

}  // namespace prism
