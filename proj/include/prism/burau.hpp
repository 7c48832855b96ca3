#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "diagram.hpp"
#include "matrix.hpp"
#include "ring.hpp"

namespace prism {

// ---------------------------------------------------------------- representation

enum class TMode { T, QInv2 };  // keep t, or substitute t = q^-2

// Ring for Burau matrices: t and the palette in T mode, q and the palette otherwise.
inline Ctx burau_context(const PrismaticBraidWord& w, TMode mode) {
  if (mode == TMode::QInv2) return word_context(w);
  std::vector<std::string> v{"t"};
  for (const auto& c : w.palette.colors()) v.push_back(c);
  if (w.uses_omega()) v.push_back(kOmega);
  return RingContext::make(v, w.genus());
}

namespace detail {

inline LaurentPoly burau_t(const Ctx& c, TMode mode, int power) {
  return mode == TMode::T ? LaurentPoly::var(c, "t", power) : LaurentPoly::q_pow(c, -2 * power);
}

}  // namespace detail

inline RingMatrix rho_token(const Token& tk, int n, const Ctx& c, TMode mode) {
  RingMatrix m = RingMatrix::identity(c, n);
  LaurentPoly one = LaurentPoly::one(c), zero(c);
  int i = tk.i - 1;
  auto block = [&](const LaurentPoly& a, const LaurentPoly& b, const LaurentPoly& cc, const LaurentPoly& d) {
    m.set(i, i, a);
    m.set(i, i + 1, b);
    m.set(i + 1, i, cc);
    m.set(i + 1, i + 1, d);
  };
  switch (tk.kind) {
    case TokenKind::Sigma: {
      LaurentPoly t = detail::burau_t(c, mode, 1), ti = detail::burau_t(c, mode, -1);
      if (tk.sign > 0)
        block(one - t, t, one, zero);
      else
        block(zero, one, ti, one - ti);
      break;
    }
    case TokenKind::Chi:
      block(zero, one, one, zero);
      break;
    case TokenKind::Lambda:
      m.set(i, i, LaurentPoly::var(c, tk.color, tk.sign));
      break;
  }
  return m;
}

// Left-to-right product of generator matrices.
inline RingMatrix rho(const PrismaticBraidWord& w, TMode mode = TMode::T) {
  Ctx c = burau_context(w, mode);
  RingMatrix r = RingMatrix::identity(c, w.n);
  for (const auto& tk : w.tokens) r = r * rho_token(tk, w.n, c, mode);
  return r;
}

// det(rho(w) - I)
inline LaurentPoly csw_det(const PrismaticBraidWord& w, TMode mode = TMode::T) {
  RingMatrix r = rho(w, mode);
  return (r - RingMatrix::identity(r.ctx(), w.n)).determinant();
}

// ---------------------------------------------------------------- exterior algebra

// Tensor-basis index of u_{i1} ^ ... ^ u_{ik}: x2 sits at slot (i_j + 1) mod N
// (slot 0 meaning N), slots numbered left to right, row-major.
inline int wedge_to_tensor_index(unsigned subset, int n) {
  int idx = 0;
  for (int i = 1; i <= n; ++i) {
    if (!(subset >> (i - 1) & 1u)) continue;
    int slot = (i + 1) % n;
    if (slot == 0) slot = n;
    idx |= 1 << (n - slot);
  }
  return idx;
}

namespace detail {

inline LaurentPoly minor(const RingMatrix& m, unsigned rows, unsigned cols, int n) {
  std::vector<int> r, c;
  for (int i = 0; i < n; ++i) {
    if (rows >> i & 1u) r.push_back(i);
    if (cols >> i & 1u) c.push_back(i);
  }
  RingMatrix sub(m.ctx(), static_cast<int>(r.size()), static_cast<int>(c.size()));
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < c.size(); ++b) sub.set(static_cast<int>(a), static_cast<int>(b), m.get(r[a], c[b]));
  return sub.determinant();
}

}  // namespace detail

// Full exterior algebra on 2^N basis vectors, re-indexed into V^{(x)N}.
inline RingMatrix exterior_power(const RingMatrix& m) {
  if (m.rows() != m.cols()) throw RingError("exterior power of a non-square matrix");
  int n = m.rows();
  if (n > 16) throw RingError("exterior power too large");
  unsigned full = 1u << n;
  RingMatrix out(m.ctx(), static_cast<int>(full), static_cast<int>(full));
  for (unsigned s = 0; s < full; ++s)
    for (unsigned t = 0; t < full; ++t) {
      if (__builtin_popcount(s) != __builtin_popcount(t)) continue;
      LaurentPoly v = detail::minor(m, t, s, n);
      out.set(wedge_to_tensor_index(t, n), wedge_to_tensor_index(s, n), v);
    }
  return out;
}

// D^-1 M D with D = diag(q^{(2i-N-1)/2}); for N = 2 this is diag(q^-1/2, q^1/2),
// the change of basis under which the exterior power of rho at t = q^-2
// matches the (1|1) R-matrices.
inline RingMatrix exterior_basis_change(const RingMatrix& m) {
  const Ctx& c = m.ctx();
  int n = m.rows();
  std::vector<LaurentPoly> d, di;
  for (int i = 1; i <= n; ++i) {
    d.push_back(LaurentPoly::q_pow(c, 2 * i - n - 1, 2));
    di.push_back(LaurentPoly::q_pow(c, n + 1 - 2 * i, 2));
  }
  return RingMatrix::diagonal(c, di) * m * RingMatrix::diagonal(c, d);
}

// Sum of principal k-minors, i.e. tr of the k-th exterior power.
inline LaurentPoly exterior_trace(const RingMatrix& m, int k) {
  int n = m.rows();
  LaurentPoly s(m.ctx());
  for (unsigned sub = 0; sub < (1u << n); ++sub)
    if (__builtin_popcount(sub) == k) s += detail::minor(m, sub, sub, n);
  return s;
}

struct DetTrace {
  LaurentPoly det_side;
  LaurentPoly trace_side;
  bool equal() const { return det_side == trace_side; }
};

// det(rho - I) against (-1)^N sum_k (-1)^k tr(wedge^k rho)
inline DetTrace det_trace_sides(const PrismaticBraidWord& w, TMode mode = TMode::T) {
  RingMatrix r = rho(w, mode);
  DetTrace d{(r - RingMatrix::identity(r.ctx(), w.n)).determinant(), LaurentPoly(r.ctx())};
  for (int k = 0; k <= w.n; ++k) {
    LaurentPoly tr = exterior_trace(r, k);
    if (k % 2)
      d.trace_side -= tr;
    else
      d.trace_side += tr;
  }
  if (w.n % 2) d.trace_side = -d.trace_side;
  return d;
}

inline bool det_trace_identity_check(const PrismaticBraidWord& w, TMode mode = TMode::T) {
  return det_trace_sides(w, mode).equal();
}

// ---------------------------------------------------------------- operator groups

struct FoxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A word in the operator letters, every entry with exponent ±1.
using OpWord = std::vector<std::pair<std::string, int>>;

inline OpWord reduce(const OpWord& w) {
  OpWord out;
  for (const auto& l : w) {
    if (!out.empty() && out.back().first == l.first && out.back().second == -l.second)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

inline OpWord inverse(const OpWord& w) {
  OpWord out(w.rbegin(), w.rend());
  for (auto& l : out) l.second = -l.second;
  return out;
}

inline OpWord concat(const OpWord& a, const OpWord& b) {
  OpWord c = a;
  c.insert(c.end(), b.begin(), b.end());
  return reduce(c);
}

// (gen^exp)^op = op gen^exp op^-1
struct Letter {
  std::string gen;
  OpWord op;
  int exp = 1;
  bool operator==(const Letter& o) const { return gen == o.gen && op == o.op && exp == o.exp; }
};

struct GroupWord {
  std::vector<Letter> letters;

  GroupWord reduced() const {
    GroupWord out;
    for (const auto& l : letters) {
      Letter r{l.gen, reduce(l.op), l.exp};
      if (!out.letters.empty() && out.letters.back().gen == r.gen && out.letters.back().op == r.op &&
          out.letters.back().exp == -r.exp)
        out.letters.pop_back();
      else
        out.letters.push_back(r);
    }
    return out;
  }
  GroupWord inverse() const {
    GroupWord out;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) out.letters.push_back({it->gen, it->op, -it->exp});
    return out;
  }
  GroupWord conjugated(const OpWord& g) const {
    GroupWord out = *this;
    for (auto& l : out.letters) l.op = concat(g, l.op);
    return out;
  }
  GroupWord operator*(const GroupWord& o) const {
    GroupWord out = *this;
    out.letters.insert(out.letters.end(), o.letters.begin(), o.letters.end());
    return out.reduced();
  }

  std::string str() const {
    std::string s;
    for (const auto& l : letters) {
      if (!s.empty()) s += " ";
      s += l.gen;
      if (!l.op.empty()) {
        s += "[";
        for (std::size_t k = 0; k < l.op.size(); ++k) {
          s += (k ? " " : "") + l.op[k].first;
          if (l.op[k].second < 0) s += "^-1";
        }
        s += "]";
      }
      if (l.exp < 0) s += "~";
    }
    return s;
  }
};

struct Presentation {
  std::vector<std::string> gens;
  std::vector<std::string> ops;
  std::vector<GroupWord> relators;
  int genus = 0;  // palette size when ops are x1,y1,...
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline OpWord parse_opword(const std::string& s) {
  OpWord w;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  for (skip(); i < s.size(); skip()) {
    std::size_t st = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    if (st == i) throw FoxError("bad operator word '" + s + "'");
    std::string name = s.substr(st, i - st);
    int e = 1;
    skip();
    if (i < s.size() && s[i] == '^') {
      ++i;
      skip();
      std::size_t es = i;
      if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      e = std::stoi(s.substr(es, i - es));
    }
    for (int k = 0; k < std::abs(e); ++k) w.emplace_back(name, e > 0 ? 1 : -1);
  }
  return reduce(w);
}

inline GroupWord parse_relator(const std::string& s) {
  GroupWord g;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  for (skip(); i < s.size(); skip()) {
    std::size_t st = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    if (st == i) throw FoxError("bad relator near '" + s.substr(st) + "'");
    Letter l{s.substr(st, i - st), {}, 1};
    if (i < s.size() && s[i] == '[') {
      auto close = s.find(']', i);
      if (close == std::string::npos) throw FoxError("unclosed '[' in relator");
      l.op = parse_opword(s.substr(i + 1, close - i - 1));
      i = close + 1;
    }
    while (i < s.size() && (s[i] == '~' || s[i] == '\'')) {
      l.exp = -l.exp;
      ++i;
    }
    g.letters.push_back(l);
  }
  return g.reduced();
}

}  // namespace detail

// Statements separated by newlines or ';':  gens: a,b   ops: x,w
// rel: b[x^-1] a b[x^-1]~ ...   '#' starts a comment.
// A letter is gen[operator word] with a trailing ~ for inversion.
inline Presentation parse_presentation(const std::string& text) {
  Presentation p;
  std::string clean = detail::BraidLexer::strip_comments(text);
  std::vector<std::string> stmts;
  std::string cur;
  for (char ch : clean) {
    if (ch == '\n' || ch == ';') {
      stmts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  stmts.push_back(cur);
  bool have_ops = false;
  for (const auto& raw : stmts) {
    std::string s = detail::trim(raw);
    if (s.empty()) continue;
    auto colon = s.find(':');
    if (colon == std::string::npos) throw FoxError("expected 'key: value' in '" + s + "'");
    std::string key = detail::trim(s.substr(0, colon)), val = s.substr(colon + 1);
    if (key == "gens") {
      p.gens = detail::split_list(val);
    } else if (key == "ops") {
      p.ops = detail::split_list(val);
      have_ops = true;
    } else if (key == "rel") {
      p.relators.push_back(detail::parse_relator(val));
    } else if (key == "genus") {
      p.genus = std::stoi(detail::trim(val));
    } else {
      throw FoxError("unknown key '" + key + "'");
    }
  }
  std::set<std::string> gens(p.gens.begin(), p.gens.end());
  std::vector<std::string> seen;
  for (const auto& r : p.relators)
    for (const auto& l : r.letters) {
      if (!gens.count(l.gen)) throw FoxError("relator uses undeclared generator '" + l.gen + "'");
      for (const auto& [o, e] : l.op)
        if (std::find(seen.begin(), seen.end(), o) == seen.end()) seen.push_back(o);
    }
  if (!have_ops) p.ops = seen;
  for (const auto& o : seen)
    if (std::find(p.ops.begin(), p.ops.end(), o) == p.ops.end())
      throw FoxError("operator letter '" + o + "' not declared");
  return p;
}

// Ring holding the abelianized group ring: generators then operator letters.
inline Ctx fox_context(const Presentation& p) {
  std::vector<std::string> v = p.gens;
  v.insert(v.end(), p.ops.begin(), p.ops.end());
  return RingContext::make(v, 0);
}

namespace detail {

inline LaurentPoly op_image(const Ctx& c, const OpWord& w) {
  LaurentPoly::Exps e(c->size(), 0);
  for (const auto& [name, s] : w) e[c->at(name)] += s;
  return LaurentPoly::monomial(c, e);
}

}  // namespace detail

// Product rule with d(a_j^g)/d a_i = delta_ij g and d(a_j^g)^-1/d a_i = -delta_ij g a_j^-1.
// Prefixes are read through the abelianization, where a^g maps to a.
inline LaurentPoly fox_derivative(const GroupWord& w, const std::string& gen, const Ctx& c) {
  LaurentPoly out(c);
  LaurentPoly::Exps prefix(c->size(), 0);
  for (const auto& l : w.letters) {
    if (l.gen == gen) {
      LaurentPoly pre = LaurentPoly::monomial(c, prefix);
      LaurentPoly g = detail::op_image(c, l.op);
      if (l.exp > 0)
        out += pre * g;
      else
        out -= pre * g * LaurentPoly::var(c, gen, -1);
    }
    prefix[c->at(l.gen)] += l.exp;
  }
  return out;
}

// Ring for the CSW polynomial of a presentation: t then the operator letters.
inline Ctx csw_context(const Presentation& p) {
  std::vector<std::string> v{"t"};
  v.insert(v.end(), p.ops.begin(), p.ops.end());
  return RingContext::make(v, p.genus);
}

// Jacobian with every generator sent to t.
inline RingMatrix fox_jacobian(const Presentation& p) {
  if (p.gens.size() != p.relators.size())
    throw FoxError("presentation is not square: " + std::to_string(p.gens.size()) + " generators, " +
                   std::to_string(p.relators.size()) + " relators");
  Ctx f = fox_context(p), c = csw_context(p);
  std::map<std::string, LaurentPoly> phi;
  for (const auto& g : p.gens) phi.emplace(g, LaurentPoly::var(c, "t"));
  int n = static_cast<int>(p.gens.size());
  RingMatrix j(c, n, n);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) j.set(r, k, substitute(fox_derivative(p.relators[r], p.gens[k], f), phi, c));
  return j;
}

inline LaurentPoly csw_from_presentation(const Presentation& p) { return fox_jacobian(p).determinant(); }

// Operator presentation of the closure of w: generators s1..sN, relators
// beta(s_j) s_j^-1 where beta acts by s_i -> s_i s_{i+1} s_i^-1, s_{i+1} -> s_i
// for S(i), a swap for V(i) and s_j -> s_j^c for O(j,c). Operators are
// recorded inverted, the form in which the operator-group presentation of the
// link is read.
inline Presentation presentation_from_braid(const PrismaticBraidWord& w) {
  Presentation p;
  int n = w.n;
  for (int j = 1; j <= n; ++j) p.gens.push_back("s" + std::to_string(j));
  p.ops = w.palette.colors();
  if (w.uses_omega()) p.ops.push_back(kOmega);
  p.genus = w.genus();
  auto single = [](const std::string& g, int e = 1, OpWord op = {}) { return GroupWord{{Letter{g, std::move(op), e}}}; };
  std::vector<GroupWord> img(n);
  for (int j = 0; j < n; ++j) img[j] = single(p.gens[j]);
  for (const auto& tk : w.tokens) {
    std::map<std::string, GroupWord> tau;
    const std::string& a = p.gens[tk.i - 1];
    if (tk.kind == TokenKind::Sigma) {
      const std::string& b = p.gens[tk.i];
      if (tk.sign > 0) {
        tau[a] = single(a) * single(b) * single(a, -1);
        tau[b] = single(a);
      } else {
        tau[a] = single(b);
        tau[b] = single(b, -1) * single(a) * single(b);
      }
    } else if (tk.kind == TokenKind::Chi) {
      const std::string& b = p.gens[tk.i];
      tau[a] = single(b);
      tau[b] = single(a);
    } else {
      tau[a] = single(a, 1, OpWord{{tk.color, tk.sign}});
    }
    for (auto& word : img) {
      GroupWord next;
      for (const auto& l : word.letters) {
        auto it = tau.find(l.gen);
        if (it == tau.end()) {
          next.letters.push_back(l);
          continue;
        }
        GroupWord piece = l.exp > 0 ? it->second : it->second.inverse();
        piece = piece.conjugated(l.op);
        next.letters.insert(next.letters.end(), piece.letters.begin(), piece.letters.end());
      }
      word = next.reduced();
    }
  }
  for (int j = 0; j < n; ++j) {
    GroupWord r = img[j] * single(p.gens[j], -1);
    for (auto& l : r.letters) l.op = inverse(l.op);
    p.relators.push_back(r.reduced());
  }
  return p;
}

}  // namespace prism
