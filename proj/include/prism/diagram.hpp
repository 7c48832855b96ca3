#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ring.hpp"

namespace prism {

struct DiagramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BraidParseError : DiagramError {
  std::size_t pos;
  BraidParseError(const std::string& msg, std::size_t p)
      : DiagramError(msg + " at position " + std::to_string(p)), pos(p) {}
};

struct MoveError : DiagramError {
  using DiagramError::DiagramError;
};

inline const std::string kOmega = "om";

// x1,y1,...,xg,yg; "om" is reserved for the homology construction.
struct SymplecticPalette {
  int g = 0;

  std::vector<std::string> colors() const {
    std::vector<std::string> c;
    for (int i = 1; i <= g; ++i) {
      c.push_back("x" + std::to_string(i));
      c.push_back("y" + std::to_string(i));
    }
    return c;
  }
  bool contains(const std::string& c) const {
    if (c == kOmega) return true;
    auto cs = colors();
    return std::find(cs.begin(), cs.end(), c) != cs.end();
  }
  // position of a palette color in (x1,y1,...), -1 for om
  int slot(const std::string& c) const {
    auto cs = colors();
    auto it = std::find(cs.begin(), cs.end(), c);
    return it == cs.end() ? -1 : static_cast<int>(it - cs.begin());
  }
};

enum class TokenKind { Sigma, Chi, Lambda };

struct Token {
  TokenKind kind;
  int i;      // 1-based strand or left strand of the pair
  int sign;   // ±1, always +1 for Chi
  std::string color;

  static Token sigma(int i, int s = 1) { return {TokenKind::Sigma, i, s, {}}; }
  static Token chi(int i) { return {TokenKind::Chi, i, 1, {}}; }
  static Token lambda(int j, std::string c, int s = 1) { return {TokenKind::Lambda, j, s, std::move(c)}; }

  bool operator==(const Token& o) const {
    return kind == o.kind && i == o.i && sign == o.sign && color == o.color;
  }
  bool operator!=(const Token& o) const { return !(*this == o); }

  std::string str() const {
    switch (kind) {
      case TokenKind::Sigma:
        return std::string(sign > 0 ? "S(" : "S'(") + std::to_string(i) + ")";
      case TokenKind::Chi:
        return "V(" + std::to_string(i) + ")";
      case TokenKind::Lambda:
        return std::string(sign > 0 ? "O(" : "O'(") + std::to_string(i) + "," + color + ")";
    }
    return {};
  }
};

// Leftmost token is the top slice and the first matrix factor.
// closure holds one letter per strand: R closes on the right, L on the left.
struct PrismaticBraidWord {
  int n = 1;
  SymplecticPalette palette;
  std::vector<Token> tokens;
  std::string closure;

  int genus() const { return palette.g; }
  std::string closure_sides() const { return closure.empty() ? std::string(n, 'R') : closure; }
  bool uniform_closure() const {
    auto c = closure_sides();
    return std::all_of(c.begin(), c.end(), [&](char ch) { return ch == c[0]; });
  }
  bool uses_omega() const {
    return std::any_of(tokens.begin(), tokens.end(),
                       [](const Token& t) { return t.kind == TokenKind::Lambda && t.color == kOmega; });
  }
  bool has_lambda() const {
    return std::any_of(tokens.begin(), tokens.end(), [](const Token& t) { return t.kind == TokenKind::Lambda; });
  }
  int virtual_count() const {
    return static_cast<int>(
        std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return t.kind == TokenKind::Chi; }));
  }

  void validate() const {
    if (n < 1) throw DiagramError("a braid needs at least one strand");
    if (palette.g < 0) throw DiagramError("negative genus");
    auto c = closure_sides();
    if (static_cast<int>(c.size()) != n) throw DiagramError("closure must list one side per strand");
    for (char ch : c)
      if (ch != 'L' && ch != 'R') throw DiagramError("closure sides must be L or R");
    for (const auto& t : tokens) {
      if (t.kind == TokenKind::Lambda) {
        if (t.i < 1 || t.i > n) throw DiagramError("strand index out of range in " + t.str());
        if (!palette.contains(t.color)) throw DiagramError("color not in palette in " + t.str());
      } else if (t.i < 1 || t.i > n - 1) {
        throw DiagramError("crossing index out of range in " + t.str());
      }
      if (t.sign != 1 && t.sign != -1) throw DiagramError("bad sign");
    }
  }

  std::string to_dsl() const {
    std::string s = "N=" + std::to_string(n) + " g=" + std::to_string(palette.g);
    if (!uniform_closure() || (!closure.empty() && closure[0] == 'L')) s += " close=" + closure_sides();
    s += " ;";
    for (const auto& t : tokens) s += " " + t.str();
    return s;
  }

  bool operator==(const PrismaticBraidWord& o) const {
    return n == o.n && palette.g == o.palette.g && tokens == o.tokens && closure_sides() == o.closure_sides();
  }
};

// Ring context for invariants of a word: q, the palette, and om when used.
inline Ctx word_context(const PrismaticBraidWord& w, const std::vector<std::string>& extra = {}) {
  std::vector<std::string> e;
  if (w.uses_omega()) e.push_back(kOmega);
  e.insert(e.end(), extra.begin(), extra.end());
  return standard_context(w.genus(), e);
}

// ---------------------------------------------------------------- DSL

namespace detail {

class BraidLexer {
 public:
  explicit BraidLexer(const std::string& s) : s_(strip_comments(s)) {}

  static std::string strip_comments(const std::string& s) {
    std::string out;
    bool comment = false;
    for (char ch : s) {
      if (ch == '#') comment = true;
      if (ch == '\n') comment = false;
      out += comment ? ' ' : ch;
    }
    return out;
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip();
    return pos_ >= s_.size();
  }
  std::size_t pos() const { return pos_; }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char ch) {
    if (peek() != ch) throw BraidParseError(std::string("expected '") + ch + "'", pos_);
    ++pos_;
  }
  bool accept(char ch) {
    if (peek() == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string word() {
    skip();
    std::size_t st = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (st == pos_) throw BraidParseError("expected a name", pos_);
    return s_.substr(st, pos_ - st);
  }
  int integer() {
    skip();
    std::size_t st = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (st == pos_ || (pos_ == st + 1 && s_[st] == '-')) throw BraidParseError("expected an integer", st);
    return std::stoi(s_.substr(st, pos_ - st));
  }

 private:
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Grammar:  N=<int> g=<int> [close=<L|R>*] ;  token*
// tokens S(i) S'(i) V(i) O(j,c) O'(j,c), '#' starts a comment.
inline PrismaticBraidWord parse_braid(const std::string& text) {
  detail::BraidLexer lx(text);
  PrismaticBraidWord w;
  bool have_n = false, have_g = false;
  while (lx.peek() != ';') {
    if (lx.done()) throw BraidParseError("missing ';' after header", lx.pos());
    std::size_t at = lx.pos();
    std::string key = lx.word();
    lx.expect('=');
    if (key == "N") {
      w.n = lx.integer();
      have_n = true;
    } else if (key == "g") {
      w.palette.g = lx.integer();
      have_g = true;
    } else if (key == "close") {
      w.closure = lx.word();
    } else {
      throw BraidParseError("unknown header key '" + key + "'", at);
    }
  }
  lx.expect(';');
  if (!have_n || !have_g) throw BraidParseError("header needs N= and g=", 0);
  if (w.n < 1) throw BraidParseError("N must be positive", 0);
  if (w.palette.g < 0) throw BraidParseError("g must be non-negative", 0);
  while (!lx.done()) {
    std::size_t at = lx.pos();
    std::string name = lx.word();
    bool prime = lx.accept('\'');
    lx.expect('(');
    Token t{};
    if (name == "S" || name == "V") {
      if (name == "V" && prime) throw BraidParseError("virtual crossings have no sign", at);
      int i = lx.integer();
      t = name == "S" ? Token::sigma(i, prime ? -1 : 1) : Token::chi(i);
      if (i < 1 || i > w.n - 1) throw BraidParseError("crossing index out of range", at);
    } else if (name == "O") {
      int j = lx.integer();
      lx.expect(',');
      std::string c = lx.word();
      t = Token::lambda(j, c, prime ? -1 : 1);
      if (j < 1 || j > w.n) throw BraidParseError("strand index out of range", at);
      if (!w.palette.contains(c)) throw BraidParseError("color '" + c + "' not in palette", at);
    } else {
      throw BraidParseError("unknown token '" + name + "'", at);
    }
    lx.expect(')');
    w.tokens.push_back(t);
  }
  try {
    w.validate();
  } catch (const DiagramError& e) {
    throw BraidParseError(e.what(), 0);
  }
  return w;
}

inline json word_to_json(const PrismaticBraidWord& w) {
  json toks = json::array();
  for (const auto& t : w.tokens) {
    json j;
    switch (t.kind) {
      case TokenKind::Sigma:
        j = {{"kind", "sigma"}, {"i", t.i}, {"sign", t.sign}};
        break;
      case TokenKind::Chi:
        j = {{"kind", "chi"}, {"i", t.i}};
        break;
      case TokenKind::Lambda:
        j = {{"kind", "lambda"}, {"j", t.i}, {"color", t.color}, {"sign", t.sign}};
        break;
    }
    toks.push_back(j);
  }
  return {{"N", w.n}, {"g", w.palette.g}, {"close", w.closure_sides()}, {"tokens", toks}};
}

// ---------------------------------------------------------------- bookkeeping

// Classical crossings among alpha strands only.
inline int writhe(const PrismaticBraidWord& w) {
  int s = 0;
  for (const auto& t : w.tokens)
    if (t.kind == TokenKind::Sigma) s += t.sign;
  return s;
}

// Strand tracking. Before token k (reading top down) position p carries the
// strand whose top end is label[k][p]; the closure joins bottom p to top p.
struct StrandTrace {
  std::vector<std::vector<int>> label;  // tokens+1 rows
  std::vector<int> component;           // by top position
  int components = 0;

  explicit StrandTrace(const PrismaticBraidWord& w) {
    std::vector<int> cur(w.n);
    for (int p = 0; p < w.n; ++p) cur[p] = p;
    label.push_back(cur);
    for (const auto& t : w.tokens) {
      if (t.kind != TokenKind::Lambda) std::swap(cur[t.i - 1], cur[t.i]);
      label.push_back(cur);
    }
    component.assign(w.n, -1);
    for (int p = 0; p < w.n; ++p) {
      if (component[p] >= 0) continue;
      int x = p;
      while (component[x] < 0) {
        component[x] = components;
        x = cur[x];
      }
      ++components;
    }
  }
  // component of the strand at 0-based position p just above token k
  int at(std::size_t k, int p) const { return component[label[k][p]]; }
};

// Over/under targets for vlk: a palette color, one alpha component, or the
// whole alpha part.
struct Component {
  enum Kind { Color, Alpha, AllAlpha } kind = AllAlpha;
  std::string color;
  int index = 0;

  static Component of_color(std::string c) { return {Color, std::move(c), 0}; }
  static Component alpha(int i) { return {Alpha, {}, i}; }
  static Component all_alpha() { return {AllAlpha, {}, 0}; }
};

// Signed count of crossings where `over` passes over `under`. In S(i) the
// strand at position i is over, in S'(i) the one at i+1.
inline int vlk(const PrismaticBraidWord& w, const Component& over, const Component& under) {
  StrandTrace tr(w);
  auto check = [&](const Component& c) {
    if (c.kind == Component::Color && !w.palette.contains(c.color))
      throw DiagramError("unknown component color '" + c.color + "'");
    if (c.kind == Component::Alpha && (c.index < 0 || c.index >= tr.components))
      throw DiagramError("unknown alpha component " + std::to_string(c.index));
  };
  check(over);
  check(under);
  auto hits = [&](const Component& c, std::size_t k, int p) {
    if (c.kind == Component::AllAlpha) return true;
    if (c.kind == Component::Alpha) return tr.at(k, p) == c.index;
    return false;
  };
  int s = 0;
  for (std::size_t k = 0; k < w.tokens.size(); ++k) {
    const Token& t = w.tokens[k];
    if (t.kind == TokenKind::Lambda) {
      if (over.kind == Component::Color && over.color == t.color && hits(under, k, t.i - 1)) s += t.sign;
    } else if (t.kind == TokenKind::Sigma && over.kind != Component::Color && under.kind != Component::Color) {
      int op = t.sign > 0 ? t.i - 1 : t.i, up = t.sign > 0 ? t.i : t.i - 1;
      if (hits(over, k, op) && hits(under, k, up)) s += t.sign;
    }
  }
  return s;
}

struct H1Vector {
  int g = 0;
  std::vector<long> coords;  // x1,y1,...,xg,yg

  H1Vector() = default;
  explicit H1Vector(int genus) : g(genus), coords(2 * genus, 0) {}
  H1Vector(int genus, std::vector<long> c) : g(genus), coords(std::move(c)) {
    if (static_cast<int>(coords.size()) != 2 * g) throw DiagramError("H1 vector length must be 2g");
  }
  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](long v) { return v == 0; });
  }
  bool operator==(const H1Vector& o) const { return g == o.g && coords == o.coords; }
  bool operator<(const H1Vector& o) const { return std::tie(g, coords) < std::tie(o.g, o.coords); }
};

// [D] = sum_i -vlk(x_i, D)[x_i] - vlk(y_i, D)[y_i]
inline H1Vector homology_class(const PrismaticBraidWord& w) {
  if (w.uses_omega()) throw DiagramError("homology class needs the full palette, not the single color om");
  H1Vector h(w.genus());
  auto cs = w.palette.colors();
  for (std::size_t k = 0; k < cs.size(); ++k)
    h.coords[k] = -vlk(w, Component::of_color(cs[k]), Component::all_alpha());
  return h;
}

// Mirror the strand order: position j becomes N+1-j.
inline PrismaticBraidWord reverse_strands(const PrismaticBraidWord& w) {
  PrismaticBraidWord out = w;
  for (auto& t : out.tokens) t.i = t.kind == TokenKind::Lambda ? w.n + 1 - t.i : w.n - t.i;
  auto c = w.closure_sides();
  std::reverse(c.begin(), c.end());
  out.closure = w.closure.empty() ? std::string() : c;
  return out;
}

// ---------------------------------------------------------------- Zh constructions

inline void require_no_lambda(const PrismaticBraidWord& vb) {
  if (vb.has_lambda()) throw DiagramError("expected a virtual braid without Omega arcs");
}

// Each V(i) becomes O(i+1,om) V(i) O'(i+1,om).
inline PrismaticBraidWord homology_zh(const PrismaticBraidWord& vb) {
  require_no_lambda(vb);
  PrismaticBraidWord out = vb;
  out.tokens.clear();
  for (const auto& t : vb.tokens) {
    if (t.kind == TokenKind::Chi) {
      out.tokens.push_back(Token::lambda(t.i + 1, kOmega, 1));
      out.tokens.push_back(t);
      out.tokens.push_back(Token::lambda(t.i + 1, kOmega, -1));
    } else {
      out.tokens.push_back(t);
    }
  }
  return out;
}

// The k-th virtual crossing counted from the bottom gets the pair (x_k, y_k):
// V(i) becomes O'(i+1,y_k) O(i,x_k) V(i).
inline std::pair<int, PrismaticBraidWord> homotopy_zh_from_braid(const PrismaticBraidWord& vb) {
  require_no_lambda(vb);
  int g = vb.virtual_count();
  PrismaticBraidWord out = vb;
  out.palette.g = g;
  out.tokens.clear();
  int k = g;
  for (const auto& t : vb.tokens) {
    if (t.kind == TokenKind::Chi) {
      out.tokens.push_back(Token::lambda(t.i + 1, "y" + std::to_string(k), -1));
      out.tokens.push_back(Token::lambda(t.i, "x" + std::to_string(k), 1));
      --k;
    }
    out.tokens.push_back(t);
  }
  return {g, out};
}

// Recolor every palette arc with om (x_k, y_k -> om).
inline PrismaticBraidWord identify_colors(const PrismaticBraidWord& w) {
  PrismaticBraidWord out = w;
  for (auto& t : out.tokens)
    if (t.kind == TokenKind::Lambda) t.color = kOmega;
  return out;
}

// ---------------------------------------------------------------- moves

enum class MoveKind {
  R2,            // S(i)^e S(i)^-e <-> empty
  R3,            // S(i)S(i+1)S(i) <-> S(i+1)S(i)S(i+1), equal signs
  FarComm,       // adjacent tokens on disjoint strands swap
  VR2,           // V(i)V(i) <-> empty
  VR3,           // V(i)V(i+1)V(i) <-> V(i+1)V(i)V(i+1)
  MixedR3,       // S(i)^e V(i+1)V(i) <-> V(i+1)V(i)S(i+1)^e
  LambdaSlide,   // O(j,c) V(i) <-> V(i) O(j',c), j' the other strand of V(i)
  LambdaPair,    // O(i,c)^e O(i+1,c)^e X(i) <-> X(i) O(i,c)^e O(i+1,c)^e
  SemiWelded,    // O(j,c) O(j,d) <-> O(j,d) O(j,c)
  SemiWeldedConj,// O'(i,c) V(i) O(i,c) <-> O(i+1,c) V(i) O'(i+1,c)
  LambdaCancel,  // O(j,c)^e O(j,c)^-e <-> empty
  Commutator,    // prod_i O(j,x_i)O(j,y_i)O'(j,x_i)O'(j,y_i) <-> empty
  ClassicalR1,   // S(N)^e on a fresh last strand <-> empty (changes N)
  VirtualR1      // V(N) on a fresh last strand <-> empty (changes N)
};

inline const char* move_name(MoveKind k) {
  switch (k) {
    case MoveKind::R2: return "R2";
    case MoveKind::R3: return "R3";
    case MoveKind::FarComm: return "far-commutation";
    case MoveKind::VR2: return "VT2";
    case MoveKind::VR3: return "VT3";
    case MoveKind::MixedR3: return "VT4";
    case MoveKind::LambdaSlide: return "omega-slide";
    case MoveKind::LambdaPair: return "omega-pair";
    case MoveKind::SemiWelded: return "semi-welded";
    case MoveKind::SemiWeldedConj: return "semi-welded-conjugation";
    case MoveKind::LambdaCancel: return "omega-R2";
    case MoveKind::Commutator: return "commutator";
    case MoveKind::ClassicalR1: return "classical-R1";
    case MoveKind::VirtualR1: return "virtual-R1";
  }
  return "?";
}

// R1 moves change framing or rotation number and are excluded from exact
// comparisons.
inline bool rotational_safe(MoveKind k) { return k != MoveKind::ClassicalR1 && k != MoveKind::VirtualR1; }

// Forward rewrites the left side found at `site` into the right side;
// Reverse rewrites the right side into the left side. For moves whose right
// side is empty, Reverse inserts at `site` using strand/sign/color.
struct MoveSpec {
  MoveKind kind;
  std::size_t site = 0;
  bool forward = true;
  int strand = 1;
  int sign = 1;
  std::string color;

  std::string str() const {
    std::ostringstream o;
    o << move_name(kind) << (forward ? "+" : "-") << "@" << site;
    if (!forward) o << "[" << strand << "," << sign << (color.empty() ? "" : "," + color) << "]";
    return o.str();
  }
};

namespace detail {

using Toks = std::vector<Token>;

inline bool disjoint(const Token& a, const Token& b) {
  auto span = [](const Token& t) {
    return t.kind == TokenKind::Lambda ? std::pair{t.i, t.i} : std::pair{t.i, t.i + 1};
  };
  auto [a0, a1] = span(a);
  auto [b0, b1] = span(b);
  return a1 < b0 || b1 < a0;
}

inline bool match_at(const Toks& w, std::size_t site, const Toks& pat) {
  if (site + pat.size() > w.size()) return false;
  for (std::size_t k = 0; k < pat.size(); ++k)
    if (w[site + k] != pat[k]) return false;
  return true;
}

inline Toks splice(const Toks& w, std::size_t site, std::size_t len, const Toks& repl) {
  Toks out(w.begin(), w.begin() + static_cast<long>(site));
  out.insert(out.end(), repl.begin(), repl.end());
  out.insert(out.end(), w.begin() + static_cast<long>(site + len), w.end());
  return out;
}

inline Toks commutator_block(int j, int g) {
  Toks b;
  for (int i = 1; i <= g; ++i) {
    std::string x = "x" + std::to_string(i), y = "y" + std::to_string(i);
    b.push_back(Token::lambda(j, x, 1));
    b.push_back(Token::lambda(j, y, 1));
    b.push_back(Token::lambda(j, x, -1));
    b.push_back(Token::lambda(j, y, -1));
  }
  return b;
}

// Left and right sides of a two-sided move read off the word at `site`.
// Returns false when the site does not match the requested side.
inline bool sides_at(const PrismaticBraidWord& w, MoveKind kind, std::size_t site, bool left, Toks& from,
                     Toks& to) {
  const Toks& t = w.tokens;
  auto get = [&](std::size_t k) -> const Token* { return site + k < t.size() ? &t[site + k] : nullptr; };
  const Token* a = get(0);
  const Token* b = get(1);
  const Token* c = get(2);
  if (!a) return false;
  switch (kind) {
    case MoveKind::R3: {
      if (!b || !c || a->kind != TokenKind::Sigma) return false;
      int i = a->i, e = a->sign;
      if (left) {
        from = {Token::sigma(i, e), Token::sigma(i + 1, e), Token::sigma(i, e)};
        to = {Token::sigma(i + 1, e), Token::sigma(i, e), Token::sigma(i + 1, e)};
      } else {
        from = {Token::sigma(i, e), Token::sigma(i - 1, e), Token::sigma(i, e)};
        to = {Token::sigma(i - 1, e), Token::sigma(i, e), Token::sigma(i - 1, e)};
      }
      return true;
    }
    case MoveKind::FarComm: {
      if (!b || !disjoint(*a, *b)) return false;
      from = {*a, *b};
      to = {*b, *a};
      return true;
    }
    case MoveKind::VR3: {
      if (!b || !c || a->kind != TokenKind::Chi) return false;
      int i = a->i;
      int d = left ? 1 : -1;
      from = {Token::chi(i), Token::chi(i + d), Token::chi(i)};
      to = {Token::chi(i + d), Token::chi(i), Token::chi(i + d)};
      return true;
    }
    case MoveKind::MixedR3: {
      if (!b || !c) return false;
      if (left) {
        if (a->kind != TokenKind::Sigma) return false;
        int i = a->i, e = a->sign;
        from = {Token::sigma(i, e), Token::chi(i + 1), Token::chi(i)};
        to = {Token::chi(i + 1), Token::chi(i), Token::sigma(i + 1, e)};
      } else {
        if (a->kind != TokenKind::Chi || c->kind != TokenKind::Sigma) return false;
        int i = c->i - 1, e = c->sign;
        from = {Token::chi(i + 1), Token::chi(i), Token::sigma(i + 1, e)};
        to = {Token::sigma(i, e), Token::chi(i + 1), Token::chi(i)};
      }
      return true;
    }
    case MoveKind::LambdaSlide: {
      if (!b) return false;
      if (left) {
        if (a->kind != TokenKind::Lambda || b->kind != TokenKind::Chi) return false;
        int i = b->i;
        if (a->i != i && a->i != i + 1) return false;
        from = {*a, *b};
        to = {*b, Token::lambda(a->i == i ? i + 1 : i, a->color, a->sign)};
      } else {
        if (a->kind != TokenKind::Chi || b->kind != TokenKind::Lambda) return false;
        int i = a->i;
        if (b->i != i && b->i != i + 1) return false;
        from = {*a, *b};
        to = {Token::lambda(b->i == i ? i + 1 : i, b->color, b->sign), *a};
      }
      return true;
    }
    case MoveKind::LambdaPair: {
      if (!b || !c) return false;
      if (left) {
        if (a->kind != TokenKind::Lambda || c->kind == TokenKind::Lambda) return false;
        int i = c->i;
        from = {Token::lambda(i, a->color, a->sign), Token::lambda(i + 1, a->color, a->sign), *c};
        to = {*c, from[0], from[1]};
      } else {
        if (a->kind == TokenKind::Lambda || b->kind != TokenKind::Lambda) return false;
        int i = a->i;
        from = {*a, Token::lambda(i, b->color, b->sign), Token::lambda(i + 1, b->color, b->sign)};
        to = {from[1], from[2], *a};
      }
      return true;
    }
    case MoveKind::SemiWelded: {
      if (!b || a->kind != TokenKind::Lambda || b->kind != TokenKind::Lambda || a->i != b->i) return false;
      from = {*a, *b};
      to = {*b, *a};
      return true;
    }
    case MoveKind::SemiWeldedConj: {
      if (!b || !c || b->kind != TokenKind::Chi || a->kind != TokenKind::Lambda) return false;
      int i = b->i, e = a->sign;
      Toks l = {Token::lambda(i, a->color, e), Token::chi(i), Token::lambda(i, a->color, -e)};
      Toks r = {Token::lambda(i + 1, a->color, -e), Token::chi(i), Token::lambda(i + 1, a->color, e)};
      from = left ? l : r;
      to = left ? r : l;
      return true;
    }
    default:
      return false;
  }
}

}  // namespace detail

// Rewrites w at the given site. Throws MoveError when the pattern is absent.
inline PrismaticBraidWord apply_move(const PrismaticBraidWord& w, const MoveSpec& m) {
  using namespace detail;
  PrismaticBraidWord out = w;
  const Toks& t = w.tokens;
  auto fail = [&](const std::string& why) {
    return MoveError(std::string(move_name(m.kind)) + " does not apply at " + std::to_string(m.site) + ": " + why);
  };
  if (m.site > t.size()) throw fail("site beyond the end of the word");
  switch (m.kind) {
    case MoveKind::R2:
    case MoveKind::VR2:
    case MoveKind::LambdaCancel:
    case MoveKind::Commutator: {
      Toks pat;
      if (m.forward) {
        if (m.site >= t.size()) throw fail("no token at site");
        const Token& a = t[m.site];
        if (m.kind == MoveKind::R2)
          pat = {Token::sigma(a.i, a.sign), Token::sigma(a.i, -a.sign)};
        else if (m.kind == MoveKind::VR2)
          pat = {Token::chi(a.i), Token::chi(a.i)};
        else if (m.kind == MoveKind::LambdaCancel)
          pat = {Token::lambda(a.i, a.color, a.sign), Token::lambda(a.i, a.color, -a.sign)};
        else
          pat = commutator_block(a.i, w.genus());
        if (pat.empty() || !match_at(t, m.site, pat)) throw fail("pattern mismatch");
        out.tokens = splice(t, m.site, pat.size(), {});
      } else {
        if (m.kind == MoveKind::R2)
          pat = {Token::sigma(m.strand, m.sign), Token::sigma(m.strand, -m.sign)};
        else if (m.kind == MoveKind::VR2)
          pat = {Token::chi(m.strand), Token::chi(m.strand)};
        else if (m.kind == MoveKind::LambdaCancel)
          pat = {Token::lambda(m.strand, m.color, m.sign), Token::lambda(m.strand, m.color, -m.sign)};
        else
          pat = commutator_block(m.strand, w.genus());
        out.tokens = splice(t, m.site, 0, pat);
      }
      break;
    }
    case MoveKind::ClassicalR1:
    case MoveKind::VirtualR1: {
      if (!w.uniform_closure()) throw fail("stabilization needs a uniform closure");
      bool classical = m.kind == MoveKind::ClassicalR1;
      if (m.forward) {
        int N = w.n;
        if (N < 2 || m.site >= t.size()) throw fail("no stabilizing crossing");
        const Token& a = t[m.site];
        bool ok = classical ? (a.kind == TokenKind::Sigma && a.i == N - 1) : (a.kind == TokenKind::Chi && a.i == N - 1);
        if (!ok) throw fail("token is not a crossing with the last strand");
        for (std::size_t k = 0; k < t.size(); ++k) {
          if (k == m.site) continue;
          int top = t[k].kind == TokenKind::Lambda ? t[k].i : t[k].i + 1;
          if (top == N) throw fail("last strand is used elsewhere");
        }
        out.tokens = splice(t, m.site, 1, {});
        out.n = N - 1;
      } else {
        out.n = w.n + 1;
        out.tokens = splice(t, m.site, 0, {classical ? Token::sigma(w.n, m.sign) : Token::chi(w.n)});
      }
      if (!w.closure.empty()) out.closure = std::string(out.n, w.closure[0]);
      break;
    }
    default: {
      Toks from, to;
      if (!sides_at(w, m.kind, m.site, m.forward, from, to) || !match_at(t, m.site, from)) throw fail("pattern mismatch");
      out.tokens = splice(t, m.site, from.size(), to);
      break;
    }
  }
  out.validate();
  return out;
}

// All moves that apply to w: every matching rewrite site, plus insertions at
// every site when the word is shorter than max_tokens.
inline std::vector<MoveSpec> legal_moves(const PrismaticBraidWord& w, std::size_t max_tokens, bool with_r1 = false) {
  std::vector<MoveSpec> out;
  const std::vector<MoveKind> rewrites = {MoveKind::R2,          MoveKind::R3,           MoveKind::FarComm,
                                          MoveKind::VR2,         MoveKind::VR3,          MoveKind::MixedR3,
                                          MoveKind::LambdaSlide, MoveKind::LambdaPair,   MoveKind::SemiWelded,
                                          MoveKind::SemiWeldedConj, MoveKind::LambdaCancel, MoveKind::Commutator};
  for (std::size_t s = 0; s < w.tokens.size(); ++s)
    for (MoveKind k : rewrites)
      for (bool fwd : {true, false}) {
        if (!fwd && (k == MoveKind::R2 || k == MoveKind::VR2 || k == MoveKind::LambdaCancel || k == MoveKind::Commutator))
          continue;
        MoveSpec m{k, s, fwd};
        try {
          apply_move(w, m);
          out.push_back(m);
        } catch (const DiagramError&) {
        }
      }
  if (with_r1 && w.uniform_closure())
    for (std::size_t s = 0; s < w.tokens.size(); ++s)
      for (MoveKind k : {MoveKind::ClassicalR1, MoveKind::VirtualR1}) {
        MoveSpec m{k, s, true};
        try {
          apply_move(w, m);
          out.push_back(m);
        } catch (const DiagramError&) {
        }
      }
  if (w.tokens.size() < max_tokens) {
    auto colors = w.palette.colors();
    if (w.uses_omega()) colors.push_back(kOmega);
    for (std::size_t s = 0; s <= w.tokens.size(); ++s) {
      for (int i = 1; i < w.n; ++i)
        for (int e : {1, -1}) {
          out.push_back({MoveKind::R2, s, false, i, e, {}});
          if (e == 1) out.push_back({MoveKind::VR2, s, false, i, 1, {}});
        }
      for (int j = 1; j <= w.n; ++j) {
        for (const auto& c : colors) out.push_back({MoveKind::LambdaCancel, s, false, j, 1, c});
        if (w.genus() > 0) out.push_back({MoveKind::Commutator, s, false, j, 1, {}});
      }
      if (with_r1 && w.uniform_closure()) {
        out.push_back({MoveKind::ClassicalR1, s, false, w.n, 1, {}});
        out.push_back({MoveKind::ClassicalR1, s, false, w.n, -1, {}});
        out.push_back({MoveKind::VirtualR1, s, false, w.n, 1, {}});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- random words

struct RandomWordOptions {
  int max_n = 3;
  int max_g = 2;
  int max_tokens = 8;
  bool lambda = true;
};

inline PrismaticBraidWord random_word(std::mt19937_64& rng, const RandomWordOptions& o) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  PrismaticBraidWord w;
  w.n = uni(1, o.max_n);
  w.palette.g = o.lambda ? uni(0, o.max_g) : 0;
  int len = uni(0, o.max_tokens);
  auto colors = w.palette.colors();
  for (int k = 0; k < len; ++k) {
    int kind = uni(0, 2);
    if (w.n == 1) kind = 2;
    if (kind == 2 && colors.empty()) kind = w.n > 1 ? uni(0, 1) : -1;
    if (kind == 0)
      w.tokens.push_back(Token::sigma(uni(1, w.n - 1), uni(0, 1) ? 1 : -1));
    else if (kind == 1)
      w.tokens.push_back(Token::chi(uni(1, w.n - 1)));
    else if (kind == 2)
      w.tokens.push_back(Token::lambda(uni(1, w.n), colors[uni(0, static_cast<int>(colors.size()) - 1)],
                                       uni(0, 1) ? 1 : -1));
  }
  return w;
}

// ---------------------------------------------------------------- slice words

struct BoundarySymbol {
  bool up = true;
  std::string color = "a";  // "a" for the alpha part
  bool operator==(const BoundarySymbol& o) const { return up == o.up && color == o.color; }
  bool operator!=(const BoundarySymbol& o) const { return !(*this == o); }
  bool alpha() const { return color == "a"; }
};

enum class Prim { Id, Pos, Neg, Virt, CupLeft, CupRight, CapLeft, CapRight, OmegaArc, Box };

// CupLeft: 1 -> V (x) V*, CupRight: 1 -> V* (x) V,
// CapLeft: V* (x) V -> 1, CapRight: V (x) V* -> 1.
struct Primitive {
  Prim kind = Prim::Id;
  BoundarySymbol sym;                         // Id only
  std::string color;                          // OmegaArc
  int sign = 1;                               // OmegaArc
  std::vector<std::vector<std::string>> box;  // Box: explicit square matrix, entries as polynomial text

  static Primitive id(BoundarySymbol s = {}) { return {Prim::Id, std::move(s), {}, 1, {}}; }
  static Primitive make(Prim k) { return {k, {}, {}, 1, {}}; }
  static Primitive arc(std::string c, int s) { return {Prim::OmegaArc, {}, std::move(c), s, {}}; }
  static Primitive matrix(std::vector<std::vector<std::string>> m) { return {Prim::Box, {}, {}, 1, std::move(m)}; }

  std::vector<BoundarySymbol> in() const {
    BoundarySymbol U{true, "a"}, D{false, "a"};
    switch (kind) {
      case Prim::Id: return {sym};
      case Prim::Pos: case Prim::Neg: case Prim::Virt: return {U, U};
      case Prim::CupLeft: case Prim::CupRight: return {};
      case Prim::CapLeft: return {D, U};
      case Prim::CapRight: return {U, D};
      case Prim::OmegaArc: case Prim::Box: return {U};
    }
    return {};
  }
  std::vector<BoundarySymbol> out() const {
    BoundarySymbol U{true, "a"}, D{false, "a"};
    switch (kind) {
      case Prim::Id: return {sym};
      case Prim::Pos: case Prim::Neg: case Prim::Virt: return {U, U};
      case Prim::CupLeft: return {U, D};
      case Prim::CupRight: return {D, U};
      case Prim::CapLeft: case Prim::CapRight: return {};
      case Prim::OmegaArc: case Prim::Box: return {U};
    }
    return {};
  }
};

struct Slice {
  std::vector<Primitive> prims;
  std::vector<BoundarySymbol> domain() const {  // bottom
    std::vector<BoundarySymbol> d;
    for (const auto& p : prims) {
      auto v = p.in();
      d.insert(d.end(), v.begin(), v.end());
    }
    return d;
  }
  std::vector<BoundarySymbol> codomain() const {  // top
    std::vector<BoundarySymbol> d;
    for (const auto& p : prims) {
      auto v = p.out();
      d.insert(d.end(), v.begin(), v.end());
    }
    return d;
  }
};

// Slices listed top to bottom, like braid tokens.
struct SliceWord {
  std::vector<Slice> slices;
  int genus = 0;

  void validate() const {
    for (std::size_t k = 0; k + 1 < slices.size(); ++k)
      if (slices[k].domain() != slices[k + 1].codomain())
        throw DiagramError("slice boundaries do not match between slices " + std::to_string(k) + " and " +
                           std::to_string(k + 1));
  }
  std::vector<BoundarySymbol> domain() const { return slices.empty() ? std::vector<BoundarySymbol>{} : slices.back().domain(); }
  std::vector<BoundarySymbol> codomain() const { return slices.empty() ? std::vector<BoundarySymbol>{} : slices.front().codomain(); }
};

inline int writhe(const SliceWord& d) {
  int s = 0;
  for (const auto& sl : d.slices)
    for (const auto& p : sl.prims) s += p.kind == Prim::Pos ? 1 : p.kind == Prim::Neg ? -1 : 0;
  return s;
}

// One slice per token; the 2g Omega strands ride along on the right.
inline SliceWord braid_to_slices(const PrismaticBraidWord& w) {
  SliceWord d;
  d.genus = w.genus();
  auto tail = [&](Slice& s) {
    for (const auto& c : w.palette.colors()) s.prims.push_back(Primitive::id({true, c}));
  };
  auto plain = [&](int skip_from, int skip_len, const Primitive& p) {
    Slice s;
    for (int k = 1; k <= w.n;) {
      if (k == skip_from) {
        s.prims.push_back(p);
        k += skip_len;
      } else {
        s.prims.push_back(Primitive::id());
        ++k;
      }
    }
    tail(s);
    return s;
  };
  if (w.tokens.empty()) d.slices.push_back(plain(0, 0, Primitive::id()));
  for (const auto& t : w.tokens) {
    switch (t.kind) {
      case TokenKind::Sigma:
        d.slices.push_back(plain(t.i, 2, Primitive::make(t.sign > 0 ? Prim::Pos : Prim::Neg)));
        break;
      case TokenKind::Chi:
        d.slices.push_back(plain(t.i, 2, Primitive::make(Prim::Virt)));
        break;
      case TokenKind::Lambda:
        d.slices.push_back(plain(t.i, 1, Primitive::arc(t.color, t.sign)));
        break;
    }
  }
  return d;
}

// Inverse of braid_to_slices for slice words that are braid-like.
inline PrismaticBraidWord slices_to_braid(const SliceWord& d) {
  PrismaticBraidWord w;
  w.palette.g = d.genus;
  bool first = true;
  for (const auto& sl : d.slices) {
    int pos = 0;
    int n = 0;
    std::optional<Token> tok;
    for (const auto& p : sl.prims) {
      switch (p.kind) {
        case Prim::Id:
          if (p.sym.alpha()) {
            if (!p.sym.up) throw DiagramError("slice word is not braid-like");
            ++pos;
            ++n;
          }
          break;
        case Prim::Pos: case Prim::Neg: case Prim::Virt:
          if (tok) throw DiagramError("slice word is not braid-like");
          tok = p.kind == Prim::Virt ? Token::chi(pos + 1) : Token::sigma(pos + 1, p.kind == Prim::Pos ? 1 : -1);
          pos += 2;
          n += 2;
          break;
        case Prim::OmegaArc:
          if (tok) throw DiagramError("slice word is not braid-like");
          tok = Token::lambda(pos + 1, p.color, p.sign);
          ++pos;
          ++n;
          break;
        default:
          throw DiagramError("slice word is not braid-like");
      }
    }
    if (first) w.n = n;
    if (n != w.n) throw DiagramError("strand count changes");
    first = false;
    if (tok) w.tokens.push_back(*tok);
  }
  w.validate();
  return w;
}

// Moves on slice words act through the braid avatar.
inline SliceWord apply_move(const SliceWord& d, const MoveSpec& m) {
  return braid_to_slices(apply_move(slices_to_braid(d), m));
}

inline int vlk(const SliceWord& d, const Component& over, const Component& under) {
  return vlk(slices_to_braid(d), over, under);
}

inline H1Vector homology_class(const SliceWord& d) { return homology_class(slices_to_braid(d)); }

}  // namespace prism
