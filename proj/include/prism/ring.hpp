#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace prism {

using Int = boost::multiprecision::cpp_int;
using json = nlohmann::json;

struct RingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : RingError {
  std::size_t pos;
  ParseError(const std::string& msg, std::size_t p)
      : RingError(msg + " at position " + std::to_string(p)), pos(p) {}
};

// Ordered variable list. The variable named "q" has its exponents stored
// multiplied by qden so that half powers stay integral.
class RingContext {
 public:
  static std::shared_ptr<const RingContext> make(std::vector<std::string> vars, int genus = 0,
                                                 int qden = 2) {
    return std::shared_ptr<const RingContext>(new RingContext(std::move(vars), genus, qden));
  }

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t size() const { return vars_.size(); }
  int genus() const { return genus_; }
  int qden() const { return qden_; }
  int q_index() const { return q_index_; }

  int find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
  }
  int at(const std::string& name) const {
    int i = find(name);
    if (i < 0) throw RingError("unknown variable '" + name + "'");
    return i;
  }
  // storage units per natural unit of exponent
  int scale(int idx) const { return idx == q_index_ ? qden_ : 1; }

  // indices of x1,y1,...,xg,yg
  std::vector<int> symplectic_block() const {
    std::vector<int> out;
    for (int i = 1; i <= genus_; ++i) {
      out.push_back(at("x" + std::to_string(i)));
      out.push_back(at("y" + std::to_string(i)));
    }
    return out;
  }

  bool same_as(const RingContext& o) const { return vars_ == o.vars_ && qden_ == o.qden_; }

 private:
  RingContext(std::vector<std::string> vars, int genus, int qden)
      : vars_(std::move(vars)), genus_(genus), qden_(qden) {
    if (qden_ <= 0) throw RingError("q denominator must be positive");
    if (genus_ < 0) throw RingError("negative genus");
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (!index_.emplace(vars_[i], static_cast<int>(i)).second)
        throw RingError("duplicate variable '" + vars_[i] + "'");
    }
    q_index_ = find("q");
    int last = -1;
    for (int i = 1; i <= genus_; ++i) {
      int xi = find("x" + std::to_string(i)), yi = find("y" + std::to_string(i));
      if (xi < 0 || yi < 0 || xi > yi || xi < last)
        throw RingError("symplectic block must list x1,y1,...,xg,yg in pair order");
      last = yi;
    }
  }

  std::vector<std::string> vars_;
  int genus_;
  int qden_;
  int q_index_ = -1;
  std::map<std::string, int> index_;
};

using Ctx = std::shared_ptr<const RingContext>;

// q, x1, y1, ..., xg, yg followed by any extra names.
inline Ctx standard_context(int g, const std::vector<std::string>& extra = {}) {
  std::vector<std::string> v{"q"};
  for (int i = 1; i <= g; ++i) {
    v.push_back("x" + std::to_string(i));
    v.push_back("y" + std::to_string(i));
  }
  v.insert(v.end(), extra.begin(), extra.end());
  return RingContext::make(v, g);
}

inline bool compatible(const Ctx& a, const Ctx& b) {
  return a == b || (a && b && a->same_as(*b));
}

// Which variables a unit may involve. Empty vars means "no variables".
struct UnitSpec {
  std::vector<std::string> vars;
  bool sign = true;
  bool q_half = false;  // allow q^(k/2)

  static UnitSpec all(const Ctx& c, bool q_half = false) {
    return UnitSpec{c->vars(), true, q_half};
  }
  static UnitSpec none() { return UnitSpec{}; }
  static UnitSpec of(std::vector<std::string> v, bool q_half = false) {
    return UnitSpec{std::move(v), true, q_half};
  }
};

class LaurentPoly {
 public:
  using Exps = std::vector<int>;
  using Terms = std::map<Exps, Int>;

  LaurentPoly() = default;  // unbound zero, adopts the context of the other operand
  explicit LaurentPoly(Ctx c) : ctx_(std::move(c)) {}

  static LaurentPoly constant(const Ctx& c, const Int& v) {
    LaurentPoly p(c);
    if (v != 0) p.terms_.emplace(Exps(c->size(), 0), v);
    return p;
  }
  static LaurentPoly one(const Ctx& c) { return constant(c, 1); }
  // raw storage exponents
  static LaurentPoly monomial(const Ctx& c, Exps e, const Int& coeff = 1) {
    if (e.size() != c->size()) throw RingError("exponent vector length mismatch");
    LaurentPoly p(c);
    if (coeff != 0) p.terms_.emplace(std::move(e), coeff);
    return p;
  }
  // name^power in natural units
  static LaurentPoly var(const Ctx& c, const std::string& name, int power = 1) {
    Exps e(c->size(), 0);
    int i = c->at(name);
    e[i] = power * c->scale(i);
    return monomial(c, std::move(e));
  }
  static LaurentPoly q_pow(const Ctx& c, int num, int den = 1) {
    int i = c->at("q");
    long v = static_cast<long>(num) * c->qden();
    if (v % den) throw RingError("q power not representable with this denominator");
    Exps e(c->size(), 0);
    e[i] = static_cast<int>(v / den);
    return monomial(c, std::move(e));
  }

  static LaurentPoly parse(const Ctx& c, const std::string& text);
  static LaurentPoly from_json(const Ctx& c, const json& j);

  const Ctx& ctx() const { return ctx_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 &&
            std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                        [](int e) { return e == 0; }));
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    adopt(o);
    for (const auto& [e, c] : o.terms_) accumulate(terms_, e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    adopt(o);
    for (const auto& [e, c] : o.terms_) accumulate(terms_, e, -c);
    return *this;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  LaurentPoly operator-() const {
    LaurentPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    Ctx c = a.ctx_ ? a.ctx_ : b.ctx_;
    if (a.ctx_ && b.ctx_ && !compatible(a.ctx_, b.ctx_)) throw RingError("context mismatch");
    LaurentPoly r(c);
    if (a.is_zero() || b.is_zero()) return r;
    std::size_t n = c->size();
    Exps e(n);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
        accumulate(r.terms_, e, ca * cb);
      }
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const Int& s) {
    LaurentPoly r = a;
    if (s == 0) return LaurentPoly(a.ctx_);
    for (auto& [e, c] : r.terms_) c *= s;
    return r;
  }
  friend LaurentPoly operator*(const Int& s, const LaurentPoly& a) { return a * s; }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() && b.is_zero()) return true;
    if (a.ctx_ && b.ctx_ && !compatible(a.ctx_, b.ctx_)) return false;
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  LaurentPoly inverse_monomial() const {
    if (!is_monomial()) throw RingError("not a monomial");
    const auto& [e, c] = *terms_.begin();
    if (c != 1 && c != -1) throw RingError("monomial coefficient is not a unit");
    Exps ne = e;
    for (int& v : ne) v = -v;
    return monomial(ctx_, ne, c);
  }

  LaurentPoly pow(int k) const {
    if (k < 0) return inverse_monomial().pow(-k);
    if (!ctx_) {
      if (k == 0) throw RingError("power of unbound polynomial");
      return *this;
    }
    LaurentPoly r = one(ctx_), b = *this;
    while (k) {
      if (k & 1) r *= b;
      k >>= 1;
      if (k) b *= b;
    }
    return r;
  }

  // lexicographically least / greatest exponent vector
  const std::pair<const Exps, Int>& least_term() const { return *terms_.begin(); }
  const std::pair<const Exps, Int>& leading_term() const { return *terms_.rbegin(); }

  // degree range of one variable, storage units
  std::pair<int, int> degree_range(int idx) const {
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (first) lo = hi = e[idx], first = false;
      lo = std::min(lo, e[idx]);
      hi = std::max(hi, e[idx]);
    }
    return {lo, hi};
  }

  // Same polynomial written in a context that contains every variable of ours.
  LaurentPoly embed(const Ctx& target) const {
    LaurentPoly r(target);
    if (!ctx_) return r;
    std::vector<int> map(ctx_->size());
    for (std::size_t i = 0; i < ctx_->size(); ++i) {
      map[i] = target->at(ctx_->vars()[i]);
      if ((static_cast<int>(i) == ctx_->q_index()) != (map[i] == target->q_index()))
        throw RingError("q must map to q when embedding");
    }
    for (const auto& [e, c] : terms_) {
      Exps ne(target->size(), 0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        long v = e[i];
        if (static_cast<int>(i) == ctx_->q_index()) {
          v *= target->qden();
          if (v % ctx_->qden()) throw RingError("q power not representable in target");
          v /= ctx_->qden();
        }
        ne[map[i]] += static_cast<int>(v);
      }
      r.terms_.emplace(std::move(ne), c);
    }
    return r;
  }

  std::string str() const;
  json to_json() const;

  // Exact division; throws when d does not divide *this.
  LaurentPoly exact_div(const LaurentPoly& d) const;

  // internal: direct term insertion (used by substitution and matrices)
  static void accumulate(Terms& t, const Exps& e, const Int& c) {
    if (c == 0) return;
    auto it = t.find(e);
    if (it == t.end()) {
      t.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) t.erase(it);
    }
  }

 private:
  void adopt(const LaurentPoly& o) {
    if (!ctx_) {
      ctx_ = o.ctx_;
    } else if (o.ctx_ && !compatible(ctx_, o.ctx_)) {
      throw RingError("context mismatch");
    }
  }

  Ctx ctx_;
  Terms terms_;

  friend class PolyParser;
};

// ---------------------------------------------------------------- rendering

namespace detail {

inline std::string q_exp_text(int stored, int qden) {
  int g = std::gcd(std::abs(stored), qden);
  int num = stored / g, den = qden / g;
  if (den == 1) return std::to_string(num);
  return "(" + std::to_string(num) + "/" + std::to_string(den) + ")";
}

inline std::string monomial_text(const RingContext& c, const LaurentPoly::Exps& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += c.vars()[i];
    if (static_cast<int>(i) == c.q_index()) {
      if (e[i] != c.qden()) out += "^" + q_exp_text(e[i], c.qden());
    } else if (e[i] != 1) {
      out += "^" + std::to_string(e[i]);
    }
  }
  return out;
}

}  // namespace detail

inline std::string LaurentPoly::str() const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono = detail::monomial_text(*ctx_, e);
    Int mag = c < 0 ? Int(-c) : c;
    std::string body;
    if (mono.empty())
      body = mag.str();
    else if (mag == 1)
      body = mono;
    else
      body = mag.str() + "*" + mono;
    if (first)
      out = (c < 0 ? "-" : "") + body;
    else
      out += (c < 0 ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.str(); }

inline json LaurentPoly::to_json() const {
  json arr = json::array();
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    json ex = json::object();
    for (std::size_t i = 0; i < it->first.size(); ++i) {
      int v = it->first[i];
      if (!v) continue;
      int s = ctx_->scale(static_cast<int>(i));
      if (v % s == 0)
        ex[ctx_->vars()[i]] = v / s;
      else
        ex[ctx_->vars()[i]] = detail::q_exp_text(v, s);
    }
    arr.push_back({{"coeff", it->second.str()}, {"exps", ex}});
  }
  return arr;
}

inline LaurentPoly LaurentPoly::from_json(const Ctx& c, const json& j) {
  LaurentPoly p(c);
  for (const auto& t : j) {
    Exps e(c->size(), 0);
    for (const auto& [name, val] : t.at("exps").items()) {
      int i = c->at(name);
      if (val.is_number_integer()) {
        e[i] = val.get<int>() * c->scale(i);
      } else {
        std::string s = val.get<std::string>();
        s.erase(std::remove_if(s.begin(), s.end(), [](char ch) { return ch == '(' || ch == ')'; }),
                s.end());
        auto slash = s.find('/');
        long num = std::stol(s.substr(0, slash));
        long den = slash == std::string::npos ? 1 : std::stol(s.substr(slash + 1));
        long v = num * c->scale(i);
        if (v % den) throw RingError("exponent not representable: " + s);
        e[i] = static_cast<int>(v / den);
      }
    }
    accumulate(p.terms_, e, Int(t.at("coeff").get<std::string>()));
  }
  return p;
}

// ---------------------------------------------------------------- parsing

// Recursive descent over + - * / ^ ( ) with implicit multiplication.
class PolyParser {
 public:
  PolyParser(const Ctx& c, const std::string& s) : c_(c), s_(s) {}

  LaurentPoly run() {
    skip();
    if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
    LaurentPoly r = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return r;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char ch) {
    skip();
    return pos_ < s_.size() && s_[pos_] == ch;
  }
  bool eat(char ch) {
    if (peek(ch)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool starts_primary() {
    skip();
    if (pos_ >= s_.size()) return false;
    char ch = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '(';
  }

  LaurentPoly expr() {
    LaurentPoly r(c_);
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    LaurentPoly t = term();
    r = neg ? -t : t;
    for (;;) {
      if (eat('+'))
        r += term();
      else if (eat('-'))
        r -= term();
      else
        break;
    }
    return r;
  }

  LaurentPoly term() {
    LaurentPoly r = unary();
    for (;;) {
      if (eat('*')) {
        r *= unary();
      } else if (peek('/')) {
        std::size_t at = pos_;
        ++pos_;
        LaurentPoly d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        try {
          r = r.exact_div(d);
        } catch (const RingError&) {
          throw ParseError("inexact division", at);
        }
      } else if (starts_primary()) {
        r *= power();
      } else {
        break;
      }
    }
    return r;
  }

  LaurentPoly unary() {
    if (eat('-')) return -unary();
    eat('+');
    return power();
  }

  LaurentPoly power() {
    std::size_t at = pos_;
    bool is_q = false;
    LaurentPoly b = primary(is_q);
    if (!eat('^')) return b;
    long num = 0, den = 1;
    skip();
    if (eat('(')) {
      num = integer_signed();
      if (eat('/')) den = integer_signed();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
    } else {
      num = integer_signed();
    }
    if (den <= 0) throw ParseError("bad exponent denominator", pos_);
    if (den != 1) {
      if (!is_q) throw ParseError("fractional exponent allowed only on q", at);
      return LaurentPoly::q_pow(c_, static_cast<int>(num), static_cast<int>(den));
    }
    if (num < 0 && !b.is_monomial()) throw ParseError("negative power of a non-monomial", at);
    return b.pow(static_cast<int>(num));
  }

  long integer_signed() {
    skip();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
    skip();
    std::size_t st = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (st == pos_) throw ParseError("expected integer", pos_);
    long v = std::stol(s_.substr(st, pos_ - st));
    return neg ? -v : v;
  }

  LaurentPoly primary(bool& is_q) {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      LaurentPoly r = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t st = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return LaurentPoly::constant(c_, Int(s_.substr(st, pos_ - st)));
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t st = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(st, pos_ - st);
      if (c_->find(name) < 0) throw ParseError("unknown variable '" + name + "'", st);
      is_q = c_->find(name) == c_->q_index();
      return LaurentPoly::var(c_, name);
    }
    throw ParseError("unexpected character '" + std::string(1, ch) + "'", pos_);
  }

  Ctx c_;
  const std::string& s_;
  std::size_t pos_ = 0;
};

inline LaurentPoly LaurentPoly::parse(const Ctx& c, const std::string& text) {
  return PolyParser(c, text).run();
}

// ---------------------------------------------------------------- division

inline LaurentPoly LaurentPoly::exact_div(const LaurentPoly& d) const {
  if (d.is_zero()) throw RingError("division by zero");
  if (is_zero()) return LaurentPoly(ctx_ ? ctx_ : d.ctx_);
  if (!compatible(ctx_, d.ctx_)) throw RingError("context mismatch");
  if (d.is_monomial()) {
    const auto& [de, dc] = *d.terms_.begin();
    LaurentPoly r(ctx_);
    for (const auto& [e, c] : terms_) {
      if (c % dc != 0) throw RingError("inexact division");
      Exps ne = e;
      for (std::size_t i = 0; i < ne.size(); ++i) ne[i] -= de[i];
      r.terms_.emplace(std::move(ne), c / dc);
    }
    return r;
  }
  // Lex leading-term division. Every step strictly lowers the leading term;
  // the per-variable bounding box of any true quotient is known in advance,
  // so leaving it means the division is not exact.
  std::size_t n = ctx_->size();
  Exps qlo(n), qhi(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [alo, ahi] = degree_range(static_cast<int>(i));
    auto [dlo, dhi] = d.degree_range(static_cast<int>(i));
    qlo[i] = alo - dlo;
    qhi[i] = ahi - dhi;
    if (qlo[i] > qhi[i]) throw RingError("inexact division");
  }
  LaurentPoly rem = *this, quo(ctx_);
  const auto& [le, lc] = d.leading_term();
  while (!rem.is_zero()) {
    const auto& [re, rc] = rem.leading_term();
    if (rc % lc != 0) throw RingError("inexact division");
    Exps qe(n);
    for (std::size_t i = 0; i < n; ++i) {
      qe[i] = re[i] - le[i];
      if (qe[i] < qlo[i] || qe[i] > qhi[i]) throw RingError("inexact division");
    }
    LaurentPoly t = monomial(ctx_, qe, rc / lc);
    quo += t;
    rem -= t * d;
  }
  return quo;
}

// ---------------------------------------------------------------- substitution

// Simultaneous substitution. Variables missing from the map are carried over
// by name into the target context. Images are given as elements of target.
inline LaurentPoly substitute(const LaurentPoly& p, const std::map<std::string, LaurentPoly>& images,
                              const Ctx& target) {
  LaurentPoly out(target);
  if (p.is_zero()) return out;
  const RingContext& src = *p.ctx();
  std::size_t n = src.size();
  struct Slot {
    bool mapped = false;
    int tindex = -1;
    LaurentPoly image;
    std::map<int, LaurentPoly> cache;
  };
  std::vector<Slot> slots(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& name = src.vars()[i];
    auto it = images.find(name);
    if (it != images.end()) {
      slots[i].mapped = true;
      slots[i].image = it->second.ctx() ? it->second : LaurentPoly(target);
      if (slots[i].image.ctx() && !compatible(slots[i].image.ctx(), target))
        throw RingError("substitution image of '" + name + "' lives in another context");
    } else {
      slots[i].tindex = target->find(name);
    }
  }
  auto power_of = [&](std::size_t i, int stored) -> LaurentPoly {
    Slot& s = slots[i];
    auto hit = s.cache.find(stored);
    if (hit != s.cache.end()) return hit->second;
    int sc = src.scale(static_cast<int>(i));
    LaurentPoly r;
    if (stored % sc == 0) {
      int k = stored / sc;
      if (k < 0 && !s.image.is_monomial())
        throw RingError("substitution image of '" + src.vars()[i] +
                        "' is not invertible but a negative power occurs");
      if (s.image.is_zero() && k < 0) throw RingError("zero image raised to a negative power");
      r = s.image.is_zero() ? (k == 0 ? LaurentPoly::one(target) : LaurentPoly(target))
                            : s.image.pow(k);
    } else {
      // fractional power: only for monomial images whose exponents divide evenly
      if (!s.image.is_monomial()) throw RingError("fractional power of a non-monomial image");
      const auto& [e, c] = s.image.least_term();
      if (c != 1) throw RingError("fractional power of a signed monomial");
      LaurentPoly::Exps ne(target->size());
      for (std::size_t j = 0; j < ne.size(); ++j) {
        long v = static_cast<long>(e[j]) * stored;
        if (v % sc) throw RingError("fractional power not representable");
        ne[j] = static_cast<int>(v / sc);
      }
      r = LaurentPoly::monomial(target, ne);
    }
    s.cache.emplace(stored, r);
    return r;
  };
  for (const auto& [e, c] : p.terms()) {
    LaurentPoly::Exps base(target->size(), 0);
    LaurentPoly term = LaurentPoly::constant(target, c);
    for (std::size_t i = 0; i < n; ++i) {
      if (!e[i]) continue;
      if (slots[i].mapped) {
        term *= power_of(i, e[i]);
      } else {
        int ti = slots[i].tindex;
        if (ti < 0) throw RingError("variable '" + src.vars()[i] + "' missing from target context");
        long v = e[i];
        if (static_cast<int>(i) == src.q_index()) {
          if (ti != target->q_index()) throw RingError("q must map to q");
          v = v * target->qden();
          if (v % src.qden()) throw RingError("q power not representable in target");
          v /= src.qden();
        }
        base[ti] += static_cast<int>(v);
      }
    }
    out += term * LaurentPoly::monomial(target, base);
  }
  return out;
}

inline LaurentPoly substitute(const LaurentPoly& p, const std::map<std::string, LaurentPoly>& images) {
  return substitute(p, images, p.ctx());
}

// x -> x^-1 for every listed variable
inline LaurentPoly invert_vars(const LaurentPoly& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return p;
  std::map<std::string, LaurentPoly> m;
  for (const auto& n : names) m.emplace(n, LaurentPoly::var(p.ctx(), n, -1));
  return substitute(p, m);
}

// ---------------------------------------------------------------- units

namespace detail {

struct ResolvedUnits {
  std::vector<bool> allowed;
  int qstep = 1;  // allowed q lattice step in storage units
  bool sign = true;
};

inline ResolvedUnits resolve(const Ctx& c, const UnitSpec& u) {
  ResolvedUnits r;
  r.allowed.assign(c->size(), false);
  for (const auto& v : u.vars) {
    int i = c->find(v);
    if (i >= 0) r.allowed[i] = true;
  }
  r.sign = u.sign;
  if (c->q_index() >= 0) r.qstep = u.q_half ? std::max(1, c->qden() / 2) : c->qden();
  return r;
}

inline int floor_to(int v, int step) {
  int m = ((v % step) + step) % step;
  return v - m;
}

}  // namespace detail

// Returns u with p = u*r, u = ±(allowed monomial), or nothing.
inline std::optional<LaurentPoly> eq_up_to_unit(const LaurentPoly& p, const LaurentPoly& r,
                                                const UnitSpec& spec) {
  if (p.is_zero() && r.is_zero()) return LaurentPoly::one(p.ctx() ? p.ctx() : r.ctx());
  if (p.is_zero() || r.is_zero()) return std::nullopt;
  if (!compatible(p.ctx(), r.ctx())) throw RingError("context mismatch");
  if (p.size() != r.size()) return std::nullopt;
  const Ctx& c = p.ctx();
  auto ru = detail::resolve(c, spec);
  const auto& [pe, pc] = p.least_term();
  const auto& [re, rc] = r.least_term();
  Int ratio;
  if (pc == rc)
    ratio = 1;
  else if (pc == -rc && ru.sign)
    ratio = -1;
  else
    return std::nullopt;
  LaurentPoly::Exps ue(c->size());
  for (std::size_t i = 0; i < ue.size(); ++i) {
    ue[i] = pe[i] - re[i];
    if (ue[i] == 0) continue;
    if (!ru.allowed[i]) return std::nullopt;
    if (static_cast<int>(i) == c->q_index() && ue[i] % ru.qstep) return std::nullopt;
  }
  LaurentPoly u = LaurentPoly::monomial(c, ue, ratio);
  if (u * r == p) return u;
  return std::nullopt;
}

// Representative of the unit orbit: divide by the allowed part of the least
// term, then make the least coefficient positive.
inline LaurentPoly canonical_form(const LaurentPoly& p, const UnitSpec& spec) {
  if (p.is_zero()) return p;
  const Ctx& c = p.ctx();
  auto ru = detail::resolve(c, spec);
  // lex order is translation invariant, so the least term of u*p is u times
  // the least term of p and one division is enough
  const auto& [e, coeff] = p.least_term();
  LaurentPoly::Exps ue(c->size(), 0);
  for (std::size_t i = 0; i < ue.size(); ++i) {
    if (!ru.allowed[i]) continue;
    ue[i] = static_cast<int>(i) == c->q_index() ? detail::floor_to(e[i], ru.qstep) : e[i];
  }
  Int sgn = (coeff < 0 && ru.sign) ? Int(-1) : Int(1);
  LaurentPoly::Exps inv(ue.size());
  for (std::size_t i = 0; i < ue.size(); ++i) inv[i] = -ue[i];
  return p * LaurentPoly::monomial(c, inv, sgn);
}

}  // namespace prism
