#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "burau.hpp"
#include "diagram.hpp"
#include "ring.hpp"
#include "rt.hpp"
#include "symplectic.hpp"

namespace prism {

// ---------------------------------------------------------------- Kishino family

// Diagonal (1|1) contribution of one generalized fly, indexed by its two
// crossing signs, in the letters x, y.
inline std::pair<std::string, std::string> fly_contribution(int c1, int c2) {
  if (c1 > 0 && c2 < 0) return {"-q^3/x + q/x + q", "-q^3/x + q*y/x + q/x"};
  if (c1 > 0 && c2 > 0) return {"1/q", "q^3*y/x - q^3/x + q/x - q*y + y/q"};
  if (c1 < 0 && c2 > 0) return {"-q^3/x + q^3 + q/x - q*y + y/q", "y/(q*x)"};
  return {"-q*y + y/q + q", "q*y/x - q*y + y/q"};
}

// Fly i uses the pair (x_{i+1}, y_{i+1}).
inline std::pair<LaurentPoly, LaurentPoly> fly_diagonal(const Ctx& c, int i, int c1, int c2) {
  Ctx local = RingContext::make({"q", "x", "y"}, 0);
  auto [a, b] = fly_contribution(c1, c2);
  std::map<std::string, LaurentPoly> phi{{"q", LaurentPoly::var(c, "q")},
                                         {"x", LaurentPoly::var(c, "x" + std::to_string(i + 1))},
                                         {"y", LaurentPoly::var(c, "y" + std::to_string(i + 1))}};
  return {substitute(LaurentPoly::parse(local, a), phi, c), substitute(LaurentPoly::parse(local, b), phi, c)};
}

// signs[i] = (c_{i1}, c_{i2}); closed value q(alpha1 - alpha2).
inline LaurentPoly kishino_polynomial(const std::vector<std::pair<int, int>>& signs) {
  int g = static_cast<int>(signs.size());
  Ctx c = standard_context(g);
  LaurentPoly a1 = LaurentPoly::one(c), a2 = LaurentPoly::one(c);
  for (int i = 0; i < g; ++i) {
    auto [d1, d2] = fly_diagonal(c, i, signs[i].first, signs[i].second);
    a1 *= d1;
    a2 *= d2;
  }
  return LaurentPoly::var(c, "q") * (a1 - a2);
}

// All 4^{r+1} sign assignments of K_r.
inline std::vector<std::vector<std::pair<int, int>>> kishino_sign_assignments(int r) {
  std::vector<std::vector<std::pair<int, int>>> out;
  int flies = r + 1;
  for (int code = 0; code < (1 << (2 * flies)); ++code) {
    std::vector<std::pair<int, int>> s;
    for (int i = 0; i < flies; ++i) s.emplace_back(code >> (2 * i) & 1 ? -1 : 1, code >> (2 * i + 1) & 1 ? -1 : 1);
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------- catalog

struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CatalogEntry {
  std::string name;
  std::string kind;
  int tier = 1;
  bool enabled = true;
  json spec;  // kind-specific fields
};

struct CatalogResult {
  std::string name;
  std::string status;  // pass, fail, skipped, error
  std::string detail;
};

inline std::vector<CatalogEntry> parse_catalog(const json& j) {
  std::vector<CatalogEntry> out;
  for (const auto& e : j.at("entries")) {
    CatalogEntry c;
    c.name = e.at("name").get<std::string>();
    c.kind = e.at("kind").get<std::string>();
    c.tier = e.value("tier", 1);
    c.enabled = e.value("enabled", c.tier == 1);
    c.spec = e;
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<CatalogEntry> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open catalog " + path);
  return parse_catalog(json::parse(in, nullptr, true, true));
}

namespace detail {

inline Ctx entry_context(const json& s) {
  int g = s.value("genus", 0);
  if (s.contains("vars")) return RingContext::make(s.at("vars").get<std::vector<std::string>>(), g);
  return standard_context(g);
}

inline std::string text_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  std::string s;
  for (const auto& part : v) s += part.get<std::string>();
  return s;
}

inline void expect_rank(const json& s, const LaurentPoly& p, int g, std::vector<std::string>& fails,
                        bool quotients = false, const std::string& label = "rank") {
  if (!s.contains(label)) return;
  int want = s.at(label).get<int>(), got = quotients ? quotient_rank(p, g) : polynomial_rank(p, g);
  if (got != want) fails.push_back(label + " " + std::to_string(got) + " != " + std::to_string(want));
}

inline void expect_poly(const LaurentPoly& got, const std::string& text, const UnitSpec& units,
                        std::vector<std::string>& fails, const std::string& label = "value") {
  LaurentPoly want = LaurentPoly::parse(got.ctx(), text);
  if (canonical_form(got, units) != canonical_form(want, units))
    fails.push_back(label + " " + got.str() + " != " + want.str());
}

inline CatalogResult run_kind(const CatalogEntry& e) {
  const json& s = e.spec;
  std::vector<std::string> fails;
  std::string note;
  if (e.kind == "invariant") {
    auto w = parse_braid(s.at("dsl").get<std::string>());
    auto mn = s.at("mn").get<std::vector<int>>();
    LaurentPoly f = f_polynomial(w, SuperDim{mn.at(0), mn.at(1)});
    if (s.contains("expected")) expect_poly(f, text_of(s.at("expected")), UnitSpec::all(f.ctx(), true), fails);
    expect_rank(s, f, w.genus(), fails);
    note = f.str();
  } else if (e.kind == "csw-det") {
    auto w = parse_braid(s.at("dsl").get<std::string>());
    TMode mode = s.value("t", std::string("t")) == "q^-2" ? TMode::QInv2 : TMode::T;
    LaurentPoly d = csw_det(w, mode);
    if (s.contains("scale")) d = LaurentPoly::parse(d.ctx(), s.at("scale").get<std::string>()) * d;
    if (s.contains("expected")) expect_poly(d, text_of(s.at("expected")), UnitSpec::none(), fails);
    expect_rank(s, d, w.genus(), fails, true);
    note = d.str();
  } else if (e.kind == "csw-fox") {
    Presentation p = parse_presentation(text_of(s.at("presentation")));
    LaurentPoly d = csw_from_presentation(p);
    if (s.contains("expected")) expect_poly(d, text_of(s.at("expected")), UnitSpec::none(), fails);
    expect_rank(s, d, p.genus, fails, true);
    note = d.str();
  } else if (e.kind == "gap") {
    auto w = parse_braid(s.at("dsl").get<std::string>());
    LaurentPoly gv = gap(w);
    if (s.contains("expected")) expect_poly(gv, text_of(s.at("expected")), UnitSpec::all(gv.ctx()), fails);
    note = gv.str();
  } else if (e.kind == "basis-change") {
    Ctx c = entry_context(s);
    LaurentPoly from = LaurentPoly::parse(c, text_of(s.at("from"))), to = LaurentPoly::parse(c, text_of(s.at("to")));
    LaurentPoly moved = apply_basis_change(from, s.at("matrix").get<SpMatrix>());
    if (moved != to) fails.push_back("basis change gives " + moved.str());
    if (quotient_rank(from, c->genus()) != quotient_rank(to, c->genus())) fails.push_back("rank changed");
    note = moved.str();
  } else if (e.kind == "identity") {
    Ctx c = entry_context(s);
    LaurentPoly lhs = LaurentPoly::parse(c, text_of(s.at("lhs")));
    if (s.contains("subst")) {
      std::map<std::string, LaurentPoly> phi;
      for (const auto& [k, v] : s.at("subst").items()) phi.emplace(k, LaurentPoly::parse(c, v.get<std::string>()));
      lhs = substitute(lhs, phi, c);
    }
    if (s.contains("factor")) lhs = LaurentPoly::parse(c, s.at("factor").get<std::string>()) * lhs;
    LaurentPoly rhs = LaurentPoly::parse(c, text_of(s.at("rhs")));
    if (s.contains("up_to_unit")) {
      auto u = eq_up_to_unit(lhs, rhs, UnitSpec::of(s.at("up_to_unit").get<std::vector<std::string>>()));
      if (!u) fails.push_back("lhs " + lhs.str() + " is not a unit multiple of rhs " + rhs.str());
      else if (*u != LaurentPoly::one(c)) note = "equal up to the unit " + u->str() + "; ";
    } else if (lhs != rhs) {
      fails.push_back("lhs " + lhs.str() + " != rhs " + rhs.str());
    }
    note += lhs.str();
  } else if (e.kind == "printed-rank") {
    Ctx c = entry_context(s);
    LaurentPoly p = LaurentPoly::parse(c, text_of(s.at("poly")));
    expect_rank(s, p, c->genus(), fails);
    note = std::to_string(p.size()) + " terms, rank " + std::to_string(polynomial_rank(p, c->genus()));
  } else if (e.kind == "membership") {
    if (!s.contains("dsl") || s.at("dsl").is_null())
      throw CatalogError("no braid transcription of the diagram is available");
    auto w = parse_braid(s.at("dsl").get<std::string>());
    auto mn = s.at("mn").get<std::vector<int>>();
    LaurentPoly f = f_polynomial(w, SuperDim{mn.at(0), mn.at(1)});
    LaurentPoly terms = LaurentPoly::parse(f.ctx(), text_of(s.at("terms")));
    for (const auto& [ex, co] : terms.terms()) {
      auto it = f.terms().find(ex);
      if (it == f.terms().end() || it->second != co) fails.push_back("missing printed term");
    }
    if (s.contains("expected_terms") && f.size() != s.at("expected_terms").get<std::size_t>())
      fails.push_back(std::to_string(f.size()) + " terms");
    note = std::to_string(f.size()) + " terms";
  } else if (e.kind == "kishino") {
    int r = s.at("r").get<int>(), want = s.at("rank").get<int>();
    int bad = 0, total = 0;
    for (const auto& signs : kishino_sign_assignments(r)) {
      ++total;
      if (polynomial_rank(kishino_polynomial(signs), r + 1) != want) ++bad;
    }
    if (bad) fails.push_back(std::to_string(bad) + " of " + std::to_string(total) + " sign assignments miss rank");
    note = std::to_string(total) + " sign assignments";
  } else {
    throw CatalogError("unknown catalog kind '" + e.kind + "'");
  }
  if (fails.empty()) return {e.name, "pass", note};
  std::string d;
  for (const auto& f : fails) d += (d.empty() ? "" : "; ") + f;
  return {e.name, "fail", d};
}

}  // namespace detail

inline CatalogResult run_entry(const CatalogEntry& e, bool include_disabled = false) {
  if (!e.enabled && !include_disabled) return {e.name, "skipped", "tier " + std::to_string(e.tier) + ", disabled"};
  try {
    return detail::run_kind(e);
  } catch (const std::exception& ex) {
    return {e.name, "error", ex.what()};
  }
}

inline std::vector<CatalogResult> run_catalog(const std::vector<CatalogEntry>& entries, bool include_disabled = false) {
  std::vector<CatalogResult> out(entries.size());
  parallel_for(entries.size(), [&](std::size_t i) { out[i] = run_entry(entries[i], include_disabled); });
  return out;
}

}  // namespace prism
