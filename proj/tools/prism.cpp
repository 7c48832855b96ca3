// prism: command line front end for the invariant engine.
//
// Exit codes: 0 success, 1 usage or parse error, 2 verification mismatch.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "prism/prism.hpp"

using namespace prism;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kMismatch = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SuperDim parse_mn(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--mn expects m,n");
  try {
    SuperDim d{std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
    d.validate();
    return d;
  } catch (const std::invalid_argument&) {
    throw UsageError("--mn expects m,n");
  }
}

json poly_json(const LaurentPoly& p) { return {{"text", p.str()}, {"terms", p.to_json()}}; }

void print_field(const std::string& key, const std::string& value) { std::cout << key << ": " << value << "\n"; }

struct Common {
  std::string input;
  bool as_json = false;
  bool canonical = false;
};

// ---------------------------------------------------------------- invariant

int cmd_invariant(const Common& c, const std::string& mn) {
  SuperDim dim = parse_mn(mn);
  auto w = parse_braid(read_input(c.input));
  LaurentPoly f = f_polynomial(w, dim);
  LaurentPoly canon = canonical_form(f, UnitSpec::all(f.ctx(), true));
  int rank = polynomial_rank(f, w.genus());
  if (c.as_json) {
    json j{{"word", w.to_dsl()},          {"mn", {dim.m, dim.n}}, {"raw", poly_json(f)},
           {"canonical", poly_json(canon)}, {"rank", rank},         {"genus_lower_bound", rank / 2}};
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  print_field("word", w.to_dsl());
  print_field("mn", dim.str());
  print_field("raw", f.str());
  print_field("canonical", canon.str());
  print_field("rank", std::to_string(rank));
  print_field("genus_lower_bound", std::to_string(rank / 2));
  return kOk;
}

// ---------------------------------------------------------------- csw

int cmd_csw(const Common& c, const std::string& mode) {
  std::string text = read_input(c.input);
  json j;
  if (mode == "det") {
    auto w = parse_braid(text);
    LaurentPoly dt = csw_det(w, TMode::T), dq = csw_det(w, TMode::QInv2);
    int rank = quotient_rank(dt, w.genus());
    j = {{"word", w.to_dsl()}, {"det", poly_json(dt)}, {"det_q", poly_json(dq)}, {"rank", rank}};
    if (c.canonical) j["canonical"] = poly_json(canonical_form(dq, UnitSpec::all(dq.ctx(), true)));
  } else if (mode == "fox") {
    Presentation p = parse_presentation(text);
    LaurentPoly d = csw_from_presentation(p);
    int rank = quotient_rank(d, p.genus);
    j = {{"det", poly_json(d)}, {"rank", rank}};
    if (c.canonical) j["canonical"] = poly_json(canonical_form(d, UnitSpec::all(d.ctx())));
  } else {
    throw UsageError("--mode must be det or fox");
  }
  j["genus_lower_bound"] = j["rank"].get<int>() / 2;
  if (c.as_json) {
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  if (j.contains("word")) print_field("word", j["word"]);
  print_field("det", j["det"]["text"]);
  if (j.contains("det_q")) print_field("det_q", j["det_q"]["text"]);
  if (j.contains("canonical")) print_field("canonical", j["canonical"]["text"]);
  print_field("rank", std::to_string(j["rank"].get<int>()));
  print_field("genus_lower_bound", std::to_string(j["genus_lower_bound"].get<int>()));
  return kOk;
}

// ---------------------------------------------------------------- gap

int cmd_gap(const Common& c) {
  auto w = parse_braid(read_input(c.input));
  LaurentPoly raw = gap_raw(w), canon = canonical_form(raw, UnitSpec::all(raw.ctx()));
  if (c.as_json) {
    std::cout << json{{"word", w.to_dsl()}, {"raw", poly_json(raw)}, {"canonical", poly_json(canon)}}.dump(2) << "\n";
    return kOk;
  }
  print_field("word", w.to_dsl());
  print_field("raw", raw.str());
  print_field("canonical", canon.str());
  return kOk;
}

// ---------------------------------------------------------------- bracket

int cmd_bracket(const Common& c, int genus, bool strict, int max_crossings, bool verbose) {
  auto w = parse_braid(read_input(c.input));
  BracketOptions o{strict, max_crossings};
  LaurentPoly b = surface_bracket(w, o);
  int g = genus >= 0 ? genus : w.genus();
  bool dk = dye_kauffman_minimal(b, g);
  if (c.as_json) {
    json j{{"word", w.to_dsl()}, {"bracket", poly_json(b)}, {"genus", g}, {"dye_kauffman_minimal", dk}};
    if (verbose) {
      json states = json::array();
      auto colors = bracket_colors(w);
      for (const auto& s : resolve_states(w, o)) {
        std::string ch;
        for (bool a : s.choices) ch += a ? 'A' : 'B';
        json loops = json::array();
        for (const auto& v : s.decorated_loops) {
          json l = json::array();
          for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k]) l.push_back(colors[k]);
          loops.push_back(l);
        }
        states.push_back({{"choices", ch}, {"trivial_loops", s.trivial_loops}, {"decorated_loops", loops}});
      }
      j["states"] = states;
    }
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  print_field("word", w.to_dsl());
  print_field("bracket", b.str());
  print_field("dye_kauffman_minimal", dk ? "true" : "false");
  if (verbose)
    for (const auto& s : resolve_states(w, o)) {
      std::string ch;
      for (bool a : s.choices) ch += a ? 'A' : 'B';
      std::cout << "state " << (ch.empty() ? "-" : ch) << ": " << s.trivial_loops << " trivial, "
                << s.decorated_loops.size() << " decorated\n";
    }
  return kOk;
}

// ---------------------------------------------------------------- verify-moves

struct Snapshot {
  std::vector<std::pair<std::string, LaurentPoly>> values;
};

Snapshot invariants_of(const PrismaticBraidWord& w, int max_crossings) {
  Snapshot s;
  s.values.emplace_back("f11", f_polynomial(w, SuperDim{1, 1}));
  if (w.n <= 4) s.values.emplace_back("f21", f_polynomial(w, SuperDim{2, 1}));
  s.values.emplace_back("csw", csw_det(w));
  if (classical_crossings(w) <= std::min(max_crossings, 14)) s.values.emplace_back("bracket", surface_bracket(w));
  return s;
}

// Returns the first invariant on which a and b differ.
std::optional<std::string> compare(const Snapshot& a, const Snapshot& b) {
  for (const auto& [name, v] : a.values)
    for (const auto& [name2, v2] : b.values)
      if (name == name2 && v != v2) return name;
  return std::nullopt;
}

int cmd_verify_moves(const Common& c, std::uint64_t seed, int iterations, int max_crossings) {
  auto start = parse_braid(read_input(c.input));
  Snapshot base = invariants_of(start, max_crossings);
  std::mt19937_64 rng(seed);
  std::size_t cap = start.tokens.size() + 8;
  for (int it = 0; it < iterations; ++it) {
    PrismaticBraidWord w = start;
    Snapshot before = base;
    int steps = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int k = 0; k < steps; ++k) {
      auto moves = legal_moves(w, cap);
      if (moves.empty()) break;
      const MoveSpec& m = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
      PrismaticBraidWord next = apply_move(w, m);
      Snapshot after = invariants_of(next, max_crossings);
      if (auto bad = compare(before, after)) {
        std::string va, vb;
        for (const auto& [n, v] : before.values)
          if (n == *bad) va = v.str();
        for (const auto& [n, v] : after.values)
          if (n == *bad) vb = v.str();
        if (c.as_json) {
          std::cout << json{{"status", "discrepancy"}, {"iteration", it},     {"move", m.str()},
                            {"invariant", *bad},      {"before", w.to_dsl()}, {"after", next.to_dsl()},
                            {"before_value", va},     {"after_value", vb}}
                           .dump(2)
                    << "\n";
        } else {
          std::cout << "discrepancy in " << *bad << " at iteration " << it << " under " << m.str() << "\n"
                    << "  before: " << w.to_dsl() << "\n    " << va << "\n"
                    << "  after:  " << next.to_dsl() << "\n    " << vb << "\n";
        }
        return kMismatch;
      }
      w = std::move(next);
      before = std::move(after);
    }
  }
  if (c.as_json)
    std::cout << json{{"status", "ok"}, {"iterations", iterations}, {"seed", seed}}.dump(2) << "\n";
  else
    std::cout << "ok: " << iterations << " move sequences, no discrepancy\n";
  return kOk;
}

// ---------------------------------------------------------------- catalog

int cmd_catalog(const Common& c, bool run_all) {
  auto results = run_catalog(load_catalog(c.input), run_all);
  int failed = 0;
  json arr = json::array();
  for (const auto& r : results) {
    if (r.status == "fail" || r.status == "error") ++failed;
    if (c.as_json)
      arr.push_back({{"name", r.name}, {"status", r.status}, {"detail", r.detail}});
    else
      std::cout << r.status << "  " << r.name << (r.detail.empty() ? "" : "  " + r.detail) << "\n";
  }
  if (c.as_json) std::cout << json{{"results", arr}, {"failed", failed}}.dump(2) << "\n";
  else std::cout << results.size() << " entries, " << failed << " failed\n";
  return failed ? kMismatch : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum and Alexander-type invariants of prismatic braid words"};
  app.require_subcommand(1);
  Common common;
  std::string mn = "1,1", mode = "det";
  std::uint64_t seed = 1;
  int iterations = 200, genus = -1, max_crossings = 20;
  bool strict = false, verbose = false, run_all = false;

  auto add_common = [&](CLI::App* s, const std::string& what) {
    s->add_option("input", common.input, what + " ('-' reads stdin)")->required();
    s->add_flag("--json", common.as_json, "JSON output");
    s->add_flag("--verbose", verbose, "extra diagnostics");
  };

  auto* inv = app.add_subcommand("invariant", "f~^{m|n} of a braid word");
  add_common(inv, "braid word file");
  inv->add_option("--mn", mn, "super dimension m,n")->capture_default_str();
  inv->add_flag("--canonical", common.canonical, "accepted for symmetry; canonical form is always printed");

  auto* csw = app.add_subcommand("csw", "CSW polynomial");
  add_common(csw, "braid word file (det) or presentation file (fox)");
  csw->add_option("--mode", mode, "det or fox")->check(CLI::IsMember({"det", "fox"}))->capture_default_str();
  csw->add_flag("--canonical", common.canonical, "also print the unit-normalized form");

  auto* gp = app.add_subcommand("gap", "generalized Alexander polynomial of a virtual braid");
  add_common(gp, "virtual braid file");

  auto* br = app.add_subcommand("bracket", "surface bracket and Dye-Kauffman test");
  add_common(br, "braid word file");
  br->add_option("--genus", genus, "surface genus for the minimality test (default: word genus)");
  br->add_flag("--strict-paper-bracket", strict, "empty state-variable sum counts as 0");
  br->add_option("--max-crossings", max_crossings, "refuse larger state sums")->capture_default_str();

  auto* vm = app.add_subcommand("verify-moves", "recompute invariants along random move sequences");
  add_common(vm, "braid word file");
  vm->add_option("--seed", seed, "random seed")->capture_default_str();
  vm->add_option("--iterations", iterations, "number of move sequences")->capture_default_str();
  vm->add_option("--max-crossings", max_crossings, "skip the bracket above this size")->capture_default_str();

  auto* cat = app.add_subcommand("catalog", "run a catalog of golden values");
  add_common(cat, "catalog json file");
  cat->add_flag("--run-all", run_all, "include disabled entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*inv) return cmd_invariant(common, mn);
    if (*csw) return cmd_csw(common, mode);
    if (*gp) return cmd_gap(common);
    if (*br) return cmd_bracket(common, genus, strict, max_crossings, verbose);
    if (*vm) return cmd_verify_moves(common, seed, iterations, max_crossings);
    if (*cat) return cmd_catalog(common, run_all);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CatalogError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    // parse and domain errors in the input
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
