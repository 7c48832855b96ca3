#include <catch_amalgamated.hpp>

#include "prism/prism.hpp"

using namespace prism;

TEST_CASE("shipped catalog passes", "[catalog]") {
  auto entries = load_catalog(std::string(PRISM_DATA_DIR) + "/catalog.json");
  REQUIRE(entries.size() >= 20);
  auto results = run_catalog(entries);
  int skipped = 0;
  for (const auto& r : results) {
    INFO(r.name << ": " << r.detail);
    CHECK((r.status == "pass" || r.status == "skipped"));
    skipped += r.status == "skipped";
  }
  CHECK(skipped == 1);
}

TEST_CASE("disabled entries report why they cannot run", "[catalog]") {
  auto entries = load_catalog(std::string(PRISM_DATA_DIR) + "/catalog.json");
  for (const auto& e : entries) {
    if (e.enabled) continue;
    CHECK(e.tier == 2);
    auto r = run_entry(e, true);
    CHECK(r.status == "error");
  }
}

TEST_CASE("empty catalog passes trivially", "[catalog]") {
  CHECK(run_catalog(parse_catalog(json::parse(R"({"entries": []})"))).empty());
}

TEST_CASE("mismatches and unknown kinds are reported", "[catalog]") {
  auto entries = parse_catalog(json::parse(R"({"entries": [
    {"name": "wrong", "kind": "invariant", "dsl": "N=1 g=0 ;", "mn": [2, 1], "expected": "q + 1"},
    {"name": "right", "kind": "invariant", "dsl": "N=1 g=0 ;", "mn": [2, 1], "expected": "1", "rank": 0},
    {"name": "odd", "kind": "nonsense"},
    {"name": "broken", "kind": "invariant", "dsl": "N=1 ;", "mn": [1, 1]}
  ]})"));
  auto r = run_catalog(entries);
  CHECK(r[0].status == "fail");
  CHECK(r[1].status == "pass");
  CHECK(r[2].status == "error");
  CHECK(r[3].status == "error");
}

TEST_CASE("Kishino contributions", "[catalog]") {
  auto signs = kishino_sign_assignments(1);
  CHECK(signs.size() == 16);
  for (const auto& s : signs) CHECK(polynomial_rank(kishino_polynomial(s), 2) == 4);
  // one fly alone: (+,+) gives q(q^-1 - (q^3 y/x - q^3/x + q/x - q y + y/q))
  LaurentPoly k = kishino_polynomial({{1, 1}});
  CHECK(k == LaurentPoly::parse(k.ctx(), "1 - q^4*y1/x1 + q^4/x1 - q^2/x1 + q^2*y1 - y1"));
}
