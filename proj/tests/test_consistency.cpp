#include <doctest.h>

#include <functional>

#include "testkit.hpp"
#include "twiglearn/consistency.hpp"
#include "twiglearn/matching.hpp"

using namespace twiglearn;

namespace {

// (!x1 | x2 | !x3) & (x1 | !x2)
CnfFormula phi0() { return {3, {{-1, 2, -3}, {1, -2}}}; }

void all_small_formulas(const std::function<void(const CnfFormula&)>& f) {
  for (std::size_t vars = 1; vars <= 2; ++vars) {
    std::vector<std::vector<int>> clauses;
    std::vector<int> lits;
    for (int v = 1; v <= static_cast<int>(vars); ++v) lits.insert(lits.end(), {v, -v});
    // Non-empty clauses without repeated literals.
    for (unsigned mask = 1; mask < (1u << lits.size()); ++mask) {
      std::vector<int> c;
      for (std::size_t i = 0; i < lits.size(); ++i)
        if (mask >> i & 1) c.push_back(lits[i]);
      clauses.push_back(c);
    }
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      f({vars, {clauses[i]}});
      for (std::size_t j = i; j < clauses.size(); ++j) f({vars, {clauses[i], clauses[j]}});
    }
  }
}

}  // namespace

TEST_CASE("DIMACS round trip") {
  auto f = parse_dimacs("c comment\np cnf 3 2\n-1 2 -3 0\n1\n-2 0\n");
  CHECK(f.num_vars == 3);
  REQUIRE(f.clauses.size() == 2);
  CHECK(f.clauses[1] == std::vector<int>{1, -2});
  CHECK(write_dimacs(f) == "p cnf 3 2\n-1 2 -3 0\n1 -2 0\n");
  CHECK(parse_dimacs(write_dimacs(f)).clauses == f.clauses);
  CHECK(parse_dimacs("p cnf 1 1\n1 0\n%\n0\n").clauses.size() == 1);
}

TEST_CASE("malformed DIMACS") {
  CHECK_THROWS_AS(parse_dimacs("1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 1 2\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\nx 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p dnf 1 1\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs(""), ParseError);
}

TEST_CASE("truth tables") {
  CHECK(satisfiable(phi0()));
  CHECK_FALSE(satisfiable({1, {{1}, {-1}}}));
  CHECK(satisfying_assignment({2, {{1}, {-2}}}) == std::vector<bool>{true, false});
  CHECK(satisfiable({2, {}}));
}

TEST_CASE("reduction sample for the three-variable formula") {
  auto s = sat_to_sample(phi0());
  REQUIRE(s.size() == 3);
  const auto& ex = s.examples();
  CHECK(ex[0].sign == Sign::positive);
  CHECK(to_term(ex[0].tree) ==
        "c(d(x1(0),x2(0,1),x3(0,1)),d(x1(0,1),x2(1),x3(0,1)),d(x1(0,1),x2(0,1),x3(0)))");
  CHECK(to_term(ex[1].tree) == "c(d(x1(1),x2(0,1),x3(0,1)),d(x1(0,1),x2(0),x3(0,1)))");
  CHECK(ex[2].sign == Sign::negative);
  CHECK(to_term(ex[2].tree) ==
        "c(d(x1,x2(0,1),x3(0,1)),d(x1(0,1),x2,x3(0,1)),d(x1(0,1),x2(0,1),x3))");
}

TEST_CASE("reduction of a unit clause and sample growth") {
  auto s = sat_to_sample({1, {{1}}});
  REQUIRE(s.size() == 2);
  CHECK(to_term(s.examples()[0].tree) == "c(d(x1(1)))");
  CHECK(to_term(s.examples()[1].tree) == "c(d(x1))");

  // A brush over n variables has 1 + n + 2n nodes, minus the removed leaves.
  for (std::size_t n = 1; n <= 5; ++n) {
    CnfFormula f{n, {}};
    for (int v = 1; v <= static_cast<int>(n); ++v) f.clauses.push_back({v});
    auto sample = sat_to_sample(f);
    std::size_t nodes = 0;
    for (const auto& e : sample.examples()) nodes += e.tree.size();
    CHECK(nodes == n * (3 * n + 1) + 1 + n * (3 * n - 1));
  }
}

TEST_CASE("bounded consistency of reduction instances") {
  auto s = sat_to_sample(phi0());
  auto q = check_consistency(s, reduction_spec(s));
  REQUIRE(q);
  CHECK(consistent_with(*q, s));
  CHECK(q->labels().contains("c"));

  auto unsat = sat_to_sample({1, {{1}, {-1}}});
  CHECK_FALSE(check_consistency(unsat, reduction_spec(unsat)));
  CHECK(sat_crosscheck(phi0()));
  CHECK(sat_crosscheck({1, {{1}, {-1}}}));
}

TEST_CASE("every formula over two variables with two clauses") {
  std::size_t checked = 0;
  all_small_formulas([&](const CnfFormula& f) {
    CHECK_MESSAGE(sat_crosscheck(f), write_dimacs(f));
    ++checked;
  });
  CHECK(checked > 0);
}

TEST_CASE("wildcards separate unsatisfiable instances") {
  // With '*' the filters c/d[x1/*]... tell every positive brush from the
  // leafless negative one, so satisfiability no longer matters.
  auto unsat = sat_to_sample({1, {{1}, {-1}}});
  auto spec = reduction_spec(unsat);
  spec.allow_star = true;
  spec.max_nodes = 4;
  auto q = check_consistency(unsat, spec);
  REQUIRE(q);
  CHECK(consistent_with(*q, unsat));
  CHECK(consistent_with(parse_query("c/d/x1/*", Arity::boolean), unsat));
}

TEST_CASE("positive-only samples are consistent") {
  testkit::Rng rng(61);
  auto labels = testkit::alphabet(3);
  for (int i = 0; i < 30; ++i) {
    SignedSample s;
    for (int j = 0; j < 3; ++j) s.add(testkit::random_tree(rng, 8, labels), Sign::positive);
    EnumSpec spec;
    spec.labels = labels;
    spec.cls = QueryClass::twig_boolean;
    auto q = check_consistency(s, spec);
    REQUIRE(q);
    CHECK(consistent_with(*q, s));
  }
}

TEST_CASE("product method agrees with enumeration") {
  testkit::Rng rng(62);
  auto labels = testkit::alphabet(2);
  for (int i = 0; i < 150; ++i) {
    SignedSample s;
    for (int j = 0; j < 2; ++j) s.add(testkit::random_tree(rng, 5, labels), Sign::positive);
    for (int j = 0; j < 2; ++j) s.add(testkit::random_tree(rng, 5, labels), Sign::negative);
    EnumSpec spec;
    spec.labels = labels;
    spec.cls = QueryClass::twig_boolean;
    spec.allow_star = false;
    spec.allow_desc = false;
    spec.max_nodes = std::numeric_limits<std::size_t>::max();
    auto exact = check_consistency(s, spec);
    if (exact) CHECK(consistent_with(*exact, s));
    spec.max_nodes = 5;
    auto searched = first_consistent(s, spec);
    if (searched) CHECK(exact);
    if (exact && exact->size() <= 5) CHECK(searched);
  }
}

TEST_CASE("arity mismatch") {
  SignedSample s;
  s.add(parse_decorated("r(a!)"), Sign::positive);
  EnumSpec spec;
  spec.cls = QueryClass::twig_boolean;
  CHECK_THROWS_AS(check_consistency(s, spec), ArityError);
}
