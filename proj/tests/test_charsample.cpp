#include <doctest.h>

#include "testkit.hpp"
#include "twiglearn/charsample.hpp"
#include "twiglearn/matching.hpp"

using namespace twiglearn;

namespace {

TwigQuery boolean(std::string_view s) { return parse_query(s, Arity::boolean); }
TwigQuery unary(std::string_view s) { return parse_query(s, Arity::unary); }

}  // namespace

TEST_CASE("characteristic trees of a unary twig") {
  auto q1 = unary("r/b[a//b]//c[d]/*/c");
  REQUIRE(q1.size() == 8);
  auto cs = char_sample(q1);
  CHECK(to_term(cs.t0, cs.sel0) == "r(b(a(b),c(d,a0(c!))))");
  // Two descendant edges, each stretched into 8 filler nodes.
  CHECK(cs.t1.size() == 8 + 2 * 8);
  std::size_t fillers = 0, stars = 0;
  for (NodeId n = 0; n < cs.t1.size(); ++n) {
    fillers += cs.t1.label(n) == "a2_0";
    stars += cs.t1.label(n) == "a1_0";
  }
  CHECK(fillers == 16);
  CHECK(stars == 1);
  CHECK(cs.t1.label(*cs.sel1) == "c");
  for (const auto& d : cs.decorated()) CHECK(embeds(q1, d));
}

TEST_CASE("small characteristic sample spelled out") {
  auto cs = char_sample(unary("r//a/*"));
  CHECK(to_term(cs.t0, cs.sel0) == "r(a(a0!))");
  CHECK(to_term(cs.t1, cs.sel1) == "r(a2_0(a2_0(a2_0(a(a1_0!)))))");
  auto b = char_sample(boolean("x"));
  CHECK(to_term(b.t0) == "x");
  CHECK(to_term(b.t1) == "x");
  CHECK_FALSE(b.sel0);
}

TEST_CASE("fresh labels avoid the query and the minimal label") {
  CHECK(fresh_labels({}).star == "a1_0");
  auto f = fresh_labels({"a1_0", "a2_1"});
  CHECK(f.star == "a1_2");
  CHECK(f.filler == "a2_2");
  auto cs = char_sample(boolean("a1_0//a2_0"));
  CHECK(cs.t1.label(1) == "a2_1");
  auto custom = char_sample(boolean("a//*"), "zz");
  CHECK(to_term(custom.t0) == "a(zz)");
}

TEST_CASE("characteristic samples belong to the query and stay small") {
  testkit::Rng rng(21);
  auto labels = testkit::alphabet(3);
  for (int i = 0; i < 300; ++i) {
    auto arity = testkit::coin(rng) ? Arity::unary : Arity::boolean;
    auto q = testkit::random_query(rng, {6, false, true, true, arity}, labels);
    auto cs = char_sample(q);
    const std::size_t n = q.size();
    CHECK(cs.t0.size() == n);
    CHECK(cs.t0.size() + cs.t1.size() <= n * n + n);
    CHECK(p2_contains(q, q));
    if (q.unary()) {
      for (const auto& d : cs.decorated()) CHECK(embeds(q, d));
    } else {
      CHECK(embeds(q, cs.t0));
      CHECK(embeds(q, cs.t1));
    }
  }
}

TEST_CASE("containment in the sample follows from subsumption") {
  testkit::Rng rng(22);
  auto labels = testkit::alphabet(2);
  for (int i = 0; i < 300; ++i) {
    auto q = testkit::random_query(rng, {5, false, true, true, Arity::boolean}, labels);
    auto g = testkit::generalize(rng, q);
    REQUIRE(subsumes(g, q));
    CHECK(p2_contains(q, g));
  }
  CHECK_THROWS_AS(p2_contains(boolean("a"), unary("a/b")), ArityError);
}
