#include <doctest.h>

#include <functional>

#include "twiglearn/matching.hpp"
#include "twiglearn/query.hpp"

using namespace twiglearn;

namespace {

TwigQuery boolean(std::string_view s) { return parse_query(s, Arity::boolean); }
TwigQuery unary(std::string_view s) { return parse_query(s, Arity::unary); }

// Anchoredness through the block decomposition B0//B1//...//Bk.
bool anchored_by_blocks(const std::vector<PathStep>& steps, bool is_unary) {
  std::vector<std::vector<bool>> blocks(1);  // true = wildcard
  blocks[0].push_back(!steps[0].test);
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i].axis == Axis::descendant) blocks.emplace_back();
    blocks.back().push_back(!steps[i].test);
  }
  const std::size_t k = blocks.size() - 1;
  for (std::size_t i = 0; i <= k; ++i) {
    const auto& b = blocks[i];
    bool single = b.size() == 1;
    if (i > 0 && b.front() && !(single && i == k)) return false;
    if (i < k && b.back() && !(single && i == 0)) return false;
    if (i == k && !is_unary && b.back() && !single) return false;
  }
  return true;
}

void all_paths(std::size_t n, const std::function<void(const std::vector<PathStep>&)>& f) {
  std::vector<PathStep> steps(n);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == n) {
      f(steps);
      return;
    }
    for (int t = 0; t < 2; ++t) {
      steps[i].test = t ? NodeTest("a") : kWildcard;
      if (i == 0) {
        steps[i].axis = Axis::child;
        go(i + 1);
        continue;
      }
      for (Axis ax : {Axis::child, Axis::descendant}) {
        steps[i].axis = ax;
        go(i + 1);
      }
    }
  };
  go(0);
}

}  // namespace

TEST_CASE("parse and serialize") {
  auto q = boolean("r/*[*]//a");
  CHECK(q.size() == 4);
  CHECK_FALSE(q.unary());
  CHECK(serialize(q) == "r/*[*]//a");

  auto u = unary("library/*[author/marx]/title[.//*]");
  CHECK(u.size() == 6);
  REQUIRE(u.selecting());
  CHECK(*u.test(*u.selecting()) == "title");
  CHECK(serialize(u) == "library/*[author/marx]/title[.//*]");

  CHECK(serialize(boolean("dblp[*/url]/*[title]/author")) == "dblp[*/url]/*[title]/author");
  CHECK(serialize(boolean("dblp/*[author][title]")) == "dblp/*[title]/author");
  CHECK(serialize(unary("*//*")) == "*//*");
  CHECK(serialize(boolean(" r [ .//a ] / b ")) == "r[b]//a");
}

TEST_CASE("filter order does not change the serialization") {
  CHECK(serialize(boolean("r[b][a][.//c]")) == serialize(boolean("r[.//c][a][b]")));
  CHECK(serialize(unary("r[x/y][a]/s[q]")) == serialize(unary("r[a][x/y]/s[q]")));
  CHECK(query_iso(boolean("r[a/b][c]"), boolean("r[c]/a/b")));
  CHECK_FALSE(query_iso(boolean("r/a/b"), unary("r/a/b")));
  CHECK_FALSE(query_iso(unary("r[a]/b"), unary("r[b]/a")));
}

TEST_CASE("labels outside the bare set are quoted") {
  auto q = boolean(R"(author/"K. Marx")");
  CHECK(*q.test(1) == "K. Marx");
  CHECK(serialize(q) == R"(author/"K. Marx")");
  auto star = boolean(R"(a/"*")");
  CHECK(star.test(1) == NodeTest("*"));
  CHECK(serialize(star) == R"(a/"*")");
}

TEST_CASE("malformed queries are rejected") {
  for (auto text : {"", "a/", "a[", "a]", "/a", "a[b", "a//", "a[.b]", "a b", "a[]"})
    CHECK_THROWS_AS(boolean(text), ParseError);
  CHECK_THROWS_AS(unary("a"), ParseError);
  CHECK_THROWS_AS(unary("a[b]"), ParseError);
}

TEST_CASE("parse of serialize is isomorphic") {
  for (auto text : {"r/*[*]//a", "a[.//b[c]/d][e]//f", "*", "a//*", "x[y][y]/z"}) {
    auto q = boolean(text);
    CHECK(query_iso(q, boolean(serialize(q))));
  }
  for (auto text : {"a/b", "a[.//b]//c[d]", "*//*", "r[a]/b[c]//d[.//e]"}) {
    auto q = unary(text);
    CHECK(query_iso(q, unary(serialize(q))));
  }
}

TEST_CASE("paths of a query") {
  auto ps = paths_of_query(boolean("r/*[*]//a"));
  REQUIRE(ps.size() == 2);
  CHECK(serialize(ps[0]) == "r/*/*");
  CHECK(serialize(ps[1]) == "r/*//a");
  CHECK(paths_of_query(boolean("r")).size() == 1);
}

TEST_CASE("anchored paths") {
  CHECK(is_anchored(boolean("r//a/b//c")));
  CHECK(is_anchored(boolean("*//a")));
  CHECK(is_anchored(boolean("a//*")));
  CHECK_FALSE(is_anchored(boolean("a/*")));
  CHECK(is_anchored(unary("a/*")));
  CHECK(is_anchored(unary("r/*/b/c//*")));
  CHECK_FALSE(is_anchored(boolean("r//*/a")));
  CHECK_FALSE(is_anchored(boolean("r/*//a")));
  CHECK(is_anchored(boolean("r/*/a")));
  CHECK(is_anchored(boolean("*")));
  CHECK(is_anchored(unary("*/*/*")));
  CHECK_FALSE(is_anchored(unary("a/*//*")));
  CHECK_THROWS(is_anchored(boolean("a[b]/c")));
}

TEST_CASE("anchoredness agrees with the block decomposition") {
  for (std::size_t n = 1; n <= 6; ++n) {
    all_paths(n, [&](const std::vector<PathStep>& steps) {
      auto b = make_path(steps, Arity::boolean);
      CHECK_MESSAGE(is_anchored(b) == anchored_by_blocks(steps, false), serialize(b));
      if (n >= 2) {
        auto u = make_path(steps, Arity::unary);
        CHECK_MESSAGE(is_anchored(u) == anchored_by_blocks(steps, true), serialize(u));
      }
    });
  }
}

TEST_CASE("path-subsumption-free twigs") {
  CHECK(is_psf(boolean("dblp[*/url]/*[title]/author")));
  CHECK(is_psf(boolean("r")));
  CHECK_FALSE(is_psf(boolean("r[a][a]")));
  CHECK_FALSE(is_psf(boolean("r[.//a]/a")));
  CHECK_FALSE(is_psf(boolean("r[a/*]/b")));
  CHECK(is_psf(unary("library/*[author/marx]/title[.//*]")));
  CHECK_FALSE(is_psf(unary("r/*//a")));
  CHECK_FALSE(is_psf(unary("r/*[a/*]/b")));
  CHECK_FALSE(is_psf(unary("r[a][a]/b")));
  // Paths hanging off different spine nodes are not compared.
  CHECK(is_psf(unary("r[a]/s[a]/t")));
}

TEST_CASE("conjunctions of paths") {
  ConjQuery c({boolean("offer//item/for-sale"), boolean("offer//item/descr")});
  REQUIRE(c.size() == 2);
  CHECK(serialize(c.members()[0]) == "offer//item/descr");
  CHECK(serialize(c.to_twig()) == "offer[.//item/for-sale]//item/descr");
  CHECK_THROWS(ConjQuery({boolean("r/a"), boolean("r//a")}));
  CHECK_THROWS(ConjQuery({boolean("r/a"), boolean("s/a")}));
  CHECK_THROWS(ConjQuery({boolean("r[a]/b")}));
  CHECK_THROWS(ConjQuery(std::vector<TwigQuery>{}));
}

TEST_CASE("builder invariants") {
  TwigQuery q(NodeTest("r"));
  NodeId a = q.add(q.root(), Axis::child, NodeTest("a"));
  CHECK_THROWS(q.set_selecting(q.root()));
  CHECK_THROWS(q.add(7, Axis::child, kWildcard));
  CHECK_THROWS(q.add(a, Axis::child, NodeTest("")));
  q.set_selecting(a);
  CHECK(q.spine() == std::vector<NodeId>{0, 1});
}
