#include <doctest.h>

#include <functional>
#include <set>

#include "testkit.hpp"
#include "twiglearn/matching.hpp"

using namespace twiglearn;

namespace {

TwigQuery boolean(std::string_view s) { return parse_query(s, Arity::boolean); }
TwigQuery unary(std::string_view s) { return parse_query(s, Arity::unary); }

// Independent brute force over all maps from query nodes to target nodes.
struct Target {
  std::size_t size;
  std::function<NodeId(NodeId)> parent;
  std::function<bool(NodeId)> child_edge;
  std::function<bool(const NodeTest&, NodeId)> matches;
};

bool proper_ancestor(const Target& t, NodeId a, NodeId d) {
  for (NodeId p = t.parent(d); p != kNoNode; p = t.parent(p))
    if (p == a) return true;
  return false;
}

std::vector<std::vector<NodeId>> all_embeddings(const TwigQuery& q, const Target& t,
                                                std::optional<NodeId> target_sel) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> map(q.size(), 0);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == q.size()) {
      if (map[0] != 0) return;
      for (NodeId n = 0; n < q.size(); ++n) {
        if (!t.matches(q.test(n), map[n])) return;
        if (n > 0) {
          NodeId up = map[q.parent(n)];
          bool ok = q.axis(n) == Axis::child ? t.parent(map[n]) == up && t.child_edge(map[n])
                                             : proper_ancestor(t, up, map[n]);
          if (!ok) return;
        }
      }
      if (q.selecting() && map[*q.selecting()] != *target_sel) return;
      out.push_back(map);
      return;
    }
    for (NodeId m = 0; m < t.size; ++m) {
      map[i] = m;
      go(i + 1);
    }
  };
  go(0);
  return out;
}

Target tree_target(const Tree& t) {
  return {t.size(), [&t](NodeId n) { return t.parent(n); }, [](NodeId) { return true; },
          [&t](const NodeTest& test, NodeId m) { return !test || *test == t.label(m); }};
}

Target query_target(const TwigQuery& q) {
  return {q.size(), [&q](NodeId n) { return q.parent(n); },
          [&q](NodeId n) { return q.axis(n) == Axis::child; },
          [&q](const NodeTest& test, NodeId m) { return !test || (q.test(m) && *q.test(m) == *test); }};
}

}  // namespace

TEST_CASE("embedding counts on the running example") {
  auto t0 = parse_tree("r(a(b),b(a(c)),c(b(a)))");
  auto q0 = boolean("r/*[*]//a");
  CHECK(count_embeddings(q0, t0) == 2);
  CHECK(all_embeddings(q0, tree_target(t0), std::nullopt).size() == 2);
  CHECK(embeds(q0, t0));
  CHECK(count_embeddings(boolean("r/*[*]//x"), t0) == 0);
}

TEST_CASE("answers of the running example") {
  auto t0 = parse_tree("r(a(b),b(a(c)),c(b(a)))");
  auto p0 = unary("r/*//a");
  // a under b, and a under c/b.
  CHECK(answers(p0, t0) == std::vector<NodeId>{4, 8});
  CHECK(answers(unary("*//*"), t0).size() == t0.size() - 1);
  CHECK(answers(unary("r/x"), t0).empty());
  CHECK(embeds(p0, DecoratedTree(t0, 4)));
  CHECK_FALSE(embeds(p0, DecoratedTree(t0, 1)));
}

TEST_CASE("subsumption is not containment for general twigs") {
  CHECK_FALSE(subsumes(boolean("*[*]"), boolean("a[.//b]")));
  CHECK(subsumes(boolean("*//*"), boolean("a[.//b]")));
  CHECK(subsumes(boolean("offer//item//*"), boolean("offer//item/descr")));
  CHECK_FALSE(subsumes(boolean("offer//item/descr"), boolean("offer//item//*")));
  CHECK(subsumes(boolean("a[b][b]"), boolean("a/b")));
  CHECK(equivalent_by_subsumption(boolean("a[b][b]"), boolean("a/b")));
  CHECK_FALSE(subsumes(boolean("a/*"), boolean("a//b")));
  CHECK(subsumes(unary("r//*"), unary("r/a/b")));
  CHECK_FALSE(subsumes(unary("r/*"), unary("r//a")));
  CHECK(subsumes(unary("r//*"), unary("r/a[b]")));
}

TEST_CASE("arity mismatches are errors") {
  auto t = parse_tree("r(a)");
  CHECK_THROWS_AS(embeds(unary("r/a"), t), ArityError);
  CHECK_THROWS_AS(embeds(boolean("r/a"), DecoratedTree(t, 1)), ArityError);
  CHECK_THROWS_AS(subsumes(boolean("r/a"), unary("r/a")), ArityError);
  CHECK_THROWS_AS(answers(boolean("r/a"), t), ArityError);
}

TEST_CASE("brute-force count is capped") {
  Tree t("a");
  for (int i = 0; i < 50; ++i) t.add_child(0, "a");
  CHECK_THROWS_AS(count_embeddings(boolean("a[a][a][a][a]"), t, 1000), CapExceeded);
}

TEST_CASE("images of a path inside a query") {
  auto q = boolean("r[*/a]//a/c");
  auto images = path_images(boolean("r//a"), q);
  CHECK(images.size() == 2);
  CHECK(path_images(boolean("r//a/b"), q).empty());
  CHECK(path_images(boolean("r"), q) == std::vector<NodeId>{0});
}

TEST_CASE("dynamic programming agrees with brute force") {
  testkit::Rng rng(11);
  auto labels = testkit::alphabet(3);
  for (int i = 0; i < 400; ++i) {
    auto t = testkit::random_tree(rng, 7, labels);
    auto q = testkit::random_query(rng, {4, false, true, true, Arity::boolean}, labels);
    bool brute = !all_embeddings(q, tree_target(t), std::nullopt).empty();
    CHECK_MESSAGE(embeds(q, t) == brute, serialize(q), " on ", to_term(t));
    CHECK(count_embeddings(q, t) == all_embeddings(q, tree_target(t), std::nullopt).size());
  }
  for (int i = 0; i < 400; ++i) {
    auto t = testkit::random_tree(rng, 7, labels, 2);
    auto q = testkit::random_query(rng, {4, false, true, true, Arity::unary}, labels);
    std::set<NodeId> brute;
    for (NodeId s = 1; s < t.size(); ++s)
      if (!all_embeddings(q, tree_target(t), s).empty()) brute.insert(s);
    auto got = answers(q, t);
    CHECK_MESSAGE(std::set<NodeId>(got.begin(), got.end()) == brute, serialize(q), " on ",
                  to_term(t));
  }
}

TEST_CASE("subsumption agrees with brute force and implies containment") {
  testkit::Rng rng(12);
  auto labels = testkit::alphabet(2);
  for (int i = 0; i < 400; ++i) {
    auto p = testkit::random_query(rng, {4, false, true, true, Arity::boolean}, labels);
    auto q = testkit::random_query(rng, {5, false, true, true, Arity::boolean}, labels);
    bool brute = !all_embeddings(p, query_target(q), std::nullopt).empty();
    REQUIRE_MESSAGE(subsumes(p, q) == brute, serialize(p), " vs ", serialize(q));
    if (!brute) continue;
    for (int j = 0; j < 20; ++j) {
      auto t = testkit::random_tree(rng, 8, labels);
      if (embeds(q, t)) CHECK(embeds(p, t));
    }
  }
}

TEST_CASE("every embedding respects the axes") {
  testkit::Rng rng(13);
  auto labels = testkit::alphabet(2);
  for (int i = 0; i < 100; ++i) {
    auto t = testkit::random_tree(rng, 8, labels);
    auto q = testkit::random_query(rng, {4, false, true, true, Arity::boolean}, labels);
    for_each_embedding(q, t, [&](std::span<const NodeId> map) {
      CHECK(map[0] == t.root());
      for (NodeId n = 1; n < q.size(); ++n) {
        CHECK(test_matches(q.test(n), t.label(map[n])));
        if (q.axis(n) == Axis::child) CHECK(t.parent(map[n]) == map[q.parent(n)]);
        else CHECK(t.depth(map[n]) > t.depth(map[q.parent(n)]));
      }
    });
  }
}
