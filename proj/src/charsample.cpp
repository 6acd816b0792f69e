#include "twiglearn/charsample.hpp"

#include "twiglearn/matching.hpp"

namespace twiglearn {

std::vector<DecoratedTree> CharSample::decorated() const {
  return {DecoratedTree(t0, sel0.value()), DecoratedTree(t1, sel1.value())};
}

FreshLabels fresh_labels(const std::set<Label>& taken) {
  for (std::size_t k = 0;; ++k) {
    FreshLabels f{"a1_" + std::to_string(k), "a2_" + std::to_string(k)};
    if (!taken.contains(f.star) && !taken.contains(f.filler)) return f;
  }
}

namespace {

Tree instantiate(const TwigQuery& q, const Label& star, const std::optional<Label>& filler,
                 std::optional<NodeId>& selected) {
  auto label_of = [&](NodeId n) { return q.test(n).value_or(star); };
  const std::size_t chain = q.size();
  Tree t(label_of(q.root()));
  std::vector<NodeId> image(q.size(), kNoNode);
  image[0] = t.root();
  for (NodeId n = 1; n < q.size(); ++n) {
    NodeId at = image[q.parent(n)];
    if (filler && q.axis(n) == Axis::descendant)
      for (std::size_t i = 0; i < chain; ++i) at = t.add_child(at, *filler);
    image[n] = t.add_child(at, label_of(n));
  }
  if (q.selecting()) selected = image[*q.selecting()];
  return t;
}

}  // namespace

CharSample char_sample(const TwigQuery& q, const Label& min_label) {
  auto taken = q.labels();
  taken.insert(min_label);
  auto fresh = fresh_labels(taken);
  std::optional<NodeId> sel0, sel1;
  Tree t0 = instantiate(q, min_label, std::nullopt, sel0);
  Tree t1 = instantiate(q, fresh.star, fresh.filler, sel1);
  return {std::move(t0), std::move(t1), sel0, sel1};
}

bool p2_contains(const TwigQuery& q, const TwigQuery& q2, const Label& min_label) {
  if (q.arity() != q2.arity()) throw ArityError("arity mismatch");
  auto cs = char_sample(q, min_label);
  if (q.unary()) return accepts_all(q2, std::span<const DecoratedTree>(cs.decorated()));
  return accepts_all(q2, std::span<const Tree>(cs.trees()));
}

}  // namespace twiglearn
