#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twiglearn/query.hpp"
#include "twiglearn/tree.hpp"

namespace twiglearn {

/// Two trees witnessing a query: t0 turns '*' into the minimal label and '//'
/// into '/'; t1 turns '*' into a fresh label and every '//' into a chain of
/// |q| nodes carrying a second fresh label. Unary queries carry the selection.
struct CharSample {
  Tree t0;
  Tree t1;
  std::optional<NodeId> sel0;
  std::optional<NodeId> sel1;

  std::vector<Tree> trees() const { return {t0, t1}; }
  std::vector<DecoratedTree> decorated() const;
};

struct FreshLabels {
  Label star;
  Label filler;
};

// Smallest k such that "a1_k" and "a2_k" avoid the given labels.
FreshLabels fresh_labels(const std::set<Label>& taken);

CharSample char_sample(const TwigQuery& q, const Label& min_label = Label(kDefaultMinLabel));

// Both trees of q's characteristic sample belong to L(q2).
bool p2_contains(const TwigQuery& q, const TwigQuery& q2,
                 const Label& min_label = Label(kDefaultMinLabel));

}  // namespace twiglearn
