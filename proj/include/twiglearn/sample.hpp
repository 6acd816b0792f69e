#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twiglearn/tree.hpp"

namespace twiglearn {

enum class Sign { positive, negative };

char sign_char(Sign s);
Sign parse_sign(std::string_view text);

/// One example: a plain tree (Boolean) or a tree with a selected node (unary).
struct SignedExample {
  Tree tree;
  std::optional<NodeId> selected;
  Sign sign = Sign::positive;

  bool unary() const { return selected.has_value(); }
  DecoratedTree decorated() const { return DecoratedTree(tree, selected.value()); }
  std::string key() const;
};

/// Examples of a single arity, deduplicated up to isomorphism.
class SignedSample {
 public:
  // False when an isomorphic example with the same sign is already present.
  bool add(SignedExample ex);
  bool add(Tree t, Sign s);
  bool add(DecoratedTree t, Sign s);
  void append(const SignedSample& other);

  const std::vector<SignedExample>& examples() const { return examples_; }
  bool empty() const { return examples_.empty(); }
  std::size_t size() const { return examples_.size(); }
  std::optional<bool> unary() const;

  std::vector<Tree> trees(Sign s) const;
  std::vector<DecoratedTree> decorated(Sign s) const;
  std::size_t count(Sign s) const;

 private:
  std::vector<SignedExample> examples_;
  std::set<std::string> keys_;
};

// One example per line in term syntax, optionally prefixed by '+' or '-'.
// Blank lines and lines starting with '#' are skipped.
SignedSample parse_term_sample(std::string_view text, bool unary);
std::string write_term_sample(const SignedSample& sample);

}  // namespace twiglearn
