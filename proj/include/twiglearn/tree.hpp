#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twiglearn {

using Label = std::string;
using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

inline constexpr std::string_view kDefaultMinLabel = "a0";
inline constexpr std::string_view kDefaultVirtualRoot = "_root";

/// Thrown on malformed textual input (terms, queries, XML, DIMACS).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unranked labeled tree. Node ids are preorder-compatible: a parent id is
/// always smaller than the ids of its children, and the root is 0.
class Tree {
 public:
  explicit Tree(Label root_label);

  NodeId add_child(NodeId parent, Label label);

  NodeId root() const { return 0; }
  std::size_t size() const { return labels_.size(); }
  const Label& label(NodeId n) const { return labels_.at(n); }
  NodeId parent(NodeId n) const { return parents_.at(n); }
  std::span<const NodeId> children(NodeId n) const { return children_.at(n); }
  bool is_leaf(NodeId n) const { return children_.at(n).empty(); }

  std::size_t depth(NodeId n) const;
  std::size_t height() const;
  std::vector<NodeId> leaves() const;
  // Root-to-node list of ids, both ends included.
  std::vector<NodeId> ancestors_path(NodeId n) const;

  // Copy of the subtree rooted at n; the second member maps old ids to new
  // ones (kNoNode outside the subtree).
  std::pair<Tree, std::vector<NodeId>> subtree(NodeId n) const;

 private:
  std::vector<Label> labels_;
  std::vector<NodeId> parents_;
  std::vector<std::vector<NodeId>> children_;
};

/// A tree with one selected non-root node.
class DecoratedTree {
 public:
  DecoratedTree(Tree tree, NodeId selected);

  const Tree& tree() const { return tree_; }
  NodeId selected() const { return selected_; }

 private:
  Tree tree_;
  NodeId selected_;
};

using Word = std::vector<Label>;

std::string to_string(const Word& w);
// Shorter first, then lexicographic over labels.
bool canonical_less(const Word& a, const Word& b);
const Word& canonical_min(std::span<const Word> words);

Word label_path(const Tree& t, NodeId n);
std::vector<Word> paths(const Tree& t);
std::vector<Word> paths(std::span<const Tree> trees);
Word sel_path(const DecoratedTree& t);
std::vector<Word> sel_paths(std::span<const DecoratedTree> sample);
Tree path_tree(const Word& w);

Tree add_virtual_root(const Tree& t, const Label& label = Label(kDefaultVirtualRoot));
DecoratedTree add_virtual_root(const DecoratedTree& t,
                               const Label& label = Label(kDefaultVirtualRoot));

// Term syntax: r(a(b),b(a!)) where '!' marks a selected node. Labels outside
// the bare character set are double-quoted.
struct ParsedTerm {
  Tree tree;
  std::vector<NodeId> marked;
};
ParsedTerm parse_term(std::string_view text);
Tree parse_tree(std::string_view text);
DecoratedTree parse_decorated(std::string_view text);

std::string to_term(const Tree& t, std::optional<NodeId> selected = std::nullopt);
std::string to_term(const DecoratedTree& t);
// Children sorted recursively; equal strings iff the trees are isomorphic.
std::string canonical_term(const Tree& t, std::optional<NodeId> selected = std::nullopt);
std::string canonical_term(const DecoratedTree& t);

bool tree_iso(const Tree& a, const Tree& b);

}  // namespace twiglearn
