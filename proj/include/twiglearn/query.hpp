#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twiglearn/tree.hpp"

namespace twiglearn {

enum class Axis : std::uint8_t { child, descendant };
enum class Arity : std::uint8_t { boolean, unary };

// Node test of a query node; an empty optional is the wildcard.
using NodeTest = std::optional<Label>;
inline const NodeTest kWildcard = std::nullopt;

bool test_matches(const NodeTest& test, const Label& label);

/// Twig query: a tree of node tests joined by child or descendant edges, with
/// an optional selecting node (present iff the query is unary). Node ids are
/// preorder-compatible as in Tree.
class TwigQuery {
 public:
  explicit TwigQuery(NodeTest root_test = kWildcard);

  NodeId add(NodeId parent, Axis axis, NodeTest test);
  // Copies the subtree of `from` rooted at `from_node` below `at`. Returns the
  // id of the copied root. The selecting node is not carried over.
  NodeId graft(NodeId at, Axis axis, const TwigQuery& from, NodeId from_node);

  void set_test(NodeId n, NodeTest test);
  void set_axis(NodeId n, Axis axis);
  void set_selecting(std::optional<NodeId> n);

  NodeId root() const { return 0; }
  std::size_t size() const { return tests_.size(); }
  const NodeTest& test(NodeId n) const { return tests_.at(n); }
  bool is_wildcard(NodeId n) const { return !tests_.at(n).has_value(); }
  // Axis of the edge entering n; meaningless for the root.
  Axis axis(NodeId n) const { return axes_.at(n); }
  NodeId parent(NodeId n) const { return parents_.at(n); }
  std::span<const NodeId> children(NodeId n) const { return children_.at(n); }
  bool is_leaf(NodeId n) const { return children_.at(n).empty(); }

  std::optional<NodeId> selecting() const { return selecting_; }
  Arity arity() const { return selecting_ ? Arity::unary : Arity::boolean; }
  bool unary() const { return selecting_.has_value(); }

  bool is_path() const;
  std::size_t depth(NodeId n) const;
  std::vector<NodeId> leaves() const;
  // Root-to-selecting node ids; just the root for Boolean queries.
  std::vector<NodeId> spine() const;
  std::set<Label> labels() const;

 private:
  std::vector<NodeTest> tests_;
  std::vector<Axis> axes_;
  std::vector<NodeId> parents_;
  std::vector<std::vector<NodeId>> children_;
  std::optional<NodeId> selecting_;
};

// Step of a path query: the axis entering the step (ignored for the first one).
struct PathStep {
  Axis axis = Axis::child;
  NodeTest test;
  bool operator==(const PathStep&) const = default;
};

// A path query from steps; a unary path selects its last step.
TwigQuery make_path(std::span<const PathStep> steps, Arity arity);
std::vector<PathStep> path_steps(const TwigQuery& path);

TwigQuery as_boolean(const TwigQuery& q);
// Boolean path from the root to n.
TwigQuery path_to(const TwigQuery& q, NodeId n);
// Boolean path from ancestor `from` down to n.
TwigQuery path_between(const TwigQuery& q, NodeId from, NodeId n);
// One Boolean path per leaf, in leaf order; isomorphic duplicates are kept.
std::vector<TwigQuery> paths_of_query(const TwigQuery& q);

bool is_anchored(const TwigQuery& path);
bool is_psf(const TwigQuery& q);

// Query := Step (Sep Step)*; Sep := "/" | "//"; Step := (NAME | "*") Filter*;
// Filter := "[" ("." Sep)? Step (Sep Step)* "]". In unary mode the last
// top-level step selects.
TwigQuery parse_query(std::string_view text, Arity arity);
std::string serialize(const TwigQuery& q);
// Compact order-independent encoding; equal iff isomorphic.
std::string canonical_form(const TwigQuery& q);
bool query_iso(const TwigQuery& a, const TwigQuery& b);

/// Conjunction of Boolean path queries sharing the root symbol, with no member
/// subsuming another. Members are kept in canonical serialization order.
class ConjQuery {
 public:
  explicit ConjQuery(std::vector<TwigQuery> members);

  std::span<const TwigQuery> members() const& { return members_; }
  std::span<const TwigQuery> members() const&& = delete;
  std::size_t size() const { return members_.size(); }
  // All members glued at the root.
  TwigQuery to_twig() const;

 private:
  std::vector<TwigQuery> members_;
};

}  // namespace twiglearn
