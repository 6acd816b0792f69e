#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "twiglearn/query.hpp"
#include "twiglearn/sample.hpp"
#include "twiglearn/tree.hpp"

namespace twiglearn {

enum class QueryClass {
  path_unary,
  path_boolean,
  anchored_path_unary,
  anchored_path_boolean,
  twig_boolean,
  twig_unary,
  psf_twig_boolean,
  psf_twig_unary,
};

std::string_view to_string(QueryClass c);
std::optional<QueryClass> parse_query_class(std::string_view text);
Arity arity_of(QueryClass c);
bool is_path_class(QueryClass c);
// Classes where subsumption coincides with containment.
bool has_containment_by_subsumption(QueryClass c);
bool in_class(const TwigQuery& q, QueryClass c);

struct EnumSpec {
  std::vector<Label> labels;
  std::size_t min_nodes = 1;
  std::size_t max_nodes = 3;
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
  QueryClass cls = QueryClass::twig_boolean;
  bool allow_star = true;
  bool allow_desc = true;
  // Bound on distinct queries generated, including intermediate shapes.
  std::size_t cap = 100'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Return false to stop the enumeration early.
using QueryVisitor = std::function<bool(const TwigQuery&)>;
// Keeps a partial query only if it holds; must be monotone under adding leaves.
using ShapeFilter = std::function<bool(const TwigQuery&)>;

// Every class member within the bounds exactly once up to isomorphism, by
// size and then canonical form. Throws CapExceeded past spec.cap.
void enumerate_queries(const EnumSpec& spec, const QueryVisitor& visit,
                       const ShapeFilter& keep = {});
std::vector<TwigQuery> enumerate_queries(const EnumSpec& spec);

// Positives accepted, negatives rejected.
bool consistent_with(const TwigQuery& q, const SignedSample& sample);

// Enumerated consistent queries with no consistent enumerated query strictly
// below them. Labels are narrowed to those shared by all positives.
std::vector<TwigQuery> minimal_consistent(const SignedSample& sample, const EnumSpec& spec);

// First consistent query in enumeration order.
std::optional<TwigQuery> first_consistent(const SignedSample& sample, const EnumSpec& spec);

// A consistent enumerated query strictly below q, if any.
std::optional<TwigQuery> consistent_strictly_below(const TwigQuery& q, const SignedSample& sample,
                                                   const EnumSpec& spec);

struct Refutation {
  bool refuted = false;
  std::optional<Tree> witness;
  std::optional<NodeId> selected;
  std::size_t trees_tried = 0;
};

// Looks for a tree in L(q1) but not in L(q2) among trees over q1's labels and
// one fresh label, smallest first. No witness means "unknown".
Refutation refute_contains(const TwigQuery& q1, const TwigQuery& q2,
                           std::size_t tree_budget = 10'000);

// Strictly below in the order used by minimal_consistent for class c.
bool strictly_below(const TwigQuery& lower, const TwigQuery& upper, QueryClass c,
                    std::size_t tree_budget = 10'000);

}  // namespace twiglearn
