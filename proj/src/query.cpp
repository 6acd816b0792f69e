#include "twiglearn/query.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

#include "lexing.hpp"
#include "twiglearn/matching.hpp"

namespace twiglearn {

bool test_matches(const NodeTest& test, const Label& label) { return !test || *test == label; }

TwigQuery::TwigQuery(NodeTest root_test) {
  tests_.push_back(std::move(root_test));
  axes_.push_back(Axis::child);
  parents_.push_back(kNoNode);
  children_.emplace_back();
}

NodeId TwigQuery::add(NodeId parent, Axis axis, NodeTest test) {
  if (parent >= size()) throw std::out_of_range("add: bad parent");
  if (test && test->empty()) throw std::invalid_argument("empty label");
  auto id = static_cast<NodeId>(size());
  tests_.push_back(std::move(test));
  axes_.push_back(axis);
  parents_.push_back(parent);
  children_.emplace_back();
  children_[parent].push_back(id);
  return id;
}

NodeId TwigQuery::graft(NodeId at, Axis axis, const TwigQuery& from, NodeId from_node) {
  NodeId top = add(at, axis, from.test(from_node));
  std::vector<NodeId> map(from.size(), kNoNode);
  map[from_node] = top;
  for (NodeId n = from_node + 1; n < from.size(); ++n) {
    NodeId p = from.parent(n);
    if (map[p] != kNoNode) map[n] = add(map[p], from.axis(n), from.test(n));
  }
  return top;
}

void TwigQuery::set_test(NodeId n, NodeTest test) {
  if (test && test->empty()) throw std::invalid_argument("empty label");
  tests_.at(n) = std::move(test);
}

void TwigQuery::set_axis(NodeId n, Axis axis) { axes_.at(n) = axis; }

void TwigQuery::set_selecting(std::optional<NodeId> n) {
  if (n && *n >= size()) throw std::out_of_range("selecting node out of range");
  if (n && *n == root()) throw std::invalid_argument("the root cannot be the selecting node");
  selecting_ = n;
}

bool TwigQuery::is_path() const {
  return std::all_of(children_.begin(), children_.end(),
                     [](const auto& c) { return c.size() <= 1; });
}

std::size_t TwigQuery::depth(NodeId n) const {
  std::size_t d = 0;
  for (NodeId p = parent(n); p != kNoNode; p = parent(p)) ++d;
  return d;
}

std::vector<NodeId> TwigQuery::leaves() const {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < size(); ++n)
    if (is_leaf(n)) out.push_back(n);
  return out;
}

std::vector<NodeId> TwigQuery::spine() const {
  std::vector<NodeId> out;
  for (NodeId n = selecting_.value_or(root()); n != kNoNode; n = parent(n)) out.push_back(n);
  std::reverse(out.begin(), out.end());
  return out;
}

std::set<Label> TwigQuery::labels() const {
  std::set<Label> out;
  for (const auto& t : tests_)
    if (t) out.insert(*t);
  return out;
}

TwigQuery make_path(std::span<const PathStep> steps, Arity arity) {
  if (steps.empty()) throw std::invalid_argument("empty path");
  TwigQuery q(steps[0].test);
  NodeId n = q.root();
  for (std::size_t i = 1; i < steps.size(); ++i) n = q.add(n, steps[i].axis, steps[i].test);
  if (arity == Arity::unary) q.set_selecting(n);
  return q;
}

std::vector<PathStep> path_steps(const TwigQuery& path) {
  if (!path.is_path()) throw std::invalid_argument("not a path query");
  std::vector<PathStep> out;
  for (NodeId n = 0; n < path.size(); ++n) out.push_back({path.axis(n), path.test(n)});
  out.front().axis = Axis::child;
  return out;
}

TwigQuery as_boolean(const TwigQuery& q) {
  TwigQuery out = q;
  out.set_selecting(std::nullopt);
  return out;
}

TwigQuery path_between(const TwigQuery& q, NodeId from, NodeId n) {
  std::vector<PathStep> steps;
  for (NodeId m = n;; m = q.parent(m)) {
    if (m == kNoNode) throw std::invalid_argument("path_between: not an ancestor");
    steps.push_back({q.axis(m), q.test(m)});
    if (m == from) break;
  }
  std::reverse(steps.begin(), steps.end());
  return make_path(steps, Arity::boolean);
}

TwigQuery path_to(const TwigQuery& q, NodeId n) { return path_between(q, q.root(), n); }

std::vector<TwigQuery> paths_of_query(const TwigQuery& q) {
  std::vector<TwigQuery> out;
  for (NodeId leaf : q.leaves()) out.push_back(path_to(q, leaf));
  return out;
}

namespace {

bool anchored_steps(std::span<const PathStep> steps, bool unary) {
  const std::size_t last = steps.size() - 1;
  for (std::size_t i = 1; i <= last; ++i) {
    if (steps[i].axis != Axis::descendant) continue;
    if (i - 1 != 0 && !steps[i - 1].test) return false;
    if (i != last && !steps[i].test) return false;
  }
  if (!unary && last > 0 && !steps[last].test && steps[last].axis != Axis::descendant) return false;
  return true;
}

}  // namespace

bool is_anchored(const TwigQuery& path) {
  auto steps = path_steps(path);
  if (path.unary() && path.selecting() != static_cast<NodeId>(path.size() - 1))
    throw std::invalid_argument("a unary path must select its last step");
  return anchored_steps(steps, path.unary());
}

bool is_psf(const TwigQuery& q) {
  auto pairwise_reduced = [](const std::vector<TwigQuery>& group) {
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = 0; j < group.size(); ++j)
        if (i != j && subsumes(group[i], group[j])) return false;
    return true;
  };
  if (!q.unary()) {
    auto ps = paths_of_query(q);
    for (const auto& p : ps)
      if (!is_anchored(p)) return false;
    return pairwise_reduced(ps);
  }
  auto spine = q.spine();
  std::vector<char> on_spine(q.size(), 0);
  for (NodeId n : spine) on_spine[n] = 1;
  std::vector<PathStep> spine_steps;
  for (NodeId n : spine) spine_steps.push_back({q.axis(n), q.test(n)});
  if (!anchored_steps(spine_steps, true)) return false;
  std::vector<std::vector<TwigQuery>> groups(q.size());
  for (NodeId leaf : q.leaves()) {
    if (on_spine[leaf]) continue;
    NodeId s = leaf;
    while (!on_spine[s]) s = q.parent(s);
    auto p = path_between(q, s, leaf);
    if (!is_anchored(p)) return false;
    groups[s].push_back(std::move(p));
  }
  return std::all_of(groups.begin(), groups.end(), pairwise_reduced);
}

namespace {

std::string test_text(const NodeTest& t) { return t ? detail::quote_label(*t) : "*"; }

std::string key_of(const TwigQuery& q, NodeId n, std::vector<std::string>& keys) {
  std::string k = n == q.root() ? "" : (q.axis(n) == Axis::child ? "/" : "//");
  k += test_text(q.test(n));
  if (q.selecting() == n) k += '!';
  if (!q.is_leaf(n)) {
    std::vector<std::string> parts;
    for (NodeId c : q.children(n)) parts.push_back(key_of(q, c, keys));
    std::sort(parts.begin(), parts.end());
    k += '(';
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) k += ',';
      k += parts[i];
    }
    k += ')';
  }
  keys[n] = k;
  return k;
}

class Writer {
 public:
  explicit Writer(const TwigQuery& q)
      : q_(q), keys_(q.size()), sizes_(q.size(), 1), on_spine_(q.size(), 0) {
    key_of(q, q.root(), keys_);
    for (NodeId n = static_cast<NodeId>(q.size()); n-- > 1;) sizes_[q.parent(n)] += sizes_[n];
    if (q.unary())
      for (NodeId n : q.spine()) on_spine_[n] = 1;
  }

  std::string run() { return chain(q_.root()); }

 private:
  std::optional<NodeId> continuation(NodeId n) const {
    if (q_.is_leaf(n)) return std::nullopt;
    if (q_.unary() && on_spine_[n]) {
      if (n == *q_.selecting()) return std::nullopt;
      for (NodeId c : q_.children(n))
        if (on_spine_[c]) return c;
    }
    // Largest branch first, then a named test over '*', then the smaller key.
    auto rank = [&](NodeId c) {
      return std::make_tuple(-static_cast<long>(sizes_[c]), !q_.test(c), std::cref(keys_[c]));
    };
    auto kids = q_.children(n);
    return *std::min_element(kids.begin(), kids.end(),
                             [&](NodeId a, NodeId b) { return rank(a) < rank(b); });
  }

  std::string chain(NodeId n) const {
    std::string out = test_text(q_.test(n));
    auto next = continuation(n);
    std::vector<NodeId> filters;
    for (NodeId c : q_.children(n))
      if (c != next) filters.push_back(c);
    std::sort(filters.begin(), filters.end(),
              [&](NodeId a, NodeId b) { return keys_[a] < keys_[b]; });
    for (NodeId f : filters) {
      out += '[';
      if (q_.axis(f) == Axis::descendant) out += ".//";
      out += chain(f);
      out += ']';
    }
    if (next) {
      out += q_.axis(*next) == Axis::child ? "/" : "//";
      out += chain(*next);
    }
    return out;
  }

  const TwigQuery& q_;
  std::vector<std::string> keys_;
  std::vector<std::size_t> sizes_;
  std::vector<char> on_spine_;
};

bool bare_query_char(char c) { return detail::is_safe_label_char(c); }

class QueryParser {
 public:
  explicit QueryParser(std::string_view text) : in_(text) {}

  TwigQuery run(Arity arity) {
    in_.skip_ws();
    std::optional<TwigQuery> q;
    NodeId last = steps(q, kNoNode, Axis::child);
    in_.skip_ws();
    if (!in_.done()) in_.fail("unexpected character '" + std::string(1, in_.peek()) + "'");
    if (arity == Arity::unary) {
      if (last == q->root()) throw ParseError("a unary query needs at least two steps");
      q->set_selecting(last);
    }
    return std::move(*q);
  }

 private:
  NodeTest test() {
    in_.skip_ws();
    if (in_.consume("*")) return kWildcard;
    if (in_.peek() == '"') return in_.quoted();
    if (in_.peek() == '.') in_.fail("names cannot start with '.'");
    std::string name;
    while (!in_.done() && bare_query_char(in_.peek())) {
      name += in_.peek();
      in_.advance();
    }
    if (name.empty()) in_.fail("expected a name or '*'");
    return name;
  }

  std::optional<Axis> separator() {
    in_.skip_ws();
    if (in_.consume("//")) return Axis::descendant;
    if (in_.consume("/")) return Axis::child;
    return std::nullopt;
  }

  NodeId step(std::optional<TwigQuery>& q, NodeId parent, Axis axis) {
    NodeTest t = test();
    NodeId n;
    if (parent == kNoNode) {
      q.emplace(std::move(t));
      n = q->root();
    } else {
      if (t && t->empty()) in_.fail("empty label");
      n = q->add(parent, axis, std::move(t));
    }
    for (;;) {
      in_.skip_ws();
      if (!in_.consume("[")) break;
      in_.skip_ws();
      Axis fa = Axis::child;
      if (in_.peek() == '.' && in_.peek(1) == '/') {
        in_.advance();
        fa = *separator();
      }
      steps(q, n, fa);
      in_.skip_ws();
      in_.expect("]");
    }
    return n;
  }

  NodeId steps(std::optional<TwigQuery>& q, NodeId parent, Axis axis) {
    NodeId n = step(q, parent, axis);
    while (auto sep = separator()) n = step(q, n, *sep);
    return n;
  }

  detail::Cursor in_;
};

}  // namespace

TwigQuery parse_query(std::string_view text, Arity arity) { return QueryParser(text).run(arity); }

std::string serialize(const TwigQuery& q) { return Writer(q).run(); }

std::string canonical_form(const TwigQuery& q) {
  std::vector<std::string> keys(q.size());
  return key_of(q, q.root(), keys);
}

bool query_iso(const TwigQuery& a, const TwigQuery& b) {
  return a.size() == b.size() && a.arity() == b.arity() && canonical_form(a) == canonical_form(b);
}

ConjQuery::ConjQuery(std::vector<TwigQuery> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("empty conjunction");
  for (const auto& m : members_) {
    if (m.unary() || !m.is_path()) throw std::invalid_argument("members must be Boolean paths");
    if (m.test(m.root()) != members_.front().test(members_.front().root()))
      throw std::invalid_argument("members must share the root symbol");
  }
  for (std::size_t i = 0; i < members_.size(); ++i)
    for (std::size_t j = 0; j < members_.size(); ++j)
      if (i != j && subsumes(members_[i], members_[j]))
        throw std::invalid_argument("members must not subsume each other");
  std::sort(members_.begin(), members_.end(),
            [](const TwigQuery& a, const TwigQuery& b) { return serialize(a) < serialize(b); });
}

TwigQuery ConjQuery::to_twig() const {
  TwigQuery out(members_.front().test(0));
  for (const auto& m : members_)
    if (m.size() > 1) out.graft(out.root(), m.axis(1), m, 1);
  return out;
}

}  // namespace twiglearn
