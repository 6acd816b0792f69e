#include "twiglearn/matching.hpp"

#include <algorithm>

namespace twiglearn {

namespace {

struct TreeTarget {
  const Tree& t;
  std::size_t size() const { return t.size(); }
  std::span<const NodeId> children(NodeId n) const { return t.children(n); }
  NodeId parent(NodeId n) const { return t.parent(n); }
  bool child_edge(NodeId) const { return true; }
  bool matches(const NodeTest& test, NodeId m) const { return test_matches(test, t.label(m)); }
};

// Target is itself a query: a label matches only the same label, never '*',
// and a child edge must land on a child edge.
struct QueryTarget {
  const TwigQuery& q;
  std::size_t size() const { return q.size(); }
  std::span<const NodeId> children(NodeId n) const { return q.children(n); }
  NodeId parent(NodeId n) const { return q.parent(n); }
  bool child_edge(NodeId m) const { return q.axis(m) == Axis::child; }
  bool matches(const NodeTest& test, NodeId m) const {
    return !test || (q.test(m) && *q.test(m) == *test);
  }
};

// match[qn * T + tn]: the subquery rooted at qn embeds with qn mapped to tn.
template <class Target>
std::vector<char> match_table(const TwigQuery& q, const Target& t, std::optional<NodeId> q_sel,
                              std::optional<NodeId> t_sel) {
  const std::size_t N = q.size(), T = t.size();
  std::vector<char> match(N * T, 0), child_has(N * T, 0), below(N * T, 0);
  for (NodeId qn = static_cast<NodeId>(N); qn-- > 0;) {
    char* row = &match[qn * T];
    for (NodeId tn = 0; tn < T; ++tn) {
      bool ok = t.matches(q.test(qn), tn);
      if (ok && q_sel && qn == *q_sel) ok = tn == *t_sel;
      for (NodeId c : q.children(qn)) {
        if (!ok) break;
        ok = q.axis(c) == Axis::child ? child_has[c * T + tn] : below[c * T + tn];
      }
      row[tn] = ok;
    }
    for (NodeId tn = static_cast<NodeId>(T); tn-- > 0;) {
      bool ch = false, bl = false;
      for (NodeId m : t.children(tn)) {
        if (row[m]) {
          bl = true;
          if (t.child_edge(m)) ch = true;
        }
        if (below[qn * T + m]) bl = true;
      }
      child_has[qn * T + tn] = ch;
      below[qn * T + tn] = bl;
    }
  }
  return match;
}

void require(bool ok, const char* what) {
  if (!ok) throw ArityError(what);
}

template <class Target>
std::vector<char> forward_images(std::span<const PathStep> steps, const Target& t,
                                 std::span<const char> allowed_last) {
  const std::size_t T = t.size();
  std::vector<char> current(T, 0);
  if (t.matches(steps[0].test, 0)) current[0] = 1;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    std::vector<char> next(T, 0), marked_above(T, 0);
    for (NodeId m = 1; m < T; ++m) {
      NodeId p = t.parent(m);
      marked_above[m] = current[p] || marked_above[p];
      bool linked = steps[i].axis == Axis::child ? (current[p] && t.child_edge(m)) : marked_above[m];
      next[m] = linked && t.matches(steps[i].test, m);
    }
    current = std::move(next);
  }
  if (!allowed_last.empty())
    for (NodeId m = 0; m < T; ++m) current[m] = current[m] && allowed_last[m];
  return current;
}

template <class Target>
void enumerate(const TwigQuery& q, const Target& t, std::optional<NodeId> t_sel, std::uint64_t cap,
               const EmbeddingVisitor& visit) {
  const std::size_t N = q.size();
  std::vector<std::vector<NodeId>> candidates(N);
  std::uint64_t space = 1;
  for (NodeId qn = 0; qn < N; ++qn) {
    for (NodeId m = 0; m < t.size(); ++m) {
      if (!t.matches(q.test(qn), m)) continue;
      if (qn == q.root() && m != 0) continue;
      if (t_sel && q.selecting() == qn && m != *t_sel) continue;
      candidates[qn].push_back(m);
    }
    if (candidates[qn].empty()) return;
    if (space > cap / candidates[qn].size() + 1) throw CapExceeded("embedding space exceeds cap");
    space *= candidates[qn].size();
  }
  std::vector<NodeId> image(N, kNoNode);
  auto is_proper_ancestor = [&](NodeId a, NodeId d) {
    for (NodeId p = t.parent(d); p != kNoNode; p = t.parent(p))
      if (p == a) return true;
    return false;
  };
  std::function<void(NodeId)> go = [&](NodeId qn) {
    if (qn == N) {
      visit(image);
      return;
    }
    for (NodeId m : candidates[qn]) {
      if (qn != q.root()) {
        NodeId up = image[q.parent(qn)];
        bool ok = q.axis(qn) == Axis::child ? (t.parent(m) == up && t.child_edge(m))
                                            : is_proper_ancestor(up, m);
        if (!ok) continue;
      }
      image[qn] = m;
      go(qn + 1);
    }
  };
  go(0);
}

}  // namespace

bool embeds(const TwigQuery& q, const Tree& t) {
  require(!q.unary(), "unary query evaluated on a plain tree");
  return match_table(q, TreeTarget{t}, std::nullopt, std::nullopt)[0];
}

bool embeds(const TwigQuery& q, const DecoratedTree& t) {
  require(q.unary(), "Boolean query evaluated on a decorated tree");
  return match_table(q, TreeTarget{t.tree()}, q.selecting(), t.selected())[0];
}

bool accepts_all(const TwigQuery& q, std::span<const Tree> sample) {
  return std::all_of(sample.begin(), sample.end(), [&](const Tree& t) { return embeds(q, t); });
}

bool accepts_all(const TwigQuery& q, std::span<const DecoratedTree> sample) {
  return std::all_of(sample.begin(), sample.end(),
                     [&](const DecoratedTree& t) { return embeds(q, t); });
}

void for_each_embedding(const TwigQuery& q, const Tree& t, const EmbeddingVisitor& visit,
                        std::optional<NodeId> selected, std::uint64_t cap) {
  require(q.unary() == selected.has_value(), "arity mismatch between query and tree");
  enumerate(q, TreeTarget{t}, selected, cap, visit);
}

std::uint64_t count_embeddings(const TwigQuery& q, const Tree& t, std::uint64_t cap) {
  std::uint64_t n = 0;
  for_each_embedding(q, t, [&](std::span<const NodeId>) { ++n; }, std::nullopt, cap);
  return n;
}

std::uint64_t count_embeddings(const TwigQuery& q, const DecoratedTree& t, std::uint64_t cap) {
  std::uint64_t n = 0;
  for_each_embedding(q, t.tree(), [&](std::span<const NodeId>) { ++n; }, t.selected(), cap);
  return n;
}

std::vector<NodeId> answers(const TwigQuery& q, const Tree& t) {
  require(q.unary(), "answers needs a unary query");
  const std::size_t T = t.size();
  auto match = match_table(q, TreeTarget{t}, std::nullopt, std::nullopt);
  auto spine = q.spine();
  std::vector<char> current(T, 0);
  current[0] = match[0];
  for (std::size_t i = 1; i < spine.size(); ++i) {
    NodeId s = spine[i];
    std::vector<char> next(T, 0), marked_above(T, 0);
    for (NodeId m = 1; m < T; ++m) {
      NodeId p = t.parent(m);
      marked_above[m] = current[p] || marked_above[p];
      bool linked = q.axis(s) == Axis::child ? current[p] : marked_above[m];
      next[m] = linked && match[s * T + m];
    }
    current = std::move(next);
  }
  std::vector<NodeId> out;
  for (NodeId m = 1; m < T; ++m)
    if (current[m]) out.push_back(m);
  return out;
}

bool subsumes(const TwigQuery& p, const TwigQuery& q) {
  require(p.arity() == q.arity(), "subsumption between queries of different arity");
  return match_table(p, QueryTarget{q}, p.selecting(), q.selecting())[0];
}

bool equivalent_by_subsumption(const TwigQuery& p, const TwigQuery& q) {
  return subsumes(p, q) && subsumes(q, p);
}

std::vector<NodeId> path_images(const TwigQuery& path, const TwigQuery& q) {
  auto steps = path_steps(path);
  auto images = forward_images(steps, QueryTarget{q}, {});
  std::vector<NodeId> out;
  for (NodeId m = 0; m < q.size(); ++m)
    if (images[m]) out.push_back(m);
  return out;
}

}  // namespace twiglearn
