#include "twiglearn/consistency.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "twiglearn/matching.hpp"

namespace twiglearn {

void CnfFormula::validate() const {
  for (const auto& clause : clauses) {
    if (clause.empty()) throw std::invalid_argument("empty clause");
    for (int lit : clause)
      if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > num_vars)
        throw std::invalid_argument("literal " + std::to_string(lit) + " out of range");
  }
}

CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  CnfFormula f;
  std::optional<std::size_t> declared;
  std::vector<int> clause;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string first;
    if (!(words >> first) || first == "c") continue;
    if (first == "%") break;
    if (first == "p") {
      std::string kind;
      long vars = -1, count = -1;
      if (declared || !(words >> kind >> vars >> count) || kind != "cnf" || vars < 0 || count < 0)
        throw ParseError("line " + std::to_string(line_no) + ": bad problem line");
      f.num_vars = static_cast<std::size_t>(vars);
      declared = static_cast<std::size_t>(count);
      continue;
    }
    if (!declared) throw ParseError("line " + std::to_string(line_no) + ": clause before 'p cnf'");
    std::istringstream lits(line);
    std::string tok;
    while (lits >> tok) {
      char* end = nullptr;
      long lit = std::strtol(tok.c_str(), &end, 10);
      if (*end != '\0') throw ParseError("line " + std::to_string(line_no) + ": bad literal '" + tok + "'");
      if (lit == 0) {
        f.clauses.push_back(std::move(clause));
        clause.clear();
      } else {
        clause.push_back(static_cast<int>(lit));
      }
    }
  }
  if (!declared) throw ParseError("missing 'p cnf' line");
  if (!clause.empty()) f.clauses.push_back(std::move(clause));
  if (f.clauses.size() != *declared)
    throw ParseError("expected " + std::to_string(*declared) + " clauses, found " +
                     std::to_string(f.clauses.size()));
  try {
    f.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return f;
}

std::string write_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& clause : f.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

std::optional<std::vector<bool>> satisfying_assignment(const CnfFormula& f) {
  f.validate();
  if (f.num_vars > 24) throw std::invalid_argument("too many variables for a truth table");
  std::vector<bool> value(f.num_vars + 1);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.num_vars); ++bits) {
    for (std::size_t v = 1; v <= f.num_vars; ++v) value[v] = (bits >> (v - 1)) & 1;
    bool all = std::all_of(f.clauses.begin(), f.clauses.end(), [&](const auto& clause) {
      return std::any_of(clause.begin(), clause.end(), [&](int lit) {
        return lit > 0 ? value[static_cast<std::size_t>(lit)] : !value[static_cast<std::size_t>(-lit)];
      });
    });
    if (all) return std::vector<bool>(value.begin() + 1, value.end());
  }
  return std::nullopt;
}

bool satisfiable(const CnfFormula& f) { return satisfying_assignment(f).has_value(); }

namespace {

// d(x1(..),...,xn(..)) below `at`; keep(v, b) decides whether leaf b stays under x_v.
template <typename Keep>
void add_brush(Tree& t, NodeId at, std::size_t vars, Keep keep) {
  NodeId d = t.add_child(at, "d");
  for (std::size_t v = 1; v <= vars; ++v) {
    NodeId x = t.add_child(d, "x" + std::to_string(v));
    for (int b = 0; b < 2; ++b)
      if (keep(v, b)) t.add_child(x, std::to_string(b));
  }
}

}  // namespace

SignedSample sat_to_sample(const CnfFormula& f) {
  f.validate();
  SignedSample out;
  for (const auto& clause : f.clauses) {
    Tree c("c");
    for (int lit : clause) {
      const auto var = static_cast<std::size_t>(std::abs(lit));
      const int truth = lit > 0 ? 1 : 0;
      add_brush(c, c.root(), f.num_vars, [&](std::size_t v, int b) { return v != var || b == truth; });
    }
    out.add(std::move(c), Sign::positive);
  }
  Tree neg("c");
  for (std::size_t var = 1; var <= f.num_vars; ++var)
    add_brush(neg, neg.root(), f.num_vars, [&](std::size_t v, int) { return v != var; });
  out.add(std::move(neg), Sign::negative);
  return out;
}

EnumSpec reduction_spec(const SignedSample& sample) {
  std::set<Label> labels;
  for (const auto& ex : sample.examples())
    for (NodeId n = 0; n < ex.tree.size(); ++n) labels.insert(ex.tree.label(n));
  EnumSpec spec;
  spec.labels.assign(labels.begin(), labels.end());
  spec.cls = QueryClass::twig_boolean;
  spec.allow_star = false;
  spec.allow_desc = false;
  spec.max_depth = 4;
  spec.max_nodes = std::numeric_limits<std::size_t>::max();
  return spec;
}

namespace {

// Child-edge, wildcard-free Boolean twigs: a query holds in every positive iff
// it maps into the product of the positives, so the depth-truncated product
// is the most specific candidate.
class ProductBuilder {
 public:
  ProductBuilder(const std::set<Label>& allowed, std::size_t max_depth)
      : allowed_(allowed), max_depth_(max_depth) {}

  std::optional<Tree> product(const Tree& a, const Tree& b) const {
    if (a.label(0) != b.label(0) || !allowed_.contains(a.label(0))) return std::nullopt;
    Tree out(a.label(0));
    grow(a, 0, b, 0, out, 0, 0);
    return core(out);
  }

  std::optional<Tree> truncate(const Tree& a) const {
    if (!allowed_.contains(a.label(0))) return std::nullopt;
    Tree out(a.label(0));
    grow(a, 0, a, 0, out, 0, 0, true);
    return core(out);
  }

 private:
  void grow(const Tree& a, NodeId u, const Tree& b, NodeId v, Tree& out, NodeId at,
            std::size_t depth, bool diagonal = false) const {
    if (depth == max_depth_) return;
    for (NodeId uc : a.children(u)) {
      if (!allowed_.contains(a.label(uc))) continue;
      if (diagonal) {
        NodeId n = out.add_child(at, a.label(uc));
        grow(a, uc, b, uc, out, n, depth + 1, true);
        continue;
      }
      for (NodeId vc : b.children(v)) {
        if (a.label(uc) != b.label(vc)) continue;
        NodeId n = out.add_child(at, a.label(uc));
        grow(a, uc, b, vc, out, n, depth + 1);
      }
    }
  }

  static bool maps_into(const Tree& t, NodeId from, NodeId to, const std::vector<char>& gone) {
    if (t.label(from) != t.label(to)) return false;
    for (NodeId c : t.children(from)) {
      if (gone[c]) continue;
      bool hit = false;
      for (NodeId d : t.children(to))
        if (!gone[d] && maps_into(t, c, d, gone)) {
          hit = true;
          break;
        }
      if (!hit) return false;
    }
    return true;
  }

  // Drops sibling subtrees that map into another sibling.
  static Tree core(const Tree& t) {
    std::vector<char> gone(t.size(), 0);
    for (NodeId n = static_cast<NodeId>(t.size()); n-- > 0;) {
      auto kids = t.children(n);
      for (NodeId c : kids) {
        if (gone[c]) continue;
        for (NodeId d : kids)
          if (d != c && !gone[d] && maps_into(t, c, d, gone)) {
            gone[c] = 1;
            break;
          }
      }
    }
    Tree out(t.label(0));
    std::vector<NodeId> image(t.size(), kNoNode);
    image[0] = 0;
    for (NodeId n = 1; n < t.size(); ++n) {
      NodeId p = t.parent(n);
      if (gone[n] || image[p] == kNoNode) continue;
      image[n] = out.add_child(image[p], t.label(n));
    }
    return out;
  }

  const std::set<Label>& allowed_;
  std::size_t max_depth_;
};

TwigQuery tree_as_query(const Tree& t) {
  TwigQuery q(NodeTest(t.label(0)));
  for (NodeId n = 1; n < t.size(); ++n) q.add(t.parent(n), Axis::child, NodeTest(t.label(n)));
  return q;
}

TwigQuery without_node(const TwigQuery& q, NodeId leaf) {
  TwigQuery out(q.test(0));
  std::vector<NodeId> image(q.size(), kNoNode);
  image[0] = 0;
  for (NodeId n = 1; n < q.size(); ++n)
    if (n != leaf) image[n] = out.add(image[q.parent(n)], q.axis(n), q.test(n));
  return out;
}

bool rejects_all(const TwigQuery& q, std::span<const Tree> negatives) {
  return std::none_of(negatives.begin(), negatives.end(),
                      [&](const Tree& t) { return embeds(q, t); });
}

std::optional<TwigQuery> by_product(const SignedSample& sample, const EnumSpec& spec) {
  auto positives = sample.trees(Sign::positive);
  auto negatives = sample.trees(Sign::negative);
  std::set<Label> allowed(spec.labels.begin(), spec.labels.end());
  ProductBuilder builder(allowed, spec.max_depth);
  auto acc = builder.truncate(positives[0]);
  for (std::size_t i = 1; acc && i < positives.size(); ++i) acc = builder.product(*acc, positives[i]);
  if (!acc) return std::nullopt;
  TwigQuery q = tree_as_query(*acc);
  if (!rejects_all(q, negatives)) return std::nullopt;
  for (bool shrunk = true; shrunk;) {
    shrunk = false;
    auto leaves = q.leaves();
    for (auto it = leaves.rbegin(); it != leaves.rend(); ++it) {
      if (*it == q.root()) continue;
      auto smaller = without_node(q, *it);
      if (rejects_all(smaller, negatives)) {
        q = std::move(smaller);
        shrunk = true;
        break;
      }
    }
  }
  return q;
}

}  // namespace

std::optional<TwigQuery> check_consistency(const SignedSample& sample, const EnumSpec& spec) {
  if (auto u = sample.unary(); u && *u != (arity_of(spec.cls) == Arity::unary))
    throw ArityError("sample arity does not match the query class");
  const bool exact = spec.cls == QueryClass::twig_boolean && !spec.allow_star &&
                     !spec.allow_desc && sample.count(Sign::positive) > 0;
  if (exact) {
    auto q = by_product(sample, spec);
    if (!q) return std::nullopt;
    if (q->size() <= spec.max_nodes) return q;
  }
  return first_consistent(sample, spec);
}

bool sat_crosscheck(const CnfFormula& f, const EnumSpec& spec) {
  auto sample = sat_to_sample(f);
  return check_consistency(sample, spec).has_value() == satisfiable(f);
}

bool sat_crosscheck(const CnfFormula& f) {
  auto sample = sat_to_sample(f);
  return check_consistency(sample, reduction_spec(sample)).has_value() == satisfiable(f);
}

}  // namespace twiglearn
