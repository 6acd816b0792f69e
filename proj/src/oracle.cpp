#include "twiglearn/oracle.hpp"

#include <algorithm>
#include <array>
#include <iterator>
#include <map>
#include <set>

#include "twiglearn/charsample.hpp"
#include "twiglearn/matching.hpp"

namespace twiglearn {

namespace {

struct ClassName {
  QueryClass cls;
  std::string_view name;
};

constexpr std::array<ClassName, 8> kClassNames{{
    {QueryClass::path_unary, "path-unary"},
    {QueryClass::path_boolean, "path-boolean"},
    {QueryClass::anchored_path_unary, "anchored-path-unary"},
    {QueryClass::anchored_path_boolean, "anchored-path-boolean"},
    {QueryClass::twig_boolean, "twig-boolean"},
    {QueryClass::twig_unary, "twig-unary"},
    {QueryClass::psf_twig_boolean, "psf-twig-boolean"},
    {QueryClass::psf_twig_unary, "psf-twig-unary"},
}};

}  // namespace

std::string_view to_string(QueryClass c) {
  for (const auto& [cls, name] : kClassNames)
    if (cls == c) return name;
  return "?";
}

std::optional<QueryClass> parse_query_class(std::string_view text) {
  for (const auto& [cls, name] : kClassNames)
    if (name == text) return cls;
  return std::nullopt;
}

Arity arity_of(QueryClass c) {
  switch (c) {
    case QueryClass::path_unary:
    case QueryClass::anchored_path_unary:
    case QueryClass::twig_unary:
    case QueryClass::psf_twig_unary:
      return Arity::unary;
    default:
      return Arity::boolean;
  }
}

bool is_path_class(QueryClass c) {
  return c == QueryClass::path_unary || c == QueryClass::path_boolean ||
         c == QueryClass::anchored_path_unary || c == QueryClass::anchored_path_boolean;
}

bool has_containment_by_subsumption(QueryClass c) {
  return c == QueryClass::anchored_path_unary || c == QueryClass::anchored_path_boolean ||
         c == QueryClass::psf_twig_boolean || c == QueryClass::psf_twig_unary;
}

bool in_class(const TwigQuery& q, QueryClass c) {
  if (q.arity() != arity_of(c)) return false;
  if (is_path_class(c)) {
    if (!q.is_path()) return false;
    if (q.unary() && !q.is_leaf(*q.selecting())) return false;
  }
  switch (c) {
    case QueryClass::anchored_path_unary:
    case QueryClass::anchored_path_boolean:
      return is_anchored(q);
    case QueryClass::psf_twig_boolean:
    case QueryClass::psf_twig_unary:
      return is_psf(q);
    default:
      return true;
  }
}

namespace {

class Budget {
 public:
  explicit Budget(const EnumSpec& spec) : spec_(spec) {}

  void charge() {
    if (++used_ > spec_.cap) throw CapExceeded("enumeration cap exceeded");
    if (spec_.deadline && (used_ & 0xff) == 0 &&
        std::chrono::steady_clock::now() > *spec_.deadline)
      throw CapExceeded("enumeration deadline passed");
  }

 private:
  const EnumSpec& spec_;
  std::size_t used_ = 0;
};

std::vector<NodeTest> node_tests(const EnumSpec& spec) {
  std::set<Label> labels(spec.labels.begin(), spec.labels.end());
  std::vector<NodeTest> tests(labels.begin(), labels.end());
  if (spec.allow_star) tests.push_back(kWildcard);
  return tests;
}

// Unary versions of a Boolean shape, one per isomorphism class.
std::vector<TwigQuery> selections(const TwigQuery& shape, QueryClass c) {
  std::vector<TwigQuery> out;
  if (shape.size() < 2) return out;
  if (is_path_class(c)) {
    TwigQuery q = shape;
    q.set_selecting(static_cast<NodeId>(shape.size() - 1));
    out.push_back(std::move(q));
    return out;
  }
  std::map<std::string, TwigQuery> distinct;
  for (NodeId n = 1; n < shape.size(); ++n) {
    TwigQuery q = shape;
    q.set_selecting(n);
    distinct.emplace(canonical_form(q), std::move(q));
  }
  for (auto& [key, q] : distinct) out.push_back(std::move(q));
  return out;
}

std::set<Label> common_labels(const std::vector<Tree>& positives) {
  std::set<Label> common;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    std::set<Label> here;
    for (NodeId n = 0; n < positives[i].size(); ++n) here.insert(positives[i].label(n));
    if (i == 0) {
      common = std::move(here);
    } else {
      std::set<Label> both;
      std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                            std::inserter(both, both.end()));
      common = std::move(both);
    }
  }
  return common;
}

std::vector<Tree> underlying_positives(const SignedSample& sample) {
  std::vector<Tree> out;
  for (const auto& ex : sample.examples())
    if (ex.sign == Sign::positive) out.push_back(ex.tree);
  return out;
}

// Narrows the labels and returns the pruning filter for the positives.
std::pair<EnumSpec, ShapeFilter> pruned(const SignedSample& sample, const EnumSpec& spec) {
  auto positives = underlying_positives(sample);
  EnumSpec narrowed = spec;
  ShapeFilter keep;
  if (!positives.empty()) {
    auto common = common_labels(positives);
    std::erase_if(narrowed.labels, [&](const Label& l) { return !common.contains(l); });
    keep = [positives = std::move(positives)](const TwigQuery& shape) {
      return accepts_all(shape, std::span<const Tree>(positives));
    };
  }
  return {std::move(narrowed), std::move(keep)};
}

}  // namespace

void enumerate_queries(const EnumSpec& spec, const QueryVisitor& visit, const ShapeFilter& keep) {
  if (spec.max_nodes == 0) throw std::invalid_argument("max_nodes must be at least 1");
  const auto tests = node_tests(spec);
  std::vector<Axis> axes{Axis::child};
  if (spec.allow_desc) axes.push_back(Axis::descendant);
  const bool paths_only = is_path_class(spec.cls);
  const bool unary = arity_of(spec.cls) == Arity::unary;
  Budget budget(spec);

  std::map<std::string, TwigQuery> level;
  for (const auto& t : tests) {
    TwigQuery q(t);
    if (keep && !keep(q)) continue;
    budget.charge();
    level.emplace(canonical_form(q), std::move(q));
  }

  for (std::size_t n = 1; !level.empty(); ++n) {
    if (n >= spec.min_nodes) {
      for (const auto& [key, shape] : level) {
        if (unary) {
          for (const auto& q : selections(shape, spec.cls))
            if (in_class(q, spec.cls) && !visit(q)) return;
        } else if (in_class(shape, spec.cls) && !visit(shape)) {
          return;
        }
      }
    }
    if (n == spec.max_nodes) return;

    std::map<std::string, TwigQuery> next;
    std::set<std::string> dropped;
    for (const auto& [key, shape] : level) {
      std::vector<NodeId> hosts;
      if (paths_only) {
        hosts.push_back(static_cast<NodeId>(shape.size() - 1));
      } else {
        for (NodeId h = 0; h < shape.size(); ++h) hosts.push_back(h);
      }
      for (NodeId h : hosts) {
        if (shape.depth(h) + 1 > spec.max_depth) continue;
        for (const auto& t : tests)
          for (Axis ax : axes) {
            TwigQuery grown = shape;
            grown.add(h, ax, t);
            auto form = canonical_form(grown);
            if (next.contains(form) || dropped.contains(form)) continue;
            if (keep && !keep(grown)) {
              dropped.insert(std::move(form));
              continue;
            }
            budget.charge();
            next.emplace(std::move(form), std::move(grown));
          }
      }
    }
    level = std::move(next);
  }
}

std::vector<TwigQuery> enumerate_queries(const EnumSpec& spec) {
  std::vector<TwigQuery> out;
  enumerate_queries(spec, [&](const TwigQuery& q) {
    out.push_back(q);
    return true;
  });
  return out;
}

bool consistent_with(const TwigQuery& q, const SignedSample& sample) {
  for (const auto& ex : sample.examples()) {
    if (ex.unary() != q.unary()) throw ArityError("sample and query arity differ");
    bool in = q.unary() ? embeds(q, ex.decorated()) : embeds(q, ex.tree);
    if (in != (ex.sign == Sign::positive)) return false;
  }
  return true;
}

bool strictly_below(const TwigQuery& lower, const TwigQuery& upper, QueryClass c,
                    std::size_t tree_budget) {
  if (!subsumes(upper, lower)) return false;
  if (has_containment_by_subsumption(c)) return !subsumes(lower, upper);
  return refute_contains(upper, lower, tree_budget).refuted;
}

std::vector<TwigQuery> minimal_consistent(const SignedSample& sample, const EnumSpec& spec) {
  auto [narrowed, keep] = pruned(sample, spec);
  std::vector<TwigQuery> consistent;
  enumerate_queries(
      narrowed,
      [&](const TwigQuery& q) {
        if (consistent_with(q, sample)) consistent.push_back(q);
        return true;
      },
      keep);
  std::vector<TwigQuery> out;
  for (const auto& q : consistent) {
    bool dominated = std::any_of(consistent.begin(), consistent.end(), [&](const TwigQuery& c) {
      return &c != &q && strictly_below(c, q, spec.cls);
    });
    if (!dominated) out.push_back(q);
  }
  return out;
}

std::optional<TwigQuery> first_consistent(const SignedSample& sample, const EnumSpec& spec) {
  auto [narrowed, keep] = pruned(sample, spec);
  std::optional<TwigQuery> found;
  enumerate_queries(
      narrowed,
      [&](const TwigQuery& c) {
        if (consistent_with(c, sample)) found = c;
        return !found;
      },
      keep);
  return found;
}

std::optional<TwigQuery> consistent_strictly_below(const TwigQuery& q, const SignedSample& sample,
                                                   const EnumSpec& spec) {
  auto [narrowed, keep] = pruned(sample, spec);
  std::optional<TwigQuery> found;
  enumerate_queries(
      narrowed,
      [&](const TwigQuery& c) {
        if (consistent_with(c, sample) && strictly_below(c, q, spec.cls)) found = c;
        return !found;
      },
      keep);
  return found;
}

Refutation refute_contains(const TwigQuery& q1, const TwigQuery& q2, std::size_t tree_budget) {
  if (q1.arity() != q2.arity()) throw ArityError("refute_contains: arity mismatch");
  auto taken = q1.labels();
  auto labels = taken;
  for (const auto& l : q2.labels()) taken.insert(l);
  labels.insert(fresh_labels(taken).star);

  Refutation result;
  auto check = [&](const Tree& t) {
    ++result.trees_tried;
    if (!q1.unary()) {
      if (embeds(q1, t) && !embeds(q2, t)) {
        result.refuted = true;
        result.witness = t;
      }
      return;
    }
    auto a1 = answers(q1, t);
    auto a2 = answers(q2, t);
    for (NodeId n : a1)
      if (!std::binary_search(a2.begin(), a2.end(), n)) {
        result.refuted = true;
        result.witness = t;
        result.selected = n;
        return;
      }
  };

  std::map<std::string, Tree> level;
  for (const auto& l : labels) level.emplace(canonical_term(Tree(l)), Tree(l));
  std::size_t generated = level.size();
  while (!level.empty()) {
    for (const auto& [key, t] : level) {
      if (result.trees_tried >= tree_budget) return result;
      check(t);
      if (result.refuted) return result;
    }
    std::map<std::string, Tree> next;
    for (const auto& [key, t] : level) {
      for (NodeId h = 0; h < t.size() && generated < tree_budget; ++h)
        for (const auto& l : labels) {
          Tree grown = t;
          grown.add_child(h, l);
          if (next.emplace(canonical_term(grown), std::move(grown)).second) ++generated;
        }
    }
    level = std::move(next);
  }
  return result;
}

}  // namespace twiglearn
