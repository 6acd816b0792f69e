#include "twiglearn/twig_learners.hpp"

#include <algorithm>
#include <set>

#include "twiglearn/matching.hpp"

namespace twiglearn {

std::vector<TwigQuery> fusions(const TwigQuery& p, const std::optional<TwigQuery>& q) {
  if (!q) return {p};
  if (p.unary() || !p.is_path()) throw std::invalid_argument("fusions: p must be a Boolean path");
  auto steps = path_steps(p);
  std::vector<TwigQuery> out;
  std::set<std::string> seen;
  for (std::size_t split = 0; split < steps.size(); ++split) {
    auto prefix = make_path(std::span(steps).first(split + 1), Arity::boolean);
    for (NodeId image : path_images(prefix, *q)) {
      TwigQuery fused = *q;
      if (split + 1 < steps.size())
        fused.graft(image, p.axis(static_cast<NodeId>(split + 1)), p,
                    static_cast<NodeId>(split + 1));
      if (seen.insert(canonical_form(fused)).second) out.push_back(std::move(fused));
    }
  }
  return out;
}

TwigQuery fuse_paths(std::span<const TwigQuery> paths, std::optional<TwigQuery> start,
                     const QueryPredicate& consistent, const FusionObserver& observer) {
  if (paths.empty() && !start) throw std::invalid_argument("nothing to fuse");
  std::optional<TwigQuery> q = std::move(start);
  for (const auto& p : paths) {
    std::vector<TwigQuery> candidates;
    for (auto& c : fusions(p, q))
      if (consistent(c)) candidates.push_back(std::move(c));
    if (candidates.empty()) throw std::logic_error("no consistent fusion");
    std::vector<TwigQuery> minimal;
    for (const auto& c : candidates) {
      bool dominated = std::any_of(candidates.begin(), candidates.end(), [&](const TwigQuery& d) {
        return subsumes(c, d) && !subsumes(d, c);
      });
      if (!dominated) minimal.push_back(c);
    }
    auto best = std::min_element(minimal.begin(), minimal.end(),
                                 [](const TwigQuery& a, const TwigQuery& b) {
                                   if (a.size() != b.size()) return a.size() < b.size();
                                   return serialize(a) < serialize(b);
                                 });
    if (observer) observer(FusionStep{p, candidates, minimal, *best});
    q = *best;
  }
  return std::move(*q);
}

namespace {

std::vector<Tree> underlying(std::span<const DecoratedTree> sample) {
  std::vector<Tree> out;
  for (const auto& t : sample) out.push_back(t.tree());
  return out;
}

// test/axis::q, selecting q's selecting node, or q's root when q is Boolean.
TwigQuery prepend_step(const NodeTest& test, Axis axis, const TwigQuery& q) {
  TwigQuery out(test);
  NodeId top = out.graft(out.root(), axis, q, q.root());
  out.set_selecting(top + q.selecting().value_or(q.root()));
  return out;
}

}  // namespace

TwigQuery learn_psf_twig0(std::span<const Tree> sample, const TwigLearnerConfig& config) {
  auto conj = learn_conj_path0(sample, config.paths);
  return fuse_paths(conj.members(), std::nullopt,
                    [&](const TwigQuery& c) { return accepts_all(c, sample); }, config.observer);
}

TwigQuery learn_psf_twig0_star(std::span<const Tree> sample, const TwigQuery& q0,
                               const TwigLearnerConfig& config) {
  if (sample.empty()) throw std::invalid_argument("no examples");
  if (!accepts_all(q0, sample)) throw std::invalid_argument("seed query rejects the sample");
  auto conj = learn_conj_path0(sample, config.paths);
  return fuse_paths(conj.members(), q0,
                    [&](const TwigQuery& c) { return accepts_all(c, sample); }, config.observer);
}

TwigQuery learn_psf_twig1_star(std::span<const DecoratedTree> sample, const TwigQuery& q0,
                               const TwigLearnerConfig& config) {
  if (sample.empty()) throw std::invalid_argument("no examples");
  if (!accepts_all(q0, sample)) throw std::invalid_argument("seed query rejects the sample");
  auto trees = underlying(sample);
  auto conj = learn_conj_path0(trees, config.paths);
  return fuse_paths(conj.members(), q0,
                    [&](const TwigQuery& c) { return accepts_all(c, sample); }, config.observer);
}

TwigQuery learn_psf_twig1(std::span<const DecoratedTree> sample, const TwigLearnerConfig& config) {
  auto spine = path_steps(learn_anch_path1(sample, config.paths));
  const std::size_t k = spine.size() - 1;

  // Below the selected node the filters are learned as Boolean twigs rooted
  // at the selected node.
  TwigQuery current(spine[k].test);
  for (std::size_t i = k + 1; i-- > 0;) {
    const bool at_selected = i == k;
    std::optional<TwigQuery> prefix;
    if (i > 0) prefix = make_path(std::span(spine).first(i + 1), Arity::unary);

    std::vector<Tree> boolean_level;
    std::vector<DecoratedTree> unary_level;
    for (const auto& ex : sample) {
      const Tree& t = ex.tree();
      std::vector<NodeId> reach = prefix ? answers(*prefix, t) : std::vector<NodeId>{t.root()};
      auto on_path = t.ancestors_path(ex.selected());
      bool found = false;
      for (auto it = on_path.rbegin(); it != on_path.rend() && !found; ++it) {
        NodeId n = *it;
        if (!std::binary_search(reach.begin(), reach.end(), n)) continue;
        if (at_selected != (n == ex.selected())) continue;
        auto [sub, map] = t.subtree(n);
        if (at_selected) {
          if (!embeds(current, sub)) continue;
          boolean_level.push_back(std::move(sub));
        } else {
          DecoratedTree dt(std::move(sub), map[ex.selected()]);
          if (!embeds(current, dt)) continue;
          unary_level.push_back(std::move(dt));
        }
        found = true;
      }
      if (!found) throw std::logic_error("no anchor node for a partial query");
    }

    TwigQuery learned = at_selected ? learn_psf_twig0_star(boolean_level, current, config)
                                    : learn_psf_twig1_star(unary_level, current, config);
    if (i == 0) return learned;
    current = prepend_step(spine[i - 1].test, spine[i].axis, learned);
  }
  throw std::logic_error("unreachable");
}

}  // namespace twiglearn
