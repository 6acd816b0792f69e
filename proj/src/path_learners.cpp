#include "twiglearn/path_learners.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "twiglearn/matching.hpp"

namespace twiglearn {

namespace {

using Steps = std::vector<PathStep>;
using Consistency = std::function<bool(const Steps&)>;

Steps insert_factor(const Steps& p, std::size_t edge, std::span<const Label> factor) {
  Steps out(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(edge));
  for (std::size_t i = 0; i < factor.size(); ++i)
    out.push_back({i == 0 ? Axis::descendant : Axis::child, factor[i]});
  out.push_back({Axis::descendant, p[edge].test});
  out.insert(out.end(), p.begin() + static_cast<std::ptrdiff_t>(edge) + 1, p.end());
  return out;
}

// Replaces the edge entering step `edge` by axis followed by `stars`
// wildcard steps joined with child edges.
Steps widen_edge(const Steps& p, std::size_t edge, std::size_t stars, Axis axis) {
  Steps out(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(edge));
  for (std::size_t i = 0; i < stars; ++i) out.push_back({i == 0 ? axis : Axis::child, kWildcard});
  out.push_back({stars == 0 ? axis : Axis::child, p[edge].test});
  out.insert(out.end(), p.begin() + static_cast<std::ptrdiff_t>(edge) + 1, p.end());
  return out;
}

std::vector<std::size_t> descendant_edges(const Steps& p, EdgeScan scan) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i].axis == Axis::descendant) out.push_back(i);
  if (scan == EdgeScan::bottommost_first) std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Word> factors_by_length(const Word& w, FactorOrder order) {
  std::vector<Word> out;
  std::set<Word> seen;
  if (w.size() < 3) return out;
  const std::size_t inner = w.size() - 2;
  for (std::size_t len = inner; len >= 1; --len) {
    std::vector<std::size_t> starts;
    for (std::size_t s = 1; s + len <= w.size() - 1; ++s) starts.push_back(s);
    if (order == FactorOrder::rightmost_first) std::reverse(starts.begin(), starts.end());
    for (std::size_t s : starts) {
      Word f(w.begin() + static_cast<std::ptrdiff_t>(s),
             w.begin() + static_cast<std::ptrdiff_t>(s + len));
      if (seen.insert(f).second) out.push_back(std::move(f));
    }
  }
  return out;
}

// Shared core of both path learners. `skip_last_star_edge` keeps a trailing
// '//*' in the Boolean case.
Steps generalize(const Word& w, const Consistency& consistent, bool skip_last_star_edge,
                 const LearnerConfig& config) {
  Steps p{{Axis::child, kWildcard}, {Axis::descendant, kWildcard}};

  for (const auto& factor : factors_by_length(w, config.factor_order)) {
    bool inserted = true;
    while (inserted) {
      inserted = false;
      for (std::size_t edge : descendant_edges(p, config.edge_scan)) {
        auto candidate = insert_factor(p, edge, factor);
        if (consistent(candidate)) {
          p = std::move(candidate);
          inserted = true;
          break;
        }
      }
    }
  }

  for (std::size_t end : {std::size_t{0}, p.size() - 1}) {
    auto candidate = p;
    candidate[end].test = end == 0 ? w.front() : w.back();
    if (consistent(candidate)) p = std::move(candidate);
  }

  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i].axis != Axis::descendant) continue;
    if (skip_last_star_edge && i == p.size() - 1 && !p[i].test) continue;
    std::size_t stars = 0;
    for (std::size_t l = w.size(); l > 0; --l) {
      if (consistent(widen_edge(p, i, l, Axis::descendant))) {
        stars = l;
        break;
      }
    }
    auto tight = widen_edge(p, i, stars, Axis::child);
    if (consistent(tight)) {
      p = std::move(tight);
      i += stars;
    }
  }
  return p;
}

void verify(bool ok, const LearnerConfig& config) {
#ifdef NDEBUG
  if (!config.verify_steps) return;
#else
  (void)config;
#endif
  if (!ok) throw std::logic_error("learner produced an inconsistent query");
}

}  // namespace

TwigQuery learn_anch_path1(std::span<const DecoratedTree> sample, const LearnerConfig& config) {
  if (sample.empty()) throw std::invalid_argument("no examples");
  auto words = sel_paths(sample);
  const Word& w = canonical_min(words);
  Consistency consistent = [&](const Steps& s) {
    return accepts_all(make_path(s, Arity::unary), sample);
  };
  auto q = make_path(generalize(w, consistent, false, config), Arity::unary);
  verify(accepts_all(q, sample), config);
  return q;
}

TwigQuery learn_anch_path0_star(const Word& u, std::span<const Tree> sample,
                                const LearnerConfig& config) {
  if (u.empty()) throw std::invalid_argument("empty word");
  std::vector<Tree> all(sample.begin(), sample.end());
  all.push_back(path_tree(u));
  Consistency consistent = [&](const Steps& s) {
    return accepts_all(make_path(s, Arity::boolean), std::span<const Tree>(all));
  };
  Steps start{{Axis::child, kWildcard}, {Axis::descendant, kWildcard}};
  if (!consistent(start)) {
    // Some example is a single node: only one-step queries can hold.
    bool same_root = std::all_of(all.begin(), all.end(),
                                 [&](const Tree& t) { return t.label(0) == u.front(); });
    return TwigQuery(same_root ? NodeTest(u.front()) : kWildcard);
  }
  auto q = make_path(generalize(u, consistent, true, config), Arity::boolean);
  verify(accepts_all(q, std::span<const Tree>(all)), config);
  return q;
}

ConjQuery learn_conj_path0(std::span<const Tree> sample, const LearnerConfig& config) {
  if (sample.empty()) throw std::invalid_argument("no examples");
  auto words = paths(sample);
  std::stable_sort(words.begin(), words.end(), canonical_less);
  std::vector<TwigQuery> members;
  for (const auto& u : words) {
    auto p = learn_anch_path0_star(u, sample, config);
    bool covered = std::any_of(members.begin(), members.end(),
                               [&](const TwigQuery& q) { return subsumes(p, q); });
    if (covered) continue;
    std::erase_if(members, [&](const TwigQuery& q) { return subsumes(q, p); });
    members.push_back(std::move(p));
  }
  return ConjQuery(std::move(members));
}

TwigQuery learn_anch_path0(std::span<const Tree> sample, std::span<const Tree> negatives,
                           const LearnerConfig& config) {
  auto conj = learn_conj_path0(sample, config);
  auto members = conj.members();
  std::size_t best = 0, best_rejected = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    std::size_t rejected = 0;
    for (const auto& t : negatives) rejected += !embeds(members[i], t);
    if (rejected > best_rejected) {
      best = i;
      best_rejected = rejected;
    }
  }
  return members[best];
}

}  // namespace twiglearn
