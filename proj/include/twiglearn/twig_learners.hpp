#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "twiglearn/path_learners.hpp"
#include "twiglearn/query.hpp"
#include "twiglearn/tree.hpp"

namespace twiglearn {

// Every way of gluing a Boolean path p into q: split p at a node, embed the
// upper part into q and hang the lower part below the image of the split
// node. Deduplicated up to isomorphism. An absent q yields {p}.
std::vector<TwigQuery> fusions(const TwigQuery& p, const std::optional<TwigQuery>& q);

struct FusionStep {
  const TwigQuery& path;
  std::span<const TwigQuery> consistent;
  std::span<const TwigQuery> minimal;
  const TwigQuery& chosen;
};
using FusionObserver = std::function<void(const FusionStep&)>;
using QueryPredicate = std::function<bool(const TwigQuery&)>;

// Folds the paths, in the given order, into start by keeping at each step a
// minimal consistent fusion (ties: fewer nodes, then least serialization).
TwigQuery fuse_paths(std::span<const TwigQuery> paths, std::optional<TwigQuery> start,
                     const QueryPredicate& consistent, const FusionObserver& observer = {});

struct TwigLearnerConfig {
  LearnerConfig paths;
  FusionObserver observer;
};

TwigQuery learn_psf_twig0(std::span<const Tree> sample, const TwigLearnerConfig& config = {});
// Boolean fusion loop seeded with q0, which must accept the sample.
TwigQuery learn_psf_twig0_star(std::span<const Tree> sample, const TwigQuery& q0,
                               const TwigLearnerConfig& config = {});
TwigQuery learn_psf_twig1_star(std::span<const DecoratedTree> sample, const TwigQuery& q0,
                               const TwigLearnerConfig& config = {});
TwigQuery learn_psf_twig1(std::span<const DecoratedTree> sample,
                          const TwigLearnerConfig& config = {});

}  // namespace twiglearn
