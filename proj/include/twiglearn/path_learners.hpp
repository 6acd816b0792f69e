#pragma once

#include <span>
#include <vector>

#include "twiglearn/query.hpp"
#include "twiglearn/tree.hpp"

namespace twiglearn {

/// Tie-break among factors of equal length in the factor insertion stage.
enum class FactorOrder { leftmost_first, rightmost_first };
/// Order in which descendant edges are tried when inserting a factor.
enum class EdgeScan { topmost_first, bottommost_first };

struct LearnerConfig {
  FactorOrder factor_order = FactorOrder::leftmost_first;
  EdgeScan edge_scan = EdgeScan::topmost_first;
  // Re-check consistency after every committed step (always on in debug builds).
  bool verify_steps = false;
};

// Minimal anchored unary path consistent with a non-empty unary sample.
TwigQuery learn_anch_path1(std::span<const DecoratedTree> sample, const LearnerConfig& config = {});

// Minimal anchored Boolean path consistent with sample plus the word u.
TwigQuery learn_anch_path0_star(const Word& u, std::span<const Tree> sample,
                                const LearnerConfig& config = {});

// Reduced conjunction of the per-path answers over Paths(sample).
ConjQuery learn_conj_path0(std::span<const Tree> sample, const LearnerConfig& config = {});

// One member of learn_conj_path0: lexicographically least serialization, or
// with negatives, the member rejecting the most of them.
TwigQuery learn_anch_path0(std::span<const Tree> sample, std::span<const Tree> negatives = {},
                           const LearnerConfig& config = {});

}  // namespace twiglearn
