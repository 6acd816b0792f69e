#include "twiglearn/pipeline.hpp"

#include <array>
#include <set>

#include "twiglearn/matching.hpp"
#include "twiglearn/twig_learners.hpp"

namespace twiglearn {

namespace {

struct LearnerName {
  LearnerClass cls;
  std::string_view name;
};

constexpr std::array<LearnerName, 5> kLearnerNames{{
    {LearnerClass::path1, "path1"},
    {LearnerClass::path0, "path0"},
    {LearnerClass::conj0, "conj0"},
    {LearnerClass::twig0, "twig0"},
    {LearnerClass::twig1, "twig1"},
}};

}  // namespace

std::string_view to_string(LearnerClass c) {
  for (const auto& [cls, name] : kLearnerNames)
    if (cls == c) return name;
  return "?";
}

std::optional<LearnerClass> parse_learner_class(std::string_view text) {
  for (const auto& [cls, name] : kLearnerNames)
    if (name == text) return cls;
  return std::nullopt;
}

Arity arity_of(LearnerClass c) {
  return c == LearnerClass::path1 || c == LearnerClass::twig1 ? Arity::unary : Arity::boolean;
}

QueryClass search_class(LearnerClass c) {
  switch (c) {
    case LearnerClass::path1:
      return QueryClass::anchored_path_unary;
    case LearnerClass::path0:
    case LearnerClass::conj0:
      return QueryClass::anchored_path_boolean;
    case LearnerClass::twig0:
      return QueryClass::psf_twig_boolean;
    case LearnerClass::twig1:
      return QueryClass::psf_twig_unary;
  }
  return QueryClass::twig_boolean;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::learned:
      return "learned";
    case Outcome::separated_by_search:
      return "separated-by-search";
    case Outcome::inconsistent:
      return "inconsistent";
    case Outcome::no_examples:
      return "no-examples";
    case Outcome::budget_exceeded:
      return "budget-exceeded";
  }
  return "?";
}

LearnResult learn_sample(const SignedSample& sample, const LearnOptions& options) {
  const bool unary = arity_of(options.cls) == Arity::unary;
  if (auto u = sample.unary(); u && *u != unary)
    throw ArityError(std::string("class ") + std::string(to_string(options.cls)) +
                     (unary ? " needs annotated nodes" : " needs whole documents"));
  LearnResult result;
  if (sample.count(Sign::positive) == 0) {
    result.message = "no examples";
    return result;
  }

  auto positives = sample.trees(Sign::positive);
  auto negatives = sample.trees(Sign::negative);
  TwigQuery candidate;
  switch (options.cls) {
    case LearnerClass::path1:
      candidate = learn_anch_path1(sample.decorated(Sign::positive), options.paths);
      result.queries = {candidate};
      break;
    case LearnerClass::path0:
      candidate = learn_anch_path0(positives, options.heuristic ? std::span<const Tree>(negatives)
                                                                : std::span<const Tree>(),
                                   options.paths);
      result.queries = {candidate};
      break;
    case LearnerClass::conj0: {
      auto conj = learn_conj_path0(positives, options.paths);
      candidate = conj.to_twig();
      result.queries.assign(conj.members().begin(), conj.members().end());
      break;
    }
    case LearnerClass::twig0:
      candidate = learn_psf_twig0(positives, {options.paths, {}});
      result.queries = {candidate};
      break;
    case LearnerClass::twig1:
      candidate = learn_psf_twig1(sample.decorated(Sign::positive), {options.paths, {}});
      result.queries = {candidate};
      break;
  }
  if (consistent_with(candidate, sample)) {
    result.outcome = Outcome::learned;
    return result;
  }

  std::set<Label> labels;
  for (const auto& t : positives)
    for (NodeId n = 0; n < t.size(); ++n) labels.insert(t.label(n));
  EnumSpec spec;
  spec.labels.assign(labels.begin(), labels.end());
  spec.cls = search_class(options.cls);
  spec.max_nodes = options.search_max_nodes;
  spec.cap = options.search_cap;
  if (options.time_budget) spec.deadline = std::chrono::steady_clock::now() + *options.time_budget;
  try {
    if (auto found = first_consistent(sample, spec)) {
      result.outcome = Outcome::separated_by_search;
      result.queries = {*found};
      result.message = "learned query accepts a negative example; separated by bounded search";
      return result;
    }
  } catch (const CapExceeded& e) {
    result.outcome = Outcome::budget_exceeded;
    result.queries.clear();
    result.message = e.what();
    return result;
  }
  result.outcome = Outcome::inconsistent;
  result.queries.clear();
  result.message = "no " + std::string(to_string(spec.cls)) + " query with at most " +
                   std::to_string(spec.max_nodes) + " nodes separates the sample";
  return result;
}

}  // namespace twiglearn
