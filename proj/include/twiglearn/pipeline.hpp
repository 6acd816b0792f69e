#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twiglearn/oracle.hpp"
#include "twiglearn/path_learners.hpp"
#include "twiglearn/query.hpp"
#include "twiglearn/sample.hpp"

namespace twiglearn {

enum class LearnerClass { path1, path0, conj0, twig0, twig1 };

std::string_view to_string(LearnerClass c);
std::optional<LearnerClass> parse_learner_class(std::string_view text);
Arity arity_of(LearnerClass c);
// Query class searched when the learned query fails on a negative example.
QueryClass search_class(LearnerClass c);

struct LearnOptions {
  LearnerClass cls = LearnerClass::twig1;
  // path0 only: prefer the conjunct rejecting the most negatives.
  bool heuristic = false;
  LearnerConfig paths;
  std::size_t search_max_nodes = 5;
  std::size_t search_cap = 100'000;
  std::optional<std::chrono::milliseconds> time_budget;
};

enum class Outcome { learned, separated_by_search, inconsistent, no_examples, budget_exceeded };

std::string_view to_string(Outcome o);

struct LearnResult {
  Outcome outcome = Outcome::no_examples;
  // One query, or the conjuncts for conj0.
  std::vector<TwigQuery> queries;
  std::string message;

  bool ok() const { return outcome == Outcome::learned || outcome == Outcome::separated_by_search; }
};

// Learns from the positives, then checks the negatives; if one is accepted,
// falls back to a bounded search for a separating query.
LearnResult learn_sample(const SignedSample& sample, const LearnOptions& options);

}  // namespace twiglearn
