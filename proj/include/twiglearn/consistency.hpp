#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twiglearn/oracle.hpp"
#include "twiglearn/query.hpp"
#include "twiglearn/sample.hpp"

namespace twiglearn {

/// CNF over variables 1..num_vars; literal -i is the negation of variable i.
struct CnfFormula {
  std::size_t num_vars = 0;
  std::vector<std::vector<int>> clauses;

  // Throws std::invalid_argument on empty clauses or out-of-range literals.
  void validate() const;
};

CnfFormula parse_dimacs(std::string_view text);
std::string write_dimacs(const CnfFormula& f);

// Truth-table search; the first satisfying assignment in binary counting order.
std::optional<std::vector<bool>> satisfying_assignment(const CnfFormula& f);
bool satisfiable(const CnfFormula& f);

// One positive c-tree per clause with one brush per literal, and one
// negative c-tree with one leafless brush per variable.
SignedSample sat_to_sample(const CnfFormula& f);

// Labels of the sample, Boolean twigs without '*' or '//', depth at most 4.
EnumSpec reduction_spec(const SignedSample& sample);

// A query within the bounds that accepts every positive and rejects every
// negative, or nothing if none exists within the bounds.
std::optional<TwigQuery> check_consistency(const SignedSample& sample, const EnumSpec& spec);

// Bounded consistency of sat_to_sample(f) agrees with satisfiability of f.
bool sat_crosscheck(const CnfFormula& f, const EnumSpec& spec);
bool sat_crosscheck(const CnfFormula& f);

}  // namespace twiglearn
