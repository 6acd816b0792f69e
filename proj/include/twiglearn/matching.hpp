#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "twiglearn/query.hpp"
#include "twiglearn/tree.hpp"

namespace twiglearn {

class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Boolean query against a tree, unary query against a decorated tree.
bool embeds(const TwigQuery& q, const Tree& t);
bool embeds(const TwigQuery& q, const DecoratedTree& t);

bool accepts_all(const TwigQuery& q, std::span<const Tree> sample);
bool accepts_all(const TwigQuery& q, std::span<const DecoratedTree> sample);

// Brute-force count of embeddings (maps of query nodes to tree nodes). Throws
// CapExceeded when the candidate space is larger than `cap`.
std::uint64_t count_embeddings(const TwigQuery& q, const Tree& t, std::uint64_t cap = 1'000'000);
std::uint64_t count_embeddings(const TwigQuery& q, const DecoratedTree& t,
                               std::uint64_t cap = 1'000'000);
using EmbeddingVisitor = std::function<void(std::span<const NodeId>)>;
void for_each_embedding(const TwigQuery& q, const Tree& t, const EmbeddingVisitor& visit,
                        std::optional<NodeId> selected = std::nullopt,
                        std::uint64_t cap = 1'000'000);

// Nodes an embedding can map the selecting node to, in preorder.
std::vector<NodeId> answers(const TwigQuery& q, const Tree& t);

// True iff p embeds into q, i.e. q is below p. Implies L(q) is contained in L(p).
bool subsumes(const TwigQuery& p, const TwigQuery& q);
bool equivalent_by_subsumption(const TwigQuery& p, const TwigQuery& q);

// Possible images in q of the last step of a Boolean path p, over all
// embeddings of p into q that ignore q's selecting node.
std::vector<NodeId> path_images(const TwigQuery& path, const TwigQuery& q);

}  // namespace twiglearn
