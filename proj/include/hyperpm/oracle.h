#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "hyperpm/hypergraph.h"

namespace hyperpm {

// Data hyperedge per query hyperedge id. Two embeddings are the same iff
// their vectors are equal.
using Embedding = std::vector<EdgeId>;
using EmbeddingSet = std::set<Embedding>;

struct OracleLimits {
  std::size_t max_query_edges = 8;
  std::size_t max_data_edges = 5000;
};

// Throws ScaleGuardError when (q, data) is beyond `limits`.
void check_oracle_scale(const Hypergraph& q, const Hypergraph& data,
                        const OracleLimits& limits = {});

/// Every injective, signature-preserving assignment of data hyperedges to
/// query hyperedges whose intersections have equal signatures over every
/// non-empty subset of query hyperedges.
EmbeddingSet oracle_subsets(const Hypergraph& q, const Hypergraph& data,
                            const OracleLimits& limits = {});

/// Projections of every label-preserving injective vertex mapping that sends
/// each query hyperedge onto a data hyperedge.
EmbeddingSet oracle_vertexiso(const Hypergraph& q, const Hypergraph& data,
                              const OracleLimits& limits = {});

// The subset predicate for one assignment. Only mapped prefixes matter:
// `assignment` may be shorter than q.num_edges(), in which case the query is
// restricted to hyperedges 0..size-1.
bool satisfies_intersection_constraint(const Hypergraph& q, const Hypergraph& data,
                                       std::span<const EdgeId> assignment);

// Same predicate for an arbitrary set of (query edge, data edge) pairs.
bool satisfies_intersection_constraint(const Hypergraph& q, const Hypergraph& data,
                                       std::span<const std::pair<EdgeId, EdgeId>> pairs);

struct RandomHypergraphParams {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t labels = 1;
  std::size_t min_arity = 2;
  std::size_t max_arity = 2;
};

/// Seeded simple hypergraph covering every vertex, labels uniform over
/// 0..labels-1. Throws GenerationError when the parameters cannot be met.
Hypergraph gen_random_hypergraph(std::uint64_t seed, const RandomHypergraphParams& params);

// Table whose id i is named "L<i>", matching gen_random_hypergraph's ids.
LabelTable numbered_labels(std::size_t count);

struct GeneratedQuery {
  Hypergraph query;
  // Data hyperedge each query hyperedge was copied from.
  std::vector<EdgeId> source_edges;
};

inline constexpr std::size_t kDefaultWalkRetries = 64;

/// Random-walk query of k hyperedges over `data`. Vertices are renumbered in
/// ascending data id order, hyperedges kept in selection order. Throws
/// GenerationError after `retries` stuck walks.
GeneratedQuery gen_query(std::uint64_t seed, const Hypergraph& data, std::size_t k,
                         std::size_t retries = kDefaultWalkRetries);

}  // namespace hyperpm
