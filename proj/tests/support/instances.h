#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperpm/errors.h"
#include "hyperpm/hypergraph.h"
#include "hyperpm/oracle.h"
#include "hyperpm/random.h"

namespace hyperpm::testing {

struct Instance {
  std::uint64_t seed = 0;
  RandomHypergraphParams params;
  std::size_t k = 0;
  Hypergraph data;
  Hypergraph query;
  std::vector<EdgeId> source_edges;
};

struct SuiteShape {
  std::size_t min_vertices = 30, max_vertices = 80;
  std::size_t min_edges = 40, max_edges = 150;
  std::size_t min_labels = 1, max_labels = 4;
  std::size_t min_arity = 2, max_arity = 6;
  std::size_t min_k = 2, max_k = 5;
};

// Draws the shape from `seed`, then a data hypergraph and a random-walk
// query over it. Redraws the query seed when the walk gets stuck.
inline Instance make_instance(std::uint64_t seed, const SuiteShape& shape = {}) {
  Rng rng(seed);
  Instance inst;
  inst.seed = seed;
  inst.params.vertices = rng.between(shape.min_vertices, shape.max_vertices);
  inst.params.edges = rng.between(shape.min_edges, shape.max_edges);
  inst.params.labels = rng.between(shape.min_labels, shape.max_labels);
  inst.params.min_arity = shape.min_arity;
  inst.params.max_arity = shape.max_arity;
  inst.k = rng.between(shape.min_k, shape.max_k);
  inst.data = gen_random_hypergraph(rng.next(), inst.params);
  for (int attempt = 0;; ++attempt) {
    try {
      auto gq = gen_query(rng.next(), inst.data, inst.k);
      inst.query = std::move(gq.query);
      inst.source_edges = std::move(gq.source_edges);
      return inst;
    } catch (const GenerationError&) {
      if (attempt == 16) throw;
    }
  }
}

inline std::vector<Instance> make_suite(std::size_t n, std::uint64_t base_seed,
                                        const SuiteShape& shape = {}) {
  std::vector<Instance> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_instance(base_seed + i, shape));
  return out;
}

}  // namespace hyperpm::testing
