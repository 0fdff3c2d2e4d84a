#include "hyperpm/oracle.h"

#include <algorithm>
#include <map>
#include <string>

#include "hyperpm/errors.h"
#include "hyperpm/random.h"

namespace hyperpm {

namespace {

// Deliberately does not reuse Signature so the oracle shares as little code
// with the engine as possible.
std::vector<LabelId> label_multiset(const Hypergraph& h, std::span<const VertexId> vs) {
  std::vector<LabelId> out;
  out.reserve(vs.size());
  for (VertexId v : vs) out.push_back(h.label(v));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> meet(std::span<const VertexId> a, std::span<const VertexId> b) {
  std::vector<VertexId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Data hyperedges with the same label multiset as each query hyperedge, by
// linear scan.
std::vector<std::vector<EdgeId>> signature_candidates(const Hypergraph& q, const Hypergraph& data) {
  std::vector<std::vector<LabelId>> data_sigs(data.num_edges());
  for (EdgeId f = 0; f < data.num_edges(); ++f) data_sigs[f] = label_multiset(data, data.edge(f));
  std::vector<std::vector<EdgeId>> out(q.num_edges());
  for (EdgeId e = 0; e < q.num_edges(); ++e) {
    auto sig = label_multiset(q, q.edge(e));
    for (EdgeId f = 0; f < data.num_edges(); ++f) {
      if (data_sigs[f] == sig) out[e].push_back(f);
    }
  }
  return out;
}

class SubsetSearch {
 public:
  SubsetSearch(const Hypergraph& q, const Hypergraph& data)
      : q_(q),
        data_(data),
        m_(q.num_edges()),
        candidates_(signature_candidates(q, data)),
        query_meet_(std::size_t{1} << m_),
        data_meet_(std::size_t{1} << m_),
        assignment_(m_),
        used_(data.num_edges(), false) {
    for (std::size_t mask = 1; mask < query_meet_.size(); ++mask) {
      const auto low = static_cast<EdgeId>(__builtin_ctzll(mask));
      const std::size_t rest = mask & (mask - 1);
      query_meet_[mask] = rest == 0 ? std::vector<VertexId>(q.edge(low).begin(), q.edge(low).end())
                                    : meet(query_meet_[rest], q.edge(low));
    }
  }

  EmbeddingSet run() {
    if (m_ > 0) search(0);
    return std::move(found_);
  }

 private:
  // Checks every subset that contains edge i, given edges < i are mapped.
  bool consistent(EdgeId i, EdgeId f) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t mask = 0; mask < bit; ++mask) {
      const std::size_t full = mask | bit;
      data_meet_[full] = mask == 0 ? std::vector<VertexId>(data_.edge(f).begin(), data_.edge(f).end())
                                   : meet(data_meet_[mask], data_.edge(f));
      if (label_multiset(q_, query_meet_[full]) != label_multiset(data_, data_meet_[full])) {
        return false;
      }
    }
    return true;
  }

  void search(EdgeId i) {
    if (i == m_) {
      found_.insert(assignment_);
      return;
    }
    for (EdgeId f : candidates_[i]) {
      if (used_[f] || !consistent(i, f)) continue;
      used_[f] = true;
      assignment_[i] = f;
      search(i + 1);
      used_[f] = false;
    }
  }

  const Hypergraph& q_;
  const Hypergraph& data_;
  EdgeId m_;
  std::vector<std::vector<EdgeId>> candidates_;
  std::vector<std::vector<VertexId>> query_meet_;
  std::vector<std::vector<VertexId>> data_meet_;
  Embedding assignment_;
  std::vector<bool> used_;
  EmbeddingSet found_;
};

class VertexSearch {
 public:
  static constexpr VertexId kFree = static_cast<VertexId>(-1);

  VertexSearch(const Hypergraph& q, const Hypergraph& data)
      : q_(q),
        data_(data),
        candidates_(signature_candidates(q, data)),
        phi_(q.num_vertices(), kFree),
        taken_(data.num_vertices(), false),
        edge_map_(q.num_edges()),
        twin_prev_(q.num_vertices(), kFree) {
    // Vertices with the same label and incidence are interchangeable; only
    // the mapping that keeps their images increasing is explored.
    std::map<std::pair<LabelId, std::vector<EdgeId>>, VertexId> last;
    for (VertexId u = 0; u < q.num_vertices(); ++u) {
      auto inc = q.incident_edges(u);
      std::pair<LabelId, std::vector<EdgeId>> key{q.label(u), {inc.begin(), inc.end()}};
      auto [it, inserted] = last.try_emplace(std::move(key), u);
      if (!inserted) {
        twin_prev_[u] = it->second;
        it->second = u;
      }
    }
    // BFS order keeps most edges anchored by an already-mapped vertex.
    std::vector<bool> seen(q.num_edges(), false);
    for (EdgeId root = 0; root < q.num_edges(); ++root) {
      if (seen[root]) continue;
      seen[root] = true;
      std::size_t head = order_.size();
      order_.push_back(root);
      while (head < order_.size()) {
        EdgeId e = order_[head++];
        for (EdgeId g : q.adjacent_edges(e)) {
          if (!seen[g]) {
            seen[g] = true;
            order_.push_back(g);
          }
        }
      }
    }
  }

  EmbeddingSet run() {
    if (!order_.empty()) next_edge(0);
    return std::move(found_);
  }

 private:
  void next_edge(std::size_t step) {
    if (step == order_.size()) {
      found_.insert(edge_map_);
      return;
    }
    const EdgeId e = order_[step];
    auto qe = q_.edge(e);
    std::vector<VertexId> images;
    std::vector<VertexId> open;
    for (VertexId u : qe) {
      if (phi_[u] == kFree) {
        open.push_back(u);
      } else {
        images.push_back(phi_[u]);
      }
    }
    std::sort(images.begin(), images.end());
    for (EdgeId f : candidates_[e]) {
      auto df = data_.edge(f);
      if (!std::includes(df.begin(), df.end(), images.begin(), images.end())) continue;
      std::vector<VertexId> slots;
      std::set_difference(df.begin(), df.end(), images.begin(), images.end(),
                          std::back_inserter(slots));
      // slots.size() == open.size() because |e| = |f|.
      edge_map_[e] = f;
      assign(step, open, 0, slots);
    }
  }

  void assign(std::size_t step, const std::vector<VertexId>& open, std::size_t i,
              const std::vector<VertexId>& slots) {
    if (i == open.size()) {
      next_edge(step + 1);
      return;
    }
    const VertexId u = open[i];
    const VertexId floor = twin_prev_[u] == kFree ? 0 : phi_[twin_prev_[u]] + 1;
    for (VertexId v : slots) {
      if (taken_[v] || v < floor || data_.label(v) != q_.label(u)) continue;
      phi_[u] = v;
      taken_[v] = true;
      assign(step, open, i + 1, slots);
      taken_[v] = false;
      phi_[u] = kFree;
    }
  }

  const Hypergraph& q_;
  const Hypergraph& data_;
  std::vector<std::vector<EdgeId>> candidates_;
  std::vector<VertexId> phi_;
  std::vector<bool> taken_;
  Embedding edge_map_;
  std::vector<VertexId> twin_prev_;
  std::vector<EdgeId> order_;
  EmbeddingSet found_;
};

}  // namespace

void check_oracle_scale(const Hypergraph& q, const Hypergraph& data, const OracleLimits& limits) {
  if (q.num_edges() > limits.max_query_edges) {
    throw ScaleGuardError("oracle refuses queries with more than " +
                          std::to_string(limits.max_query_edges) + " hyperedges (got " +
                          std::to_string(q.num_edges()) + ")");
  }
  if (data.num_edges() > limits.max_data_edges) {
    throw ScaleGuardError("oracle refuses data with more than " +
                          std::to_string(limits.max_data_edges) + " hyperedges (got " +
                          std::to_string(data.num_edges()) + ")");
  }
}

EmbeddingSet oracle_subsets(const Hypergraph& q, const Hypergraph& data,
                            const OracleLimits& limits) {
  check_oracle_scale(q, data, limits);
  return SubsetSearch(q, data).run();
}

EmbeddingSet oracle_vertexiso(const Hypergraph& q, const Hypergraph& data,
                              const OracleLimits& limits) {
  check_oracle_scale(q, data, limits);
  return VertexSearch(q, data).run();
}

bool satisfies_intersection_constraint(const Hypergraph& q, const Hypergraph& data,
                                       std::span<const EdgeId> assignment) {
  std::vector<std::pair<EdgeId, EdgeId>> pairs;
  for (EdgeId e = 0; e < assignment.size(); ++e) pairs.emplace_back(e, assignment[e]);
  return satisfies_intersection_constraint(q, data, pairs);
}

bool satisfies_intersection_constraint(const Hypergraph& q, const Hypergraph& data,
                                       std::span<const std::pair<EdgeId, EdgeId>> pairs) {
  constexpr std::size_t kMaxPairs = 16;
  if (pairs.size() > kMaxPairs) {
    throw ScaleGuardError("subset predicate refuses more than " + std::to_string(kMaxPairs) +
                          " pairs");
  }
  const std::size_t n = std::size_t{1} << pairs.size();
  std::vector<std::vector<VertexId>> qm(n);
  std::vector<std::vector<VertexId>> dm(n);
  for (std::size_t mask = 1; mask < n; ++mask) {
    const auto low = static_cast<std::size_t>(__builtin_ctzll(mask));
    const std::size_t rest = mask & (mask - 1);
    auto qe = q.edge(pairs[low].first);
    auto df = data.edge(pairs[low].second);
    qm[mask] = rest == 0 ? std::vector<VertexId>(qe.begin(), qe.end()) : meet(qm[rest], qe);
    dm[mask] = rest == 0 ? std::vector<VertexId>(df.begin(), df.end()) : meet(dm[rest], df);
    if (label_multiset(q, qm[mask]) != label_multiset(data, dm[mask])) return false;
  }
  return true;
}

LabelTable numbered_labels(std::size_t count) {
  LabelTable table;
  for (std::size_t i = 0; i < count; ++i) table.intern("L" + std::to_string(i));
  return table;
}

Hypergraph gen_random_hypergraph(std::uint64_t seed, const RandomHypergraphParams& p) {
  if (p.vertices == 0 || p.edges == 0 || p.labels == 0 || p.min_arity == 0 ||
      p.min_arity > p.max_arity || p.max_arity > p.vertices) {
    throw GenerationError("invalid random hypergraph parameters");
  }
  if (p.edges * p.max_arity < p.vertices) {
    throw GenerationError("too few hyperedges to cover every vertex");
  }
  constexpr int kAttemptsPerEdge = 1000;
  Rng rng(seed);

  std::vector<LabelId> labels(p.vertices);
  for (auto& l : labels) l = static_cast<LabelId>(rng.below(p.labels));

  std::vector<VertexId> uncovered(p.vertices);
  for (VertexId v = 0; v < p.vertices; ++v) uncovered[v] = v;
  rng.shuffle(uncovered);
  std::vector<bool> covered(p.vertices, false);
  std::size_t head = 0;
  std::size_t remaining = p.vertices;

  std::set<std::vector<VertexId>> seen;
  std::vector<std::vector<VertexId>> edges;
  edges.reserve(p.edges);
  std::vector<bool> in_edge(p.vertices, false);

  for (std::size_t i = 0; i < p.edges; ++i) {
    const std::size_t left = p.edges - i;
    const std::size_t need = (remaining + left - 1) / left;
    bool placed = false;
    for (int attempt = 0; attempt < kAttemptsPerEdge && !placed; ++attempt) {
      std::size_t arity = rng.between(p.min_arity, p.max_arity);
      arity = std::max(arity, need);
      std::vector<VertexId> edge;
      std::size_t cursor = head;
      while (edge.size() < need) {
        while (covered[uncovered[cursor]]) ++cursor;
        edge.push_back(uncovered[cursor++]);
      }
      for (VertexId v : edge) in_edge[v] = true;
      while (edge.size() < arity) {
        auto v = static_cast<VertexId>(rng.below(p.vertices));
        if (in_edge[v]) continue;
        in_edge[v] = true;
        edge.push_back(v);
      }
      for (VertexId v : edge) in_edge[v] = false;
      std::sort(edge.begin(), edge.end());
      if (!seen.insert(edge).second) continue;
      for (VertexId v : edge) {
        if (!covered[v]) {
          covered[v] = true;
          --remaining;
        }
      }
      while (head < uncovered.size() && covered[uncovered[head]]) ++head;
      edges.push_back(std::move(edge));
      placed = true;
    }
    if (!placed) {
      throw GenerationError("could not place distinct hyperedge " + std::to_string(i));
    }
  }
  return Hypergraph::build(std::move(labels), std::move(edges));
}

GeneratedQuery gen_query(std::uint64_t seed, const Hypergraph& data, std::size_t k,
                         std::size_t retries) {
  if (k == 0) throw GenerationError("query size must be positive");
  if (k > kMaxQueryEdges) throw GenerationError("query size exceeds the hyperedge cap");
  if (data.num_edges() == 0) throw GenerationError("data hypergraph has no hyperedges");
  Rng rng(seed);

  for (std::size_t attempt = 0; attempt < retries; ++attempt) {
    std::vector<EdgeId> picked{static_cast<EdgeId>(rng.below(data.num_edges()))};
    std::set<EdgeId> chosen(picked.begin(), picked.end());
    std::set<EdgeId> frontier;
    auto grow_frontier = [&](EdgeId e) {
      frontier.erase(e);
      for (EdgeId g : data.adjacent_edges(e)) {
        if (!chosen.count(g)) frontier.insert(g);
      }
    };
    grow_frontier(picked[0]);
    while (picked.size() < k && !frontier.empty()) {
      const EdgeId from = picked[rng.below(picked.size())];
      auto adj = data.adjacent_edges(from);
      if (adj.empty()) continue;
      const EdgeId to = adj[rng.below(adj.size())];
      if (chosen.count(to)) continue;
      chosen.insert(to);
      picked.push_back(to);
      grow_frontier(to);
    }
    if (picked.size() < k) continue;

    std::vector<VertexId> vertices;
    for (EdgeId e : picked) vertices.insert(vertices.end(), data.edge(e).begin(), data.edge(e).end());
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

    std::vector<LabelId> labels;
    labels.reserve(vertices.size());
    for (VertexId v : vertices) labels.push_back(data.label(v));
    std::vector<std::vector<VertexId>> edges;
    for (EdgeId e : picked) {
      std::vector<VertexId> edge;
      for (VertexId v : data.edge(e)) {
        edge.push_back(static_cast<VertexId>(
            std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin()));
      }
      edges.push_back(std::move(edge));
    }
    return {Hypergraph::build(std::move(labels), std::move(edges)), std::move(picked)};
  }
  throw GenerationError("random walk did not reach " + std::to_string(k) + " hyperedges in " +
                        std::to_string(retries) + " attempts");
}

}  // namespace hyperpm
