#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hyperpm {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using LabelId = std::uint32_t;

// Queries are limited so that a cell bitmap fits one machine word.
inline constexpr std::size_t kMaxQueryEdges = 64;

/// Bidirectional interning of label strings to dense ids starting at 0.
/// A query and the data hypergraph it runs against must share one table so
/// that equal strings compare equal as ids.
class LabelTable {
 public:
  LabelId intern(std::string_view name);
  // Returns size() when the name has never been interned.
  LabelId find(std::string_view name) const;
  const std::string& name(LabelId id) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, LabelId> ids_;
};

/// Multiset of labels, stored sorted ascending.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<LabelId> labels);

  std::span<const LabelId> labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  // Multiset union.
  Signature operator+(const Signature& other) const;

  friend bool operator==(const Signature&, const Signature&) = default;
  friend auto operator<=>(const Signature&, const Signature&) = default;

 private:
  std::vector<LabelId> labels_;
};

struct SignatureHash {
  std::size_t operator()(const Signature& s) const noexcept;
};

struct NormalizationStats {
  std::size_t duplicate_vertices_collapsed = 0;
  std::size_t duplicate_edges_removed = 0;
};

/// Immutable vertex-labelled simple hypergraph with incidence and hyperedge
/// adjacency indexes. Hyperedge vertex lists are sorted ascending.
class Hypergraph {
 public:
  Hypergraph() = default;

  // Normalizes `edges`: sorts each edge, collapses repeated vertices, and
  // drops edges whose vertex set already appeared (first occurrence wins).
  // Throws ReferenceError for out-of-range vertex ids and NormalizationError
  // for empty edges or vertices not covered by any edge.
  static Hypergraph build(std::vector<LabelId> vertex_labels,
                          std::vector<std::vector<VertexId>> edges,
                          NormalizationStats* stats = nullptr);

  std::size_t num_vertices() const { return labels_.size(); }
  std::size_t num_edges() const { return edge_offsets_.size() - 1; }

  LabelId label(VertexId v) const { return labels_[v]; }
  std::span<const LabelId> labels() const { return labels_; }

  std::span<const VertexId> edge(EdgeId e) const {
    return {edge_vertices_.data() + edge_offsets_[e],
            edge_vertices_.data() + edge_offsets_[e + 1]};
  }
  std::size_t arity(EdgeId e) const { return edge_offsets_[e + 1] - edge_offsets_[e]; }

  std::span<const EdgeId> incident_edges(VertexId v) const {
    return {incidence_.data() + incidence_offsets_[v],
            incidence_.data() + incidence_offsets_[v + 1]};
  }
  std::span<const EdgeId> adjacent_edges(EdgeId e) const {
    return {adjacency_.data() + adjacency_offsets_[e],
            adjacency_.data() + adjacency_offsets_[e + 1]};
  }
  bool edges_adjacent(EdgeId a, EdgeId b) const;

  std::size_t max_arity() const;
  double average_arity() const;
  // Number of distinct labels carried by vertices.
  std::size_t num_distinct_labels() const;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  std::vector<LabelId> labels_;
  std::vector<std::size_t> edge_offsets_{0};
  std::vector<VertexId> edge_vertices_;
  std::vector<std::size_t> incidence_offsets_{0};
  std::vector<EdgeId> incidence_;
  std::vector<std::size_t> adjacency_offsets_{0};
  std::vector<EdgeId> adjacency_;
};

struct ParsedHypergraph {
  Hypergraph graph;
  NormalizationStats normalization;
};

// Reads the line-oriented text format, interning labels into `labels`.
ParsedHypergraph parse_hypergraph(std::istream& in, LabelTable& labels);
ParsedHypergraph parse_hypergraph(std::string_view text, LabelTable& labels);
ParsedHypergraph parse_hypergraph_file(const std::string& path, LabelTable& labels);

void write_hypergraph(std::ostream& out, const Hypergraph& h, const LabelTable& labels);
std::string serialize_hypergraph(const Hypergraph& h, const LabelTable& labels);

Signature signature_of(const Hypergraph& h, std::span<const VertexId> vertices);
Signature edge_signature(const Hypergraph& h, EdgeId e);

// Signature of e ∩ f computed by a linear merge. Labels come from h1.
Signature intersection_signature(const Hypergraph& h1, EdgeId e, const Hypergraph& h2,
                                 EdgeId f);
// Vertex ids in a ∩ b for two sorted vertex lists.
std::vector<VertexId> intersect_sorted(std::span<const VertexId> a,
                                       std::span<const VertexId> b);

// Throws ValidationError if the hyperedge adjacency graph is disconnected or
// empty, CapacityError if the query has more than kMaxQueryEdges edges.
void validate_query(const Hypergraph& q);

}  // namespace hyperpm
