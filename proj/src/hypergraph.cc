#include "hyperpm/hypergraph.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "hyperpm/errors.h"

namespace hyperpm {

LabelId LabelTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<LabelId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

LabelId LabelTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  return it == ids_.end() ? static_cast<LabelId>(names_.size()) : it->second;
}

const std::string& LabelTable::name(LabelId id) const {
  if (id >= names_.size()) throw ReferenceError("unknown label id " + std::to_string(id));
  return names_[id];
}

Signature::Signature(std::vector<LabelId> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
}

Signature Signature::operator+(const Signature& other) const {
  Signature out;
  out.labels_.reserve(size() + other.size());
  std::merge(labels_.begin(), labels_.end(), other.labels_.begin(), other.labels_.end(),
             std::back_inserter(out.labels_));
  return out;
}

std::size_t SignatureHash::operator()(const Signature& s) const noexcept {
  // FNV-1a over the label ids.
  std::uint64_t h = 1469598103934665603ULL;
  for (LabelId l : s.labels()) {
    h ^= l;
    h *= 1099511628211ULL;
  }
  h ^= s.size();
  h *= 1099511628211ULL;
  return static_cast<std::size_t>(h);
}

Hypergraph Hypergraph::build(std::vector<LabelId> vertex_labels,
                             std::vector<std::vector<VertexId>> edges,
                             NormalizationStats* stats) {
  NormalizationStats local;
  const std::size_t nv = vertex_labels.size();

  std::set<std::vector<VertexId>> seen;
  std::vector<std::vector<VertexId>> kept;
  kept.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto& e = edges[i];
    for (VertexId v : e) {
      if (v >= nv) {
        throw ReferenceError("hyperedge " + std::to_string(i) + " references vertex " +
                             std::to_string(v) + " but only " + std::to_string(nv) +
                             " vertices exist");
      }
    }
    std::sort(e.begin(), e.end());
    auto last = std::unique(e.begin(), e.end());
    local.duplicate_vertices_collapsed += static_cast<std::size_t>(e.end() - last);
    e.erase(last, e.end());
    if (e.empty()) throw NormalizationError("hyperedge " + std::to_string(i) + " is empty");
    if (!seen.insert(e).second) {
      ++local.duplicate_edges_removed;
      continue;
    }
    kept.push_back(std::move(e));
  }

  Hypergraph h;
  h.labels_ = std::move(vertex_labels);
  h.edge_offsets_.assign(1, 0);
  for (const auto& e : kept) {
    h.edge_vertices_.insert(h.edge_vertices_.end(), e.begin(), e.end());
    h.edge_offsets_.push_back(h.edge_vertices_.size());
  }

  // Incidence: counting sort by vertex; edge ids come out ascending.
  std::vector<std::size_t> degree(nv, 0);
  for (VertexId v : h.edge_vertices_) ++degree[v];
  h.incidence_offsets_.assign(nv + 1, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    if (degree[v] == 0) {
      throw NormalizationError("vertex " + std::to_string(v) + " is not covered by any hyperedge");
    }
    h.incidence_offsets_[v + 1] = h.incidence_offsets_[v] + degree[v];
  }
  h.incidence_.resize(h.edge_vertices_.size());
  std::vector<std::size_t> cursor(h.incidence_offsets_.begin(), h.incidence_offsets_.end() - 1);
  for (EdgeId e = 0; e < kept.size(); ++e) {
    for (VertexId v : h.edge(e)) h.incidence_[cursor[v]++] = e;
  }

  // Adjacency: union of incidence lists of an edge's vertices, minus itself.
  h.adjacency_offsets_.assign(1, 0);
  std::vector<EdgeId> scratch;
  for (EdgeId e = 0; e < kept.size(); ++e) {
    scratch.clear();
    for (VertexId v : h.edge(e)) {
      for (EdgeId g : h.incident_edges(v)) {
        if (g != e) scratch.push_back(g);
      }
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    h.adjacency_.insert(h.adjacency_.end(), scratch.begin(), scratch.end());
    h.adjacency_offsets_.push_back(h.adjacency_.size());
  }

  if (stats != nullptr) *stats = local;
  return h;
}

bool Hypergraph::edges_adjacent(EdgeId a, EdgeId b) const {
  auto adj = adjacent_edges(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::size_t Hypergraph::max_arity() const {
  std::size_t best = 0;
  for (EdgeId e = 0; e < num_edges(); ++e) best = std::max(best, arity(e));
  return best;
}

double Hypergraph::average_arity() const {
  if (num_edges() == 0) return 0.0;
  return static_cast<double>(edge_vertices_.size()) / static_cast<double>(num_edges());
}

std::size_t Hypergraph::num_distinct_labels() const {
  std::vector<LabelId> sorted(labels_.begin(), labels_.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_uint(std::string_view tok, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line_no, "expected a non-negative integer, got '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

ParsedHypergraph parse_hypergraph(std::istream& in, LabelTable& labels) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t nv = 0;
  std::size_t ne = 0;
  std::size_t vertices_seen = 0;
  std::vector<LabelId> vertex_labels;
  std::vector<bool> assigned;
  std::vector<std::vector<VertexId>> edges;

  while (std::getline(in, line)) {
    ++line_no;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    const std::string_view kind = toks[0];

    if (!have_header) {
      if (kind != "t" || toks.size() != 3) {
        throw ParseError(line_no, "expected header 't <num_vertices> <num_edges>'");
      }
      nv = parse_uint(toks[1], line_no);
      ne = parse_uint(toks[2], line_no);
      if (nv > std::numeric_limits<VertexId>::max() || ne > std::numeric_limits<EdgeId>::max()) {
        throw ParseError(line_no, "header counts exceed id range");
      }
      vertex_labels.assign(nv, 0);
      assigned.assign(nv, false);
      edges.reserve(ne);
      have_header = true;
      continue;
    }

    if (kind == "v") {
      if (vertices_seen == nv) throw ParseError(line_no, "more vertex lines than declared");
      if (toks.size() != 3) throw ParseError(line_no, "expected 'v <vertex_id> <label>'");
      auto id = parse_uint(toks[1], line_no);
      if (id >= nv) {
        throw ParseError(line_no, "vertex id " + std::to_string(id) + " out of range");
      }
      if (assigned[id]) {
        throw ParseError(line_no, "vertex " + std::to_string(id) + " declared twice");
      }
      assigned[id] = true;
      vertex_labels[id] = labels.intern(toks[2]);
      ++vertices_seen;
    } else if (kind == "e") {
      if (vertices_seen != nv) throw ParseError(line_no, "edge line before all vertex lines");
      if (edges.size() == ne) throw ParseError(line_no, "more edge lines than declared");
      if (toks.size() < 2) throw ParseError(line_no, "hyperedge needs at least one vertex");
      std::vector<VertexId> e;
      e.reserve(toks.size() - 1);
      for (std::size_t i = 1; i < toks.size(); ++i) {
        auto v = parse_uint(toks[i], line_no);
        if (v >= nv) {
          throw ReferenceError("line " + std::to_string(line_no) + ": vertex id " +
                               std::to_string(v) + " is not declared");
        }
        e.push_back(static_cast<VertexId>(v));
      }
      edges.push_back(std::move(e));
    } else {
      throw ParseError(line_no, "unknown line type '" + std::string(kind) + "'");
    }
  }

  if (!have_header) throw ParseError(line_no, "missing header line");
  if (vertices_seen != nv) {
    throw ParseError(line_no, "expected " + std::to_string(nv) + " vertex lines, got " +
                                  std::to_string(vertices_seen));
  }
  if (edges.size() != ne) {
    throw ParseError(line_no, "expected " + std::to_string(ne) + " edge lines, got " +
                                  std::to_string(edges.size()));
  }

  ParsedHypergraph out;
  out.graph = Hypergraph::build(std::move(vertex_labels), std::move(edges), &out.normalization);
  return out;
}

ParsedHypergraph parse_hypergraph(std::string_view text, LabelTable& labels) {
  std::istringstream in{std::string(text)};
  return parse_hypergraph(in, labels);
}

ParsedHypergraph parse_hypergraph_file(const std::string& path, LabelTable& labels) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_hypergraph(in, labels);
}

void write_hypergraph(std::ostream& out, const Hypergraph& h, const LabelTable& labels) {
  out << "t " << h.num_vertices() << ' ' << h.num_edges() << '\n';
  for (VertexId v = 0; v < h.num_vertices(); ++v) {
    out << "v " << v << ' ' << labels.name(h.label(v)) << '\n';
  }
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    out << 'e';
    for (VertexId v : h.edge(e)) out << ' ' << v;
    out << '\n';
  }
}

std::string serialize_hypergraph(const Hypergraph& h, const LabelTable& labels) {
  std::ostringstream out;
  write_hypergraph(out, h, labels);
  return out.str();
}

Signature signature_of(const Hypergraph& h, std::span<const VertexId> vertices) {
  std::vector<LabelId> labels;
  labels.reserve(vertices.size());
  for (VertexId v : vertices) {
    if (v >= h.num_vertices()) throw ReferenceError("vertex id " + std::to_string(v) + " out of range");
    labels.push_back(h.label(v));
  }
  return Signature(std::move(labels));
}

Signature edge_signature(const Hypergraph& h, EdgeId e) {
  if (e >= h.num_edges()) throw ReferenceError("hyperedge id " + std::to_string(e) + " out of range");
  return signature_of(h, h.edge(e));
}

std::vector<VertexId> intersect_sorted(std::span<const VertexId> a, std::span<const VertexId> b) {
  std::vector<VertexId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Signature intersection_signature(const Hypergraph& h1, EdgeId e, const Hypergraph& h2, EdgeId f) {
  if (e >= h1.num_edges()) throw ReferenceError("hyperedge id " + std::to_string(e) + " out of range");
  if (f >= h2.num_edges()) throw ReferenceError("hyperedge id " + std::to_string(f) + " out of range");
  auto a = h1.edge(e);
  auto b = h2.edge(f);
  std::vector<LabelId> labels;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      labels.push_back(h1.label(a[i]));
      ++i;
      ++j;
    }
  }
  return Signature(std::move(labels));
}

void validate_query(const Hypergraph& q) {
  const std::size_t m = q.num_edges();
  if (m == 0) throw ValidationError("query has no hyperedges");
  if (m > kMaxQueryEdges) {
    throw CapacityError("query has " + std::to_string(m) + " hyperedges; at most " +
                        std::to_string(kMaxQueryEdges) + " are supported");
  }
  std::vector<bool> seen(m, false);
  std::vector<EdgeId> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    EdgeId e = stack.back();
    stack.pop_back();
    for (EdgeId g : q.adjacent_edges(e)) {
      if (!seen[g]) {
        seen[g] = true;
        ++reached;
        stack.push_back(g);
      }
    }
  }
  if (reached != m) {
    throw ValidationError("query is disconnected: only " + std::to_string(reached) + " of " +
                          std::to_string(m) + " hyperedges reachable from hyperedge 0");
  }
}

}  // namespace hyperpm
