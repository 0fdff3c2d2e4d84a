#include "hyperpm/engine.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "hyperpm/errors.h"
#include "hyperpm/random.h"

namespace hyperpm {

namespace {

constexpr std::uint64_t kTimeoutCheckInterval = 4096;

}  // namespace

std::string_view to_string(FilterMode mode) {
  switch (mode) {
    case FilterMode::kNone: return "none";
    case FilterMode::kConnectivity: return "conn";
    case FilterMode::kIntersection: return "isec";
    case FilterMode::kBoth: return "both";
  }
  return "both";
}

std::string_view to_string(OrderPolicy policy) {
  switch (policy) {
    case OrderPolicy::kHybrid: return "hybrid";
    case OrderPolicy::kAdjacency: return "adjacency";
    case OrderPolicy::kCandidateSize: return "candidates";
  }
  return "hybrid";
}

std::string_view to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::kDone: return "done";
    case SearchStatus::kLimit: return "limit";
    case SearchStatus::kTimeout: return "timeout";
  }
  return "done";
}

std::optional<FilterMode> parse_filter_mode(std::string_view text) {
  for (auto mode : {FilterMode::kNone, FilterMode::kConnectivity, FilterMode::kIntersection,
                    FilterMode::kBoth}) {
    if (text == to_string(mode)) return mode;
  }
  return std::nullopt;
}

std::optional<OrderPolicy> parse_order_policy(std::string_view text) {
  for (auto policy : {OrderPolicy::kHybrid, OrderPolicy::kAdjacency, OrderPolicy::kCandidateSize}) {
    if (text == to_string(policy)) return policy;
  }
  return std::nullopt;
}

void IhbState::update(const Hypergraph& q, EdgeId e, const Hypergraph& data, EdgeId f,
                      std::size_t depth) {
  const std::uint64_t bit = std::uint64_t{1} << depth;
  for (VertexId u : q.edge(e)) {
    if (query_[u] & bit) {
      throw ContractViolation("IHB bit " + std::to_string(depth) + " already set on query vertex " +
                              std::to_string(u));
    }
    query_[u] |= bit;
  }
  for (VertexId v : data.edge(f)) {
    if (data_[v] & bit) {
      throw ContractViolation("IHB bit " + std::to_string(depth) + " already set on data vertex " +
                              std::to_string(v));
    }
    data_[v] |= bit;
  }
}

void IhbState::restore(const Hypergraph& q, EdgeId e, const Hypergraph& data, EdgeId f,
                       std::size_t depth) {
  const std::uint64_t bit = std::uint64_t{1} << depth;
  for (VertexId u : q.edge(e)) {
    if (!(query_[u] & bit)) {
      throw ContractViolation("IHB bit " + std::to_string(depth) + " not set on query vertex " +
                              std::to_string(u));
    }
    query_[u] &= ~bit;
  }
  for (VertexId v : data.edge(f)) {
    if (!(data_[v] & bit)) {
      throw ContractViolation("IHB bit " + std::to_string(depth) + " not set on data vertex " +
                              std::to_string(v));
    }
    data_[v] &= ~bit;
  }
}

bool IhbState::all_zero() const {
  auto zero = [](std::uint64_t w) { return w == 0; };
  return std::all_of(query_.begin(), query_.end(), zero) &&
         std::all_of(data_.begin(), data_.end(), zero);
}

Matcher::Matcher(const Hypergraph& q, const Hypergraph& data, CandidateSpace& cs,
                 SearchConfig config)
    : q_(q),
      data_(data),
      cs_(cs),
      config_(std::move(config)),
      ihb_(q.num_vertices(), data.num_vertices()),
      mapped_to_(q.num_edges(), kUnmapped),
      tiebreak_rank_(q.num_edges()),
      branch_buffers_(q.num_edges()),
      embedding_(q.num_edges()) {
  if (q.num_edges() > kMaxQueryEdges) {
    throw CapacityError("query exceeds " + std::to_string(kMaxQueryEdges) + " hyperedges");
  }
  if (cs.num_query_edges() != q.num_edges()) {
    throw ContractViolation("candidate space was built for a different query");
  }
  if (config_.embedding_limit && *config_.embedding_limit == 0) {
    throw ContractViolation("embedding limit must be positive");
  }
  if (config_.time_limit && config_.time_limit->count() <= 0) {
    throw ContractViolation("time limit must be positive");
  }
  std::iota(tiebreak_rank_.begin(), tiebreak_rank_.end(), std::size_t{0});
  if (config_.tiebreak_seed) {
    Rng rng(*config_.tiebreak_seed);
    rng.shuffle(tiebreak_rank_);
  }
  std::size_t max_arity = std::max(q.max_arity(), data.max_arity());
  query_cells_.reserve(max_arity);
  data_cells_.reserve(max_arity);
}

void Matcher::extend(EdgeId e, EdgeId f) {
  if (is_mapped(e)) {
    throw ContractViolation("query hyperedge " + std::to_string(e) + " is already mapped");
  }
  ihb_.update(q_, e, data_, f, depth());
  mapping_.emplace_back(e, f);
  mapped_to_[e] = f;
}

void Matcher::retract() {
  if (mapping_.empty()) throw ContractViolation("retract on an empty mapping");
  auto [e, f] = mapping_.back();
  mapping_.pop_back();
  mapped_to_[e] = kUnmapped;
  ihb_.restore(q_, e, data_, f, depth());
}

EdgeId Matcher::choose_next_edge() const {
  const std::size_t m = q_.num_edges();
  EdgeId best = kUnmapped;
  std::size_t best_adjacent = 0;
  std::size_t best_size = 0;

  auto unmapped_neighbors = [&](EdgeId e) {
    std::size_t n = 0;
    for (EdgeId g : cs_.query_neighbors(e)) n += !is_mapped(g);
    return n;
  };

  if (config_.order == OrderPolicy::kHybrid) {
    for (EdgeId e = 0; e < m; ++e) {
      if (is_mapped(e) || cs_.size(e) != 1) continue;
      if (best == kUnmapped || tiebreak_rank_[e] < tiebreak_rank_[best]) best = e;
    }
    if (best != kUnmapped) return best;
  }

  for (EdgeId e = 0; e < m; ++e) {
    if (is_mapped(e)) continue;
    const std::size_t adjacent =
        config_.order == OrderPolicy::kCandidateSize ? 0 : unmapped_neighbors(e);
    const std::size_t size = config_.order == OrderPolicy::kAdjacency ? 0 : cs_.size(e);
    bool better = false;
    if (best == kUnmapped) {
      better = true;
    } else if (adjacent != best_adjacent) {
      better = adjacent > best_adjacent;
    } else if (size != best_size) {
      better = size < best_size;
    } else {
      better = tiebreak_rank_[e] < tiebreak_rank_[best];
    }
    if (better) {
      best = e;
      best_adjacent = adjacent;
      best_size = size;
    }
  }
  if (best == kUnmapped) throw ContractViolation("choose_next_edge: every query hyperedge is mapped");
  return best;
}

std::size_t Matcher::connectivity_prune(EdgeId e_new, EdgeId f_new) {
  const auto j = cs_.local_index(e_new, f_new);
  if (!j) {
    throw ContractViolation("connectivity_prune: " + std::to_string(f_new) +
                            " is not a candidate of query hyperedge " + std::to_string(e_new));
  }
  std::size_t removed = 0;
  auto neighbors = cs_.query_neighbors(e_new);
  for (EdgeId e : neighbors) {
    if (is_mapped(e)) continue;
    const std::size_t s = cs_.slot(e, e_new);
    auto live = cs_.live(e);
    for (std::size_t k = live.size(); k-- > 0;) {
      const auto i = cs_.live(e)[k];
      if (!cs_.connected_local(s, i, *j)) {
        cs_.remove_local(e, i);
        ++removed;
      }
    }
  }
  return removed;
}

bool Matcher::check_intersection(EdgeId e, EdgeId f) {
  ++stats_.intersection_checks;
  auto qe = q_.edge(e);
  auto df = data_.edge(f);
  query_cells_.clear();
  data_cells_.clear();
  if (qe.size() != df.size()) {
    if (observer_ != nullptr) observer_->on_intersection_check(e, f, 0, false);
    return false;
  }
  const std::uint64_t bit = std::uint64_t{1} << depth();
  std::size_t touches = 0;
  for (VertexId u : qe) {
    query_cells_.push_back({ihb_.query_[u] | bit, q_.label(u)});
    ++touches;
  }
  for (VertexId v : df) {
    data_cells_.push_back({ihb_.data_[v] | bit, data_.label(v)});
    ++touches;
  }
  // Probe bit is OR'd into the copies, so the bitmaps never change here.
  std::sort(query_cells_.begin(), query_cells_.end());
  std::sort(data_cells_.begin(), data_cells_.end());
  const bool compatible = query_cells_ == data_cells_;
  stats_.vertex_touches += touches;
  if (observer_ != nullptr) observer_->on_intersection_check(e, f, touches, compatible);
  return compatible;
}

std::size_t Matcher::intersection_prune(bool stop_on_empty) {
  std::size_t removed = 0;
  for (EdgeId e = 0; e < q_.num_edges(); ++e) {
    if (is_mapped(e)) continue;
    auto live = cs_.live(e);
    for (std::size_t k = live.size(); k-- > 0;) {
      const auto i = cs_.live(e)[k];
      if (!check_intersection(e, cs_.data_edge(e, i))) {
        cs_.remove_local(e, i);
        ++removed;
      }
    }
    if (stop_on_empty && cs_.size(e) == 0) break;
  }
  return removed;
}

SearchSnapshot Matcher::snapshot() const {
  SearchSnapshot s;
  s.live.resize(q_.num_edges());
  for (EdgeId e = 0; e < q_.num_edges(); ++e) {
    s.live[e] = cs_.candidates(e);
    std::sort(s.live[e].begin(), s.live[e].end());
  }
  s.query_bitmaps.assign(ihb_.query_bitmaps().begin(), ihb_.query_bitmaps().end());
  s.data_bitmaps.assign(ihb_.data_bitmaps().begin(), ihb_.data_bitmaps().end());
  return s;
}

bool Matcher::any_unmapped_empty() const {
  for (EdgeId e = 0; e < q_.num_edges(); ++e) {
    if (!is_mapped(e) && cs_.size(e) == 0) return true;
  }
  return false;
}

bool Matcher::out_of_time() {
  if (!config_.time_limit) return false;
  return std::chrono::steady_clock::now() - start_ >= *config_.time_limit;
}

SearchStats Matcher::run(const EmbeddingSink& sink, SearchObserver* observer) {
  if (!mapping_.empty()) throw ContractViolation("run() requires an empty partial embedding");
  stats_ = SearchStats{};
  sink_ = &sink;
  observer_ = observer;
  stop_ = false;
  start_ = std::chrono::steady_clock::now();

  if (q_.num_edges() > 0) recurse();

  stats_.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  stats_.truncated = stats_.status != SearchStatus::kDone;
  sink_ = nullptr;
  observer_ = nullptr;
  return stats_;
}

void Matcher::recurse() {
  ++stats_.recursive_calls;
  if (stats_.recursive_calls % kTimeoutCheckInterval == 0 && out_of_time()) {
    stats_.status = SearchStatus::kTimeout;
    stop_ = true;
    return;
  }
  if (any_unmapped_empty()) return;

  const bool verify_extension =
      (config_.mode == FilterMode::kNone || config_.mode == FilterMode::kConnectivity) &&
      !config_.skip_extension_verification;
  const bool prune_connectivity =
      config_.mode == FilterMode::kConnectivity || config_.mode == FilterMode::kBoth;
  const bool prune_intersection =
      config_.mode == FilterMode::kIntersection || config_.mode == FilterMode::kBoth;

  const EdgeId e = choose_next_edge();
  const std::size_t level = depth();
  // Pruning below mutates other candidate sets only, but keep a copy so the
  // loop never observes in-flight removals.
  auto& branch = branch_buffers_[level];
  auto live = cs_.live(e);
  branch.assign(live.begin(), live.end());

  for (const auto local : branch) {
    const EdgeId f = cs_.data_edge(e, local);
    if (verify_extension && !check_intersection(e, f)) continue;

    if (observer_ != nullptr) observer_->on_branch_begin(level, *this);
    extend(e, f);
    if (depth() == q_.num_edges()) {
      for (auto [qe, df] : mapping_) embedding_[qe] = df;
      ++stats_.embeddings_found;
      (*sink_)(embedding_);
      if (config_.embedding_limit && stats_.embeddings_found >= *config_.embedding_limit) {
        stats_.status = SearchStatus::kLimit;
        stop_ = true;
      }
    } else {
      const auto mark = cs_.checkpoint();
      bool alive = true;
      if (prune_connectivity) {
        stats_.candidates_pruned_stage1 += connectivity_prune(e, f);
        alive = !any_unmapped_empty();
      }
      if (alive && prune_intersection) {
        stats_.candidates_pruned_stage2 += intersection_prune(/*stop_on_empty=*/true);
        alive = !any_unmapped_empty();
      }
      if (alive) recurse();
      cs_.rollback(mark);
    }
    retract();
    if (observer_ != nullptr) observer_->on_branch_end(level, *this);
    if (stop_) break;
  }
}

SearchStats match_all(const Hypergraph& q, const Hypergraph& data, CandidateSpace& cs,
                      const SearchConfig& config, const EmbeddingSink& sink) {
  Matcher matcher(q, data, cs, config);
  return matcher.run(sink);
}

QueryResult match_query(const Hypergraph& q, const Hypergraph& data, const SignatureIndex& index,
                        const SearchConfig& config, const EmbeddingSink& sink) {
  validate_query(q);
  QueryResult result;
  auto cs = CandidateSpace::build(q, data, index);
  result.filter = initial_filter(cs);
  result.search = match_all(q, data, cs, config, sink);
  return result;
}

}  // namespace hyperpm
