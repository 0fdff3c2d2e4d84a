#include "hyperpm/filter.h"

#include <deque>
#include <vector>

#include "hyperpm/random.h"

namespace hyperpm {

bool has_live_connection(const CandidateSpace& cs, std::size_t slot,
                         CandidateSpace::LocalIndex f, std::size_t* probes) {
  const EdgeId target = cs.slot_target(slot);
  for (CandidateSpace::LocalIndex g : cs.connections(slot, f)) {
    if (probes != nullptr) ++*probes;
    if (cs.is_live(target, g)) return true;
  }
  return false;
}

FilterStats initial_filter(CandidateSpace& cs, const FilterOptions& options) {
  FilterStats stats;
  stats.candidates_before = cs.total_candidates();
  stats.connections_before = cs.live_connections();

  std::vector<std::size_t> order(cs.num_slots());
  for (std::size_t s = 0; s < order.size(); ++s) order[s] = s;
  if (options.shuffle_seed) {
    Rng rng(*options.shuffle_seed);
    rng.shuffle(order);
  }

  std::deque<std::size_t> queue(order.begin(), order.end());
  std::vector<bool> queued(cs.num_slots(), true);

  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    queued[s] = false;
    ++stats.queue_pops;

    const EdgeId e = cs.slot_source(s);
    const EdgeId e_from = cs.slot_target(s);
    bool removed = false;
    // Walk backwards so swap-removal only moves already-visited entries.
    auto live = cs.live(e);
    for (std::size_t k = live.size(); k-- > 0;) {
      const auto f = cs.live(e)[k];
      ++stats.pairs_processed;
      if (!has_live_connection(cs, s, f, &stats.connection_probes)) {
        cs.remove_local(e, f);
        removed = true;
      }
    }
    if (!removed) continue;
    auto neighbors = cs.query_neighbors(e);
    auto slots = cs.slots_of(e);
    for (std::size_t n = 0; n < neighbors.size(); ++n) {
      if (neighbors[n] == e_from) continue;
      const std::size_t back = cs.reverse_slot(slots[n]);  // (e'', e)
      if (!queued[back]) {
        queued[back] = true;
        queue.push_back(back);
      }
    }
  }

  stats.candidates_after = cs.total_candidates();
  stats.connections_after = cs.live_connections();
  return stats;
}

}  // namespace hyperpm
