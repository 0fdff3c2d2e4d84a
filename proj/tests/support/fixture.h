#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "hyperpm/candidate_space.h"
#include "hyperpm/hypergraph.h"

namespace hyperpm::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(HYPERPM_FIXTURE_DIR) + "/" + name;
}

// The four-hyperedge query and its nine-hyperedge data hypergraph, parsed
// into one label table (A = 0, B = 1). Ids are 0-based: e1..e4 are 0..3,
// f1..f9 are 0..8, u1..u7 are 0..6, v1..v12 are 0..11.
struct Sample {
  LabelTable labels;
  Hypergraph query;
  Hypergraph data;

  Sample() {
    data = parse_hypergraph_file(fixture_path("sample_data.txt"), labels).graph;
    query = parse_hypergraph_file(fixture_path("sample_query.txt"), labels).graph;
  }

  LabelId A() const { return labels.find("A"); }
  LabelId B() const { return labels.find("B"); }
};

inline std::vector<EdgeId> live_sorted(const CandidateSpace& cs, EdgeId e) {
  auto c = cs.candidates(e);
  std::sort(c.begin(), c.end());
  return c;
}

}  // namespace hyperpm::testing
