// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperpm/candidate_space.h"
#include "hyperpm/cli.h"
#include "hyperpm/engine.h"
#include "hyperpm/filter.h"
#include "hyperpm/oracle.h"
#include "hyperpm/signature_index.h"
#include "support/instances.h"

namespace hp = hyperpm;
using hp::EdgeId;
using hp::Embedding;
using hp::EmbeddingSet;
using hp::Hypergraph;

namespace {

constexpr std::size_t kSuiteSize = 200;
constexpr std::uint64_t kSuiteSeed = 1000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
class Failures {
 public:
  void add(const std::string& msg) {
    if (count_++ < 5) msgs_ += (msgs_.empty() ? "" : "; ") + msg;
  }
  bool any() const { return count_ > 0; }
  Outcome outcome(const std::string& ok_detail) const {
    if (!any()) return {true, ok_detail};
    return {false, std::to_string(count_) + " failure(s): " + msgs_};
  }

 private:
  std::size_t count_ = 0;
  std::string msgs_;
};

std::string fixture(const std::string& name) { return std::string(HYPERPM_FIXTURE_DIR) + "/" + name; }

std::vector<EdgeId> sorted_live(const hp::CandidateSpace& cs, EdgeId e) {
  auto c = cs.candidates(e);
  std::sort(c.begin(), c.end());
  return c;
}

std::string ids(const std::vector<EdgeId>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

EmbeddingSet run_engine(const Hypergraph& q, const Hypergraph& data, const hp::SignatureIndex& idx,
                        const hp::SearchConfig& config, hp::QueryResult* result = nullptr) {
  EmbeddingSet out;
  auto r = hp::match_query(q, data, idx, config,
                           [&](std::span<const EdgeId> emb) { out.emplace(emb.begin(), emb.end()); });
  if (result != nullptr) *result = r;
  return out;
}

// 1. Fixture exactness. Ids are 0-based: f_i is hyperedge i-1, e_i is i-1.
Outcome criterion_fixture() {
  const auto start = std::chrono::steady_clock::now();
  Failures fail;
  hp::LabelTable labels;
  auto data = hp::parse_hypergraph_file(fixture("sample_data.txt"), labels).graph;
  auto q = hp::parse_hypergraph_file(fixture("sample_query.txt"), labels).graph;
  auto idx = hp::SignatureIndex::build(data);

  auto expect = [&](const std::string& what, const std::vector<EdgeId>& got,
                    const std::vector<EdgeId>& want) {
    if (got != want) fail.add(what + " = " + ids(got) + ", want " + ids(want));
  };

  auto cs = hp::CandidateSpace::build(q, data, idx);
  const std::vector<std::vector<EdgeId>> initial = {{0, 1}, {2, 3, 4, 5}, {6, 7, 8}, {2, 3, 4, 5}};
  for (EdgeId e = 0; e < 4; ++e) expect("C_ini(" + std::to_string(e) + ")", sorted_live(cs, e), initial[e]);

  hp::initial_filter(cs);
  // f6 leaves C(e4); f5, f6 leave C(e2); f9 leaves C(e3).
  const std::vector<std::vector<EdgeId>> filtered = {{0, 1}, {2, 3}, {6, 7}, {2, 3, 4}};
  for (EdgeId e = 0; e < 4; ++e) expect("filtered C(" + std::to_string(e) + ")", sorted_live(cs, e), filtered[e]);

  hp::Matcher m(q, data, cs);
  m.extend(0, 0);
  m.connectivity_prune(0, 0);
  m.intersection_prune();
  expect("C(e4) before mapping e2", sorted_live(cs, 3), {2, 3, 4});
  m.extend(1, 2);
  m.connectivity_prune(1, 2);
  expect("C(e4) after connectivity prune", sorted_live(cs, 3), {3, 4});
  expect("C(e3) after connectivity prune", sorted_live(cs, 2), {6, 7});
  m.intersection_prune();
  expect("C(e4) after intersection prune", sorted_live(cs, 3), {4});
  expect("C(e3) after intersection prune", sorted_live(cs, 2), {6});

  auto cs2 = hp::CandidateSpace::build(q, data, idx);
  hp::initial_filter(cs2);
  EmbeddingSet found;
  hp::match_all(q, data, cs2, {}, [&](std::span<const EdgeId> emb) { found.emplace(emb.begin(), emb.end()); });
  if (found != EmbeddingSet{{0, 2, 6, 4}}) fail.add("embedding set differs from {(e1,f1),(e2,f3),(e3,f7),(e4,f5)}");
  if (hp::oracle_subsets(q, data) != EmbeddingSet{{0, 2, 6, 4}}) fail.add("oracle disagrees on fixture");

  std::ostringstream out, err;
  const std::string data_path = fixture("sample_data.txt");
  const std::string query_path = fixture("sample_query.txt");
  const char* argv[] = {"hyperpm", "match", data_path.c_str(), query_path.c_str(), "--count-only"};
  if (hp::run_cli(5, argv, out, err) != 0 || out.str() != "1\n") fail.add("match --count-only printed '" + out.str() + "'");

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 1.0) fail.add("took " + std::to_string(secs) + " s");
  char detail[96];
  std::snprintf(detail, sizeof detail, "all fixture facts hold (%.3f s)", secs);
  return fail.outcome(detail);
}

struct SuiteRun {
  std::vector<hp::testing::Instance> instances;
  std::vector<EmbeddingSet> oracle;
};

// 2. Engine equals the subset oracle under every mode with shuffled tiebreaks.
Outcome criterion_oracle(const SuiteRun& suite, double* seconds) {
  const auto start = std::chrono::steady_clock::now();
  Failures fail;
  std::size_t embeddings = 0;
  for (std::size_t i = 0; i < suite.instances.size(); ++i) {
    const auto& inst = suite.instances[i];
    auto idx = hp::SignatureIndex::build(inst.data);
    embeddings += suite.oracle[i].size();
    for (auto mode : {hp::FilterMode::kNone, hp::FilterMode::kConnectivity, hp::FilterMode::kIntersection,
                      hp::FilterMode::kBoth}) {
      for (std::optional<std::uint64_t> tiebreak : {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{inst.seed * 7 + 3}}) {
        hp::SearchConfig config;
        config.mode = mode;
        config.tiebreak_seed = tiebreak;
        if (run_engine(inst.query, inst.data, idx, config) != suite.oracle[i]) {
          fail.add("seed " + std::to_string(inst.seed) + " mode " + std::string(hp::to_string(mode)));
        }
      }
    }
  }
  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (*seconds >= 300.0) fail.add("suite took " + std::to_string(*seconds) + " s");
  return fail.outcome(std::to_string(suite.instances.size()) + " instances x 4 modes x 2 orders, " +
                      std::to_string(embeddings) + " oracle embeddings");
}

// 3. Both oracles agree.
Outcome criterion_cross_oracle(const SuiteRun& suite) {
  Failures fail;
  for (std::size_t i = 0; i < suite.instances.size(); ++i) {
    const auto& inst = suite.instances[i];
    if (hp::oracle_vertexiso(inst.query, inst.data) != suite.oracle[i]) {
      fail.add("seed " + std::to_string(inst.seed));
    }
  }
  return fail.outcome(std::to_string(suite.instances.size()) + " instances agree");
}

// 4. Initial filter is sound, idempotent and order independent.
Outcome criterion_filter(const SuiteRun& suite) {
  Failures fail;
  for (std::size_t i = 0; i < suite.instances.size(); ++i) {
    const auto& inst = suite.instances[i];
    const std::string tag = "seed " + std::to_string(inst.seed);
    auto idx = hp::SignatureIndex::build(inst.data);
    auto cs = hp::CandidateSpace::build(inst.query, inst.data, idx);
    hp::initial_filter(cs);
    for (const auto& emb : suite.oracle[i]) {
      for (EdgeId e = 0; e < emb.size(); ++e) {
        if (!cs.contains(e, emb[e])) fail.add(tag + ": removed an embedding hyperedge");
      }
    }
    auto again = hp::initial_filter(cs);
    if (again.candidates_after != again.candidates_before) fail.add(tag + ": second pass removed candidates");

    std::vector<std::vector<EdgeId>> reference;
    for (EdgeId e = 0; e < inst.query.num_edges(); ++e) reference.push_back(sorted_live(cs, e));
    for (std::uint64_t s = 1; s <= 5; ++s) {
      auto shuffled = hp::CandidateSpace::build(inst.query, inst.data, idx);
      hp::initial_filter(shuffled, {inst.seed * 31 + s});
      for (EdgeId e = 0; e < inst.query.num_edges(); ++e) {
        if (sorted_live(shuffled, e) != reference[e]) fail.add(tag + ": order-dependent fixpoint");
      }
    }
  }
  return fail.outcome("sound, idempotent, identical under 5 shuffled worklists");
}

class RestorationObserver : public hp::SearchObserver {
 public:
  void on_branch_begin(std::size_t depth, const hp::Matcher& m) override {
    if (depth == 0) before_ = m.snapshot();
  }
  void on_branch_end(std::size_t depth, const hp::Matcher& m) override {
    if (depth != 0) return;
    ++branches;
    if (!(m.snapshot() == before_)) ++mismatches;
  }
  std::size_t branches = 0;
  std::size_t mismatches = 0;

 private:
  hp::SearchSnapshot before_;
};

// 5. Every depth-1 branch leaves (live sets, bitmaps) as it found them.
Outcome criterion_restoration(const SuiteRun& suite) {
  Failures fail;
  std::size_t branches = 0;
  for (std::size_t i = 0; i < 20 && i < suite.instances.size(); ++i) {
    const auto& inst = suite.instances[i];
    auto idx = hp::SignatureIndex::build(inst.data);
    auto cs = hp::CandidateSpace::build(inst.query, inst.data, idx);
    hp::initial_filter(cs);
    hp::Matcher m(inst.query, inst.data, cs);
    RestorationObserver obs;
    m.run([](std::span<const EdgeId>) {}, &obs);
    branches += obs.branches;
    if (obs.mismatches) fail.add("seed " + std::to_string(inst.seed) + ": " + std::to_string(obs.mismatches) + " branches");
    if (!m.ihb().all_zero()) fail.add("seed " + std::to_string(inst.seed) + ": bitmaps not zero");
  }
  return fail.outcome(std::to_string(branches) + " depth-1 branches restored on 20 instances");
}

class TouchObserver : public hp::SearchObserver {
 public:
  TouchObserver(const Hypergraph& q, const Hypergraph& data) : q_(q), data_(data) {}
  void on_intersection_check(EdgeId e, EdgeId f, std::size_t touches, bool) override {
    ++calls;
    if (touches != q_.arity(e) + data_.arity(f)) ++bad;
  }
  std::size_t calls = 0;
  std::size_t bad = 0;

 private:
  const Hypergraph& q_;
  const Hypergraph& data_;
};

// 6. check_intersection touches exactly |e| + |f| vertices.
Outcome criterion_linearity(const SuiteRun& suite) {
  Failures fail;
  std::size_t calls = 0;
  for (const auto& inst : suite.instances) {
    auto idx = hp::SignatureIndex::build(inst.data);
    for (auto mode : {hp::FilterMode::kNone, hp::FilterMode::kBoth}) {
      auto cs = hp::CandidateSpace::build(inst.query, inst.data, idx);
      hp::initial_filter(cs);
      hp::SearchConfig config;
      config.mode = mode;
      hp::Matcher m(inst.query, inst.data, cs, config);
      TouchObserver obs(inst.query, inst.data);
      auto stats = m.run([](std::span<const EdgeId>) {}, &obs);
      calls += obs.calls;
      if (obs.bad) fail.add("seed " + std::to_string(inst.seed));
      if (obs.calls != stats.intersection_checks) fail.add("seed " + std::to_string(inst.seed) + ": observer missed calls");
    }
  }
  return fail.outcome(std::to_string(calls) + " checks, all |e|+|f|");
}

// 7. Filter work is within 4 * (sum of initial candidate set sizes)^2.
Outcome criterion_filter_work(const SuiteRun& suite) {
  Failures fail;
  double worst = 0.0;
  for (const auto& inst : suite.instances) {
    auto idx = hp::SignatureIndex::build(inst.data);
    auto cs = hp::CandidateSpace::build(inst.query, inst.data, idx);
    auto stats = hp::initial_filter(cs);
    const double total = static_cast<double>(stats.candidates_before);
    const double bound = 4.0 * total * total;
    if (static_cast<double>(stats.pairs_processed) > bound) fail.add("seed " + std::to_string(inst.seed));
    if (total > 0) worst = std::max(worst, static_cast<double>(stats.pairs_processed) / (total * total));
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "max pairs_processed / (sum |C_ini|)^2 = %.4f", worst);
  return fail.outcome(detail);
}

// 8. Both pruning stages never make more recursive calls than none.
Outcome criterion_ablation() {
  Failures fail;
  hp::testing::SuiteShape shape;
  shape.min_labels = shape.max_labels = 1;
  shape.min_k = shape.max_k = 5;
  shape.min_vertices = 30;
  shape.max_vertices = 50;
  shape.min_edges = 60;
  shape.max_edges = 120;
  shape.min_arity = 2;
  shape.max_arity = 4;
  constexpr std::size_t kInstances = 50;
  std::size_t strict = 0;
  for (std::size_t i = 0; i < kInstances; ++i) {
    auto inst = hp::testing::make_instance(50000 + i, shape);
    auto idx = hp::SignatureIndex::build(inst.data);
    hp::QueryResult none_r, both_r;
    hp::SearchConfig none_cfg, both_cfg;
    none_cfg.mode = hp::FilterMode::kNone;
    both_cfg.mode = hp::FilterMode::kBoth;
    auto none_set = run_engine(inst.query, inst.data, idx, none_cfg, &none_r);
    auto both_set = run_engine(inst.query, inst.data, idx, both_cfg, &both_r);
    for (auto mode : {hp::FilterMode::kConnectivity, hp::FilterMode::kIntersection}) {
      hp::SearchConfig cfg;
      cfg.mode = mode;
      if (run_engine(inst.query, inst.data, idx, cfg) != both_set) fail.add("seed " + std::to_string(inst.seed) + ": counts differ");
    }
    if (none_set != both_set) fail.add("seed " + std::to_string(inst.seed) + ": counts differ");
    if (both_r.search.recursive_calls > none_r.search.recursive_calls) {
      fail.add("seed " + std::to_string(inst.seed) + ": both=" + std::to_string(both_r.search.recursive_calls) +
               " none=" + std::to_string(none_r.search.recursive_calls));
    }
    strict += both_r.search.recursive_calls < none_r.search.recursive_calls;
  }
  if (strict * 5 < kInstances * 4) fail.add("strictly fewer calls on only " + std::to_string(strict) + "/" + std::to_string(kInstances));
  return fail.outcome("strictly fewer calls on " + std::to_string(strict) + "/" + std::to_string(kInstances) +
                      " unlabeled k=5 instances, equal embedding sets");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(std::vector<std::string> args, std::string* out_text) {
  std::vector<const char*> argv{"hyperpm"};
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hp::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text != nullptr) *out_text = out.str();
  return code;
}

// 9. match --sorted and gen-queries are byte-identical across runs.
Outcome criterion_determinism() {
  Failures fail;
  const auto dir = std::filesystem::temp_directory_path() / "hyperpm_acceptance";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string data = (dir / "data.txt").string();
  if (cli({"gen-data", "--vertices", "60", "--edges", "120", "--labels", "2", "--min-arity", "2",
           "--max-arity", "5", "--seed", "9", "--out", data}, nullptr) != 0) {
    fail.add("gen-data failed");
    return fail.outcome("");
  }
  for (const char* sub : {"a", "b"}) {
    if (cli({"gen-queries", data, "--k", "3", "--count", "10", "--seed", "77", "--out", (dir / sub).string()}, nullptr) != 0) {
      fail.add("gen-queries failed");
    }
  }
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
    ++files;
    if (slurp(entry.path()) != slurp(dir / "b" / entry.path().filename())) fail.add("gen-queries differs: " + entry.path().filename().string());
  }
  std::vector<std::string> first, second;
  for (std::size_t i = 0; i < files; ++i) {
    const std::string q = (dir / "a" / ("query_" + std::to_string(i) + ".txt")).string();
    for (const char* mode : {"both", "none"}) {
      std::string a, b;
      cli({"match", data, q, "--sorted", "--mode", mode}, &a);
      cli({"match", data, q, "--sorted", "--mode", mode, "--seed", "5"}, &b);
      first.push_back(a);
      second.push_back(b);
      if (a.empty()) fail.add("no output for " + q);
    }
  }
  if (first != second) fail.add("match --sorted output differs between runs");
  for (std::size_t i = 0; i + 1 < first.size(); i += 2) {
    if (first[i] != first[i + 1]) fail.add("match --sorted output differs between modes");
  }
  std::filesystem::remove_all(dir);
  return fail.outcome(std::to_string(files) + " query files and their sorted match output identical");
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int n, const char* name, const Outcome& o) {
    std::cout << "criterion " << n << " " << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << std::endl;
    failures += !o.pass;
  };

  report(1, "fixture exactness", criterion_fixture());

  SuiteRun suite;
  suite.instances = hp::testing::make_suite(kSuiteSize, kSuiteSeed);
  const auto oracle_start = std::chrono::steady_clock::now();
  for (const auto& inst : suite.instances) suite.oracle.push_back(hp::oracle_subsets(inst.query, inst.data));
  const double oracle_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - oracle_start).count();

  double engine_secs = 0.0;
  auto c2 = criterion_oracle(suite, &engine_secs);
  if (oracle_secs + engine_secs >= 300.0) {
    c2.pass = false;
    c2.detail += "; over the 5 minute budget";
  }
  char timing[96];
  std::snprintf(timing, sizeof timing, " (oracle %.1f s, engine %.1f s)", oracle_secs, engine_secs);
  c2.detail += timing;
  report(2, "oracle equivalence", c2);
  report(3, "cross-oracle agreement", criterion_cross_oracle(suite));
  report(4, "filter soundness and fixpoint", criterion_filter(suite));
  report(5, "state restoration", criterion_restoration(suite));
  report(6, "intersection check linearity", criterion_linearity(suite));
  report(7, "filter complexity bound", criterion_filter_work(suite));
  report(8, "ablation direction", criterion_ablation());
  report(9, "determinism", criterion_determinism());

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
