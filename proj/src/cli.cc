#include "hyperpm/cli.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperpm/engine.h"
#include "hyperpm/errors.h"
#include "hyperpm/oracle.h"
#include "hyperpm/random.h"
#include "hyperpm/signature_index.h"

namespace hyperpm {

namespace {

using nlohmann::json;

struct SearchFlags {
  std::string mode = "both";
  std::string order = "hybrid";
  std::optional<std::uint64_t> seed;
};

void add_search_flags(CLI::App* cmd, SearchFlags& f) {
  cmd->add_option("--mode", f.mode, "In-search pruning: none, conn, isec or both")
      ->check(CLI::IsMember({"none", "conn", "isec", "both"}));
  cmd->add_option("--order", f.order, "Matching order: hybrid, adjacency or candidates")
      ->check(CLI::IsMember({"hybrid", "adjacency", "candidates"}));
  cmd->add_option("--seed", f.seed, "Seed for the matching-order tiebreak");
}

SearchConfig make_config(const SearchFlags& f) {
  SearchConfig config;
  config.mode = *parse_filter_mode(f.mode);
  config.order = *parse_order_policy(f.order);
  config.tiebreak_seed = f.seed;
  return config;
}

std::string join_ids(std::span<const EdgeId> ids) {
  std::string line;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) line += ' ';
    line += std::to_string(ids[i]);
  }
  return line;
}

SignatureIndex load_or_build_index(const std::string& data_path, const Hypergraph& data,
                                   const std::string& cache_path, std::ostream& err) {
  if (cache_path.empty()) return SignatureIndex::build(data);
  const std::uint64_t hash = file_content_hash(data_path);
  {
    std::ifstream in(cache_path, std::ios::binary);
    if (in) {
      if (auto idx = SignatureIndex::load(in, hash)) return std::move(*idx);
      err << "index cache '" << cache_path << "' is stale or unreadable; rebuilding\n";
    }
  }
  auto idx = SignatureIndex::build(data);
  std::ofstream out(cache_path, std::ios::binary | std::ios::trunc);
  if (out) {
    idx.save(out, hash);
  } else {
    err << "cannot write index cache '" << cache_path << "'\n";
  }
  return idx;
}

double geometric_mean(const std::vector<double>& xs) {
  double log_sum = 0.0;
  std::size_t n = 0;
  for (double x : xs) {
    if (x > 0.0) {
      log_sum += std::log(x);
      ++n;
    }
  }
  return n == 0 ? 0.0 : std::exp(log_sum / static_cast<double>(n));
}

struct QueryRun {
  std::string path;
  Hypergraph query;
  std::string output;
  QueryResult result;
  std::string error;
  int error_code = kExitOk;
};

json report_json(const QueryRun& run, const std::optional<double>& timeout) {
  const auto& f = run.result.filter;
  const auto& s = run.result.search;
  double wall = s.wall_time_seconds;
  if (s.status == SearchStatus::kTimeout && timeout) wall = *timeout;
  return {
      {"query", run.path},
      {"status", std::string(to_string(s.status))},
      {"embeddings", s.embeddings_found},
      {"truncated", s.truncated},
      {"filter",
       {{"candidates_before", f.candidates_before},
        {"candidates_after", f.candidates_after},
        {"connections_before", f.connections_before},
        {"connections_after", f.connections_after},
        {"pairs_processed", f.pairs_processed}}},
      {"search",
       {{"recursive_calls", s.recursive_calls},
        {"candidates_pruned_stage1", s.candidates_pruned_stage1},
        {"candidates_pruned_stage2", s.candidates_pruned_stage2},
        {"intersection_checks", s.intersection_checks},
        {"vertex_touches", s.vertex_touches},
        {"wall_time", wall}}},
  };
}

int cmd_match(const std::string& data_path, const std::vector<std::string>& query_paths,
              const SearchFlags& flags, bool count_only, std::optional<std::uint64_t> limit,
              std::optional<double> timeout, bool sorted, bool stats, unsigned jobs,
              const std::string& cache_path, std::ostream& out, std::ostream& err) {
  LabelTable labels;
  auto data = parse_hypergraph_file(data_path, labels).graph;
  auto index = load_or_build_index(data_path, data, cache_path, err);

  std::vector<QueryRun> runs(query_paths.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    runs[i].path = query_paths[i];
    runs[i].query = parse_hypergraph_file(query_paths[i], labels).graph;
    validate_query(runs[i].query);
  }

  SearchConfig config = make_config(flags);
  config.embedding_limit = limit;
  if (timeout) config.time_limit = std::chrono::duration<double>(*timeout);

  const bool header = runs.size() > 1;
  // With one worker and no sorting, embeddings are streamed as found.
  const bool stream = jobs <= 1 && !sorted && !count_only;

  auto run_one = [&](QueryRun& run) {
    std::vector<Embedding> found;
    std::ostringstream buffer;
    EmbeddingSink sink = [&](std::span<const EdgeId> emb) {
      if (count_only) return;
      if (sorted) {
        found.emplace_back(emb.begin(), emb.end());
      } else if (stream) {
        out << join_ids(emb) << '\n';
      } else {
        buffer << join_ids(emb) << '\n';
      }
    };
    if (stream && header) out << "# " << run.path << '\n';
    try {
      run.result = match_query(run.query, data, index, config, sink);
    } catch (const ContractViolation& e) {
      run.error = e.what();
      run.error_code = kExitContract;
      return;
    }
    if (sorted) {
      std::sort(found.begin(), found.end());
      for (const auto& emb : found) buffer << join_ids(emb) << '\n';
    }
    if (count_only) buffer << run.result.search.embeddings_found << '\n';
    run.output = buffer.str();
  };

  if (jobs <= 1 || runs.size() <= 1) {
    for (auto& run : runs) {
      run_one(run);
      if (!stream) {
        if (header) out << "# " << run.path << '\n';
        out << run.output;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < std::min<std::size_t>(jobs, runs.size()); ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) run_one(runs[i]);
      });
    }
    for (auto& t : workers) t.join();
    for (const auto& run : runs) {
      if (header) out << "# " << run.path << '\n';
      out << run.output;
    }
  }

  int code = kExitOk;
  std::vector<double> times;
  std::vector<double> calls;
  for (const auto& run : runs) {
    if (run.error_code != kExitOk) {
      err << run.path << ": " << run.error << '\n';
      code = std::max(code, run.error_code);
      continue;
    }
    if (stats) {
      json j = report_json(run, timeout);
      err << j.dump() << '\n';
      times.push_back(j["search"]["wall_time"].get<double>());
      calls.push_back(static_cast<double>(run.result.search.recursive_calls));
    }
  }
  if (stats && runs.size() > 1) {
    json agg = {{"aggregate", true},
                {"queries", runs.size()},
                {"geomean_wall_time", geometric_mean(times)},
                {"geomean_recursive_calls", geometric_mean(calls)}};
    err << agg.dump() << '\n';
  }
  return code;
}

int cmd_verify(const std::string& data_path, const std::vector<std::string>& query_paths,
               const SearchFlags& flags, const OracleLimits& limits, bool mutate,
               std::ostream& out, std::ostream& err) {
  LabelTable labels;
  auto data = parse_hypergraph_file(data_path, labels).graph;
  auto index = SignatureIndex::build(data);
  SearchConfig config = make_config(flags);
  config.skip_extension_verification = mutate;

  bool all_pass = true;
  for (const auto& path : query_paths) {
    auto q = parse_hypergraph_file(path, labels).graph;
    validate_query(q);
    check_oracle_scale(q, data, limits);

    EmbeddingSet engine;
    match_query(q, data, index, config,
                [&](std::span<const EdgeId> emb) { engine.emplace(emb.begin(), emb.end()); });
    EmbeddingSet oracle = oracle_subsets(q, data, limits);

    std::vector<Embedding> engine_only;
    std::vector<Embedding> oracle_only;
    std::set_difference(engine.begin(), engine.end(), oracle.begin(), oracle.end(),
                        std::back_inserter(engine_only));
    std::set_difference(oracle.begin(), oracle.end(), engine.begin(), engine.end(),
                        std::back_inserter(oracle_only));
    const bool pass = engine_only.empty() && oracle_only.empty();
    all_pass = all_pass && pass;
    out << (pass ? "pass " : "FAIL ") << path << " engine=" << engine.size()
        << " oracle=" << oracle.size() << '\n';
    for (const auto& emb : engine_only) out << "+ " << join_ids(emb) << '\n';
    for (const auto& emb : oracle_only) out << "- " << join_ids(emb) << '\n';
  }
  if (!all_pass) err << "engine and oracle disagree\n";
  return all_pass ? kExitOk : kExitContract;
}

int cmd_gen_queries(const std::string& data_path, std::size_t k, std::size_t count,
                    std::uint64_t seed, const std::string& out_dir, const std::string& prefix,
                    std::ostream& out, std::ostream& err) {
  LabelTable labels;
  auto data = parse_hypergraph_file(data_path, labels).graph;
  std::filesystem::create_directories(out_dir);
  Rng seeds(seed);
  const int width = static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size());
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t query_seed = seeds.next();
    GeneratedQuery gq;
    try {
      gq = gen_query(query_seed, data, k);
    } catch (const GenerationError& e) {
      err << "query " << i << ": " << e.what() << '\n';
      return kExitInput;
    }
    std::ostringstream name;
    name << prefix << std::setw(width) << std::setfill('0') << i << ".txt";
    const auto path = std::filesystem::path(out_dir) / name.str();
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "cannot write '" << path.string() << "'\n";
      return kExitInput;
    }
    file << "# source hyperedges:";
    for (EdgeId f : gq.source_edges) file << ' ' << f;
    file << '\n';
    write_hypergraph(file, gq.query, labels);
    out << path.string() << '\n';
  }
  return kExitOk;
}

int cmd_gen_data(std::uint64_t seed, const RandomHypergraphParams& params,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
  auto h = gen_random_hypergraph(seed, params);
  auto labels = numbered_labels(params.labels);
  if (out_path.empty() || out_path == "-") {
    write_hypergraph(out, h, labels);
    return kExitOk;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "cannot write '" << out_path << "'\n";
    return kExitInput;
  }
  write_hypergraph(file, h, labels);
  return kExitOk;
}

int cmd_stats(const std::string& data_path, std::ostream& out) {
  LabelTable labels;
  auto parsed = parse_hypergraph_file(data_path, labels);
  const auto& h = parsed.graph;
  char avg[32];
  std::snprintf(avg, sizeof avg, "%.2f", h.average_arity());
  out << "vertices " << h.num_vertices() << '\n'
      << "edges " << h.num_edges() << '\n'
      << "labels " << h.num_distinct_labels() << '\n'
      << "max_arity " << h.max_arity() << '\n'
      << "avg_arity " << avg << '\n'
      << "duplicate_edges_removed " << parsed.normalization.duplicate_edges_removed << '\n'
      << "duplicate_vertices_collapsed " << parsed.normalization.duplicate_vertices_collapsed
      << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subhypergraph matching over labelled hypergraphs", "hyperpm"};
  app.require_subcommand(1);

  std::string data_path;
  std::vector<std::string> query_paths;
  SearchFlags flags;

  auto* match = app.add_subcommand("match", "Enumerate embeddings of each query in the data");
  bool count_only = false;
  bool sorted = false;
  bool stats = false;
  std::optional<std::uint64_t> limit;
  std::optional<double> timeout;
  unsigned jobs = 1;
  std::string cache_path;
  match->add_option("data", data_path, "Data hypergraph file")->required();
  match->add_option("queries", query_paths, "Query hypergraph files")->required();
  match->add_flag("--count-only", count_only, "Print only the number of embeddings");
  match->add_option("--limit", limit, "Stop after this many embeddings")
      ->check(CLI::PositiveNumber);
  match->add_option("--timeout", timeout, "Wall-clock limit per query in seconds")
      ->check(CLI::PositiveNumber);
  match->add_flag("--sorted", sorted, "Sort embeddings before printing");
  match->add_flag("--stats", stats, "Write one JSON report per query to stderr");
  match->add_option("--jobs", jobs, "Queries run concurrently")->check(CLI::PositiveNumber);
  match->add_option("--index-cache", cache_path, "Signature index cache file");
  add_search_flags(match, flags);

  auto* verify = app.add_subcommand("verify", "Compare the engine with the subset oracle");
  OracleLimits limits;
  bool mutate = false;
  verify->add_option("data", data_path, "Data hypergraph file")->required();
  verify->add_option("queries", query_paths, "Query hypergraph files")->required();
  verify->add_option("--max-query-edges", limits.max_query_edges, "Oracle scale guard");
  verify->add_option("--max-data-edges", limits.max_data_edges, "Oracle scale guard");
  verify->add_flag("--skip-extension-check", mutate)->group("");
  add_search_flags(verify, flags);

  auto* gen_queries = app.add_subcommand("gen-queries", "Random-walk query generation");
  std::size_t k = 3;
  std::size_t count = 30;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string prefix = "query_";
  gen_queries->add_option("data", data_path, "Data hypergraph file")->required();
  gen_queries->add_option("--k", k, "Hyperedges per query")->check(CLI::PositiveNumber);
  gen_queries->add_option("--count", count, "Number of queries");
  gen_queries->add_option("--seed", seed, "Generator seed");
  gen_queries->add_option("--out", out_dir, "Output directory");
  gen_queries->add_option("--prefix", prefix, "Output file name prefix");

  auto* gen_data = app.add_subcommand("gen-data", "Random simple hypergraph");
  RandomHypergraphParams params{50, 80, 2, 2, 5};
  std::string out_path;
  gen_data->add_option("--vertices", params.vertices, "Vertex count");
  gen_data->add_option("--edges", params.edges, "Hyperedge count");
  gen_data->add_option("--labels", params.labels, "Label alphabet size");
  gen_data->add_option("--min-arity", params.min_arity, "Smallest hyperedge");
  gen_data->add_option("--max-arity", params.max_arity, "Largest hyperedge");
  gen_data->add_option("--seed", seed, "Generator seed");
  gen_data->add_option("--out", out_path, "Output file (stdout when omitted)");

  auto* stats_cmd = app.add_subcommand("stats", "Dataset summary");
  stats_cmd->add_option("data", data_path, "Data hypergraph file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*match) {
      return cmd_match(data_path, query_paths, flags, count_only, limit, timeout, sorted, stats,
                       jobs, cache_path, out, err);
    }
    if (*verify) return cmd_verify(data_path, query_paths, flags, limits, mutate, out, err);
    if (*gen_queries) {
      return cmd_gen_queries(data_path, k, count, seed, out_dir, prefix, out, err);
    }
    if (*gen_data) return cmd_gen_data(seed, params, out_path, out, err);
    if (*stats_cmd) return cmd_stats(data_path, out);
  } catch (const ScaleGuardError& e) {
    err << "refused: " << e.what() << '\n';
    return kExitRefused;
  } catch (const ContractViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitContract;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace hyperpm
