#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "hyperpm/cli.h"
#include "hyperpm/engine.h"
#include "hyperpm/errors.h"
#include "hyperpm/oracle.h"
#include "hyperpm/signature_index.h"

namespace py = pybind11;
using namespace hyperpm;

namespace {

std::vector<VertexId> edge_list(const Hypergraph& h, EdgeId e) {
  if (e >= h.num_edges()) throw py::index_error("hyperedge id out of range");
  auto span = h.edge(e);
  return {span.begin(), span.end()};
}

py::dict stats_dict(const QueryResult& r) {
  py::dict d;
  d["status"] = std::string(to_string(r.search.status));
  d["truncated"] = r.search.truncated;
  d["embeddings"] = r.search.embeddings_found;
  d["recursive_calls"] = r.search.recursive_calls;
  d["candidates_pruned_stage1"] = r.search.candidates_pruned_stage1;
  d["candidates_pruned_stage2"] = r.search.candidates_pruned_stage2;
  d["intersection_checks"] = r.search.intersection_checks;
  d["vertex_touches"] = r.search.vertex_touches;
  d["wall_time"] = r.search.wall_time_seconds;
  d["candidates_before"] = r.filter.candidates_before;
  d["candidates_after"] = r.filter.candidates_after;
  d["connections_before"] = r.filter.connections_before;
  d["connections_after"] = r.filter.connections_after;
  d["pairs_processed"] = r.filter.pairs_processed;
  return d;
}

py::set to_py(const EmbeddingSet& s) {
  py::set out;
  for (const auto& emb : s) out.add(py::tuple(py::cast(emb)));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Subhypergraph matching over labelled hypergraphs";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ReferenceError>(m, "ReferenceError", base.ptr());
  py::register_exception<NormalizationError>(m, "NormalizationError", base.ptr());
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", validation.ptr());
  py::register_exception<ScaleGuardError>(m, "ScaleGuardError", base.ptr());
  py::register_exception<GenerationError>(m, "GenerationError", base.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_AssertionError);

  py::class_<LabelTable>(m, "LabelTable")
      .def(py::init<>())
      .def("intern", &LabelTable::intern)
      .def("name", &LabelTable::name)
      .def("__len__", &LabelTable::size);

  py::class_<Hypergraph>(m, "Hypergraph")
      .def_property_readonly("num_vertices", &Hypergraph::num_vertices)
      .def_property_readonly("num_edges", &Hypergraph::num_edges)
      .def_property_readonly("max_arity", &Hypergraph::max_arity)
      .def_property_readonly("average_arity", &Hypergraph::average_arity)
      .def("label", [](const Hypergraph& h, VertexId v) {
        if (v >= h.num_vertices()) throw py::index_error("vertex id out of range");
        return h.label(v);
      })
      .def("edge", &edge_list)
      .def("edges", [](const Hypergraph& h) {
        std::vector<std::vector<VertexId>> out;
        for (EdgeId e = 0; e < h.num_edges(); ++e) out.push_back(edge_list(h, e));
        return out;
      })
      .def("__eq__", [](const Hypergraph& a, const Hypergraph& b) { return a == b; });

  py::class_<SignatureIndex>(m, "SignatureIndex")
      .def(py::init(&SignatureIndex::build), py::arg("data"))
      .def_property_readonly("num_buckets", &SignatureIndex::num_buckets);

  m.def("parse", [](const std::string& text, LabelTable& labels) { return parse_hypergraph(text, labels).graph; },
        py::arg("text"), py::arg("labels"), "Parse the text format into a normalized hypergraph.");
  m.def("load", [](const std::string& path, LabelTable& labels) { return parse_hypergraph_file(path, labels).graph; },
        py::arg("path"), py::arg("labels"));
  m.def("serialize", &serialize_hypergraph, py::arg("graph"), py::arg("labels"));
  m.def("validate_query", &validate_query, py::arg("query"));

  m.def(
      "match",
      [](const Hypergraph& q, const Hypergraph& data, const SignatureIndex* index, const std::string& mode,
         const std::string& order, std::optional<std::uint64_t> limit, std::optional<double> timeout,
         std::optional<std::uint64_t> seed) {
        SearchConfig config;
        auto parsed_mode = parse_filter_mode(mode);
        auto parsed_order = parse_order_policy(order);
        if (!parsed_mode) throw py::value_error("unknown mode '" + mode + "'");
        if (!parsed_order) throw py::value_error("unknown order '" + order + "'");
        if (limit && *limit == 0) throw py::value_error("limit must be positive");
        if (timeout && *timeout <= 0) throw py::value_error("timeout must be positive");
        config.mode = *parsed_mode;
        config.order = *parsed_order;
        config.embedding_limit = limit;
        if (timeout) config.time_limit = std::chrono::duration<double>(*timeout);
        config.tiebreak_seed = seed;

        std::vector<std::vector<EdgeId>> found;
        QueryResult result;
        {
          py::gil_scoped_release release;
          std::optional<SignatureIndex> own;
          if (index == nullptr) index = &own.emplace(SignatureIndex::build(data));
          result = match_query(q, data, *index, config,
                               [&](std::span<const EdgeId> emb) { found.emplace_back(emb.begin(), emb.end()); });
        }
        py::list embeddings;
        for (const auto& emb : found) embeddings.append(py::tuple(py::cast(emb)));
        return py::make_tuple(embeddings, stats_dict(result));
      },
      py::arg("query"), py::arg("data"), py::arg("index") = nullptr, py::arg("mode") = "both",
      py::arg("order") = "hybrid", py::arg("limit") = py::none(), py::arg("timeout") = py::none(),
      py::arg("seed") = py::none(),
      "Enumerate embeddings. Returns (embeddings, stats); each embedding lists a data hyperedge per query hyperedge.");

  m.def("oracle_subsets", [](const Hypergraph& q, const Hypergraph& d) { return to_py(oracle_subsets(q, d)); },
        py::arg("query"), py::arg("data"));
  m.def("oracle_vertexiso", [](const Hypergraph& q, const Hypergraph& d) { return to_py(oracle_vertexiso(q, d)); },
        py::arg("query"), py::arg("data"));

  m.def(
      "gen_random_hypergraph",
      [](std::uint64_t seed, std::size_t vertices, std::size_t edges, std::size_t labels, std::size_t min_arity,
         std::size_t max_arity) {
        return gen_random_hypergraph(seed, {vertices, edges, labels, min_arity, max_arity});
      },
      py::arg("seed"), py::arg("vertices"), py::arg("edges"), py::arg("labels") = 1, py::arg("min_arity") = 2,
      py::arg("max_arity") = 2);
  m.def("numbered_labels", &numbered_labels, py::arg("count"));
  m.def(
      "gen_query",
      [](std::uint64_t seed, const Hypergraph& data, std::size_t k) {
        auto gq = gen_query(seed, data, k);
        return py::make_tuple(std::move(gq.query), gq.source_edges);
      },
      py::arg("seed"), py::arg("data"), py::arg("k"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"hyperpm"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a command-line invocation in-process. Returns (exit_code, stdout, stderr).");
}
