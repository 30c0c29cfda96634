#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "expmatch/acceptance.hpp"
#include "expmatch/augment.hpp"
#include "expmatch/chain.hpp"
#include "expmatch/cli.hpp"
#include "expmatch/error.hpp"
#include "expmatch/graph.hpp"
#include "expmatch/greedy.hpp"
#include "expmatch/oracle.hpp"
#include "expmatch/spectral.hpp"

namespace py = pybind11;
using namespace expmatch;

namespace {

std::vector<std::pair<int, int>> edge_pairs(std::span<const Edge> edges) {
  std::vector<std::pair<int, int>> out;
  out.reserve(edges.size());
  for (const Edge& e : edges) out.emplace_back(e.u, e.v);
  return out;
}

Graph graph_from_pairs(int num_vertices, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs) edges.push_back(make_edge(u, v));
  return Graph(num_vertices, std::move(edges));
}

Matching matching_from_pairs(const Graph& g, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> edges;
  for (auto [u, v] : pairs) edges.push_back(make_edge(u, v));
  return Matching::from_edges(g, edges);
}

py::int_ to_py(const BigInt& v) { return py::int_(py::str(v.str())); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sampling and counting perfect matchings in spectral expanders";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<BudgetError>(m, "BudgetError", base.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init(&graph_from_pairs), py::arg("num_vertices"), py::arg("edges"))
      .def_property_readonly("num_vertices", &Graph::num_vertices)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("edges", [](const Graph& g) { return edge_pairs(g.edges()); })
      .def("neighbors", [](const Graph& g, int v) {
        if (!g.contains(v)) throw ValidationError("vertex out of range");
        auto nb = g.neighbors(v);
        return std::vector<int>(nb.begin(), nb.end());
      })
      .def("degree", &Graph::degree)
      .def("has_edge", &Graph::has_edge)
      .def_property_readonly("regular_degree", &Graph::regular_degree)
      .def_property_readonly("fingerprint", &graph_fingerprint)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "<Graph " + std::to_string(g.num_vertices()) + " vertices, " + std::to_string(g.num_edges()) +
               " edges>";
      });

  m.def("complete", &build_complete, py::arg("n"));
  m.def("cocktail_party", &build_cocktail_party, py::arg("n"));
  m.def("random_regular", &build_random_regular, py::arg("n"), py::arg("d"), py::arg("seed"));
  m.def("petersen", &build_petersen);
  m.def("pendant_augment", &pendant_augment, py::arg("graph"));
  m.def("load_graph", [](const std::string& path) { return load_graph(path); }, py::arg("path"));
  m.def("save_graph", [](const Graph& g, const std::string& path) { save_graph(g, path); }, py::arg("graph"),
        py::arg("path"));

  m.def(
      "spectrum",
      [](const Graph& g) {
        const SpectralSummary s = spectrum(g);
        py::dict d;
        d["eigenvalues"] = s.eigenvalues;
        d["sigma2"] = s.sigma2;
        d["lambda2"] = s.lambda2();
        d["lambda_min"] = s.lambda_min();
        d["degree"] = s.degree;
        return d;
      },
      py::arg("graph"));
  m.def("is_eps_expander", py::overload_cast<const Graph&, double>(&is_eps_expander), py::arg("graph"),
        py::arg("eps"));

  m.def(
      "census",
      [](const Graph& g) {
        py::list out;
        for (const BigInt& v : census(g).counts) out.append(to_py(v));
        return out;
      },
      py::arg("graph"));

  m.def(
      "rho_bound",
      [](double eps, int n, int matching_size) {
        const RhoBound r = rho_bound(eps, n, matching_size);
        py::dict d;
        d["rho"] = r.rho;
        d["t"] = r.t;
        d["alpha"] = r.alpha;
        d["hypothesis_violated"] = r.hypothesis_violated;
        return d;
      },
      py::arg("eps"), py::arg("n"), py::arg("matching_size"));
  m.def("ratio_bound", &ratio_bound, py::arg("eps"), py::arg("n"), py::arg("k"), py::arg("d"));

  m.def(
      "find_augmenting_path",
      [](const Graph& g, const std::vector<std::pair<int, int>>& matching, double eps, std::uint64_t seed,
         int max_retries) -> std::optional<std::vector<int>> {
        const AugmentResult r = find_augmenting_path(g, matching_from_pairs(g, matching), eps, seed, max_retries);
        return r.path;
      },
      py::arg("graph"), py::arg("matching"), py::arg("eps"), py::arg("seed") = 0,
      py::arg("max_retries") = default_max_retries());
  m.def(
      "is_augmenting_path",
      [](const Graph& g, const std::vector<std::pair<int, int>>& matching, const std::vector<int>& path) {
        return static_cast<bool>(is_augmenting_path(g, matching_from_pairs(g, matching), path));
      },
      py::arg("graph"), py::arg("matching"), py::arg("path"));

  m.def(
      "sample_perfect_matching",
      [](const Graph& g, double eps, double delta, std::uint64_t seed, std::optional<std::uint64_t> steps_override) {
        SampleOptions opts;
        opts.steps_override = steps_override;
        SampleResult r;
        {
          py::gil_scoped_release release;
          r = sample_perfect_matching(g, eps, delta, seed, opts);
        }
        return edge_pairs(r.matching.edges());
      },
      py::arg("graph"), py::arg("eps"), py::arg("delta") = 0.1, py::arg("seed") = 0,
      py::arg("steps_override") = std::nullopt);

  m.def(
      "count_perfect_matchings",
      [](const Graph& g, double eps, double delta, std::uint64_t seed, std::optional<std::uint64_t> max_samples) {
        CountOptions opts;
        if (max_samples) {
          opts.max_samples_per_level = *max_samples;
          opts.min_samples_per_level = std::min(opts.min_samples_per_level, *max_samples);
        }
        CountResult r;
        {
          py::gil_scoped_release release;
          r = count_perfect_matchings(g, eps, delta, seed, opts);
        }
        py::dict d;
        d["estimate"] = r.estimate;
        std::vector<double> ratios;
        for (const auto& e : r.per_level) ratios.push_back(e.ratio);
        d["per_level_ratios"] = ratios;
        d["steps"] = r.steps;
        d["diagnostic"] = r.diagnostic;
        return d;
      },
      py::arg("graph"), py::arg("eps"), py::arg("delta") = 0.1, py::arg("seed") = 0,
      py::arg("max_samples_per_level") = std::nullopt);

  m.def(
      "count_distinct_greedy",
      [](const Graph& g, int k, double eps) {
        const GreedyCount c = count_distinct_greedy(g, k, eps);
        py::dict d;
        d["bounds"] = c.bounds;
        d["num_sequences"] = c.num_sequences;
        d["distinct"] = c.distinct;
        d["sampled"] = c.sampled;
        return d;
      },
      py::arg("graph"), py::arg("k"), py::arg("eps"));
  m.def("lower_bound_pm", &lower_bound_pm, py::arg("n"), py::arg("d"), py::arg("eps"));
  m.def("lower_bound_meps", &lower_bound_meps, py::arg("n"), py::arg("d"), py::arg("eps"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the CLI in-process; returns (exit_code, stdout, stderr).");

  m.def(
      "run_criterion",
      [](int id) {
        CriterionResult r;
        {
          py::gil_scoped_release release;
          r = run_criterion(id);
        }
        return py::make_tuple(r.passed, r.name, r.detail);
      },
      py::arg("id"));
}
