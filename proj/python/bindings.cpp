#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "roadweights/annotate.hpp"
#include "roadweights/errors.hpp"
#include "roadweights/evaluation.hpp"
#include "roadweights/io.hpp"
#include "roadweights/pagerank.hpp"
#include "roadweights/synthetic.hpp"

namespace py = pybind11;
using namespace roadweights;

namespace {

// Cost vectors cross the boundary as (num_edges, num_tags) arrays.
Eigen::MatrixXd to_matrix(const CostVector& d) {
  return Eigen::Map<const Eigen::MatrixXd>(d.values().data(),
                                           static_cast<Eigen::Index>(d.num_edges()),
                                           static_cast<Eigen::Index>(d.num_tags()));
}

CostVector from_matrix(const Eigen::MatrixXd& m, const RoadGraph& graph) {
  if (m.rows() != static_cast<Eigen::Index>(graph.num_edges()) ||
      m.cols() != static_cast<Eigen::Index>(graph.num_tags()))
    throw_contract("weights must have shape (num_edges, num_tags)");
  return CostVector(graph.num_edges(), graph.num_tags(),
                    Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()));
}

py::array_t<bool> to_mask(const std::vector<bool>& flags, const RoadGraph& graph) {
  const auto e = graph.num_edges();
  py::array_t<bool> out({e, graph.num_tags()});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t k = 0; k < graph.num_tags(); ++k)
    for (std::size_t i = 0; i < e; ++i)
      view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(k)) = flags[k * e + i];
  return out;
}

Variant variant_of(const std::string& name) {
  if (auto v = parse_variant(name)) return *v;
  throw_contract("unknown variant " + name);
}

py::dict terms(const ObjectiveTerms& t) {
  py::dict d;
  d["rss"] = t.rss;
  d["prtc"] = t.prtc;
  d["datc"] = t.datc;
  d["l2"] = t.l2;
  d["total"] = t.total;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Edge-weight annotation of road networks from trips";

  static py::exception<Error> error(m, "RoadweightsError");
  static py::exception<ValidationError> validation(m, "ValidationError", error.ptr());
  static py::exception<ConvergenceError> convergence(m, "ConvergenceError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      std::string text = e.what();
      for (const auto& d : e.diagnostics()) text += "\n" + d.format();
      validation(text.c_str());
    } catch (const ConvergenceError& e) {
      convergence(e.what());
    } catch (const Error& e) {
      error(e.what());
    }
  });

  py::class_<TagSchedule>(m, "TagSchedule")
      .def(py::init([](std::vector<std::string> tags,
                       const std::vector<std::tuple<std::string, int, int, std::size_t>>& rules) {
             std::vector<TagRule> out;
             for (const auto& [day, start, end, tag] : rules) {
               const auto parsed = parse_day_class(day);
               if (!parsed) throw_contract("unknown day class " + day);
               out.push_back({*parsed, start, end, tag});
             }
             return TagSchedule(std::move(tags), std::move(out));
           }),
           py::arg("tags"), py::arg("rules"))
      .def_static("commuter", &TagSchedule::commuter)
      .def_property_readonly("tags", &TagSchedule::tags)
      .def("tag_of", [](const TagSchedule& s, const std::string& day, double minute) {
        const auto parsed = parse_day_class(day);
        if (!parsed) throw_contract("unknown day class " + day);
        return s.tag_of(*parsed, minute);
      });

  py::class_<RoadGraph>(m, "RoadGraph")
      .def(py::init([](const std::vector<std::tuple<std::string, std::string, std::string,
                                                    double, std::optional<double>>>& edges,
                       std::optional<TagSchedule> schedule) {
             std::vector<EdgeSpec> specs;
             for (const auto& [id, tail, head, length, limit] : edges)
               specs.push_back({id, tail, head, length, limit});
             return RoadGraph(specs, schedule ? *schedule : TagSchedule::commuter());
           }),
           py::arg("edges"), py::arg("schedule") = py::none())
      .def_property_readonly("num_edges", &RoadGraph::num_edges)
      .def_property_readonly("num_vertices", &RoadGraph::num_vertices)
      .def_property_readonly("num_tags", &RoadGraph::num_tags)
      .def_property_readonly("schedule", &RoadGraph::schedule)
      .def_property_readonly("edge_ids",
                             [](const RoadGraph& g) {
                               std::vector<std::string> ids;
                               for (const auto& e : g.edges()) ids.push_back(e.id);
                               return ids;
                             })
      .def("find_edge", &RoadGraph::find_edge)
      .def("flat_index", &RoadGraph::flat_index);

  py::class_<LinkRecord>(m, "LinkRecord")
      .def(py::init([](std::size_t edge, const std::string& day, double enter, double exit) {
             const auto parsed = parse_day_class(day);
             if (!parsed) throw_contract("unknown day class " + day);
             return LinkRecord{edge, *parsed, enter, exit};
           }),
           py::arg("edge"), py::arg("day"), py::arg("enter_minute"), py::arg("exit_minute"))
      .def_readonly("edge", &LinkRecord::edge)
      .def_property_readonly("day", [](const LinkRecord& r) { return std::string(to_string(r.day)); })
      .def_readonly("enter_minute", &LinkRecord::enter_minute)
      .def_readonly("exit_minute", &LinkRecord::exit_minute);

  py::class_<Trip>(m, "Trip")
      .def(py::init([](std::string id, std::vector<LinkRecord> records, double cost) {
             return Trip{std::move(id), std::move(records), cost};
           }),
           py::arg("id"), py::arg("records"), py::arg("cost"))
      .def_readonly("id", &Trip::id)
      .def_readonly("records", &Trip::records)
      .def_readonly("cost", &Trip::cost);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init([](const py::kwargs& kwargs) {
        RunConfig c;
        for (const auto& [key, value] : kwargs)
          c.set(py::str(key).cast<std::string>(), py::str(value).cast<std::string>());
        c.validate();
        return c;
      }))
      .def("set", [](RunConfig& c, const std::string& key, const py::object& value) {
        c.set(key, py::str(value).cast<std::string>());
      })
      .def("entries", [](const RunConfig& c) {
        py::dict d;
        for (const auto& [k, v] : c.entries()) d[py::str(k)] = v;
        return d;
      })
      .def_static("from_file", &RunConfig::from_file);

  py::class_<SyntheticSpec>(m, "SyntheticSpec")
      .def(py::init<>())
      .def_readwrite("rows", &SyntheticSpec::rows)
      .def_readwrite("cols", &SyntheticSpec::cols)
      .def_readwrite("trip_count", &SyntheticSpec::trip_count)
      .def_readwrite("min_trip_edges", &SyntheticSpec::min_trip_edges)
      .def_readwrite("max_trip_edges", &SyntheticSpec::max_trip_edges)
      .def_readwrite("coverage_fraction", &SyntheticSpec::coverage_fraction)
      .def_readwrite("noise", &SyntheticSpec::noise)
      .def_readwrite("weekend_probability", &SyntheticSpec::weekend_probability)
      .def_readwrite("missing_speed_limit_fraction", &SyntheticSpec::missing_speed_limit_fraction)
      .def_readwrite("factor_ranges", &SyntheticSpec::factor_ranges)
      .def_readwrite("flow_congestion", &SyntheticSpec::flow_congestion)
      .def_readwrite("schedule", &SyntheticSpec::schedule);

  m.def(
      "generate_synthetic",
      [](const SyntheticSpec& spec, std::uint64_t seed) {
        auto data = generate_synthetic(spec, seed);
        const auto truth = to_matrix(data.truth);
        return py::make_tuple(std::move(data.graph), truth, std::move(data.trips));
      },
      py::arg("spec"), py::arg("seed"),
      "Returns (graph, truth of shape (num_edges, num_tags), trips).");

  m.def(
      "load_dataset",
      [](const std::filesystem::path& network, const std::filesystem::path& trips,
         const std::filesystem::path& costs, std::optional<std::filesystem::path> schedule) {
        auto data = load_dataset(DatasetPaths{network, schedule, trips, costs});
        return py::make_tuple(std::move(data.graph), std::move(data.trips));
      },
      py::arg("network"), py::arg("trips"), py::arg("costs"), py::arg("schedule") = py::none());

  m.def(
      "write_weights",
      [](const Eigen::MatrixXd& weights, const RoadGraph& graph,
         const std::filesystem::path& path) {
        write_weights(from_matrix(weights, graph), {}, graph, path);
      },
      py::arg("weights"), py::arg("graph"), py::arg("path"));

  m.def(
      "split",
      [](const TripSet& trips, double fraction, std::uint64_t seed) {
        auto parts = split(trips, fraction, seed);
        return py::make_tuple(std::move(parts.train), std::move(parts.test));
      },
      py::arg("trips"), py::arg("train_fraction"), py::arg("seed"));

  m.def(
      "tag_weights",
      [](const LinkRecord& r, const TagSchedule& s) { return tag_weights(r, s); },
      py::arg("record"), py::arg("schedule"));

  m.def(
      "trip_cost",
      [](const Trip& t, const RoadGraph& g, const Eigen::MatrixXd& w) {
        return trip_cost(t, g, from_matrix(w, g));
      },
      py::arg("trip"), py::arg("graph"), py::arg("weights"));

  m.def(
      "ssl",
      [](const TripSet& trips, const RoadGraph& g, const Eigen::MatrixXd& w) {
        return ssl(trips, g, from_matrix(w, g));
      },
      py::arg("trips"), py::arg("graph"), py::arg("weights"));

  m.def(
      "pagerank",
      [](const RoadGraph& g, const TripSet& trips, std::size_t tag) {
        const DualGraph dual(g);
        const auto parts = partition_by_tag(trips, g.schedule());
        if (tag >= parts.size()) throw_index("tag out of range");
        return pagerank(dual_weights(dual, parts[tag], tag)).values;
      },
      py::arg("graph"), py::arg("trips"), py::arg("tag") = 0,
      "Weighted PageRank of every edge under the trips of one tag.");

  m.def(
      "pagerank_histogram",
      [](const std::vector<double>& values) {
        const auto h = pagerank_stats(values);
        return std::vector<double>(h.percentage.begin(), h.percentage.end());
      },
      py::arg("values"));

  m.def(
      "annotate",
      [](const RoadGraph& g, const TripSet& trips, const std::string& variant,
         std::optional<RunConfig> config) {
        const RunConfig c = config ? *config : RunConfig{};
        const DualGraph dual(g);
        const auto model = build_model(g, dual, trips, c);
        const auto a = annotate(model, g, variant_of(variant), c);
        py::dict out;
        out["weights"] = to_matrix(a.weights);
        out["annotated"] = to_mask(a.annotated, g);
        out["iterations"] = a.iterations;
        out["relative_residual"] = a.relative_residual;
        out["objective"] = terms(a.objective);
        return out;
      },
      py::arg("graph"), py::arg("trips"), py::arg("variant") = "F4",
      py::arg("config") = py::none(),
      "Fits unit costs; returns weights and the annotated mask as (num_edges, num_tags) arrays.");

  m.def(
      "evaluate",
      [](const TripSet& train, const TripSet& test, const RoadGraph& g,
         std::optional<RunConfig> config) {
        const DualGraph dual(g);
        const auto r = run_comparison(train, test, g, dual, config ? *config : RunConfig{});
        py::dict ssl_d, ratio, cov, iters;
        for (Variant v : kAllVariants) {
          const py::str name(std::string(to_string(v)));
          ssl_d[name] = r.ssl.at(v);
          ratio[name] = r.ratio.at(v);
          cov[name] = r.coverage.at(v);
          iters[name] = r.iterations.at(v);
        }
        py::dict out;
        out["ssl"] = ssl_d;
        out["ratio"] = ratio;
        out["coverage"] = cov;
        out["iterations"] = iters;
        out["baseline_ssl_lambda1"] = r.baseline_ssl_lambda1;
        out["baseline_ssl_lambda2"] = r.baseline_ssl_lambda2;
        return out;
      },
      py::arg("train"), py::arg("test"), py::arg("graph"), py::arg("config") = py::none());
}
