#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "rankindep/baselines.hpp"
#include "rankindep/bounds.hpp"
#include "rankindep/datagen.hpp"
#include "rankindep/harness.hpp"
#include "rankindep/nulldist.hpp"
#include "rankindep/roc.hpp"
#include "rankindep/testproc.hpp"

namespace py = pybind11;
using namespace rankindep;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a, const char* name) {
  if (a.ndim() == 1) {
    return Matrix(static_cast<std::size_t>(a.shape(0)), 1, std::vector<double>(a.data(), a.data() + a.size()));
  }
  if (a.ndim() != 2) throw InvalidArgument(std::string(name) + " must be a 1-d or 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0)), cols = static_cast<std::size_t>(a.shape(1));
  return Matrix(rows, cols, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const Array& a) { return {a.data(), a.data() + a.size()}; }

PairedDataset to_dataset(const Array& x, const Array& y) { return {to_matrix(x, "x"), to_matrix(y, "y")}; }

py::object to_python(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      return py::none();
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list l;
      for (const auto& v : j) l.append(to_python(v));
      return std::move(l);
    }
    case nlohmann::json::value_t::object: {
      py::dict d;
      for (const auto& [k, v] : j.items()) d[py::str(k)] = to_python(v);
      return std::move(d);
    }
    default:
      throw InvalidArgument("unsupported json value");
  }
}

nlohmann::json from_python(const py::handle& h) {
  if (h.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
  if (py::isinstance<py::int_>(h)) return h.cast<std::int64_t>();
  if (py::isinstance<py::float_>(h)) return h.cast<double>();
  if (py::isinstance<py::str>(h)) return h.cast<std::string>();
  if (py::isinstance<py::dict>(h)) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : h.cast<py::dict>()) j[py::str(k).cast<std::string>()] = from_python(v);
    return j;
  }
  if (py::isinstance<py::list>(h) || py::isinstance<py::tuple>(h)) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& v : h) j.push_back(from_python(v));
    return j;
  }
  throw InvalidArgument("unsupported value in plan: " + py::str(h).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_rankindep, m) {
  m.doc() = "Ranking-based nonparametric independence test";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
  py::register_exception<EmptyData>(m, "EmptyData", PyExc_ValueError);

  m.def(
      "sample",
      [](const std::string& model, std::size_t d, double rho, std::size_t n, std::uint64_t seed, bool scaled,
         std::size_t u) {
        auto spec = ModelSpec::make(parse_model_id(model), d, rho);
        spec.scaled = scaled;
        spec.u = u;
        RngStream rng(seed, 0);
        const auto data = sample_model(spec, n, rng);
        return py::make_tuple(to_array(data.x()), to_array(data.y()));
      },
      py::arg("model"), py::arg("d"), py::arg("rho"), py::arg("n"), py::arg("seed") = 0, py::arg("scaled") = true,
      py::arg("u") = 1);

  m.def(
      "independence_test",
      [](const Array& x, const Array& y, const std::string& phi, double alpha, std::size_t kp, std::uint64_t seed,
         const std::string& learner, std::size_t n_trees, std::size_t max_depth, std::size_t min_leaf,
         std::size_t features, double learn_fraction, double p, std::optional<std::string> null_mode,
         std::size_t jobs) {
        TestConfig cfg;
        cfg.phi = parse_phi(phi);
        cfg.alpha = alpha;
        cfg.k_p = kp;
        if (learner == "tree") {
          cfg.learner = Learner::tree;
        } else if (learner != "forest") {
          throw InvalidArgument("learner must be 'forest' or 'tree'");
        }
        cfg.forest.n_trees = n_trees;
        cfg.forest.max_depth = max_depth;
        cfg.forest.min_leaf = min_leaf;
        cfg.forest.feature_subsample = features;
        cfg.learn_fraction = learn_fraction;
        cfg.p = p;
        if (null_mode) cfg.null_mode = parse_null_mode(*null_mode);
        cfg.jobs = jobs;
        const auto data = to_dataset(x, y);
        RngStream rng(seed, 0);
        TestOutcome out;
        {
          py::gil_scoped_release release;
          out = run_test(data, cfg, rng);
        }
        return to_python(out.to_json());
      },
      py::arg("x"), py::arg("y"), py::arg("phi") = "mww", py::arg("alpha") = 0.05, py::arg("kp") = 10,
      py::arg("seed") = 0, py::arg("learner") = "forest", py::arg("n_trees") = 100, py::arg("max_depth") = 8,
      py::arg("min_leaf") = 5, py::arg("features") = 0, py::arg("learn_fraction") = 0.8, py::arg("p") = 0.5,
      py::arg("null_mode") = py::none(), py::arg("jobs") = 1);

  m.def(
      "permutation_test",
      [](const Array& x, const Array& y, const std::string& method, std::size_t k0, double alpha, std::uint64_t seed,
         std::size_t jobs) {
        BaselineConfig cfg;
        cfg.method = parse_baseline_method(method);
        cfg.k0 = k0;
        cfg.alpha = alpha;
        cfg.jobs = jobs;
        const auto data = to_dataset(x, y);
        RngStream rng(seed, 0);
        PermutationOutcome out;
        {
          py::gil_scoped_release release;
          out = permutation_test(data, cfg, rng);
        }
        return to_python(out.to_json());
      },
      py::arg("x"), py::arg("y"), py::arg("method") = "hsic", py::arg("k0") = 200, py::arg("alpha") = 0.05,
      py::arg("seed") = 0, py::arg("jobs") = 1);

  m.def(
      "hsic_unbiased",
      [](const Array& x, const Array& y, std::optional<std::pair<double, double>> bandwidths) {
        const auto data = to_dataset(x, y);
        return bandwidths ? hsic_unbiased(data, *bandwidths) : hsic_unbiased(data);
      },
      py::arg("x"), py::arg("y"), py::arg("bandwidths") = py::none());
  m.def(
      "distance_correlation",
      [](const Array& x, const Array& y, const std::string& metric) {
        if (metric != "l1" && metric != "l2") throw InvalidArgument("metric must be 'l1' or 'l2'");
        return distance_correlation(to_dataset(x, y), metric == "l1" ? DistanceMetric::l1 : DistanceMetric::l2);
      },
      py::arg("x"), py::arg("y"), py::arg("metric") = "l2");
  m.def(
      "median_heuristic", [](const Array& points) { return median_heuristic(to_matrix(points, "points")); },
      py::arg("points"));

  py::class_<NullDistribution>(m, "NullDistribution")
      .def_property_readonly("n_minus", &NullDistribution::n_minus)
      .def_property_readonly("n_plus", &NullDistribution::n_plus)
      .def_property_readonly("phi", &NullDistribution::phi_label)
      .def_property_readonly("mode", [](const NullDistribution& d) { return std::string(to_string(d.mode())); })
      .def_property_readonly("support", &NullDistribution::support)
      .def_property_readonly("probabilities", &NullDistribution::probabilities)
      .def("cdf", &NullDistribution::cdf, py::arg("t"))
      .def("mean", &NullDistribution::mean)
      .def(
          "quantile", [](const NullDistribution& d, double alpha) { return quantile(d, alpha); }, py::arg("alpha"))
      .def(
          "p_value", [](const NullDistribution& d, double observed) { return p_value(d, observed); },
          py::arg("observed"));

  m.def(
      "null_distribution",
      [](std::size_t n_minus, std::size_t n_plus, const std::string& phi, std::optional<std::string> mode,
         std::size_t draws, std::uint64_t seed) {
        const auto f = parse_phi(phi);
        const NullMode nm = mode ? parse_null_mode(*mode) : choose_null_mode(n_minus, n_plus, f);
        RngStream rng(seed, 0);
        return build_null(n_minus, n_plus, f, nm, draws, rng);
      },
      py::arg("n_minus"), py::arg("n_plus"), py::arg("phi") = "mww", py::arg("mode") = py::none(),
      py::arg("draws") = 100000, py::arg("seed") = 0);

  m.def(
      "quantile_upper_bound",
      [](double alpha, std::size_t n, double p, const std::string& phi) {
        return quantile_upper_bound(alpha, n, p, parse_phi(phi));
      },
      py::arg("alpha"), py::arg("n"), py::arg("p") = 0.5, py::arg("phi") = "mww");

  m.def(
      "empirical_roc",
      [](const Array& neg, const Array& pos) {
        const auto c = empirical_roc(to_vector(neg), to_vector(pos));
        Array fpr(c.points.size()), tpr(c.points.size());
        for (std::size_t i = 0; i < c.points.size(); ++i) {
          fpr.mutable_data()[i] = c.points[i].first;
          tpr.mutable_data()[i] = c.points[i].second;
        }
        return py::make_tuple(fpr, tpr, c.auc);
      },
      py::arg("neg"), py::arg("pos"));

  m.def(
      "type2_first_term",
      [](std::size_t n_prime, double p, const std::string& phi, double epsilon, double delta,
         std::optional<double> alpha) {
        return to_python(type2_first_term(n_prime, p, parse_phi(phi), epsilon, delta, alpha).to_json());
      },
      py::arg("n_prime"), py::arg("p") = 0.5, py::arg("phi") = "mww", py::arg("epsilon") = 0.2,
      py::arg("delta") = 0.0, py::arg("alpha") = py::none());

  m.def(
      "epsilon_for_model",
      [](const std::string& model, std::size_t d, double rho, const std::string& phi, std::size_t m_draws,
         std::uint64_t seed) {
        RngStream rng(seed, 0);
        const auto e = epsilon_for_model(ModelSpec::make(parse_model_id(model), d, rho), parse_phi(phi), m_draws, rng);
        py::dict out;
        out["epsilon"] = e.epsilon;
        out["stderr"] = e.stderr_;
        out["auc"] = e.auc;
        return out;
      },
      py::arg("model"), py::arg("d"), py::arg("rho"), py::arg("phi") = "mww", py::arg("m") = 100000,
      py::arg("seed") = 0);

  m.def(
      "run_experiment",
      [](const py::dict& plan, bool write_files) {
        const auto p = ExperimentPlan::from_json(from_python(plan));
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(p, write_files);
        }
        py::list rows;
        for (const auto& r : result.rows) {
          py::dict d;
          d["model"] = r.model;
          d["d"] = r.d;
          d["n_total"] = r.n_total;
          d["rho"] = r.rho;
          d["method"] = r.method;
          d["accounting"] = to_string(r.accounting);
          d["alpha"] = r.alpha;
          d["rejection_rate"] = r.rejection_rate;
          d["ci_half_width"] = r.ci_half_width;
          d["std_dev"] = r.std_dev;
          d["b_effective"] = r.b_effective;
          d["runtime_seconds"] = r.runtime_seconds;
          d["seed"] = r.seed;
          rows.append(d);
        }
        return rows;
      },
      py::arg("plan"), py::arg("write_files") = false);
}
