#include "qwts/closed_form.hpp"
#include "qwts/errors.hpp"
#include "qwts/forecast.hpp"
#include "qwts/path_oracle.hpp"
#include "qwts/walk.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qwts;

namespace {

std::vector<Point> to_points(py::array_t<double, py::array::c_style | py::array::forcecast> data) {
    const auto buf = data.request();
    if (buf.ndim != 1 && buf.ndim != 2) throw std::invalid_argument("series must be 1-D or 2-D (T x d)");
    const auto rows = static_cast<std::size_t>(buf.shape[0]);
    const auto cols = buf.ndim == 1 ? std::size_t{1} : static_cast<std::size_t>(buf.shape[1]);
    const auto* ptr = static_cast<const double*>(buf.ptr);
    std::vector<Point> out(rows, Point(cols));
    for (std::size_t t = 0; t < rows; ++t) {
        for (std::size_t k = 0; k < cols; ++k) out[t][k] = ptr[t * cols + k];
    }
    return out;
}

SearchOptions make_options(WalkFamily family, std::optional<std::vector<int>> resolution, double eps_tie,
                           double eps_const, bool refine, unsigned threads) {
    SearchOptions o = SearchOptions::defaults(family);
    if (resolution) {
        o.grid = resolution->size() == 1 ? GridSpec::uniform(family, resolution->front()) : GridSpec{*resolution};
    }
    o.eps_tie = eps_tie;
    o.eps_const = eps_const;
    o.refine = refine;
    o.threads = threads;
    return o;
}

py::dict estimate_to_dict(const StepEstimate& est) {
    py::dict d;
    d["time"] = est.time;
    d["value"] = est.value;
    d["model_value"] = est.model_value;
    d["argmin_set"] = est.argmin_set;
    d["v_min"] = est.v_min;
    d["rule"] = std::string(to_string(est.rule));
    return d;
}

py::array_t<int> sites_array(const Distribution& dist) {
    const auto& w = dist.window();
    const auto d = static_cast<py::ssize_t>(w.dimension());
    py::array_t<int> out({static_cast<py::ssize_t>(w.size()), d});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Site s = w.site(i);
        view(static_cast<py::ssize_t>(i), 0) = s.x1;
        if (d == 2) view(static_cast<py::ssize_t>(i), 1) = s.x2;
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quantum-walk time-series model: walk engine, path oracle, closed forms, forecaster";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<OracleCapError>(m, "OracleCapError", PyExc_ValueError);

    py::enum_<WalkFamily>(m, "WalkFamily")
        .value("TwoState1D", WalkFamily::TwoState1D)
        .value("ThreeState1D", WalkFamily::ThreeState1D)
        .value("FourState2D", WalkFamily::FourState2D);

    py::class_<WalkSpec>(m, "WalkSpec")
        .def_static("angle", [](double theta, double xi) {
            return WalkSpec(WalkFamily::TwoState1D, CoinParam::angle(theta), InitParam{{xi}});
        }, py::arg("theta"), py::arg("xi"), "Two-state walk in angle form")
        .def_static("raw", [](WalkFamily family, double coin, std::vector<double> init) {
            return WalkSpec(family, CoinParam::raw(coin), InitParam{std::move(init)});
        }, py::arg("family"), py::arg("coin"), py::arg("init"))
        .def_static("from_point", [](WalkFamily family, std::vector<double> point) {
            return WalkSpec::from_point(family, point);
        }, py::arg("family"), py::arg("point"))
        .def_property_readonly("family", &WalkSpec::family)
        .def("coin", &WalkSpec::coin)
        .def("initial_state", &WalkSpec::initial_state);

    py::class_<Distribution>(m, "Distribution")
        .def_property_readonly("time", &Distribution::time)
        .def_property_readonly("dimension", &Distribution::dimension)
        .def_property_readonly("masses", [](const Distribution& d) {
            const auto s = d.masses();
            return py::array_t<double>(static_cast<py::ssize_t>(s.size()), s.data());
        })
        .def_property_readonly("sites", &sites_array)
        .def("at", [](const Distribution& d, int x1, int x2) { return d.at({x1, x2}); }, py::arg("x1"),
             py::arg("x2") = 0)
        .def("total", &Distribution::total)
        .def("expectation", [](const Distribution& d) { return expectation(d); });

    m.def("build_coin", [](WalkFamily family, double value) { return build_coin(family, CoinParam::raw(value)); },
          py::arg("family"), py::arg("value"));
    m.def("build_coin_angle", &build_coin_angle, py::arg("theta"));
    m.def("build_initial_state",
          [](WalkFamily family, std::vector<double> init) { return build_initial_state(family, InitParam{std::move(init)}); },
          py::arg("family"), py::arg("init"));
    m.def("simulate", [](const WalkSpec& spec, int steps) { return distribution(evolve(spec, steps)); },
          py::arg("spec"), py::arg("steps"), "Distribution mu_n after `steps` steps");

    m.def("oracle_distribution",
          [](const Eigen::Matrix2cd& coin, const Eigen::Vector2cd& phi, int steps, int cap) {
              return oracle::oracle_distribution(coin, phi, steps, cap);
          },
          py::arg("coin"), py::arg("phi"), py::arg("steps"), py::arg("cap") = oracle::kDefaultCap);
    m.def("path_sum", &oracle::path_sum, py::arg("coin"), py::arg("left"), py::arg("right"),
          py::arg("cap") = oracle::kDefaultCap);

    m.def("v1_closed", [](double x1, double theta, double xi) { return closed_form::v1(x1, {theta, xi}); },
          py::arg("x1"), py::arg("theta"), py::arg("xi"));
    m.def("e2_closed", [](double theta, double xi) { return closed_form::e2({theta, xi}); }, py::arg("theta"),
          py::arg("xi"));
    m.def("e3_closed", [](double theta, double xi) { return closed_form::e3({theta, xi}); }, py::arg("theta"),
          py::arg("xi"));
    m.def("en_series", [](double theta, double xi, int n) { return closed_form::en_series({theta, xi}, n); },
          py::arg("theta"), py::arg("xi"), py::arg("n"));

    m.def("evaluate_v",
          [](py::array_t<double> series, const WalkSpec& spec, int n, double scale) {
              return evaluate_v(Series::from_raw(to_points(series), scale), spec, n);
          },
          py::arg("series"), py::arg("spec"), py::arg("n"), py::arg("scale") = 1.0);

    m.def("minimize_v",
          [](py::array_t<double> series, WalkFamily family, int n, std::optional<std::vector<int>> resolution,
             double eps_tie, double eps_const, bool refine, unsigned threads, double scale) {
              const auto min = minimize_v(Series::from_raw(to_points(series), scale), family,
                                          make_options(family, resolution, eps_tie, eps_const, refine, threads), n);
              py::dict d;
              d["argmin_set"] = min.argmin_set;
              d["next_means"] = min.next_means;
              d["v_min"] = min.v_min;
              d["v_max"] = min.v_max;
              d["constant"] = min.constant;
              return d;
          },
          py::arg("series"), py::arg("family"), py::arg("n"), py::arg("resolution") = py::none(),
          py::arg("eps_tie") = 1e-9, py::arg("eps_const") = 1e-9, py::arg("refine") = false, py::arg("threads") = 0u,
          py::arg("scale") = 1.0);

    m.def("estimate_next",
          [](py::array_t<double> series, WalkFamily family, int n, std::optional<std::vector<int>> resolution,
             double eps_tie, double eps_const, bool refine, unsigned threads, double scale) {
              return estimate_to_dict(estimate_next(Series::from_raw(to_points(series), scale), family,
                                                    make_options(family, resolution, eps_tie, eps_const, refine, threads),
                                                    n));
          },
          py::arg("series"), py::arg("family"), py::arg("n"), py::arg("resolution") = py::none(),
          py::arg("eps_tie") = 1e-9, py::arg("eps_const") = 1e-9, py::arg("refine") = false, py::arg("threads") = 0u,
          py::arg("scale") = 1.0);

    m.def("rolling_forecast",
          [](py::array_t<double> series, WalkFamily family, std::optional<std::vector<int>> resolution, double eps_tie,
             double eps_const, bool refine, unsigned threads, double scale) {
              const auto trace = rolling_forecast(Series::from_raw(to_points(series), scale), family,
                                                  make_options(family, resolution, eps_tie, eps_const, refine, threads));
              py::list out;
              for (const auto& est : trace.steps) out.append(estimate_to_dict(est));
              return out;
          },
          py::arg("series"), py::arg("family") = WalkFamily::TwoState1D, py::arg("resolution") = py::none(),
          py::arg("eps_tie") = 1e-9, py::arg("eps_const") = 1e-9, py::arg("refine") = false, py::arg("threads") = 0u,
          py::arg("scale") = 1.0);
}
