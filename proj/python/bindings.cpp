#include "specscreen/aggregate.hpp"
#include "specscreen/corrcore.hpp"
#include "specscreen/error.hpp"
#include "specscreen/pipeline.hpp"
#include "specscreen/report.hpp"
#include "specscreen/screen.hpp"
#include "specscreen/synth.hpp"
#include "specscreen/theory.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace specscreen;

namespace {

TheoryParams params(std::size_t p, std::size_t m, std::size_t delta, double rho, double J) {
    return TheoryParams{p, m, delta, rho, J};
}

py::dict report_dict(const HubReport& r) {
    py::list vertices;
    for (const auto& v : r.vertices)
        vertices.append(py::dict(py::arg("vertex") = v.vertex, py::arg("name") = v.name, py::arg("degree") = v.degree,
                                 py::arg("rho_j") = v.rho_j, py::arg("pvalue") = v.pvalue));
    return py::dict(py::arg("frequency") = r.frequency, py::arg("bin") = r.bin, py::arg("mode") = to_string(r.mode),
                    py::arg("delta") = r.delta, py::arg("rho") = r.rho, py::arg("critical_rho") = r.critical_rho,
                    py::arg("hubs") = r.hubs(), py::arg("vertices") = vertices, py::arg("warnings") = r.warnings);
}

}  // namespace

PYBIND11_MODULE(_specscreen, m) {
    m.doc() = "Correlation hub screening of multichannel time series in the frequency domain";

    auto base = py::register_exception<Error>(m, "SpecscreenError", PyExc_RuntimeError);
    static py::exception<Error> config_error(m, "ConfigError", base.ptr());
    static py::exception<Error> data_error(m, "DataError", base.ptr());
    static py::exception<Error> numeric_error(m, "NumericError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            switch (e.kind()) {
                case ErrorKind::Config: py::set_error(config_error, e.what()); return;
                case ErrorKind::Data: py::set_error(data_error, e.what()); return;
                case ErrorKind::Numeric: py::set_error(numeric_error, e.what()); return;
            }
            throw;
        }
    });

    m.def("p0", &p0, py::arg("rho"), py::arg("m"));
    m.def(
        "mean_hub_count",
        [](std::size_t p, std::size_t mm, std::size_t delta, double rho, double J) {
            return mean_hub_count(params(p, mm, delta, rho, J));
        },
        py::arg("p"), py::arg("m"), py::arg("delta"), py::arg("rho"), py::arg("J") = 1.0);
    m.def(
        "false_positive_prob",
        [](std::size_t p, std::size_t mm, std::size_t delta, double rho, double J) {
            return false_positive_prob(params(p, mm, delta, rho, J));
        },
        py::arg("p"), py::arg("m"), py::arg("delta"), py::arg("rho"), py::arg("J") = 1.0);
    m.def("sphere_area_complex", &sphere_area_complex, py::arg("m"));
    m.def("critical_threshold_closed", &try_critical_threshold_closed, py::arg("p"), py::arg("m"), py::arg("delta"),
          py::arg("J") = 1.0, "Closed-form critical threshold, or None outside its validity range");
    m.def("critical_threshold_numeric", &critical_threshold_numeric, py::arg("p"), py::arg("m"), py::arg("delta"),
          py::arg("J") = 1.0);
    m.def("resolve_auto_threshold", &resolve_auto_threshold, py::arg("p"), py::arg("m"), py::arg("delta"),
          py::arg("alpha") = 0.01, py::arg("J") = 1.0);

    m.def("disjunctive", [](std::vector<double> pv) { return disjunctive(pv); }, py::arg("pvalues"));
    m.def("conjunctive", [](std::vector<double> pv) { return conjunctive(pv); }, py::arg("pvalues"));
    m.def("persistent", [](std::vector<double> pv, std::size_t K) { return persistent(pv, K); }, py::arg("pvalues"),
          py::arg("K"));

    m.def(
        "uscores", [](const Eigen::MatrixXcd& samples) { return uscores(samples).values(); }, py::arg("samples"),
        "U-scores of an m x p complex sample matrix");
    m.def(
        "correlation", [](const Eigen::MatrixXcd& samples) { return uscores(samples).gram().values(); },
        py::arg("samples"));
    m.def(
        "partial_correlation",
        [](const Eigen::MatrixXcd& samples) { return partial_correlation(uscores(samples).gram()).values(); },
        py::arg("samples"), "Normalized inverse of the sample correlation (needs m > p)");
    m.def(
        "partial_uscores", [](const Eigen::MatrixXcd& samples) { return uscores_partial(uscores(samples)).values(); },
        py::arg("samples"), "Partial U-scores (needs p >= m-1)");
    m.def(
        "hub_counts",
        [](const Eigen::MatrixXcd& samples, double rho, std::size_t delta) {
            const auto g = threshold_graph(uscores(samples).gram(), rho);
            return py::make_tuple(g.degrees, count_hubs(g, delta).members);
        },
        py::arg("samples"), py::arg("rho"), py::arg("delta"), "Vertex degrees and hub members at threshold rho");

    m.def(
        "screen",
        [](const Eigen::MatrixXd& data, std::size_t n, std::size_t delta, std::optional<double> rho,
           const std::string& mode, std::vector<std::size_t> bins, std::size_t discard, double J,
           std::vector<std::string> names) {
            ScreeningConfig config;
            config.window_length = n;
            config.delta = delta;
            config.rho = rho;
            config.mode = parse_screening_mode(mode);
            config.discard_prefix = discard;
            config.J = J;
            ScreeningRun run;
            {
                TimeSeriesMatrix ts(data, std::move(names));
                py::gil_scoped_release release;
                run = screen_series(ts, config, std::move(bins));
            }
            py::list reports;
            for (const auto& r : run.reports) reports.append(report_dict(r));
            return py::dict(py::arg("rho") = run.rho, py::arg("segment_count") = run.segment_count,
                            py::arg("reports") = reports);
        },
        py::arg("data"), py::arg("n") = 100, py::arg("delta") = 1, py::arg("rho") = py::none(),
        py::arg("mode") = "correlation", py::arg("bins") = std::vector<std::size_t>{}, py::arg("discard") = 0,
        py::arg("J") = 1.0, py::arg("names") = std::vector<std::string>{},
        "Screen an N x p real series; rho=None picks the threshold automatically");

    m.def("gen_iid_complex_gaussian",
          py::overload_cast<std::size_t, std::size_t, std::uint64_t>(&gen_iid_complex_gaussian), py::arg("p"),
          py::arg("m"), py::arg("seed"));
    m.def(
        "monte_carlo_hub_count",
        [](std::size_t p, std::size_t mm, double rho, std::size_t delta, std::size_t trials, std::uint64_t seed) {
            const auto est = monte_carlo_hub_counts(p, mm, rho, delta, trials, seed);
            return py::make_tuple(est.mean, est.stderr_);
        },
        py::arg("p"), py::arg("m"), py::arg("rho"), py::arg("delta"), py::arg("trials"), py::arg("seed"));
    m.def("fir_bandpass", [](double lo, double hi, std::size_t taps) { return fir_bandpass(lo, hi, taps); },
          py::arg("f_lo"), py::arg("f_hi"), py::arg("taps") = 501);
}
