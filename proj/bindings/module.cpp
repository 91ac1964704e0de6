// Python bindings for the core operations: reflection maps, Brownian
// sampling, the approximation drivers and their correction statistics, the
// coupled integrators and the convergence studies.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rsde/config.hpp"
#include "rsde/csv.hpp"
#include "rsde/integrate.hpp"
#include "rsde/stats.hpp"
#include "rsde/study.hpp"

namespace py = pybind11;
using namespace rsde;

namespace {

py::array_t<double> matrix_to_numpy(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    auto buf = out.mutable_unchecked<2>();
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) buf(i, j) = m(i, j);
    }
    return out;
}

py::array_t<double> path_to_numpy(const SampledPath& p) {
    py::array_t<double> out({static_cast<py::ssize_t>(p.n_nodes()),
                             static_cast<py::ssize_t>(p.dim())});
    auto buf = out.mutable_unchecked<2>();
    for (py::ssize_t j = 0; j < buf.shape(0); ++j) {
        const auto node = p.node(j);
        for (py::ssize_t i = 0; i < buf.shape(1); ++i) buf(j, i) = node[i];
    }
    return out;
}

SampledPath path_from_numpy(const TimeGrid& grid, py::array_t<double, py::array::c_style> values) {
    const auto info = values.request();
    if (info.ndim != 2) throw ConfigError("path values must be 2-d (nodes x dim)");
    const auto n_nodes = static_cast<std::int64_t>(info.shape[0]);
    const int dim = static_cast<int>(info.shape[1]);
    if (n_nodes != grid.n_fine + 1) throw ConfigError("path values must have n_fine + 1 rows");
    std::vector<double> flat(static_cast<std::size_t>(n_nodes) * dim);
    const auto* src = static_cast<const double*>(info.ptr);
    std::copy(src, src + flat.size(), flat.begin());
    return SampledPath(grid, dim, std::move(flat));
}

py::array_t<double> vector_to_numpy(const std::vector<double>& v) {
    py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::dict reflected_to_dict(const SampledPath& x, const SampledPath& k,
                           const std::vector<double>& ktv) {
    py::dict out;
    out["x"] = path_to_numpy(x);
    out["k"] = path_to_numpy(k);
    out["k_tv"] = vector_to_numpy(ktv);
    return out;
}

py::dict estimate_to_dict(const MatrixEstimate& est) {
    py::dict out;
    out["value"] = matrix_to_numpy(est.value);
    out["stderr"] = matrix_to_numpy(est.stderr_);
    out["n_samples"] = est.n_samples;
    return out;
}

py::dict correction_to_dict(const CorrectionMatrix& cm) {
    py::dict out;
    out["c"] = matrix_to_numpy(cm.c);
    out["s"] = matrix_to_numpy(cm.s);
    out["stderr_s"] = matrix_to_numpy(cm.stderr_s);
    out["n_samples"] = cm.n_samples;
    out["provenance"] =
        cm.provenance == CorrectionMatrix::Provenance::limit ? "limit" : "monte_carlo";
    return out;
}

Matrix matrix_from_numpy(py::array_t<double, py::array::c_style> arr) {
    const auto info = arr.request();
    if (info.ndim != 2) throw ConfigError("matrix must be 2-d");
    Matrix m(static_cast<int>(info.shape[0]), static_cast<int>(info.shape[1]));
    const auto* src = static_cast<const double*>(info.ptr);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) m(i, j) = src[i * m.cols() + j];
    }
    return m;
}

py::dict report_to_dict(const ConvergenceReport& rep) {
    py::dict out;
    py::list rows;
    for (const auto& row : rep.rows) {
        py::dict r;
        r["delta"] = row.delta;
        r["n_delta"] = row.n_delta;
        r["p"] = row.p;
        r["error"] = row.error;
        r["stderr"] = row.stderr_;
        r["n_paths"] = row.n_paths;
        rows.append(std::move(r));
    }
    out["rows"] = std::move(rows);
    py::list slopes;
    for (const auto& [p, fit] : rep.slopes) {
        py::dict s;
        s["p"] = p;
        s["slope"] = fit.slope;
        s["intercept"] = fit.intercept;
        s["slope_stderr"] = fit.slope_stderr;
        s["n_used"] = fit.n_used;
        slopes.append(std::move(s));
    }
    out["slopes"] = std::move(slopes);
    py::dict diag;
    diag["proxy_bias"] = rep.diagnostics.proxy_bias;
    diag["correction_deviation"] = rep.diagnostics.correction_deviation;
    diag["correction_deviation_stderr"] = rep.diagnostics.correction_deviation_stderr;
    out["diagnostics"] = std::move(diag);
    return out;
}

Interpolant make_interp(const py::object& spec) {
    if (py::isinstance<py::str>(spec)) return Interpolant::from_name(spec.cast<std::string>());
    return Interpolant::from_coeffs(spec.cast<std::vector<double>>());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "reflected SDEs driven by generalized Brownian approximations";

    py::register_exception<IoError>(m, "IoError");
    py::register_exception<DomainError>(m, "DomainError");
    py::register_exception<ConfigError>(m, "ConfigurationError");
    py::register_exception<NumericError>(m, "NumericError");

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, std::int64_t>(), py::arg("horizon"), py::arg("n_fine"))
        .def_readonly("horizon", &TimeGrid::horizon)
        .def_readonly("n_fine", &TimeGrid::n_fine)
        .def_property_readonly("dt", &TimeGrid::dt)
        .def("node_time", &TimeGrid::node_time);

    py::class_<SampledPath>(m, "SampledPath")
        .def(py::init(&path_from_numpy), py::arg("grid"), py::arg("values"))
        .def_property_readonly("grid", &SampledPath::grid)
        .def_property_readonly("dim", &SampledPath::dim)
        .def_property_readonly("values", &path_to_numpy)
        .def("eval",
             [](const SampledPath& p, double t) {
                 Vec out(p.dim());
                 p.eval(t, out);
                 return out;
             });

    py::class_<DomainShape>(m, "DomainShape")
        .def_static("half_line", &DomainShape::half_line, py::arg("origin") = 0.0)
        .def_static("interval", &DomainShape::interval, py::arg("a"), py::arg("b"))
        .def_static("box", &DomainShape::box, py::arg("lo"), py::arg("hi"))
        .def_static("ball", &DomainShape::ball, py::arg("center"), py::arg("radius"))
        .def_static("polytope", &DomainShape::polytope, py::arg("normals"), py::arg("offsets"),
                    py::arg("interior_witness"))
        .def_property_readonly("dim", &DomainShape::dim)
        .def_property_readonly("bounded", &DomainShape::bounded)
        .def_property_readonly("kind", &DomainShape::kind_name)
        .def("project", [](const DomainShape& d, const Vec& y) { return d.project(y); })
        .def("contains",
             [](const DomainShape& d, const Vec& x, double slack) { return d.contains(x, slack); },
             py::arg("x"), py::arg("slack") = tol::proj)
        .def("boundary_distance",
             [](const DomainShape& d, const Vec& x) { return d.boundary_distance(x); });

    py::class_<BrownianPath>(m, "BrownianPath")
        .def_property_readonly("path", [](const BrownianPath& w) { return w.path; })
        .def_property_readonly("values", [](const BrownianPath& w) { return path_to_numpy(w.path); })
        .def_readonly("seed", &BrownianPath::seed)
        .def_readonly("generator_id", &BrownianPath::generator_id)
        .def_property_readonly("r", &BrownianPath::r);

    m.def("sample_brownian", &sample_brownian, py::arg("grid"), py::arg("r"), py::arg("seed"));
    m.def("zero_brownian", &zero_brownian, py::arg("grid"), py::arg("r"));

    m.def(
        "skorohod_halfline",
        [](const SampledPath& h, double origin) {
            const ReflectedPair rp = skorohod_halfline(h, origin);
            return reflected_to_dict(rp.x, rp.k, rp.k_tv);
        },
        py::arg("h"), py::arg("origin") = 0.0);
    m.def(
        "skorohod_interval",
        [](const SampledPath& h, double a, double b) {
            const ReflectedPair rp = skorohod_interval(h, a, b);
            return reflected_to_dict(rp.x, rp.k, rp.k_tv);
        },
        py::arg("h"), py::arg("a"), py::arg("b"));
    m.def(
        "skorohod_reflect",
        [](const DomainShape& d, const SampledPath& h) {
            const ReflectedPair rp = skorohod_reflect(d, h);
            return reflected_to_dict(rp.x, rp.k, rp.k_tv);
        },
        py::arg("domain"), py::arg("h"));
    m.def(
        "reflect_increment",
        [](const DomainShape& d, const Vec& x, const Vec& delta) {
            const ReflectStep step = reflect_increment(d, x, delta);
            return py::make_tuple(step.x_new, step.dk);
        },
        py::arg("domain"), py::arg("x"), py::arg("delta"));
    m.def("total_variation", &total_variation, py::arg("path"), py::arg("s"), py::arg("t"));

    py::class_<ApproxDriver>(m, "ApproxDriver")
        .def_static(
            "piecewise_linear",
            [](const py::object& f, double delta) {
                return ApproxDriver::piecewise_linear(make_interp(f), delta);
            },
            py::arg("f"), py::arg("delta"))
        .def_static(
            "mollifier",
            [](const std::string& rho, double delta, int quad_points) {
                return ApproxDriver::mollifier(Kernel::from_name(rho), delta, quad_points);
            },
            py::arg("rho"), py::arg("delta"), py::arg("quad_points") = 32)
        .def_static(
            "mcshane",
            [](const py::object& f1, const py::object& f2, double delta) {
                return ApproxDriver::mcshane(make_interp(f1), make_interp(f2), delta);
            },
            py::arg("f1"), py::arg("f2"), py::arg("delta"))
        .def_property_readonly("delta", &ApproxDriver::delta)
        .def_property_readonly("kind", &ApproxDriver::kind_name)
        .def("eval_G",
             [](const ApproxDriver& d, const BrownianPath& w, double t) { return d.eval_G(w, t); })
        .def("eval_G_dot", [](const ApproxDriver& d, const BrownianPath& w, double t) {
            return d.eval_G_dot(w, t);
        })
        .def("eval_B_shifted", [](const ApproxDriver& d, const BrownianPath& w, double t) {
            return d.eval_B_shifted(w, t);
        });

    m.def(
        "estimate_s",
        [](const ApproxDriver& d, int r, double t, std::int64_t n, std::uint64_t seed, int substeps,
           int threads) { return correction_to_dict(estimate_s(d, r, t, n, seed, substeps, threads)); },
        py::arg("driver"), py::arg("r"), py::arg("t"), py::arg("n_samples"), py::arg("seed"),
        py::arg("substeps") = kDefaultSubsteps, py::arg("threads") = 0);
    m.def(
        "estimate_c",
        [](const ApproxDriver& d, int r, double t, std::int64_t n, std::uint64_t seed, int substeps,
           int threads) {
            const CEstimate est = estimate_c(d, r, t, n, seed, substeps, threads);
            py::dict out = estimate_to_dict(est.raw);
            out["induced"] = correction_to_dict(est.induced);
            return out;
        },
        py::arg("driver"), py::arg("r"), py::arg("t"), py::arg("n_samples"), py::arg("seed"),
        py::arg("substeps") = kDefaultSubsteps, py::arg("threads") = 0);
    m.def(
        "estimate_c_star",
        [](const ApproxDriver& d, int r, double t, std::int64_t n, std::uint64_t seed, int substeps,
           int threads) {
            return estimate_to_dict(estimate_c_star(d, r, t, n, seed, substeps, threads));
        },
        py::arg("driver"), py::arg("r"), py::arg("t"), py::arg("n_samples"), py::arg("seed"),
        py::arg("substeps") = kDefaultSubsteps, py::arg("threads") = 0);
    m.def(
        "limit_correction",
        [](const ApproxDriver& d, int r) { return correction_to_dict(limit_correction(d, r)); },
        py::arg("driver"), py::arg("r"));
    m.def(
        "moment_scaling_check",
        [](const ApproxDriver& proto, int r, int p, const std::vector<double>& deltas,
           std::int64_t n, std::uint64_t seed) {
            const ScalingCheck sc = moment_scaling_check(proto, r, p, deltas, n, seed);
            py::list rows;
            for (const auto& row : sc.rows) {
                py::dict x;
                x["delta"] = row.delta;
                x["estimate"] = row.estimate;
                x["stderr"] = row.stderr_;
                x["ratio"] = row.ratio;
                rows.append(std::move(x));
            }
            py::dict out;
            out["p"] = sc.p;
            out["rows"] = std::move(rows);
            out["ratio_spread"] = sc.ratio_spread();
            return out;
        },
        py::arg("driver"), py::arg("r"), py::arg("p"), py::arg("deltas"), py::arg("n_samples"),
        py::arg("seed"));

    m.def("coefficients_preset", &coefficients_preset, py::arg("name"), py::arg("r") = 1,
          py::arg("params") = std::vector<double>{});
    py::class_<Coefficients>(m, "Coefficients")
        .def_readonly("d", &Coefficients::d)
        .def_readonly("r", &Coefficients::r)
        .def_readonly("name", &Coefficients::name);
    m.def(
        "corrected_drift",
        [](const Coefficients& coeffs, py::array_t<double, py::array::c_style> c, const Vec& x) {
            return corrected_drift(coeffs, matrix_from_numpy(c), x);
        },
        py::arg("coeffs"), py::arg("c"), py::arg("x"));

    py::class_<ReflectedSolution>(m, "ReflectedSolution")
        .def_property_readonly("x", [](const ReflectedSolution& s) { return path_to_numpy(s.x); })
        .def_property_readonly("k", [](const ReflectedSolution& s) { return path_to_numpy(s.k); })
        .def_property_readonly("k_tv",
                               [](const ReflectedSolution& s) { return vector_to_numpy(s.k_tv); })
        .def_property_readonly("grid", [](const ReflectedSolution& s) { return s.x.grid(); });

    m.def(
        "integrate_ito_reflected",
        [](const Coefficients& coeffs, const DomainShape& domain, const BrownianPath& w,
           py::array_t<double, py::array::c_style> c, const Vec& x0) {
            return integrate_ito_reflected(coeffs, domain, w, matrix_from_numpy(c), x0);
        },
        py::arg("coeffs"), py::arg("domain"), py::arg("w"), py::arg("c"), py::arg("x0"));
    m.def("integrate_driven_reflected",
          [](const Coefficients& coeffs, const DomainShape& domain, const ApproxDriver& driver,
             const BrownianPath& w, const Vec& x0) {
              return integrate_driven_reflected(coeffs, domain, driver, w, x0);
          },
          py::arg("coeffs"), py::arg("domain"), py::arg("driver"), py::arg("w"), py::arg("x0"));
    m.def("coupled_sup_error", &coupled_sup_error, py::arg("a"), py::arg("b"), py::arg("p"));

    m.def(
        "run_convergence_study_config",
        [](const std::string& toml_text) {
            const ConfigFile cfg = ConfigFile::parse_string(toml_text);
            return report_to_dict(run_convergence_study(build_study(cfg)));
        },
        py::arg("toml_text"), "Run a study from the declarative config format (as a string).");
    m.def(
        "run_convergence_study_file",
        [](const std::string& path) {
            const ConfigFile cfg = ConfigFile::parse_file(path);
            return report_to_dict(run_convergence_study(build_study(cfg)));
        },
        py::arg("path"));
    m.def(
        "verify_recursion",
        [](const ApproxDriver& d, int r, int k_max, std::int64_t n, std::uint64_t seed) {
            const RecursionReport rep = verify_recursion(d, r, k_max, n, seed);
            py::list rows;
            for (const auto& row : rep.rows) {
                py::dict x;
                x["k"] = row.k;
                x["residual"] = matrix_to_numpy(row.residual);
                x["band"] = matrix_to_numpy(row.band);
                x["pass"] = row.pass;
                rows.append(std::move(x));
            }
            py::dict out;
            out["rows"] = std::move(rows);
            out["all_pass"] = rep.all_pass;
            return out;
        },
        py::arg("driver"), py::arg("r"), py::arg("k_max"), py::arg("n_samples"), py::arg("seed"));
    m.def(
        "verify_correction_trend",
        [](const ApproxDriver& d, int r, const std::vector<double>& deltas, double q,
           std::int64_t n, std::uint64_t seed) {
            const TrendReport rep = verify_correction_trend(d, r, deltas, q, n, seed);
            py::list rows;
            for (const auto& row : rep.rows) {
                py::dict x;
                x["delta"] = row.delta;
                x["k"] = row.k;
                x["deviation"] = row.deviation;
                x["deviation_stderr"] = row.deviation_stderr;
                rows.append(std::move(x));
            }
            py::dict out;
            out["rows"] = std::move(rows);
            out["pass"] = rep.pass;
            return out;
        },
        py::arg("driver"), py::arg("r"), py::arg("deltas"), py::arg("q"), py::arg("n_samples"),
        py::arg("seed"));

    m.attr("GENERATOR_ID") = kGeneratorId;
    m.attr("__version__") = "0.1.0";
}
