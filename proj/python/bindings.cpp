#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parhom/diagnostics.hpp"
#include "parhom/experiments.hpp"

namespace py = pybind11;
using namespace parhom;

namespace {

py::dict norms_dict(const ErrorNorms& e) {
    py::dict d;
    d["l1"] = e.l1;
    d["l2"] = e.l2;
    d["linf"] = e.linf;
    d["h1"] = e.h1;
    return d;
}

py::dict result_dict(const RunResult& r) {
    py::dict d;
    d["medium"] = r.config.medium_family;
    d["seed"] = r.config.seed;
    d["fine_n"] = r.config.fine_n;
    d["n_fine_steps"] = r.n_fine;
    d["coarse_steps"] = r.m_steps;
    d["lambda_min"] = r.lambda_min;
    d["min_det"] = r.min_det;
    d["degenerate_levels"] = r.degenerate_levels;
    if (r.has_cordes) {
        py::dict c;
        c["beta"] = r.cordes.beta;
        c["mu"] = r.cordes.mu;
        c["z"] = r.cordes.z;
        c["y"] = r.cordes.y;
        c["delta"] = r.cordes.delta;
        c["epsilon"] = r.cordes.epsilon;
        c["lhs"] = r.cordes.lhs;
        c["condition_1_1"] = r.cordes.condition_1_1;
        d["cordes"] = c;
    }
    if (r.has_compensation) d["compensation_ratio"] = r.compensation;
    py::list coarse;
    for (const auto& cr : r.coarse) {
        py::dict c;
        c["coarse_n"] = cr.coarse_n;
        c["dofs"] = cr.dofs;
        c["final_fine"] = norms_dict(cr.final_fine);
        c["final_coarse"] = norms_dict(cr.final_coarse);
        c["stability_c"] = cr.stability_c;
        c["compression"] = cr.compression;
        if (cr.has_semidiscrete)
            c["semidiscrete_final_fine"] = norms_dict(cr.semidiscrete_final_fine);
        coarse.append(c);
    }
    d["coarse_runs"] = coarse;
    d["wall_seconds"] = r.wall_seconds;
    return d;
}

}  // namespace

PYBIND11_MODULE(_parhom, m) {
    m.doc() = "multiscale parabolic homogenization toolkit";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NoConvergenceError>(m, "NoConvergenceError", PyExc_RuntimeError);

    m.def("canonical_config", [](const std::string& text) {
        return config_json(parse_config_json(text));
    });
    m.def("config_hash", [](const std::string& text) {
        return config_hash(parse_config_json(text));
    });
    m.def("run_experiment", [](const std::string& text) {
        return result_dict(run_experiment(parse_config_json(text)));
    });
    m.def(
        "run_suite",
        [](const std::string& name, int fine_n, std::uint64_t seed, const std::string& out_dir) {
            SuiteOptions opts;
            opts.fine_n = fine_n;
            opts.seed = seed;
            opts.output_dir = out_dir;
            py::list out;
            for (const auto& r : run_suite(name, opts)) out.append(result_dict(r));
            return out;
        },
        py::arg("name"), py::arg("fine_n") = 32, py::arg("seed") = 1, py::arg("out_dir") = "out");
    m.def("cordes_beta_const", [](double a11, double a12, double a22) {
        SigmaField s;
        s.levels = {0};
        s.per_level = {{SymTensor2{a11, a12, a22}}};
        return cordes_beta(s);
    });
    m.attr("__version__") = "1.0.0";
}
