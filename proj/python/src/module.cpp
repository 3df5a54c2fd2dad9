#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ffspec/errors.hpp"
#include "ffspec/ffop.hpp"
#include "ffspec/forward.hpp"
#include "ffspec/io.hpp"
#include "ffspec/phaseless.hpp"
#include "ffspec/scenario.hpp"
#include "ffspec/specfun.hpp"

namespace py = pybind11;
using namespace ffspec;

namespace {

Eigen::MatrixXd nodes_matrix(const DirectionRule& rule) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rule.size()), 3);
    for (std::size_t i = 0; i < rule.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rule.nodes[i].transpose();
    return m;
}

PairScheme scheme_from(const std::string& kind, std::size_t reference) {
    if (kind == "full-pairs" || kind == "full") return PairScheme::full();
    if (kind == "fixed-reference" || kind == "fixed") return PairScheme::fixed(reference);
    throw DomainError("unknown pair scheme '" + kind + "' (expected full-pairs or fixed-reference)");
}

specfun::SeriesTruncation truncation_for(const ScattererSpec& spec, int max_order) {
    if (max_order <= 0) return default_truncation(spec.wavenumber * spec.radius());
    specfun::SeriesTruncation t;
    t.max_order = max_order;
    return t;
}

}  // namespace

PYBIND11_MODULE(_ffspec, m) {
    m.doc() = "Far-field operator spectra and phaseless inverse scattering";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
    py::register_exception<SolveError>(m, "SolveError", base.ptr());
    py::register_exception<InconsistentDataError>(m, "InconsistentDataError", base.ptr());
    py::register_exception<AlignmentError>(m, "AlignmentError", base.ptr());
    py::register_exception<DisambiguationError>(m, "DisambiguationError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    // Special functions.
    m.def("sph_bessel_j", &specfun::sph_bessel_j, py::arg("l"), py::arg("x"));
    m.def("sph_bessel_y", &specfun::sph_bessel_y, py::arg("l"), py::arg("x"));
    m.def("sph_hankel1", &specfun::sph_hankel1, py::arg("l"), py::arg("x"));
    m.def("cyl_bessel_j", &specfun::cyl_bessel_j, py::arg("n"), py::arg("x"));
    m.def("cyl_bessel_y", &specfun::cyl_bessel_y, py::arg("n"), py::arg("x"));
    m.def("legendre_p", &specfun::legendre_p, py::arg("l"), py::arg("t"));

    // Direction rules.
    py::class_<DirectionRule>(m, "DirectionRule")
        .def_readonly("dimension", &DirectionRule::dimension)
        .def_readonly("exact_degree", &DirectionRule::exact_degree)
        .def_readonly("weights", &DirectionRule::weights)
        .def_readonly("antipode", &DirectionRule::antipode)
        .def_property_readonly("nodes", &nodes_matrix)
        .def("__len__", &DirectionRule::size)
        .def("total_weight", &DirectionRule::total_weight)
        .def("__repr__", [](const DirectionRule& r) {
            return "DirectionRule(dimension=" + std::to_string(r.dimension) + ", size=" + std::to_string(r.size()) + ")";
        });
    m.def("s2_rule", &build_s2_rule, py::arg("n_polar"), py::arg("n_azimuth"));
    m.def("s1_rule", &build_s1_rule, py::arg("n"));
    m.def("_rule_from_json", [](const std::string& text) { return io::rule_from_json(io::json::parse(text)); });

    // Scatterers and forward solves.
    py::class_<ScattererSpec>(m, "Scatterer")
        .def_readonly("dimension", &ScattererSpec::dimension)
        .def_readonly("wavenumber", &ScattererSpec::wavenumber)
        .def_property_readonly("scatterer_class", [](const ScattererSpec& s) { return to_string(s.scatterer_class()); })
        .def("describe", &ScattererSpec::describe)
        .def("to_json", [](const ScattererSpec& s) { return io::to_json(s).dump(); })
        .def("__repr__", [](const ScattererSpec& s) { return "Scatterer(" + s.describe() + ")"; });
    m.def(
        "_scatterer_from_json",
        [](const std::string& text, double k) { return io::scatterer_from_json(io::json::parse(text), k); },
        py::arg("text"), py::arg("k"));

    py::class_<FarFieldKernel>(m, "FarFieldKernel")
        .def_readonly("rule", &FarFieldKernel::rule)
        .def_readonly("values", &FarFieldKernel::values)
        .def_readonly("wavenumber", &FarFieldKernel::wavenumber)
        .def_readonly("dimension", &FarFieldKernel::dimension)
        .def("__len__", &FarFieldKernel::size);

    m.def(
        "mie_coefficients",
        [](const ScattererSpec& spec, int max_order) {
            return mie_coefficients(spec, truncation_for(spec, max_order));
        },
        py::arg("scatterer"), py::arg("max_order") = 0);
    m.def(
        "farfield_kernel",
        [](const ScattererSpec& spec, const DirectionRule& rule, int max_order) {
            if (max_order <= 0) return farfield_kernel(spec, rule);
            specfun::SeriesTruncation t;
            t.max_order = max_order;
            return farfield_kernel(spec, rule, t);
        },
        py::arg("scatterer"), py::arg("rule"), py::arg("max_order") = 0);
    m.def(
        "kernel_from_values",
        [](const DirectionRule& rule, const Eigen::MatrixXcd& values, double k) {
            if (values.rows() != static_cast<Eigen::Index>(rule.size()) || values.cols() != values.rows()) {
                throw DomainError("values must be an N x N matrix on the rule");
            }
            return FarFieldKernel{rule, values, k, rule.dimension};
        },
        py::arg("rule"), py::arg("values"), py::arg("k"));
    m.def("shift_kernel", &shift_kernel, py::arg("kernel"), py::arg("shift"));
    m.def("reciprocity_residual", &reciprocity_residual, py::arg("kernel"));
    m.def("relative_max_error", &relative_max_error, py::arg("a"), py::arg("b"));

    // Far-field operator.
    m.def(
        "eigenvalues", [](const FarFieldKernel& kernel) { return eigendecompose(assemble(kernel)).eigenvalues; },
        py::arg("kernel"));
    m.def(
        "_diagnose",
        [](const FarFieldKernel& kernel, int expected_sign) {
            const auto mat = assemble(kernel);
            return io::to_json(diagnose(mat, eigendecompose(mat), expected_sign)).dump();
        },
        py::arg("kernel"), py::arg("expected_sign"));
    m.def("scattering_coupling", &scattering_coupling, py::arg("k"), py::arg("dimension"));
    m.def("circle_center", &circle_center, py::arg("k"), py::arg("dimension"));
    m.def("circle_radius", &circle_radius, py::arg("k"), py::arg("dimension"));
    m.def("limit_sign", [](const std::string& c) { return limit_sign(scatterer_class_from_string(c)); });

    // Phaseless data and retrieval.
    py::class_<PhaselessDataset>(m, "PhaselessDataset")
        .def_readonly("r", &PhaselessDataset::r)
        .def_readonly("superposition", &PhaselessDataset::superposition)
        .def_readonly("pairs", &PhaselessDataset::pairs)
        .def_readonly("rule", &PhaselessDataset::rule)
        .def_readonly("wavenumber", &PhaselessDataset::wavenumber)
        .def_readonly("dimension", &PhaselessDataset::dimension)
        .def_property_readonly("scheme", [](const PhaselessDataset& d) { return d.scheme.name(); })
        .def("__len__", &PhaselessDataset::size);
    m.def(
        "synth_dataset",
        [](const FarFieldKernel& kernel, const std::string& scheme, std::size_t reference) {
            return synth_dataset(kernel, scheme_from(scheme, reference));
        },
        py::arg("kernel"), py::arg("scheme") = "full-pairs", py::arg("reference") = 0);
    m.def("perturb_dataset", &perturb_dataset, py::arg("data"), py::arg("level"), py::arg("seed"));
    m.def(
        "compare_datasets",
        [](const PhaselessDataset& a, const PhaselessDataset& b) {
            const auto c = compare_datasets(a, b);
            return py::dict(py::arg("max_r_diff") = c.max_r_diff,
                            py::arg("max_superposition_diff") = c.max_superposition_diff);
        },
        py::arg("a"), py::arg("b"));
    m.def("write_dataset", [](const PhaselessDataset& d, const std::string& dir) { io::write_dataset(d, dir); });
    m.def("read_dataset", [](const std::string& dir) { return io::read_dataset(dir); });

    py::class_<RetrievedKernel>(m, "RetrievedKernel")
        .def_readonly("kernel", &RetrievedKernel::kernel)
        .def_readonly("global_phase", &RetrievedKernel::global_phase)
        .def_readonly("data_residual", &RetrievedKernel::data_residual)
        .def_readonly("reciprocity_residual", &RetrievedKernel::reciprocity_residual)
        .def_property_readonly("branch", [](const RetrievedKernel& r) { return to_string(r.branch); })
        .def("_report", [](const RetrievedKernel& r) { return io::to_json(r).dump(); });
    m.def(
        "retrieve",
        [](const PhaselessDataset& data, const std::string& class_hint, double band_lo) {
            RetrievalOptions options;
            if (band_lo > 0.0) options.band.lo = band_lo;
            return retrieve(data, scatterer_class_from_string(class_hint), options);
        },
        py::arg("data"), py::arg("class_hint"), py::arg("band_lo") = 0.0);

    // Scenarios.
    m.def(
        "_run_config",
        [](const std::string& text, const std::string& out_dir) {
            const auto cfg = scenario::parse_config(io::json::parse(text));
            return scenario::run(cfg, out_dir).exit_code;
        },
        py::arg("text"), py::arg("out_dir"));
    m.def("_corpus", [] {
        std::vector<std::string> out;
        for (const auto& j : scenario::corpus()) out.push_back(j.dump());
        return out;
    });
}
