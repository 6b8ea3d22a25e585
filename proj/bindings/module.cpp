// Python bindings for the main operations: parameter validation, the
// equilibrium census, wave construction, point classification and seeded
// PDE speed measurement.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "angiowave/equilibria.hpp"
#include "angiowave/model.hpp"
#include "angiowave/orbits.hpp"
#include "angiowave/pde.hpp"
#include "angiowave/sweep.hpp"

namespace py = pybind11;
using namespace angio;

namespace {

py::dict record_dict(const EquilibriumRecord& r) {
    py::dict d;
    d["kind"] = to_string(r.kind);
    d["fold_index"] = r.fold_index;
    d["u"] = r.location.u;
    d["w"] = r.location.w;
    d["side"] = to_string(r.cls.side);
    d["linear_type"] = to_string(r.cls.linear_type);
    d["folded_type"] = to_string(r.cls.folded_type);
    py::list eig;
    for (const auto& l : r.eigenvalues) eig.append(std::complex<double>(l));
    d["eigenvalues"] = eig;
    return d;
}

py::dict orbit_dict(const WaveResult& res) {
    py::dict d;
    d["ok"] = res.failure == WaveFailure::None;
    d["failure"] = to_string(res.failure);
    d["message"] = res.message;
    if (res.orbit) {
        const auto& orb = *res.orbit;
        d["kind"] = orb.kind == WaveKind::Smooth ? "smooth" : "shock";
        py::list z, u, w, v, arc;
        for (const auto& s : orb.samples) {
            z.append(s.z);
            u.append(s.u);
            w.append(s.w);
            v.append(s.v);
            arc.append(s.arc_id);
        }
        d["z"] = z;
        d["u"] = u;
        d["w"] = w;
        d["v"] = v;
        d["arc_id"] = arc;
        d["start_state"] = py::make_tuple(orb.start_state.u, orb.start_state.w);
        d["end_state"] = py::make_tuple(orb.end_state.u, orb.end_state.w);
        if (orb.jump) {
            py::dict j;
            j["u_star"] = orb.jump->u_star;
            j["w_depart"] = orb.jump->w_depart;
            j["w_land"] = orb.jump->w_land;
            j["mismatch"] = orb.jump->mismatch;
            d["jump"] = j;
        } else {
            d["jump"] = py::none();
        }
        d["transversality"] = orb.transversality;
        d["transversality_degenerate"] = orb.transversality_degenerate;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "travelling-wave analysis of the capillary-tip / chemoattractant model";

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<double, double, double, double>(), py::arg("alpha"), py::arg("beta"),
             py::arg("c"), py::arg("eps") = 0.0)
        .def_property_readonly("alpha", &ModelParams::alpha)
        .def_property_readonly("beta", &ModelParams::beta)
        .def_property_readonly("c", &ModelParams::c)
        .def_property_readonly("eps", &ModelParams::eps)
        .def("with_c", &ModelParams::with_c)
        .def("with_eps", &ModelParams::with_eps);

    m.def("wall_F", [](double u, const ModelParams& p) { return wall_F(u, p); });
    m.def("wall_u_zero", &wall_u_zero);
    m.def("fold_factor",
          [](double u, double w, const ModelParams& p) { return fold_factor({u, w}, p); });
    m.def("curve_c1", &curve_c1);
    m.def("curve_c2", &curve_c2);
    m.def("curve_c3", &curve_c3);

    m.def("hole_roots", [](const ModelParams& p) {
        py::list out;
        for (const auto& r : hole_roots(p)) out.append(std::complex<double>(r));
        return out;
    });

    m.def("census", [](const ModelParams& p) {
        const auto rep = census(p);
        py::list out;
        for (const auto& r : rep.records) out.append(record_dict(r));
        return out;
    });

    m.def("classify_point", [](const ModelParams& p) {
        const auto lbl = classify_point(p);
        py::dict d;
        d["census"] = census_string(lbl);
        d["H_side"] = to_string(lbl.H_side);
        d["H_type"] = to_string(lbl.H_type);
        d["degenerate"] = lbl.degenerate;
        d["real_quartic_roots"] = lbl.real_quartic_roots;
        return d;
    });

    m.def("smooth_wave", [](const ModelParams& p) { return orbit_dict(construct_smooth_wave(p)); });
    m.def("shock_wave", [](const ModelParams& p) { return orbit_dict(construct_shock_wave(p)); });
    m.def("sr_jump_wave",
          [](const ModelParams& p) { return orbit_dict(construct_sr_jump_wave(p)); });

    m.def(
        "measure_seeded_speed",
        [](const ModelParams& p, const std::string& kind, double t_end, int n_grid, double length) {
            WaveResult wr = kind == "smooth" ? construct_smooth_wave(p) : construct_shock_wave(p);
            if (wr.failure != WaveFailure::None || !wr.orbit)
                throw std::runtime_error("no orbit to seed: " + wr.message);
            PdeConfig cfg;
            cfg.N = n_grid;
            cfg.L = length;
            cfg.eps = p.eps();
            cfg.frame = FrameMode::Comoving;
            Field1D f = seed_from_orbit(*wr.orbit, p, cfg);
            std::vector<Field1D> history;
            for (double t = cfg.snapshot_dt; t <= t_end + 1e-12; t += cfg.snapshot_dt) {
                f = step_to(std::move(f), t, p, cfg);
                if (f.t >= cfg.transient_cutoff) history.push_back(f);
            }
            return measure_wavespeed(history, p, cfg).speed;
        },
        py::arg("params"), py::arg("kind"), py::arg("t_end") = 10.0, py::arg("n_grid") = 2048,
        py::arg("length") = 40.0);
}
