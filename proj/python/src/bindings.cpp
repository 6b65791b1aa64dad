// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "svdpd/dpd.hpp"
#include "svdpd/kubo.hpp"
#include "svdpd/noise.hpp"
#include "svdpd/philox.hpp"
#include "svdpd/stats.hpp"

namespace py = pybind11;
using namespace svdpd;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

SchemeSpec make_scheme(const std::string& family, const std::string& variant, double alpha,
                       double beta, double lambda1, double lambda2,
                       const std::string& noise_mode) {
    SchemeSpec s;
    s.family = family_from_string(family);
    s.variant = variant_from_string(variant);
    s.alpha = alpha;
    s.beta = beta;
    s.lambda1 = lambda1;
    s.lambda2 = lambda2;
    s.noise_mode = noise_mode_from_string(noise_mode);
    s.validate();
    return s;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stochastic Stormer-Verlet integrators for DPD and the Kubo oscillator";
    m.attr("__version__") = "0.1.0";

    m.def("gaussian_from_counter", &gaussian_from_counter, py::arg("seed"), py::arg("counter"),
          "Standard normal variate, a pure function of (seed, counter).");

    m.def(
        "draw_noise",
        [](std::uint64_t seed, std::uint32_t step,
           const std::vector<std::pair<std::uint32_t, std::uint32_t>>& channels, double dt,
           const std::string& mode) {
            std::vector<Channel> ch;
            ch.reserve(channels.size());
            for (const auto& [i, j] : channels) ch.push_back(Channel{i, j});
            const NoiseDraw draw = svdpd::draw_noise(seed, step, ch, dt,
                                                     noise_mode_from_string(mode));
            py::dict out;
            for (const auto& [i, j] : channels) {
                const ChannelDraw d = draw.at(make_channel(i, j));
                out[py::make_tuple(i, j)] =
                    py::make_tuple(d.full, d.half_first, d.half_second);
            }
            return out;
        },
        py::arg("seed"), py::arg("step"), py::arg("channels"), py::arg("dt"),
        py::arg("mode") = "independent_halves",
        "Wiener increments per channel: (full, half_first, half_second).");

    m.def("weight_r", &weight_r, py::arg("r"), py::arg("q_c") = 1.0);
    m.def("weight_d", &weight_d, py::arg("r"), py::arg("q_c") = 1.0);

    m.def(
        "minimum_image",
        [](std::array<double, 3> delta, std::array<double, 3> box) {
            const Vec3 d = minimum_image({delta[0], delta[1], delta[2]}, box);
            return std::array<double, 3>{d.x, d.y, d.z};
        },
        py::arg("delta"), py::arg("box"));

    py::class_<SchemeSpec>(m, "SchemeSpec")
        .def(py::init(&make_scheme), py::arg("family") = "sv_ab", py::arg("variant") = "ab3_gw",
             py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("lambda1") = 0.5,
             py::arg("lambda2") = 0.5, py::arg("noise_mode") = "independent_halves")
        .def_readonly("alpha", &SchemeSpec::alpha)
        .def_readonly("beta", &SchemeSpec::beta)
        .def_readonly("lambda1", &SchemeSpec::lambda1)
        .def_readonly("lambda2", &SchemeSpec::lambda2)
        .def("__repr__", [](const SchemeSpec& s) { return "<SchemeSpec " + scheme_label(s) + ">"; });

    m.def("kubo_exact",
          [](double t, double w, double sigma, double eps, double q0, double p0) {
              const PhasePoint x = kubo_exact(t, w, KuboParams{sigma, eps, q0, p0});
              return py::make_tuple(x.q[0], x.p[0]);
          },
          py::arg("t"), py::arg("w"), py::arg("sigma") = 0.2, py::arg("eps") = 0.001,
          py::arg("q0") = 0.0, py::arg("p0") = 1.0,
          "Closed-form (q, p) at time t for the realized Wiener value w.");

    m.def("kubo_expected_hamiltonian",
          [](double t, double sigma, double eps, double q0, double p0) {
              return kubo_expected_hamiltonian(t, KuboParams{sigma, eps, q0, p0});
          },
          py::arg("t"), py::arg("sigma") = 0.2, py::arg("eps") = 0.001, py::arg("q0") = 0.0,
          py::arg("p0") = 1.0);

    m.def(
        "kubo_ensemble",
        [](const SchemeSpec& scheme, double sigma, double eps, double q0, double p0, double dt,
           double t_end, int n_paths, std::uint64_t seed, int threads) {
            const KuboEnsembleResult r = kubo_ensemble(
                scheme, KuboParams{sigma, eps, q0, p0}, dt, t_end, n_paths, seed, threads);
            py::dict out;
            out["t"] = to_array(r.times);
            out["mean_H"] = to_array(r.mean_h);
            out["exact_EH"] = to_array(r.exact_eh);
            out["error"] = to_array(r.error);
            return out;
        },
        py::arg("scheme"), py::arg("sigma") = 0.2, py::arg("eps") = 0.001, py::arg("q0") = 0.0,
        py::arg("p0") = 1.0, py::arg("dt") = 0.1, py::arg("t_end") = 200.0,
        py::arg("n_paths") = 200, py::arg("seed") = 1, py::arg("threads") = 1,
        "Ensemble-mean Hamiltonian of the damped Kubo oscillator vs the closed form.");

    py::class_<DpdParams>(m, "DpdParams")
        .def(py::init([](int n_particles, double mass, double a, double gamma, double sigma,
                         double q_c, std::array<double, 3> box, double kT_target) {
                 DpdParams p;
                 p.n_particles = n_particles;
                 p.mass = mass;
                 p.a = a;
                 p.gamma = gamma;
                 p.sigma = sigma;
                 p.q_c = q_c;
                 p.box = box;
                 p.kT_target = kT_target;
                 p.validate();
                 return p;
             }),
             py::arg("n_particles") = 375, py::arg("mass") = 1.0, py::arg("a") = 25.0,
             py::arg("gamma") = 4.5, py::arg("sigma") = 3.0, py::arg("q_c") = 1.0,
             py::arg("box") = std::array<double, 3>{5.0, 5.0, 5.0}, py::arg("kT_target") = 1.0)
        .def_readonly("n_particles", &DpdParams::n_particles)
        .def_readonly("a", &DpdParams::a)
        .def_readonly("gamma", &DpdParams::gamma)
        .def_readonly("sigma", &DpdParams::sigma)
        .def_readonly("kT_target", &DpdParams::kT_target);

    py::class_<DpdSystem>(m, "DpdSystem")
        .def(py::init([](const DpdParams& params, std::uint64_t seed) {
                 return init_system(params, seed);
             }),
             py::arg("params"), py::arg("seed"),
             "System with random positions and Maxwell-Boltzmann momenta at kT_target.")
        .def_property_readonly("step_index", [](const DpdSystem& s) { return s.step_index; })
        .def_property_readonly("positions",
                               [](const DpdSystem& s) { return to_array(s.state.q); })
        .def_property_readonly("momenta", [](const DpdSystem& s) { return to_array(s.state.p); })
        .def(
            "run",
            [](DpdSystem& sys, const SchemeSpec& scheme, double dt, int n_steps) {
                DpdStepper stepper(sys.params, scheme, dt);
                StepperState st = StepperState::initial(sys.state.p);
                for (int k = 0; k < n_steps; ++k) stepper.step(sys, st);
            },
            py::arg("scheme"), py::arg("dt"), py::arg("n_steps"),
            "Advance the system n_steps with the given scheme.");

    m.def("kinetic_temperature", &kinetic_temperature, py::arg("system"));
    m.def("total_energy", &total_energy, py::arg("system"));
    m.def(
        "total_momentum",
        [](const DpdSystem& sys) {
            const Vec3 p = total_momentum(sys);
            return std::array<double, 3>{p.x, p.y, p.z};
        },
        py::arg("system"));
}
