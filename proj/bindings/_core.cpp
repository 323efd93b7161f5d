#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "melosc/closed_form.hpp"
#include "melosc/melnikov.hpp"
#include "melosc/model.hpp"
#include "melosc/numerics.hpp"
#include "melosc/perturbation.hpp"
#include "melosc/simulator.hpp"

namespace py = pybind11;
using namespace melosc;

namespace {

Parameters make_params(double alpha, double eta, double sigma, double epsilon) {
    Parameters p{alpha, eta, sigma, epsilon};
    validate(p);
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Melnikov analysis and event-driven simulation of the discontinuous "
              "oscillator x'' + alpha*sign(x) = eta*x + eps*f(t,x,x')";

    // exceptions
    static py::exception<Error> base_error(m, "MeloscError", PyExc_RuntimeError);
    py::register_exception<NoPeriodAnnulus>(m, "NoPeriodAnnulus", base_error);
    py::register_exception<OutOfAnnulusDomain>(m, "OutOfAnnulusDomain", base_error);
    py::register_exception<OutOfAnnulusImage>(m, "OutOfAnnulusImage", base_error);
    py::register_exception<ParseError>(m, "ParseError", base_error);
    py::register_exception<EvalError>(m, "EvalError", base_error);
    py::register_exception<QuadratureFailure>(m, "QuadratureFailure", base_error);
    py::register_exception<GrazingError>(m, "GrazingError", base_error);
    py::register_exception<TimeLimitExceeded>(m, "TimeLimitExceeded", base_error);
    py::register_exception<RootBracketFailure>(m, "RootBracketFailure", base_error);
    py::register_exception<NewtonDivergence>(m, "NewtonDivergence", base_error);

    // model
    py::class_<Parameters>(m, "Parameters")
        .def(py::init(&make_params), py::arg("alpha"), py::arg("eta"), py::arg("sigma"),
             py::arg("epsilon") = 0.0)
        .def_readonly("alpha", &Parameters::alpha)
        .def_readonly("eta", &Parameters::eta)
        .def_readonly("sigma", &Parameters::sigma)
        .def_readonly("epsilon", &Parameters::epsilon)
        .def("__repr__", [](const Parameters& p) {
            return "Parameters(alpha=" + std::to_string(p.alpha) +
                   ", eta=" + std::to_string(p.eta) + ", sigma=" + std::to_string(p.sigma) +
                   ", epsilon=" + std::to_string(p.epsilon) + ")";
        });

    py::class_<CaseClass>(m, "CaseClass")
        .def_property_readonly("tag", [](const CaseClass& c) { return to_string(c.tag); })
        .def_property_readonly("index", &CaseClass::index)
        .def_property_readonly("omega",
                               [](const CaseClass& c) -> py::object {
                                   if (c.omega) return py::float_(*c.omega);
                                   return py::none();
                               })
        .def("__repr__", [](const CaseClass& c) { return "CaseClass(" + to_string(c.tag) + ")"; });

    py::class_<AnnulusInfo>(m, "AnnulusInfo")
        .def_readonly("case_index", &AnnulusInfo::case_index)
        .def_property_readonly("domain_D",
                               [](const AnnulusInfo& a) {
                                   return py::make_tuple(a.domain_D.lo, a.domain_D.hi);
                               })
        .def_property_readonly("image_I",
                               [](const AnnulusInfo& a) {
                                   return py::make_tuple(a.image_I.lo, a.image_I.hi);
                               })
        .def_readonly("tau0_monotone_sign", &AnnulusInfo::tau0_monotone_sign);

    m.def("classify", &classify, py::arg("alpha"), py::arg("eta"));
    m.def("annulus_info", &annulus_info, py::arg("alpha"), py::arg("eta"));
    m.def("sigma_admissible", &sigma_admissible, py::arg("params"));
    m.def("describe", &describe, py::arg("case"), py::arg("alpha"), py::arg("eta"));

    // closed-form machinery
    m.def("exp_At", [](double t, double eta) {
        const Mat2 a = exp_At(t, eta);
        return py::make_tuple(py::make_tuple(a.a11, a.a12), py::make_tuple(a.a21, a.a22));
    });
    m.def("u_vector", [](double t, double eta) {
        const auto u = u_vector(t, eta);
        return py::make_tuple(u[0], u[1]);
    });
    m.def("gamma_plus", [](double t, double y0, const Parameters& p) {
        const PhasePoint q = gamma_plus(t, y0, p);
        return py::make_tuple(q.x, q.y);
    });
    m.def("gamma_minus", [](double t, double y0, const Parameters& p) {
        const PhasePoint q = gamma_minus(t, y0, p);
        return py::make_tuple(q.x, q.y);
    });
    m.def("tau0", &tau0, py::arg("y0"), py::arg("params"));
    m.def("v_of", &v_of, py::arg("s"), py::arg("params"));
    m.def("kernel_U", &kernel_U, py::arg("t"), py::arg("s"), py::arg("params"));

    // perturbation expressions
    py::class_<Perturbation>(m, "Perturbation")
        .def_static("parse", &Perturbation::parse, py::arg("src"))
        .def("__call__", &Perturbation::eval, py::arg("t"), py::arg("x"), py::arg("y"))
        .def("eval", &Perturbation::eval, py::arg("t"), py::arg("x"), py::arg("y"))
        .def("diff_t", &Perturbation::diff_t)
        .def("__str__", &Perturbation::to_string)
        .def("__repr__",
             [](const Perturbation& f) { return "Perturbation(\"" + f.to_string() + "\")"; });
    m.def("parse", &Perturbation::parse, py::arg("src"));
    m.def("check_periodicity", &check_periodicity, py::arg("f"), py::arg("sigma"),
          py::arg("n_samples") = 64);

    // Melnikov analysis
    py::class_<MelnikovZero>(m, "MelnikovZero")
        .def_readonly("phi_star", &MelnikovZero::phi_star)
        .def_readonly("dM", &MelnikovZero::dM)
        .def("__repr__", [](const MelnikovZero& z) {
            return "MelnikovZero(phi_star=" + std::to_string(z.phi_star) +
                   ", dM=" + std::to_string(z.dM) + ")";
        });
    py::class_<MelnikovResult>(m, "MelnikovResult")
        .def_readonly("phi_grid", &MelnikovResult::phi_grid)
        .def_readonly("values", &MelnikovResult::values)
        .def_readonly("zeros", &MelnikovResult::zeros)
        .def_readonly("degenerate_flat", &MelnikovResult::degenerate_flat);

    m.def(
        "melnikov",
        [](double phi, const Parameters& p, const Perturbation& f) {
            return melnikov(phi, p, f);
        },
        py::arg("phi"), py::arg("params"), py::arg("f"));
    m.def(
        "melnikov_derivative",
        [](double phi, const Parameters& p, const Perturbation& f) {
            return melnikov_derivative(phi, p, f);
        },
        py::arg("phi"), py::arg("params"), py::arg("f"));
    m.def(
        "melnikov_grid",
        [](const Parameters& p, const Perturbation& f, int n, double zero_tol,
           double simple_tol) {
            return melnikov_grid(p, f, n, {zero_tol, simple_tol});
        },
        py::arg("params"), py::arg("f"), py::arg("n") = 64, py::arg("zero_tol") = 1e-9,
        py::arg("simple_tol") = 1e-6);
    m.def("sin_oracle", &sin_oracle, py::arg("i"), py::arg("phi"), py::arg("alpha"),
          py::arg("eta"), py::arg("beta"));
    m.def("predicted_initial_condition", [](double phi_star, const Parameters& p) {
        const SectionSeed s = predicted_initial_condition(phi_star, p);
        return py::make_tuple(s.theta, s.x, s.y);
    });

    // simulation
    py::enum_<Region>(m, "Region").value("Plus", Region::Plus).value("Minus", Region::Minus);

    py::class_<ExtendedPoint>(m, "ExtendedPoint")
        .def(py::init([](double theta, double x, double y) {
                 return ExtendedPoint{theta, x, y};
             }),
             py::arg("theta"), py::arg("x"), py::arg("y"))
        .def_readonly("theta", &ExtendedPoint::theta)
        .def_readonly("x", &ExtendedPoint::x)
        .def_readonly("y", &ExtendedPoint::y);

    py::class_<CrossingEvent>(m, "CrossingEvent")
        .def_readonly("tau", &CrossingEvent::tau)
        .def_readonly("point", &CrossingEvent::point)
        .def_readonly("transversal", &CrossingEvent::transversal);

    py::class_<TrajectorySegment>(m, "TrajectorySegment")
        .def_readonly("region", &TrajectorySegment::region)
        .def_readonly("samples", &TrajectorySegment::samples)
        .def_property_readonly("crossing",
                               [](const TrajectorySegment& s) -> py::object {
                                   if (s.crossing) return py::cast(*s.crossing);
                                   return py::none();
                               })
        .def_property_readonly("timed_out", [](const TrajectorySegment& s) {
            return s.terminal == TerminalKind::TimeLimit;
        });

    py::class_<DisplacementValue>(m, "DisplacementValue")
        .def_readonly("delta1", &DisplacementValue::delta1)
        .def_readonly("delta3", &DisplacementValue::delta3)
        .def_readonly("tau_plus", &DisplacementValue::tau_plus)
        .def_readonly("tau_minus", &DisplacementValue::tau_minus);

    py::class_<PeriodicOrbit>(m, "PeriodicOrbit")
        .def_readonly("epsilon", &PeriodicOrbit::epsilon)
        .def_readonly("theta0", &PeriodicOrbit::theta0)
        .def_readonly("y0", &PeriodicOrbit::y0)
        .def_readonly("period", &PeriodicOrbit::period)
        .def_readonly("residual", &PeriodicOrbit::residual)
        .def_readonly("segments", &PeriodicOrbit::segments);

    py::class_<ContinuationResult>(m, "ContinuationResult")
        .def_readonly("orbits", &ContinuationResult::orbits)
        .def_readonly("completed", &ContinuationResult::completed)
        .def_readonly("diagnostic", &ContinuationResult::diagnostic);

    m.def(
        "integrate_piece",
        [](const ExtendedPoint& start, Region region, int direction, const Parameters& p,
           const Perturbation& f) { return integrate_piece(start, region, direction, p, f); },
        py::arg("start"), py::arg("region"), py::arg("direction"), py::arg("params"),
        py::arg("f"));
    m.def(
        "flow_concat",
        [](const ExtendedPoint& start, double duration, const Parameters& p,
           const Perturbation& f) { return flow_concat(start, duration, p, f); },
        py::arg("start"), py::arg("duration"), py::arg("params"), py::arg("f"));
    m.def(
        "displacement",
        [](double theta0, double y0, double epsilon, const Parameters& p,
           const Perturbation& f) { return displacement(theta0, y0, epsilon, p, f); },
        py::arg("theta0"), py::arg("y0"), py::arg("epsilon"), py::arg("params"), py::arg("f"));
    m.def(
        "delta3_tilde",
        [](double theta0, double epsilon, const Parameters& p, const Perturbation& f) {
            return delta3_tilde(theta0, epsilon, p, f);
        },
        py::arg("theta0"), py::arg("epsilon"), py::arg("params"), py::arg("f"));
    m.def(
        "find_periodic_orbit",
        [](double epsilon, double phi_seed, const Parameters& p, const Perturbation& f) {
            return find_periodic_orbit(epsilon, phi_seed, p, f);
        },
        py::arg("epsilon"), py::arg("phi_seed"), py::arg("params"), py::arg("f"));
    m.def(
        "continuation",
        [](const std::vector<double>& eps_list, double phi_star, const Parameters& p,
           const Perturbation& f) { return continuation(eps_list, phi_star, p, f); },
        py::arg("eps_list"), py::arg("phi_star"), py::arg("params"), py::arg("f"));

    m.attr("__version__") = "0.1.0";
}
