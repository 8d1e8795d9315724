#include "posminimax/bellman.hpp"
#include "posminimax/io.hpp"
#include "posminimax/lp.hpp"
#include "posminimax/model.hpp"
#include "posminimax/simulate.hpp"
#include "posminimax/synthesis.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace posminimax;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Minimax-optimal state feedback for positive linear systems";
    m.attr("__version__") = io::version();

    py::register_exception<InfeasibleGain>(m, "InfeasibleGain", PyExc_ValueError);
    py::register_exception<SingularSystem>(m, "SingularSystem", PyExc_ArithmeticError);
    py::register_exception<UnboundednessNotShown>(m, "UnboundednessNotShown", PyExc_RuntimeError);
    py::register_exception<lp::MaxPivotsExceeded>(m, "MaxPivotsExceeded", PyExc_RuntimeError);
    py::register_exception<io::InstanceFormatError>(m, "InstanceFormatError", PyExc_ValueError);

    py::class_<ProblemInstance>(m, "ProblemInstance")
        .def(py::init([](Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd F,
                         Eigen::MatrixXd E, Eigen::VectorXd s, Eigen::VectorXd r,
                         Eigen::VectorXd gamma, std::string name) {
                 return ProblemInstance{std::move(A), std::move(B), std::move(F), std::move(E),
                                        std::move(s), std::move(r), std::move(gamma),
                                        std::move(name)};
             }),
             py::arg("A"), py::arg("B"), py::arg("F"), py::arg("E"), py::arg("s"), py::arg("r"),
             py::arg("gamma"), py::arg("name") = "")
        .def_readwrite("A", &ProblemInstance::A)
        .def_readwrite("B", &ProblemInstance::B)
        .def_readwrite("F", &ProblemInstance::F)
        .def_readwrite("E", &ProblemInstance::E)
        .def_readwrite("s", &ProblemInstance::s)
        .def_readwrite("r", &ProblemInstance::r)
        .def_readwrite("gamma", &ProblemInstance::gamma)
        .def_readwrite("name", &ProblemInstance::name)
        .def_property_readonly("n", &ProblemInstance::n)
        .def_property_readonly("m", &ProblemInstance::m)
        .def_property_readonly("l", &ProblemInstance::l);

    m.def("double_tank", &double_tank, py::arg("gamma") = 1.32);
    m.def("validate", [](const ProblemInstance& inst) {
        std::vector<std::string> out;
        for (const auto& e : validate(inst)) out.push_back(e.describe());
        return out;
    });

    py::class_<HypothesisReport>(m, "HypothesisReport")
        .def_readonly("positivity_ok", &HypothesisReport::positivity_ok)
        .def_readonly("positivity_margin", &HypothesisReport::positivity_margin)
        .def_readonly("penalty_ok", &HypothesisReport::penalty_ok)
        .def_readonly("penalty_margin", &HypothesisReport::penalty_margin)
        .def_property_readonly("ok", &HypothesisReport::ok);
    m.def("check_hypotheses", &check_hypotheses, py::arg("instance"), py::arg("strict_eps") = 0.0);

    py::enum_<lp::LpStatus>(m, "LpStatus")
        .value("Optimal", lp::LpStatus::Optimal)
        .value("Unbounded", lp::LpStatus::Unbounded)
        .value("Infeasible", lp::LpStatus::Infeasible);
    py::class_<lp::LpProblem>(m, "LpProblem")
        .def(py::init([](Eigen::VectorXd c, Eigen::MatrixXd G, Eigen::VectorXd h) {
                 return lp::LpProblem{std::move(c), std::move(G), std::move(h)};
             }),
             py::arg("c"), py::arg("G"), py::arg("h"))
        .def_readwrite("c", &lp::LpProblem::c)
        .def_readwrite("G", &lp::LpProblem::G)
        .def_readwrite("h", &lp::LpProblem::h);
    py::class_<lp::LpSolution>(m, "LpSolution")
        .def_readonly("status", &lp::LpSolution::status)
        .def_readonly("z", &lp::LpSolution::z)
        .def_readonly("objective", &lp::LpSolution::objective)
        .def_readonly("ray", &lp::LpSolution::ray)
        .def_readonly("iterations", &lp::LpSolution::iterations);
    m.def(
        "solve_lp",
        [](const lp::LpProblem& p, double pivot_tol, double feas_tol) {
            return lp::solve(p, lp::LpOptions{pivot_tol, feas_tol, 0});
        },
        py::arg("problem"), py::arg("pivot_tol") = 1e-9, py::arg("feas_tol") = 1e-8);
    m.def("build_lp", &build_lp);

    py::enum_<SynthesisStatus>(m, "SynthesisStatus")
        .value("Synthesized", SynthesisStatus::Synthesized)
        .value("NoFiniteValue", SynthesisStatus::NoFiniteValue)
        .value("HypothesesViolated", SynthesisStatus::HypothesesViolated)
        .value("SolverDefect", SynthesisStatus::SolverDefect);
    py::class_<SynthesisCertificate>(m, "SynthesisCertificate")
        .def_readonly("status", &SynthesisCertificate::status)
        .def_readonly("p", &SynthesisCertificate::p)
        .def_readonly("zeta", &SynthesisCertificate::zeta)
        .def_readonly("gamma_min", &SynthesisCertificate::gamma_min)
        .def_readonly("gamma_ok", &SynthesisCertificate::gamma_ok)
        .def_readonly("K", &SynthesisCertificate::K)
        .def_readonly("q", &SynthesisCertificate::q)
        .def_readonly("bellman_residual", &SynthesisCertificate::bellman_residual)
        .def_readonly("hypotheses", &SynthesisCertificate::hypotheses)
        .def_readonly("lp_iterations", &SynthesisCertificate::lp_iterations)
        .def_readonly("unbounded_ray", &SynthesisCertificate::unbounded_ray);
    m.def(
        "synthesize",
        [](const ProblemInstance& inst, bool force, double feas_tol) {
            SynthesisOptions opts;
            opts.force = force;
            opts.feas_tol = feas_tol;
            opts.lp.feas_tol = feas_tol;
            return synthesize(inst, opts);
        },
        py::arg("instance"), py::arg("force") = false, py::arg("feas_tol") = 1e-8);
    m.def("gamma_threshold", &gamma_threshold, py::arg("p"), py::arg("F"));
    m.def(
        "extract_gain",
        [](const Eigen::VectorXd& p, const ProblemInstance& inst) {
            Gain g = extract_gain(p, inst);
            return py::make_tuple(g.K, g.q);
        },
        py::arg("p"), py::arg("instance"));
    m.def("bellman_residual", &bellman_residual, py::arg("p"), py::arg("instance"));

    py::enum_<IterationVerdict>(m, "IterationVerdict")
        .value("Converged", IterationVerdict::Converged)
        .value("Diverging", IterationVerdict::Diverging)
        .value("GammaViolated", IterationVerdict::GammaViolated)
        .value("MaxIterExceeded", IterationVerdict::MaxIterExceeded);
    py::class_<ValueIterationTrace>(m, "ValueIterationTrace")
        .def_readonly("iterates", &ValueIterationTrace::iterates)
        .def_readonly("verdict", &ValueIterationTrace::verdict)
        .def_readonly("iterations", &ValueIterationTrace::iterations)
        .def_readonly("final_delta", &ValueIterationTrace::final_delta)
        .def_readonly("violated_at", &ValueIterationTrace::violated_at)
        .def_property_readonly("final_iterate", &ValueIterationTrace::final_iterate);
    m.def(
        "value_iterate",
        [](const ProblemInstance& inst, double tol, std::size_t max_iter, double divergence_bound,
           bool keep_iterates) {
            ValueIterationOptions opts;
            opts.tol = tol;
            opts.max_iter = max_iter;
            opts.divergence_bound = divergence_bound;
            opts.keep_iterates = keep_iterates;
            return value_iterate(inst, opts);
        },
        py::arg("instance"), py::arg("tol") = 1e-10, py::arg("max_iter") = 100000,
        py::arg("divergence_bound") = 1e12, py::arg("keep_iterates") = false);
    m.def("worst_case_disturbance_gain", &worst_case_disturbance_gain);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("states", &Trajectory::states)
        .def_readonly("inputs", &Trajectory::inputs)
        .def_readonly("disturbances", &Trajectory::disturbances)
        .def_readonly("partial_costs", &Trajectory::partial_costs);
    m.def("rollout", &rollout, py::arg("instance"), py::arg("K"), py::arg("x0"),
          py::arg("disturbances"));
    m.def("random_disturbances", &random_disturbances, py::arg("l"), py::arg("horizon"),
          py::arg("seed"), py::arg("amplitude") = 1.0);

    py::class_<SpectralRadius>(m, "SpectralRadius")
        .def_readonly("estimate", &SpectralRadius::estimate)
        .def_readonly("lower", &SpectralRadius::lower)
        .def_readonly("upper", &SpectralRadius::upper)
        .def_readonly("iterations", &SpectralRadius::iterations)
        .def_readonly("converged", &SpectralRadius::converged);
    m.def("spectral_radius", &spectral_radius, py::arg("M"), py::arg("tol") = 1e-10,
          py::arg("max_iter") = 100000);

    py::class_<ClosedLoopCost>(m, "ClosedLoopCost")
        .def_readonly("stable", &ClosedLoopCost::stable)
        .def_readonly("p", &ClosedLoopCost::p)
        .def_readonly("rho", &ClosedLoopCost::rho);
    m.def("closed_loop_cost_vector", &closed_loop_cost_vector, py::arg("instance"), py::arg("L"));

    py::class_<UnboundednessWitness>(m, "UnboundednessWitness")
        .def_readonly("component", &UnboundednessWitness::component)
        .def_readonly("disturbance", &UnboundednessWitness::disturbance)
        .def_readonly("p_closed_loop", &UnboundednessWitness::p_closed_loop)
        .def_readonly("growth_rate", &UnboundednessWitness::growth_rate)
        .def_readonly("t_exceed", &UnboundednessWitness::t_exceed)
        .def_readonly("cost_at_exceed", &UnboundednessWitness::cost_at_exceed);
    m.def("demonstrate_unboundedness", &demonstrate_unboundedness, py::arg("instance"),
          py::arg("K"), py::arg("x0"), py::arg("bound"), py::arg("max_horizon") = 100000000);

    m.def("load_instance", [](const std::string& path) {
        io::LoadedInstance loaded = io::load_instance(path);
        return py::make_tuple(loaded.instance, loaded.x0);
    });
    m.def(
        "report_json",
        [](const ProblemInstance& inst, const SynthesisCertificate& cert) {
            return io::make_report(inst, cert).dump(2);
        },
        py::arg("instance"), py::arg("certificate"));
}
