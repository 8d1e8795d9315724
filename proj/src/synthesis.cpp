#include "posminimax/synthesis.hpp"

#include <stdexcept>

namespace posminimax {

std::string to_string(SynthesisStatus status) {
    switch (status) {
        case SynthesisStatus::Synthesized:
            return "synthesized";
        case SynthesisStatus::NoFiniteValue:
            return "no_finite_value";
        case SynthesisStatus::HypothesesViolated:
            return "hypotheses_violated";
        case SynthesisStatus::SolverDefect:
            return "solver_defect";
    }
    return "unknown";
}

lp::LpProblem build_lp(const ProblemInstance& instance) {
    const Eigen::Index n = instance.n();
    const Eigen::Index m = instance.m();
    const Eigen::MatrixXd Bt = instance.B.transpose();

    lp::LpProblem problem;
    problem.c = Eigen::VectorXd::Zero(n + m);
    problem.c.head(n).setOnes();

    problem.G = Eigen::MatrixXd::Zero(n + 2 * m, n + m);
    problem.h.resize(n + 2 * m);

    problem.G.topLeftCorner(n, n) =
        Eigen::MatrixXd::Identity(n, n) - instance.A.transpose();
    problem.G.topRightCorner(n, m) = instance.E.transpose();
    problem.h.head(n) = instance.s;

    problem.G.block(n, 0, m, n) = -Bt;
    problem.G.block(n, n, m, m) = -Eigen::MatrixXd::Identity(m, m);
    problem.h.segment(n, m) = instance.r;

    problem.G.block(n + m, 0, m, n) = Bt;
    problem.G.block(n + m, n, m, m) = -Eigen::MatrixXd::Identity(m, m);
    problem.h.tail(m) = -instance.r;
    return problem;
}

Eigen::VectorXd gamma_threshold(const Eigen::VectorXd& p, const Eigen::MatrixXd& F) {
    return F.transpose() * p;
}

Gain extract_gain(const Eigen::VectorXd& p, const ProblemInstance& instance) {
    Gain gain;
    gain.q = instance.r + instance.B.transpose() * p;
    gain.K = Eigen::MatrixXd::Zero(instance.m(), instance.n());
    for (Eigen::Index i = 0; i < instance.m(); ++i) {
        const double qi = gain.q(i);
        if (qi > 0.0) {
            gain.K.row(i) = instance.E.row(i);
        } else if (qi < 0.0) {
            gain.K.row(i) = -instance.E.row(i);
        }
    }
    return gain;
}

Eigen::VectorXd bellman_residual(const Eigen::VectorXd& p, const ProblemInstance& instance) {
    const Eigen::VectorXd q = instance.r + instance.B.transpose() * p;
    return p - (instance.s + instance.A.transpose() * p - instance.E.transpose() * q.cwiseAbs());
}

SynthesisCertificate synthesize(const ProblemInstance& instance,
                                const SynthesisOptions& options) {
    if (const auto errors = validate(instance); !errors.empty()) {
        throw std::invalid_argument("invalid problem instance: " + errors.front().describe());
    }

    SynthesisCertificate cert;
    cert.hypotheses = check_hypotheses(instance, options.strict_eps);
    if (!cert.hypotheses.ok() && !options.force) {
        cert.status = SynthesisStatus::HypothesesViolated;
        return cert;
    }

    const Eigen::Index n = instance.n();
    const Eigen::Index m = instance.m();
    const lp::LpSolution sol = lp::solve(build_lp(instance), options.lp);
    cert.lp_status = sol.status;
    cert.lp_iterations = sol.iterations;

    if (sol.status == lp::LpStatus::Unbounded) {
        cert.status = SynthesisStatus::NoFiniteValue;
        cert.unbounded_ray = sol.ray;
        return cert;
    }
    if (sol.status == lp::LpStatus::Infeasible) {
        cert.status = SynthesisStatus::SolverDefect;
        return cert;
    }

    cert.status = SynthesisStatus::Synthesized;
    cert.lp_objective = sol.objective;
    cert.p = sol.z.head(n);
    cert.zeta = sol.z.tail(m);

    Gain gain = extract_gain(cert.p, instance);
    cert.K = std::move(gain.K);
    cert.q = std::move(gain.q);
    // A zero row of E leaves zeta_i unconstrained from above; report its lower bound.
    for (Eigen::Index i = 0; i < m; ++i) {
        if ((instance.E.row(i).array() == 0.0).all()) cert.zeta(i) = std::abs(cert.q(i));
    }

    cert.gamma_min = gamma_threshold(cert.p, instance.F);
    cert.gamma_ok = (instance.gamma.array() >= cert.gamma_min.array() - options.feas_tol).all();
    cert.bellman_residual = bellman_residual(cert.p, instance);
    return cert;
}

}  // namespace posminimax
