#include "posminimax/bellman.hpp"

namespace posminimax {

Eigen::VectorXd worst_case_disturbance_gain(const Eigen::VectorXd& p,
                                            const ProblemInstance& instance) {
    return instance.F.transpose() * p - instance.gamma;
}

StepResult iterate_step(const Eigen::VectorXd& p_prev, const ProblemInstance& instance,
                        double feas_tol) {
    StepResult out;
    const Eigen::VectorXd d = worst_case_disturbance_gain(p_prev, instance);
    Eigen::Index worst = 0;
    if (d.size() > 0 && d.maxCoeff(&worst) > feas_tol) {
        out.violation = GammaViolation{worst, d(worst)};
        return out;
    }
    const Eigen::VectorXd q = instance.r + instance.B.transpose() * p_prev;
    out.p = instance.s + instance.A.transpose() * p_prev - instance.E.transpose() * q.cwiseAbs();
    return out;
}

std::string to_string(IterationVerdict verdict) {
    switch (verdict) {
        case IterationVerdict::Converged:
            return "converged";
        case IterationVerdict::Diverging:
            return "diverging";
        case IterationVerdict::GammaViolated:
            return "gamma_violated";
        case IterationVerdict::MaxIterExceeded:
            return "max_iter_exceeded";
    }
    return "unknown";
}

ValueIterationTrace value_iterate(const ProblemInstance& instance,
                                  const ValueIterationOptions& options) {
    ValueIterationTrace trace;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(instance.n());
    trace.iterates.push_back(p);

    for (std::size_t k = 1; k <= options.max_iter; ++k) {
        StepResult step = iterate_step(p, instance, options.feas_tol);
        if (step.violation) {
            trace.verdict = IterationVerdict::GammaViolated;
            trace.violated_at = k;
            trace.violation = step.violation;
            return trace;
        }
        trace.iterations = k;
        trace.final_delta = (step.p - p).cwiseAbs().maxCoeff();
        p = std::move(step.p);
        if (options.keep_iterates) {
            trace.iterates.push_back(p);
        } else {
            trace.iterates.back() = p;
        }
        if (!p.allFinite() || p.cwiseAbs().maxCoeff() > options.divergence_bound) {
            trace.verdict = IterationVerdict::Diverging;
            return trace;
        }
        if (trace.final_delta <= options.tol) {
            trace.verdict = IterationVerdict::Converged;
            return trace;
        }
    }
    trace.verdict = IterationVerdict::MaxIterExceeded;
    return trace;
}

}  // namespace posminimax
