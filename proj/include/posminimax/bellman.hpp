#pragma once

#include "posminimax/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace posminimax {

/// Value iteration for the linear positive case. With J_k(x) = p_k'x the
/// recursion  J_k = min_u max_w [g + J_{k-1}(f)]  collapses to
///
///   p_k = s + A'p_{k-1} - E'|r + B'p_{k-1}|
///
/// provided F'p_{k-1} <= gamma; otherwise the inner maximum is +inf.

/// d = F'p - gamma. max_{w >= 0} (F'p - gamma)'w is 0 (at w = 0) when d <= 0
/// and unbounded along every component with d_j > 0.
Eigen::VectorXd worst_case_disturbance_gain(const Eigen::VectorXd& p,
                                            const ProblemInstance& instance);

struct GammaViolation {
    Eigen::Index component;
    double excess;  // (F'p - gamma)_component
};

struct StepResult {
    Eigen::VectorXd p;
    std::optional<GammaViolation> violation;
};

StepResult iterate_step(const Eigen::VectorXd& p_prev, const ProblemInstance& instance,
                        double feas_tol = 1e-8);

enum class IterationVerdict { Converged, Diverging, GammaViolated, MaxIterExceeded };

std::string to_string(IterationVerdict verdict);

struct ValueIterationOptions {
    double tol = 1e-10;
    std::size_t max_iter = 100000;
    double divergence_bound = 1e12;
    double feas_tol = 1e-8;
    bool keep_iterates = true;
};

struct ValueIterationTrace {
    /// p_0 = 0, p_1, ... Only the last iterate is kept when keep_iterates is off.
    std::vector<Eigen::VectorXd> iterates;
    IterationVerdict verdict = IterationVerdict::MaxIterExceeded;
    std::size_t iterations = 0;
    double final_delta = 0.0;
    /// Set for GammaViolated: index k of the update that could not be taken.
    std::size_t violated_at = 0;
    std::optional<GammaViolation> violation;

    const Eigen::VectorXd& final_iterate() const { return iterates.back(); }
};

ValueIterationTrace value_iterate(const ProblemInstance& instance,
                                  const ValueIterationOptions& options = {});

}  // namespace posminimax
