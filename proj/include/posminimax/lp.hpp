#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posminimax::lp {

/// maximize c'z  subject to  G z <= h,  z >= 0.
struct LpProblem {
    Eigen::VectorXd c;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;

    Eigen::Index num_vars() const { return c.size(); }
    Eigen::Index num_constraints() const { return h.size(); }
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

std::string to_string(LpStatus status);

/// Solver outcome. `z` and `objective` are meaningful only when Optimal;
/// `ray` is non-empty only when Unbounded and satisfies ray >= 0, G ray <= 0,
/// c'ray > 0.
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd z;
    double objective = 0.0;
    Eigen::VectorXd ray;
    std::size_t iterations = 0;
};

struct LpOptions {
    double pivot_tol = 1e-9;
    double feas_tol = 1e-8;
    /// 0 selects 10000 * (#vars + #constraints).
    std::size_t max_pivots = 0;
};

/// Raised when the pivot budget is exhausted. Bland's rule precludes cycling,
/// so this indicates a defect or a badly scaled problem.
class MaxPivotsExceeded : public std::runtime_error {
public:
    explicit MaxPivotsExceeded(std::size_t pivots);
    std::size_t pivots() const { return pivots_; }

private:
    std::size_t pivots_;
};

/// Throws std::invalid_argument if dimensions disagree or an entry is not finite.
void check_problem(const LpProblem& problem);

/// Dense two-phase tableau simplex with Bland's anti-cycling rule.
LpSolution solve(const LpProblem& problem, const LpOptions& options = {});

}  // namespace posminimax::lp
