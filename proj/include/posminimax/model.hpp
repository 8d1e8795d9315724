#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace posminimax {

/// Data of the discrete-time minimax problem
///
///   inf_mu max_w  sum_t  s'x(t) + r'u(t) - gamma'w(t)
///   x(t+1) = A x(t) + B u(t) + F w(t),  |u| <= E x,  w >= 0.
///
/// Dimensions are derived from the matrices; `n()` is the state size,
/// `m()` the input size and `l()` the disturbance size.
struct ProblemInstance {
    Eigen::MatrixXd A;  // n x n
    Eigen::MatrixXd B;  // n x m
    Eigen::MatrixXd F;  // n x l, nonnegative
    Eigen::MatrixXd E;  // m x n, nonnegative
    Eigen::VectorXd s;  // n, strictly positive
    Eigen::VectorXd r;  // m
    Eigen::VectorXd gamma;  // l, nonnegative
    std::string name;

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
    Eigen::Index l() const { return F.cols(); }
};

/// One violated structural invariant. `row`/`col` are -1 when not applicable.
struct ValidationError {
    std::string field;
    std::string constraint;
    Eigen::Index row = -1;
    Eigen::Index col = -1;
    double value = 0.0;

    std::string describe() const;
};

/// Returns every violated invariant of `instance`; empty means valid.
std::vector<ValidationError> validate(const ProblemInstance& instance);

enum class HypothesisId { Positivity, Penalty };

struct HypothesisViolation {
    HypothesisId id;
    Eigen::Index row;
    Eigen::Index col;  // -1 for the vector-valued penalty condition
    double value;
};

struct HypothesisReport {
    bool positivity_ok = false;
    Eigen::MatrixXd positivity_margin;  // A - |B| E
    bool penalty_ok = false;
    Eigen::VectorXd penalty_margin;  // s - E' |r|
    std::vector<HypothesisViolation> violations;

    bool ok() const { return positivity_ok && penalty_ok; }
};

/// Checks the standing hypotheses A >= |B|E (orthant invariance) and
/// s > E'|r|. Penalty strictness is `margin > strict_eps`.
HypothesisReport check_hypotheses(const ProblemInstance& instance, double strict_eps = 0.0);

std::string to_string(HypothesisId id);

/// The published discretized double-tank process with E = [1 0], s = 1, r = 0.2.
/// `gamma` defaults to the rounded threshold value 1.32.
ProblemInstance double_tank(double gamma = 1.32);

}  // namespace posminimax
