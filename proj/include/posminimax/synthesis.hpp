#pragma once

#include "posminimax/lp.hpp"
#include "posminimax/model.hpp"

#include <Eigen/Dense>

#include <string>

namespace posminimax {

enum class SynthesisStatus {
    Synthesized,
    NoFiniteValue,
    HypothesesViolated,
    /// The LP came back infeasible, which cannot happen for valid data
    /// satisfying the hypotheses (p = 0, zeta = |r| is feasible).
    SolverDefect,
};

std::string to_string(SynthesisStatus status);

struct SynthesisCertificate {
    SynthesisStatus status = SynthesisStatus::HypothesesViolated;
    Eigen::VectorXd p;          // optimal cost vector, value p'x0
    Eigen::VectorXd zeta;       // bound on |r + B'p|
    Eigen::VectorXd gamma_min;  // F'p
    bool gamma_ok = false;
    Eigen::MatrixXd K;  // u = -K x
    Eigen::VectorXd q;  // r + B'p
    Eigen::VectorXd bellman_residual;

    HypothesisReport hypotheses;
    lp::LpStatus lp_status = lp::LpStatus::Infeasible;
    std::size_t lp_iterations = 0;
    double lp_objective = 0.0;
    /// Direction (p, zeta) along which the LP objective grows without bound.
    Eigen::VectorXd unbounded_ray;
};

struct SynthesisOptions {
    /// Continue past failed hypotheses.
    bool force = false;
    double feas_tol = 1e-8;
    double strict_eps = 0.0;
    lp::LpOptions lp;
};

/// Assembles  max 1'p  s.t.  (I - A')p + E'zeta <= s,  -B'p - zeta <= r,
/// B'p - zeta <= -r  over z = (p, zeta) >= 0.
lp::LpProblem build_lp(const ProblemInstance& instance);

/// F'p, the smallest disturbance penalty that keeps the value finite.
Eigen::VectorXd gamma_threshold(const Eigen::VectorXd& p, const Eigen::MatrixXd& F);

struct Gain {
    Eigen::MatrixXd K;
    Eigen::VectorXd q;
};

/// Row i of K is sign(q_i) E_i with q = r + B'p and sign(0) = 0.
Gain extract_gain(const Eigen::VectorXd& p, const ProblemInstance& instance);

/// p - (s + A'p - E'|r + B'p|). Entries above tolerance violate the
/// Bellman inequality.
Eigen::VectorXd bellman_residual(const Eigen::VectorXd& p, const ProblemInstance& instance);

/// Solves the synthesis LP and assembles the full certificate. Throws
/// std::invalid_argument on structurally invalid data and propagates
/// lp::MaxPivotsExceeded.
SynthesisCertificate synthesize(const ProblemInstance& instance,
                                const SynthesisOptions& options = {});

}  // namespace posminimax
